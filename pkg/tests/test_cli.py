"""Command-line interface, driven through click's test runner."""

import json

import pytest
from click.testing import CliRunner

from testquest.service.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def run_args(demo, build, status="success"):
    paths = demo.report_paths(build)
    args = [
        "run",
        "--project",
        demo.project_id,
        "--repo",
        str(demo.repo),
        "--data-dir",
        str(demo.data_dir),
        "--build-status",
        status,
        "--coverage-csv",
        paths["coverage_csv"],
        "--coverage-xml",
        paths["coverage_xml"],
        "--mutation-report",
        paths["mutation_report"],
        "--smell-report",
        paths["smell_report"],
    ]
    for result_path in paths["test_results"]:
        args += ["--test-results", result_path]
    return args


class TestRun:
    def test_successful_run_prints_the_summary(self, runner, demo):
        result = runner.invoke(main, run_args(demo, 1))
        assert result.exit_code == 0
        assert "build 1 (success): 2 user(s) updated" in result.output
        assert "unresolved authors: Carol <carol@ex.com>" in result.output

    def test_engine_exit_code_is_surfaced(self, runner, demo):
        lock = demo.data_dir / demo.project_id / "lock"
        lock.parent.mkdir(parents=True, exist_ok=True)
        lock.write_text("1")
        result = runner.invoke(main, run_args(demo, 1))
        assert result.exit_code == 4

    def test_warnings_go_to_stderr(self, runner, demo, tmp_path):
        garbage = tmp_path / "mutation.json"
        garbage.write_text("}{")
        args = run_args(demo, 1)
        args[args.index("--mutation-report") + 1] = str(garbage)
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        assert "warning:" in result.stderr
        assert "mutation.json" in result.stderr

    def test_build_status_is_validated(self, runner, demo):
        result = runner.invoke(main, run_args(demo, 1, status="flaky"))
        assert result.exit_code == 2

    def test_required_options_are_enforced(self, runner):
        result = runner.invoke(main, ["run", "--project", "p"])
        assert result.exit_code == 2


class TestInit:
    def test_init_creates_the_project(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["init", "--project", "p1", "--data-dir", str(tmp_path / "d")],
        )
        assert result.exit_code == 0
        assert "initialized project p1" in result.output
        assert (tmp_path / "d" / "p1" / "state.json").is_file()

    def test_init_twice_fails(self, runner, tmp_path):
        args = ["init", "--project", "p1", "--data-dir", str(tmp_path / "d")]
        assert runner.invoke(main, args).exit_code == 0
        second = runner.invoke(main, args)
        assert second.exit_code == 2
        assert "error:" in second.stderr

    def test_init_rejects_bad_threshold(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "init",
                "--project",
                "p1",
                "--data-dir",
                str(tmp_path / "d"),
                "--coverage-threshold",
                "1.5",
            ],
        )
        assert result.exit_code == 2


class TestRegisterAndTeam:
    def test_lifecycle(self, runner, tmp_path, demo):
        data = str(tmp_path / "d")
        assert (
            runner.invoke(
                main, ["init", "--project", "p1", "--data-dir", data]
            ).exit_code
            == 0
        )
        for user, name, identity in (
            ("alice", "Alice", "alice@ex.com"),
            ("bob", "Bob", "bob@ex.com"),
        ):
            result = runner.invoke(
                main,
                [
                    "register",
                    "--project",
                    "p1",
                    "--data-dir",
                    data,
                    "--user",
                    user,
                    "--name",
                    name,
                    "--identity",
                    name,
                    "--identity",
                    identity,
                ],
            )
            assert result.exit_code == 0
            assert f"registered {user} in p1" in result.output
        result = runner.invoke(
            main,
            [
                "team",
                "--project",
                "p1",
                "--data-dir",
                data,
                "--team",
                "t1",
                "--name",
                "Firewall",
                "--member",
                "alice",
                "--member",
                "bob",
            ],
        )
        assert result.exit_code == 0
        assert "team t1 now has 2 member(s)" in result.output

        run = runner.invoke(
            main,
            [
                "run",
                "--project",
                "p1",
                "--repo",
                str(demo.repo),
                "--data-dir",
                data,
                "--build-status",
                "success",
                "--coverage-csv",
                demo.report_paths(1)["coverage_csv"],
            ],
        )
        assert run.exit_code == 0
        assert "2 user(s) updated" in run.output

    def test_register_bad_avatar(self, runner, demo):
        result = runner.invoke(
            main,
            [
                "register",
                "--project",
                "demo",
                "--data-dir",
                str(demo.data_dir),
                "--user",
                "dana",
                "--name",
                "Dana",
                "--identity",
                "dana@ex.com",
                "--avatar",
                "99",
            ],
        )
        assert result.exit_code == 2
        assert "error:" in result.stderr

    def test_register_into_corrupt_state(self, runner, demo):
        (demo.data_dir / "demo" / "state.json").write_text("][")
        result = runner.invoke(
            main,
            [
                "register",
                "--project",
                "demo",
                "--data-dir",
                str(demo.data_dir),
                "--user",
                "dana",
                "--name",
                "Dana",
                "--identity",
                "dana@ex.com",
            ],
        )
        assert result.exit_code == 5

    def test_team_unknown_member(self, runner, demo):
        result = runner.invoke(
            main,
            [
                "team",
                "--project",
                "demo",
                "--data-dir",
                str(demo.data_dir),
                "--team",
                "t1",
                "--name",
                "Anvil",
                "--member",
                "ghost",
            ],
        )
        assert result.exit_code == 2
        assert "ghost" in result.stderr


class TestReset:
    def test_reset_needs_confirmation(self, runner, demo):
        demo.run(1)
        result = runner.invoke(
            main,
            ["reset", "--project", "demo", "--data-dir", str(demo.data_dir)],
            input="n\n",
        )
        assert result.exit_code == 2
        assert demo.state().build_counter == 1

    def test_reset_with_yes(self, runner, demo):
        demo.run(1)
        result = runner.invoke(
            main,
            [
                "reset",
                "--project",
                "demo",
                "--data-dir",
                str(demo.data_dir),
                "--yes",
            ],
        )
        assert result.exit_code == 0
        assert "project demo reset" in result.output
        state = demo.state()
        assert state.build_counter == 0
        assert state.user_order == ["alice", "bob"]
        assert not (demo.data_dir / "demo" / "events.ndjson").exists()

    def test_reset_unknown_project(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "reset",
                "--project",
                "nope",
                "--data-dir",
                str(tmp_path),
                "--yes",
            ],
        )
        assert result.exit_code == 2


class TestExportAndDigest:
    def test_export_stats_prints_json(self, runner, demo):
        demo.run(1)
        result = runner.invoke(
            main,
            ["export-stats", "--project", "demo", "--data-dir", str(demo.data_dir)],
        )
        assert result.exit_code == 0
        document = json.loads(result.output)
        assert {row["subject"] for row in document["users"]} == {"p1", "p2"}

    def test_export_stats_unknown_project(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["export-stats", "--project", "nope", "--data-dir", str(tmp_path)],
        )
        assert result.exit_code == 2

    def test_digest_prints_entries(self, runner, demo):
        demo.run(1)
        result = runner.invoke(
            main,
            [
                "digest",
                "--project",
                "demo",
                "--data-dir",
                str(demo.data_dir),
                "--user",
                "alice",
            ],
        )
        assert result.exit_code == 0
        document = json.loads(result.output)
        assert document["user_id"] == "alice"
        assert document["entries"]
        assert all("link" in entry for entry in document["entries"])

    def test_digest_unknown_user(self, runner, demo):
        demo.run(1)
        result = runner.invoke(
            main,
            [
                "digest",
                "--project",
                "demo",
                "--data-dir",
                str(demo.data_dir),
                "--user",
                "zed",
            ],
        )
        assert result.exit_code == 2


class TestServe:
    def test_bad_bind_is_rejected(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "serve",
                "--bind",
                "8000",
                "--data-dir",
                str(tmp_path),
                "--token",
                "t",
            ],
        )
        assert result.exit_code == 2
        assert "host:port" in result.stderr
