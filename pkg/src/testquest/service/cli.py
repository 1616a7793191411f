"""Command-line entry point: the CI hook (`run`), project setup, the API
server, statistics export, and notification digests.
"""

from __future__ import annotations

import json
import sys

import click

from ..ingest.vcs import AmbiguousIdentity
from ..model.entities import InvariantViolation, ProjectConfig
from ..model.store import (
    Corrupt,
    Disabled,
    NotFound,
    SchemaMismatch,
    events_path,
    export_statistics,
    load_state,
    read_events,
    reset_project,
    save_state,
    state_path,
)
from .engine import (
    EXIT_CORRUPT,
    EXIT_USAGE,
    RunOptions,
    init_project,
    register_user,
    run_build,
    set_team,
)
from .leaderboard import UnknownUser, notification_digest


@click.group()
def main() -> None:
    """Gamified testing engine: challenges, quests, achievements, and
    leaderboards driven by your build reports.
    """


@main.command()
@click.option("--project", required=True, help="Project id.")
@click.option("--repo", required=True, help="Path to the git working copy.")
@click.option("--data-dir", required=True, help="State directory.")
@click.option(
    "--build-status",
    required=True,
    type=click.Choice(["success", "failure"]),
    help="Outcome of the build that produced the reports.",
)
@click.option("--coverage-csv", help="Class-level coverage CSV report.")
@click.option("--coverage-xml", help="Detailed line coverage XML report.")
@click.option("--mutation-report", help="Mutation report (JSON).")
@click.option("--smell-report", help="Smell report (JSON).")
@click.option(
    "--test-results",
    multiple=True,
    help="Test-result XML file; repeatable.",
)
@click.option(
    "--commit-count",
    type=int,
    default=None,
    help="Commit window size (default: project config, 50).",
)
@click.option(
    "--build-time",
    type=int,
    default=None,
    help="Run timestamp override (default: newest commit time).",
)
def run(
    project: str,
    repo: str,
    data_dir: str,
    build_status: str,
    coverage_csv: str | None,
    coverage_xml: str | None,
    mutation_report: str | None,
    smell_report: str | None,
    test_results: tuple[str, ...],
    commit_count: int | None,
    build_time: int | None,
) -> None:
    """Ingest one build's reports and update every resolved user."""
    result = run_build(
        RunOptions(
            project_id=project,
            repo=repo,
            data_dir=data_dir,
            build_status=build_status,
            coverage_csv=coverage_csv,
            coverage_xml=coverage_xml,
            mutation_report=mutation_report,
            smell_report=smell_report,
            test_results=list(test_results),
            commit_count=commit_count,
            build_time=build_time,
        )
    )
    for line in result.summary:
        click.echo(line)
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    sys.exit(result.exit_code)


@main.command()
@click.option("--project", required=True)
@click.option("--data-dir", required=True)
@click.option("--open-challenge-target", type=int, default=3, show_default=True)
@click.option("--open-quest-target", type=int, default=1, show_default=True)
@click.option("--coverage-threshold", type=float, default=0.8, show_default=True)
@click.option("--search-commit-count", type=int, default=50, show_default=True)
@click.option(
    "--source-root",
    multiple=True,
    help="Source root prefix; repeatable (default: src/main/java, src/main/kotlin).",
)
@click.option(
    "--test-glob",
    multiple=True,
    help="Path segment glob marking test files; repeatable (default: test, tests).",
)
@click.option("--group", default=None, help="Group (folder) id for merged leaderboards.")
@click.option("--no-leaderboard", is_flag=True, help="Disable the leaderboard.")
@click.option("--no-statistics", is_flag=True, help="Disable statistics export.")
@click.option("--registry", default=None, help="Achievement registry file override.")
def init(
    project: str,
    data_dir: str,
    open_challenge_target: int,
    open_quest_target: int,
    coverage_threshold: float,
    search_commit_count: int,
    source_root: tuple[str, ...],
    test_glob: tuple[str, ...],
    group: str | None,
    no_leaderboard: bool,
    no_statistics: bool,
    registry: str | None,
) -> None:
    """Create a new project."""
    kwargs = {}
    if source_root:
        kwargs["source_roots"] = list(source_root)
    if test_glob:
        kwargs["test_globs"] = list(test_glob)
    try:
        config = ProjectConfig(
            project_id=project,
            open_challenge_target=open_challenge_target,
            open_quest_target=open_quest_target,
            coverage_threshold=coverage_threshold,
            search_commit_count=search_commit_count,
            group_id=group,
            leaderboard_enabled=not no_leaderboard,
            statistics_enabled=not no_statistics,
            achievement_registry_path=registry,
            **kwargs,
        )
        init_project(data_dir, config)
    except (InvariantViolation, FileExistsError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    click.echo(f"initialized project {project} in {data_dir}")


@main.command()
@click.option("--project", required=True)
@click.option("--data-dir", required=True)
@click.option("--user", required=True, help="User id.")
@click.option("--name", required=True, help="Display name.")
@click.option(
    "--identity",
    multiple=True,
    required=True,
    help="Git author name or e-mail; repeatable.",
)
@click.option("--avatar", type=int, default=1, show_default=True)
def register(
    project: str,
    data_dir: str,
    user: str,
    name: str,
    identity: tuple[str, ...],
    avatar: int,
) -> None:
    """Register a user (or update an existing one)."""
    try:
        register_user(data_dir, project, user, name, list(identity), avatar)
    except (NotFound, AmbiguousIdentity, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (SchemaMismatch, Corrupt) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CORRUPT)
    click.echo(f"registered {user} in {project}")


@main.command()
@click.option("--project", required=True)
@click.option("--data-dir", required=True)
@click.option("--team", "team_id", required=True, help="Team id.")
@click.option("--name", required=True, help="Team display name.")
@click.option(
    "--member",
    multiple=True,
    help="Member user id; repeatable. Members leave any previous team.",
)
def team(
    project: str,
    data_dir: str,
    team_id: str,
    name: str,
    member: tuple[str, ...],
) -> None:
    """Create or replace a team."""
    try:
        set_team(data_dir, project, team_id, name, list(member))
    except (NotFound, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (SchemaMismatch, Corrupt) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CORRUPT)
    click.echo(f"team {team_id} now has {len(member)} member(s)")


@main.command()
@click.option("--project", required=True)
@click.option("--data-dir", required=True)
@click.option("--yes", is_flag=True, help="Skip the confirmation prompt.")
def reset(project: str, data_dir: str, yes: bool) -> None:
    """Delete everything the engine collected; keep config and users."""
    if not yes and not click.confirm(
        f"Reset project {project}? All scores and history will be lost"
    ):
        sys.exit(EXIT_USAGE)
    try:
        state = load_state(state_path(data_dir, project))
    except NotFound as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (SchemaMismatch, Corrupt) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CORRUPT)
    fresh = reset_project(state)
    save_state(fresh, state_path(data_dir, project))
    events_path(data_dir, project).unlink(missing_ok=True)
    click.echo(f"project {project} reset")


@main.command(name="export-stats")
@click.option("--project", required=True)
@click.option("--data-dir", required=True)
def export_stats(project: str, data_dir: str) -> None:
    """Print the anonymized statistics dump as JSON."""
    try:
        state = load_state(state_path(data_dir, project))
        click.echo(json.dumps(export_statistics(state), indent=2, sort_keys=True))
    except (NotFound, Disabled) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (SchemaMismatch, Corrupt) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CORRUPT)


@main.command()
@click.option("--project", required=True)
@click.option("--data-dir", required=True)
@click.option("--user", required=True)
@click.option("--since-build", type=int, default=0, show_default=True)
def digest(project: str, data_dir: str, user: str, since_build: int) -> None:
    """Print the user's notification digest as JSON."""
    try:
        state = load_state(state_path(data_dir, project))
        events = read_events(events_path(data_dir, project))
        document = notification_digest(state, events, user, since_build)
    except (NotFound, UnknownUser) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (SchemaMismatch, Corrupt) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CORRUPT)
    click.echo(json.dumps(document, indent=2, sort_keys=True))


@main.command()
@click.option("--bind", default="127.0.0.1:8000", show_default=True)
@click.option("--data-dir", required=True)
@click.option("--token", required=True, help="Shared API token.")
def serve(bind: str, data_dir: str, token: str) -> None:
    """Serve the HTTP API for the dashboard."""
    import uvicorn

    from .api import create_app

    host, _, port = bind.rpartition(":")
    if not host:
        click.echo(f"error: --bind must be host:port, got {bind!r}", err=True)
        sys.exit(EXIT_USAGE)
    uvicorn.run(create_app(data_dir, token), host=host, port=int(port))


if __name__ == "__main__":
    main()
