"""Shared fixtures: report documents, entity builders, and a demo project
with a real git history that the engine drives through three scripted builds.

The demo numbers are cross-checked by hand; the class-level CSV and the
per-line XML describe the same builds, so covered/missed line counts agree
per class in every build.
"""

from __future__ import annotations

import random
import subprocess
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from testquest.challenges import GenerationContext
from testquest.ingest.facts import (
    ClassCoverageRow,
    CommitRecord,
    CoverageSnapshot,
    LineCoverageDetail,
    MutantRecord,
    MutantStatus,
    SmellKind,
    SmellRecord,
    SmellSeverity,
)
from testquest.ingest.reports import smell_id
from testquest.model.entities import ProjectConfig, ProjectState, UserProfile
from testquest.model.store import load_state, read_events, state_path
from testquest.service.engine import (
    RunOptions,
    RunResult,
    init_project,
    register_user,
    run_build,
)

# ---------------------------------------------------------------------------
# acceptance reporting: tests/test_acceptance.py records one line per
# criterion here; the terminal-summary hook prints them uncaptured.

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(name: str, passed: bool) -> None:
    verdict = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"ACCEPTANCE {verdict}: {name}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    @contextmanager
    def _criterion(name: str):
        try:
            yield
        except BaseException:
            record_acceptance(name, False)
            raise
        record_acceptance(name, True)

    return _criterion


# ---------------------------------------------------------------------------
# entity builders


def make_config(**overrides) -> ProjectConfig:
    overrides.setdefault("project_id", "proj")
    return ProjectConfig(**overrides)


def make_state(user_ids=("dev",), config: ProjectConfig | None = None) -> ProjectState:
    state = ProjectState(config=config or make_config())
    for position, user_id in enumerate(user_ids, start=1):
        state.users[user_id] = UserProfile(
            user_id=user_id,
            display_name=user_id.capitalize(),
            git_identities={user_id, f"{user_id}@ex.com"},
            avatar_id=position,
        )
        state.user_order.append(user_id)
    return state


def cov_row(
    package: str,
    class_name: str,
    covered: int,
    missed: int,
    bc: int = 0,
    bm: int = 0,
    mc: int = 0,
    mm: int = 0,
) -> ClassCoverageRow:
    return ClassCoverageRow(
        package_name=package,
        class_name=class_name,
        lines_covered=covered,
        lines_missed=missed,
        branches_covered=bc,
        branches_missed=bm,
        methods_covered=mc,
        methods_missed=mm,
    )


def cov_line(
    fqn: str,
    nr: int,
    ci: int = 1,
    mi: int = 0,
    cb: int = 0,
    mb: int = 0,
    method: str = "",
) -> LineCoverageDetail:
    return LineCoverageDetail(
        class_fqn=fqn,
        source_file=fqn.replace(".", "/") + ".java",
        line_number=nr,
        covered_instructions=ci,
        missed_instructions=mi,
        covered_branches=cb,
        missed_branches=mb,
        owning_method=method,
    )


def make_snapshot(
    rows=(),
    details=(),
    tests: int = 0,
    failed: int = 0,
    succeeded: bool = True,
    build_id: int = 1,
) -> CoverageSnapshot:
    return CoverageSnapshot(
        build_id=build_id,
        class_rows=list(rows),
        line_details=list(details),
        total_test_count=tests,
        failed_test_count=failed,
        build_succeeded=succeeded,
    )


def commit_for(
    *fqns: str,
    author: str = "dev",
    ts: int = 1000,
    extra_files=(),
) -> CommitRecord:
    files = [f"src/main/java/{fqn.replace('.', '/')}.java" for fqn in fqns]
    files.extend(extra_files)
    return CommitRecord(
        hash=f"{abs(hash((author, ts))):040x}"[:40],
        author_name=author,
        author_email=f"{author}@ex.com",
        timestamp=ts,
        changed_files=tuple(files),
    )


def make_mutant(
    mutant_id: str,
    fqn: str,
    status: MutantStatus = MutantStatus.SURVIVED,
    line: int = 1,
    method: str = "m()V",
) -> MutantRecord:
    return MutantRecord(
        mutant_id=mutant_id,
        class_fqn=fqn,
        method_signature=method,
        line_number=line,
        operator="NegateConditional",
        status=status,
        original_snippet="if (a > b) {",
        mutated_snippet="if (a <= b) {",
    )


def make_smell(
    rule: str,
    file: str,
    start: int,
    severity: SmellSeverity = SmellSeverity.MEDIUM,
    end: int | None = None,
) -> SmellRecord:
    return SmellRecord(
        smell_id=smell_id(rule, file, start),
        rule_id=rule,
        file=file,
        start_line=start,
        end_line=end if end is not None else start,
        severity=severity,
        message="finding",
        kind=SmellKind.CODE,
    )


def make_ctx(
    state: ProjectState,
    snapshot: CoverageSnapshot,
    user_id: str = "dev",
    seed: int = 7,
    mutants=(),
    smells=(),
    commits=None,
    previous=None,
    repo_root: Path | None = None,
    build_id: int | None = None,
    build_time: int = 5000,
    **flags,
) -> GenerationContext:
    if commits is None:
        commits = [commit_for("com.ex.Low", author=user_id)]
    return GenerationContext(
        snapshot=snapshot,
        previous=previous,
        mutants=list(mutants),
        smells=list(smells),
        commits=list(commits),
        user_commits=[c for c in commits if c.author_name == user_id],
        user_id=user_id,
        config=state.config,
        rng=random.Random(seed),
        build_id=build_id if build_id is not None else snapshot.build_id,
        build_time=build_time,
        rejected_fingerprints=frozenset(state.rejected_fingerprints),
        rejected_class_fqns=frozenset(state.rejected_class_fqns),
        repo_root=repo_root,
        **flags,
    )


# ---------------------------------------------------------------------------
# git repo helpers


def git(repo: Path, *args: str, env: dict | None = None) -> None:
    import os

    merged = dict(os.environ)
    if env:
        merged.update(env)
    subprocess.run(
        ["git", *args],
        cwd=repo,
        check=True,
        capture_output=True,
        env=merged,
    )


def git_init(repo: Path) -> None:
    repo.mkdir(parents=True, exist_ok=True)
    git(repo, "init", "-q")
    git(repo, "config", "user.name", "nobody")
    git(repo, "config", "user.email", "nobody@example.invalid")
    git(repo, "config", "commit.gpgsign", "false")


def git_commit(repo: Path, author: str, email: str, ts: int, message: str) -> None:
    stamp = f"@{ts} +0000"
    git(repo, "add", "-A")
    git(
        repo,
        "commit",
        "-q",
        "--allow-empty",
        "-m",
        message,
        env={
            "GIT_AUTHOR_NAME": author,
            "GIT_AUTHOR_EMAIL": email,
            "GIT_AUTHOR_DATE": stamp,
            "GIT_COMMITTER_NAME": author,
            "GIT_COMMITTER_EMAIL": email,
            "GIT_COMMITTER_DATE": stamp,
        },
    )


# ---------------------------------------------------------------------------
# the demo project: two source classes, three registered-or-not authors,
# three scripted builds.
#
# Alpha.java (alice): add() fully covered from build 1, scale() at 4/11
# instructions. Build 2 covers everything.
# Beta.java (bob): 2 of 10 lines covered in build 1, 8 of 10 from build 2.
# Mutants m1..m3 in Beta stay live until build 3 kills them; m4 is killed
# from the start. The smell report empties in build 2. Tests go 3 -> 5 -> 6.
# Carol commits only README.md and never registers.

ALPHA_JAVA = """\
package com.ex;

public class Alpha {
    private int total;

    public int add(int value) {
        if (value > 0) {
            total += value;
        }
        return total;
    }

    public int scale(int factor) {
        int result = total * factor;
        if (result < 0) {
            result = -result;
        }
        total = result;
        return result;
    }
}
"""

BETA_JAVA = """\
package com.ex;

public class Beta {
    private int state;
    private int unused;

    public void up(int amount) {
        if (amount > 0) {
            state += amount;
        }
    }

    public void down(int amount) {
        if (amount > 0) {
            state -= amount;
        }
    }

    public int value() {
        return state;
    }
}
"""

ALPHA_TEST_JAVA = """\
package com.ex;

public class AlphaTest {
    public void addsPositiveAmounts() {
        new Alpha().add(3);
    }
}
"""

DEMO_CSV_B1 = """\
GROUP,PACKAGE,CLASS,INSTRUCTION_MISSED,INSTRUCTION_COVERED,BRANCH_MISSED,BRANCH_COVERED,LINE_MISSED,LINE_COVERED,COMPLEXITY_MISSED,COMPLEXITY_COVERED,METHOD_MISSED,METHOD_COVERED
demo,com.ex,Alpha,7,12,3,1,4,6,2,2,0,2
demo,com.ex,Beta,11,4,3,1,8,2,4,2,2,2
"""

DEMO_CSV_B2 = """\
GROUP,PACKAGE,CLASS,INSTRUCTION_MISSED,INSTRUCTION_COVERED,BRANCH_MISSED,BRANCH_COVERED,LINE_MISSED,LINE_COVERED,COMPLEXITY_MISSED,COMPLEXITY_COVERED,METHOD_MISSED,METHOD_COVERED
demo,com.ex,Alpha,0,19,0,4,0,10,0,4,0,2
demo,com.ex,Beta,3,12,1,3,2,8,2,4,1,3
"""

DEMO_XML_B1 = """\
<report name="demo">
  <package name="com/ex">
    <class name="com/ex/Alpha" sourcefilename="Alpha.java">
      <method name="add" desc="(I)I" line="6"/>
      <method name="scale" desc="(I)I" line="13"/>
    </class>
    <class name="com/ex/Beta" sourcefilename="Beta.java">
      <method name="up" desc="(I)V" line="7"/>
      <method name="down" desc="(I)V" line="13"/>
      <method name="value" desc="()I" line="19"/>
    </class>
    <sourcefile name="Alpha.java">
      <line nr="6" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="7" mi="0" ci="2" mb="1" cb="1"/>
      <line nr="8" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="10" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="14" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="15" mi="0" ci="2" mb="2" cb="0"/>
      <line nr="16" mi="2" ci="0" mb="0" cb="0"/>
      <line nr="18" mi="2" ci="0" mb="0" cb="0"/>
      <line nr="19" mi="2" ci="0" mb="0" cb="0"/>
      <line nr="20" mi="1" ci="0" mb="0" cb="0"/>
    </sourcefile>
    <sourcefile name="Beta.java">
      <line nr="4" mi="1" ci="0" mb="0" cb="0"/>
      <line nr="5" mi="1" ci="0" mb="0" cb="0"/>
      <line nr="8" mi="0" ci="2" mb="1" cb="1"/>
      <line nr="9" mi="2" ci="0" mb="0" cb="0"/>
      <line nr="11" mi="1" ci="0" mb="0" cb="0"/>
      <line nr="14" mi="2" ci="0" mb="2" cb="0"/>
      <line nr="15" mi="2" ci="0" mb="0" cb="0"/>
      <line nr="17" mi="1" ci="0" mb="0" cb="0"/>
      <line nr="20" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="21" mi="1" ci="0" mb="0" cb="0"/>
    </sourcefile>
  </package>
</report>
"""

DEMO_XML_B2 = """\
<report name="demo">
  <package name="com/ex">
    <class name="com/ex/Alpha" sourcefilename="Alpha.java">
      <method name="add" desc="(I)I" line="6"/>
      <method name="scale" desc="(I)I" line="13"/>
    </class>
    <class name="com/ex/Beta" sourcefilename="Beta.java">
      <method name="up" desc="(I)V" line="7"/>
      <method name="down" desc="(I)V" line="13"/>
      <method name="value" desc="()I" line="19"/>
    </class>
    <sourcefile name="Alpha.java">
      <line nr="6" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="7" mi="0" ci="2" mb="0" cb="2"/>
      <line nr="8" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="10" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="14" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="15" mi="0" ci="2" mb="0" cb="2"/>
      <line nr="16" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="18" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="19" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="20" mi="0" ci="1" mb="0" cb="0"/>
    </sourcefile>
    <sourcefile name="Beta.java">
      <line nr="4" mi="0" ci="1" mb="0" cb="0"/>
      <line nr="5" mi="0" ci="1" mb="0" cb="0"/>
      <line nr="8" mi="0" ci="2" mb="0" cb="2"/>
      <line nr="9" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="11" mi="0" ci="1" mb="0" cb="0"/>
      <line nr="14" mi="0" ci="2" mb="1" cb="1"/>
      <line nr="15" mi="2" ci="0" mb="0" cb="0"/>
      <line nr="17" mi="1" ci="0" mb="0" cb="0"/>
      <line nr="20" mi="0" ci="2" mb="0" cb="0"/>
      <line nr="21" mi="0" ci="1" mb="0" cb="0"/>
    </sourcefile>
  </package>
</report>
"""

DEMO_MUTATION_LIVE = """\
{
  "mutants": [
    {"id": "m1", "class": "com.ex.Beta", "method": "up(I)V", "line": 8,
     "operator": "NegateConditional", "status": "SURVIVED",
     "original": "if (amount > 0) {", "mutated": "if (amount <= 0) {"},
    {"id": "m2", "class": "com.ex.Beta", "method": "down(I)V", "line": 14,
     "operator": "NegateConditional", "status": "NO_COVERAGE",
     "original": "if (amount > 0) {", "mutated": "if (amount < 0) {"},
    {"id": "m3", "class": "com.ex.Beta", "method": "up(I)V", "line": 9,
     "operator": "RemoveStatement", "status": "SURVIVED",
     "original": "state += amount;", "mutated": ";"},
    {"id": "m4", "class": "com.ex.Beta", "method": "value()I", "line": 20,
     "operator": "ReturnValue", "status": "KILLED",
     "original": "return state;", "mutated": "return 0;"}
  ]
}
"""

DEMO_MUTATION_KILLED = """\
{
  "mutants": [
    {"id": "m1", "class": "com.ex.Beta", "method": "up(I)V", "line": 8,
     "operator": "NegateConditional", "status": "KILLED",
     "original": "if (amount > 0) {", "mutated": "if (amount <= 0) {"},
    {"id": "m2", "class": "com.ex.Beta", "method": "down(I)V", "line": 14,
     "operator": "NegateConditional", "status": "KILLED",
     "original": "if (amount > 0) {", "mutated": "if (amount < 0) {"},
    {"id": "m3", "class": "com.ex.Beta", "method": "up(I)V", "line": 9,
     "operator": "RemoveStatement", "status": "KILLED",
     "original": "state += amount;", "mutated": ";"},
    {"id": "m4", "class": "com.ex.Beta", "method": "value()I", "line": 20,
     "operator": "ReturnValue", "status": "KILLED",
     "original": "return state;", "mutated": "return 0;"}
  ]
}
"""

DEMO_SMELLS_B1 = """\
{
  "smells": [
    {"rule": "java:S1068", "file": "src/main/java/com/ex/Beta.java",
     "startLine": 5, "endLine": 5, "severity": "MEDIUM",
     "message": "Remove this unused field"},
    {"rule": "java:S3776", "file": "src/main/java/com/ex/Beta.java",
     "startLine": 13, "endLine": 17, "severity": "HIGH",
     "message": "Refactor this method to reduce complexity"},
    {"rule": "java:S2699", "file": "src/test/java/com/ex/AlphaTest.java",
     "startLine": 6, "endLine": 6, "severity": "LOW",
     "message": "Add at least one assertion to this test"}
  ]
}
"""

DEMO_SMELLS_EMPTY = '{"smells": []}\n'


def tests_xml(count: int, failures: int = 0, errors: int = 0) -> str:
    return (
        f'<testsuite name="all" tests="{count}" '
        f'failures="{failures}" errors="{errors}"/>\n'
    )


@dataclass
class DemoProject:
    root: Path
    repo: Path
    data_dir: Path
    reports: Path
    project_id: str = "demo"
    _repo_stage: int = field(default=1, repr=False)

    def advance_repo(self, build: int) -> None:
        """Commits land between builds: alice touches her test before
        build 2, bob adds a test file before build 3."""
        if build >= 2 and self._repo_stage < 2:
            test_file = self.repo / "src/test/java/com/ex/AlphaTest.java"
            test_file.write_text(
                ALPHA_TEST_JAVA.replace("add(3)", "add(3);\n        new Alpha().scale(2)"),
                encoding="utf-8",
            )
            git_commit(self.repo, "Alice", "alice@ex.com", 1700000400, "Extend Alpha tests")
            self._repo_stage = 2
        if build >= 3 and self._repo_stage < 3:
            beta_test = self.repo / "src/test/java/com/ex/BetaTest.java"
            beta_test.write_text(
                "package com.ex;\n\npublic class BetaTest {\n}\n", encoding="utf-8"
            )
            git_commit(self.repo, "Bob", "bob@ex.com", 1700000500, "Add Beta tests")
            self._repo_stage = 3

    def report_paths(self, build: int) -> dict[str, str]:
        b = self.reports / f"b{build}"
        return {
            "coverage_csv": str(b / "coverage.csv"),
            "coverage_xml": str(b / "coverage.xml"),
            "mutation_report": str(b / "mutation.json"),
            "smell_report": str(b / "smells.json"),
            "test_results": [str(b / "tests.xml")],
        }

    def options(
        self,
        build: int,
        status: str = "success",
        data_dir: Path | None = None,
        build_time: int | None = None,
    ) -> RunOptions:
        return RunOptions(
            project_id=self.project_id,
            repo=str(self.repo),
            data_dir=str(data_dir or self.data_dir),
            build_status=status,
            build_time=build_time,
            **self.report_paths(build),
        )

    def run(
        self,
        build: int,
        status: str = "success",
        data_dir: Path | None = None,
        build_time: int | None = None,
    ) -> RunResult:
        self.advance_repo(build)
        return run_build(self.options(build, status, data_dir, build_time))

    def init_and_register(self, data_dir: Path | None = None) -> None:
        data = str(data_dir or self.data_dir)
        init_project(data, ProjectConfig(project_id=self.project_id))
        register_user(
            data, self.project_id, "alice", "Alice", ["Alice", "alice@ex.com"], 1
        )
        register_user(data, self.project_id, "bob", "Bob", ["Bob", "bob@ex.com"], 2)

    def state(self, data_dir: Path | None = None) -> ProjectState:
        return load_state(state_path(str(data_dir or self.data_dir), self.project_id))

    def events(self, data_dir: Path | None = None):
        data = data_dir or self.data_dir
        return read_events(data / self.project_id / "events.ndjson")


def build_demo(root: Path, register: bool = True) -> DemoProject:
    repo = root / "repo"
    data_dir = root / "data"
    reports = root / "reports"
    git_init(repo)

    main = repo / "src/main/java/com/ex"
    test = repo / "src/test/java/com/ex"
    main.mkdir(parents=True)
    test.mkdir(parents=True)
    (main / "Alpha.java").write_text(ALPHA_JAVA, encoding="utf-8")
    (test / "AlphaTest.java").write_text(ALPHA_TEST_JAVA, encoding="utf-8")
    git_commit(repo, "Alice", "alice@ex.com", 1700000100, "Add Alpha with tests")
    (main / "Beta.java").write_text(BETA_JAVA, encoding="utf-8")
    git_commit(repo, "Bob", "bob@ex.com", 1700000200, "Add Beta counter")
    (repo / "README.md").write_text("# demo\n", encoding="utf-8")
    git_commit(repo, "Carol", "carol@ex.com", 1700000300, "Add readme")

    by_build = {
        1: (DEMO_CSV_B1, DEMO_XML_B1, DEMO_MUTATION_LIVE, DEMO_SMELLS_B1, tests_xml(3)),
        2: (DEMO_CSV_B2, DEMO_XML_B2, DEMO_MUTATION_LIVE, DEMO_SMELLS_EMPTY, tests_xml(5)),
        3: (DEMO_CSV_B2, DEMO_XML_B2, DEMO_MUTATION_KILLED, DEMO_SMELLS_EMPTY, tests_xml(6)),
    }
    for build, (csv_doc, xml_doc, mut_doc, smell_doc, tests_doc) in by_build.items():
        b = reports / f"b{build}"
        b.mkdir(parents=True)
        (b / "coverage.csv").write_text(csv_doc, encoding="utf-8")
        (b / "coverage.xml").write_text(xml_doc, encoding="utf-8")
        (b / "mutation.json").write_text(mut_doc, encoding="utf-8")
        (b / "smells.json").write_text(smell_doc, encoding="utf-8")
        (b / "tests.xml").write_text(tests_doc, encoding="utf-8")

    project = DemoProject(root=root, repo=repo, data_dir=data_dir, reports=reports)
    if register:
        project.init_and_register()
    return project


@pytest.fixture
def demo(tmp_path: Path) -> DemoProject:
    return build_demo(tmp_path)
