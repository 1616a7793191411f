"""Per-build engine run: parse reports, update every resolved user,
persist atomically, append events. Also project setup helpers used by
the CLI (init, register, team).
"""

from __future__ import annotations

import hashlib
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from ..achievements import load_default_registry, load_registry
from ..challenges import GenerationContext, run_user_update
from ..ingest.coverage import parse_class_coverage, parse_line_coverage
from ..ingest.facts import CoverageSnapshot, MalformedDocument
from ..ingest.reports import (
    parse_mutation_report,
    parse_smell_report,
    parse_test_results,
)
from ..ingest.vcs import (
    AmbiguousIdentity,
    NotARepository,
    VcsUnavailable,
    collect_commits,
    resolve_user,
)
from ..model.entities import (
    AVATAR_COUNT,
    EngineEvent,
    EventType,
    InvariantViolation,
    ProjectConfig,
    ProjectState,
    SnapshotSummary,
    Team,
    UserProfile,
)
from ..model.store import (
    Corrupt,
    IoFailure,
    NotFound,
    SchemaMismatch,
    append_events,
    events_path,
    load_state,
    save_state,
    state_path,
)

LOCK_FILE_NAME = "lock"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_LOCKED = 4
EXIT_CORRUPT = 5


class StateLocked(Exception):
    """Another run holds the project lock."""


@dataclass
class RunOptions:
    project_id: str
    repo: str
    data_dir: str
    build_status: str
    coverage_csv: str | None = None
    coverage_xml: str | None = None
    mutation_report: str | None = None
    smell_report: str | None = None
    test_results: list[str] = field(default_factory=list)
    commit_count: int | None = None
    build_time: int | None = None


@dataclass
class RunResult:
    exit_code: int
    summary: list[str]
    warnings: list[str] = field(default_factory=list)
    events: list[EngineEvent] = field(default_factory=list)


def user_seed(project_id: str, build_id: int, user_id: str) -> int:
    digest = hashlib.sha256(
        f"{project_id}:{build_id}:{user_id}".encode("utf-8")
    ).digest()
    return int.from_bytes(digest[:8], "big")


def _read(path: str, warnings: list[str]) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        warnings.append(f"cannot read {path}: {exc}")
        return None


def _refresh_registry(state: ProjectState, warnings: list[str]) -> None:
    override = state.config.achievement_registry_path
    try:
        if override:
            state.achievement_registry = load_registry(
                Path(override).read_text(encoding="utf-8")
            )
        else:
            state.achievement_registry = load_default_registry()
    except (OSError, ValueError) as exc:
        warnings.append(f"achievement registry not refreshed: {exc}")


def _dedupe(rows: list, key, warnings: list[str], what: str) -> list:
    seen: set = set()
    out = []
    for row in rows:
        marker = key(row)
        if marker in seen:
            warnings.append(f"duplicate {what} {marker} dropped")
            continue
        seen.add(marker)
        out.append(row)
    return out


def run_build(options: RunOptions, fault_hook=None) -> RunResult:
    """Execute one engine run; never raises for expected failure modes.
    The exit code in the result tells the story.
    """
    warnings: list[str] = []
    project_dir = Path(options.data_dir) / options.project_id
    project_dir.mkdir(parents=True, exist_ok=True)
    lock_path = project_dir / LOCK_FILE_NAME
    try:
        lock_fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        return RunResult(
            EXIT_LOCKED,
            [f"another run holds the lock at {lock_path}; remove it if stale"],
        )
    try:
        os.write(lock_fd, str(os.getpid()).encode("ascii"))
        os.close(lock_fd)
        return _run_locked(options, warnings, fault_hook)
    finally:
        lock_path.unlink(missing_ok=True)


def _run_locked(
    options: RunOptions, warnings: list[str], fault_hook
) -> RunResult:
    if options.build_status not in ("success", "failure"):
        return RunResult(
            EXIT_USAGE, [f"unknown build status {options.build_status!r}"]
        )

    path = state_path(options.data_dir, options.project_id)
    try:
        state = load_state(path)
    except NotFound:
        state = ProjectState(config=ProjectConfig(project_id=options.project_id))
    except (SchemaMismatch, Corrupt) as exc:
        return RunResult(EXIT_CORRUPT, [str(exc)])
    _refresh_registry(state, warnings)

    provided = 0
    usable = 0

    class_rows = []
    has_class_coverage = False
    if options.coverage_csv:
        provided += 1
        document = _read(options.coverage_csv, warnings)
        if document is not None:
            try:
                class_rows, problems = parse_class_coverage(document)
                warnings.extend(
                    f"{options.coverage_csv}: {p.location}: {p.reason}"
                    for p in problems
                )
                has_class_coverage = True
                usable += 1
            except MalformedDocument as exc:
                warnings.append(f"{options.coverage_csv}: {exc}")
    class_rows = _dedupe(
        class_rows, lambda r: r.fqn, warnings, "coverage row"
    )

    line_details = []
    has_line_coverage = False
    if options.coverage_xml:
        provided += 1
        document = _read(options.coverage_xml, warnings)
        if document is not None:
            try:
                line_details = parse_line_coverage(document)
                has_line_coverage = True
                usable += 1
            except MalformedDocument as exc:
                warnings.append(f"{options.coverage_xml}: {exc}")
    line_details = _dedupe(
        line_details,
        lambda d: (d.class_fqn, d.line_number),
        warnings,
        "line detail",
    )

    mutants = []
    has_mutation_report = False
    if options.mutation_report:
        provided += 1
        document = _read(options.mutation_report, warnings)
        if document is not None:
            try:
                mutants = parse_mutation_report(document)
                has_mutation_report = True
                usable += 1
            except MalformedDocument as exc:
                warnings.append(f"{options.mutation_report}: {exc}")

    smells = []
    has_smell_report = False
    if options.smell_report:
        provided += 1
        document = _read(options.smell_report, warnings)
        if document is not None:
            try:
                smells = parse_smell_report(
                    document, tuple(state.config.test_globs)
                )
                has_smell_report = True
                usable += 1
            except MalformedDocument as exc:
                warnings.append(f"{options.smell_report}: {exc}")

    total_tests = 0
    failed_tests = 0
    has_test_report = False
    if options.test_results:
        provided += 1
        documents = []
        for result_path in options.test_results:
            document = _read(result_path, warnings)
            if document is not None:
                documents.append(document)
        total_tests, failed_tests, problems = parse_test_results(documents)
        warnings.extend(f"test results: {p.location}: {p.reason}" for p in problems)
        if documents and len(problems) < len(documents):
            has_test_report = True
            usable += 1

    if provided > 0 and usable == 0:
        return RunResult(
            EXIT_PARSE, ["every supplied report was unusable"], warnings
        )

    commit_count = (
        options.commit_count
        if options.commit_count is not None
        else state.config.search_commit_count
    )
    try:
        commits = collect_commits(options.repo, commit_count)
    except (NotARepository, VcsUnavailable, ValueError) as exc:
        return RunResult(EXIT_USAGE, [str(exc)], warnings)

    build_time = options.build_time
    if build_time is None:
        build_time = max((c.timestamp for c in commits), default=0)

    build_id = state.build_counter + 1
    snapshot = CoverageSnapshot(
        build_id=build_id,
        class_rows=class_rows,
        line_details=line_details,
        total_test_count=total_tests,
        failed_test_count=min(failed_tests, total_tests),
        build_succeeded=options.build_status == "success",
    )
    previous = state.last_snapshot
    state.snapshot_history.append(
        SnapshotSummary(
            build_id=build_id,
            build_succeeded=snapshot.build_succeeded,
            total_test_count=total_tests,
            failed_test_count=min(failed_tests, total_tests),
            lines_covered=sum(r.lines_covered for r in class_rows),
            lines_missed=sum(r.lines_missed for r in class_rows),
            branches_covered=sum(r.branches_covered for r in class_rows),
            branches_missed=sum(r.branches_missed for r in class_rows),
            class_count=len(class_rows),
            fully_covered_class_count=sum(
                1 for r in class_rows if r.coverage_ratio >= 1.0
            ),
            timestamp=build_time,
        )
    )
    state.build_counter = build_id

    registry_map = {
        uid: state.users[uid].git_identities for uid in state.user_order
    }
    user_commits: dict[str, list] = {}
    unresolved: set[tuple[str, str]] = set()
    for commit in commits:
        try:
            resolved = resolve_user(commit, registry_map)
        except AmbiguousIdentity as exc:
            warnings.append(str(exc))
            continue
        if resolved is None:
            unresolved.add((commit.author_name, commit.author_email))
        else:
            user_commits.setdefault(resolved, []).append(commit)

    events: list[EngineEvent] = []
    for author_name, author_email in sorted(unresolved):
        events.append(
            EngineEvent(
                event_id=state.new_event_id(),
                build_id=build_id,
                user_id="",
                type=EventType.USER_UNRESOLVED,
                payload={
                    "author_name": author_name,
                    "author_email": author_email,
                },
                timestamp=build_time,
            )
        )

    for user_id in sorted(user_commits):
        ctx = GenerationContext(
            snapshot=snapshot,
            previous=previous,
            mutants=mutants,
            smells=smells,
            commits=commits,
            user_commits=user_commits[user_id],
            user_id=user_id,
            config=state.config,
            rng=random.Random(
                user_seed(options.project_id, build_id, user_id)
            ),
            build_id=build_id,
            build_time=build_time,
            rejected_fingerprints=frozenset(state.rejected_fingerprints),
            rejected_class_fqns=frozenset(state.rejected_class_fqns),
            repo_root=Path(options.repo),
            has_class_coverage=has_class_coverage,
            has_line_coverage=has_line_coverage,
            has_mutation_report=has_mutation_report,
            has_smell_report=has_smell_report,
            has_test_report=has_test_report,
        )
        events.extend(run_user_update(state, user_id, ctx))
        warnings.extend(f"{user_id}: {w}" for w in ctx.warnings)

    try:
        save_state(state, state_path(options.data_dir, options.project_id),
                   fault_hook=fault_hook)
    except (IoFailure, InvariantViolation) as exc:
        return RunResult(1, [f"state not persisted: {exc}"], warnings, [])
    append_events(events_path(options.data_dir, options.project_id), events)

    counts = Counter(event.type.value for event in events)
    summary = [
        f"build {build_id} ({options.build_status}): "
        f"{len(user_commits)} user(s) updated"
    ]
    summary.extend(f"  {name}: {counts[name]}" for name in sorted(counts))
    if unresolved:
        authors = ", ".join(
            f"{name} <{email}>" for name, email in sorted(unresolved)
        )
        summary.append(f"  unresolved authors: {authors}")
    return RunResult(EXIT_OK, summary, warnings, events)


def init_project(
    data_dir: str, config: ProjectConfig, registry_document: str | None = None
) -> ProjectState:
    """Create a fresh project; refuses to overwrite an existing one."""
    path = state_path(data_dir, config.project_id)
    if path.exists():
        raise FileExistsError(f"project already initialized at {path}")
    state = ProjectState(config=config)
    if registry_document is not None:
        state.achievement_registry = load_registry(registry_document)
    else:
        state.achievement_registry = load_default_registry()
    save_state(state, path)
    return state


def register_user(
    data_dir: str,
    project_id: str,
    user_id: str,
    display_name: str,
    identities: list[str],
    avatar_id: int = 1,
) -> ProjectState:
    """Create or update a user; git identities must be unique across users."""
    if not identities:
        raise ValueError("at least one git identity is required")
    if not 1 <= avatar_id <= AVATAR_COUNT:
        raise ValueError(f"avatar_id must be in 1..{AVATAR_COUNT}")
    path = state_path(data_dir, project_id)
    state = load_state(path)
    for other_id in state.user_order:
        if other_id == user_id:
            continue
        overlap = state.users[other_id].git_identities & set(identities)
        if overlap:
            raise AmbiguousIdentity(
                f"identities already claimed by {other_id}: {sorted(overlap)}"
            )
    if user_id in state.users:
        user = state.users[user_id]
        user.display_name = display_name
        user.git_identities = set(identities)
        user.avatar_id = avatar_id
    else:
        state.users[user_id] = UserProfile(
            user_id=user_id,
            display_name=display_name,
            git_identities=set(identities),
            avatar_id=avatar_id,
        )
        state.user_order.append(user_id)
    save_state(state, path)
    return state


def set_team(
    data_dir: str,
    project_id: str,
    team_id: str,
    name: str,
    members: list[str],
) -> ProjectState:
    """Create or replace a team; members move out of any previous team."""
    path = state_path(data_dir, project_id)
    state = load_state(path)
    unknown = [m for m in members if m not in state.users]
    if unknown:
        raise ValueError(f"unknown users: {', '.join(unknown)}")
    for team in state.teams.values():
        team.member_user_ids -= set(members)
    state.teams[team_id] = Team(
        team_id=team_id, name=name, member_user_ids=set(members)
    )
    save_state(state, path)
    return state
