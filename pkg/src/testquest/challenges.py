"""Challenge generation, verification, expiry, and rejection.

The per-build workflow for one user lives in run_user_update: solve or
expire what is open, issue a Build challenge on a failing build, top the
open set back up to the configured target, then hand over to quests and
achievements.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .ingest.facts import (
    CommitRecord,
    CoverageSnapshot,
    LineCoverageDetail,
    MutantRecord,
    SmellRecord,
)
from .ingest.vcs import path_to_class
from .model.entities import (
    Baseline,
    Challenge,
    ChallengeKind,
    ChallengeState,
    EngineEvent,
    EventType,
    LedgerEntry,
    ProjectConfig,
    ProjectState,
    SnapshotSummary,
)

# keeps every candidate reachable regardless of coverage
WEIGHT_FLOOR = 0.01

SMELL_POINTS = {"LOW": 1, "MEDIUM": 2, "HIGH": 3, "CRITICAL": 4}

SNIPPET_CONTEXT_LINES = 2


class MissingReport(Exception):
    """The report a check needs was not supplied this run."""


class EmptyCandidates(Exception):
    """Weighted selection got an empty candidate list."""


class MissingArgument(ValueError):
    """compute_points lacked a kind-required argument."""


class NotOpen(Exception):
    """Rejection aimed at a challenge that is not open."""


class EmptyReason(ValueError):
    """Rejection without a reason is not allowed."""


@dataclass
class GenerationContext:
    """Everything one user's engine pass may read; rng is explicitly seeded."""

    snapshot: CoverageSnapshot
    previous: SnapshotSummary | None
    mutants: list[MutantRecord]
    smells: list[SmellRecord]
    commits: list[CommitRecord]
    user_commits: list[CommitRecord]
    user_id: str
    config: ProjectConfig
    rng: random.Random
    build_id: int
    build_time: int
    rejected_fingerprints: frozenset[str]
    rejected_class_fqns: frozenset[str]
    repo_root: Path | None = None
    has_class_coverage: bool = True
    has_line_coverage: bool = True
    has_mutation_report: bool = True
    has_smell_report: bool = True
    has_test_report: bool = True
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class TargetRef:
    """A concrete challenge target before baselines are frozen."""

    kind: ChallengeKind
    target_class: str = ""
    target_method: str = ""
    target_line: int = 0
    target_mutant_id: str = ""
    target_smell_id: str = ""

    @property
    def fingerprint(self) -> str:
        return "|".join(
            [
                self.kind.value,
                self.target_class,
                self.target_method,
                str(self.target_line),
                self.target_mutant_id,
                self.target_smell_id,
            ]
        )


def candidate_classes(ctx: GenerationContext) -> list[tuple[str, float]]:
    """Classes the user recently changed, still in the snapshot, not
    rejected, not fully covered; ascending by coverage ratio.
    """
    roots = tuple(ctx.config.source_roots)
    changed: set[str] = set()
    for commit in ctx.user_commits:
        for path in commit.changed_files:
            fqn = path_to_class(path, roots)
            if fqn is not None:
                changed.add(fqn)
    out = []
    for fqn in sorted(changed):
        if fqn in ctx.rejected_class_fqns:
            continue
        row = ctx.snapshot.row_for(fqn)
        if row is None or row.coverage_ratio >= 1.0:
            continue
        out.append((fqn, row.coverage_ratio))
    out.sort(key=lambda pair: (pair[1], pair[0]))
    return out


def select_weighted(
    candidates: list[tuple[str, float]], rng: random.Random
) -> str:
    """Sample one class with weight (1 - coverage) + WEIGHT_FLOOR."""
    if not candidates:
        raise EmptyCandidates("no candidate classes to select from")
    weights = [(1.0 - coverage) + WEIGHT_FLOOR for _, coverage in candidates]
    mark = rng.random() * sum(weights)
    running = 0.0
    for (fqn, _), weight in zip(candidates, weights):
        running += weight
        if mark < running:
            return fqn
    return candidates[-1][0]


def compute_points(
    kind: ChallengeKind,
    baseline_class_coverage: float | None = None,
    threshold: float | None = None,
    smell_severity: str | None = None,
) -> int:
    if kind in (ChallengeKind.BUILD, ChallengeKind.TEST):
        return 1
    if kind is ChallengeKind.MUTATION:
        return 4
    if kind is ChallengeKind.SMELL:
        if smell_severity is None:
            raise MissingArgument("Smell points need a severity")
        return SMELL_POINTS[smell_severity]
    if baseline_class_coverage is None or threshold is None:
        raise MissingArgument(f"{kind.value} points need class coverage and threshold")
    high = baseline_class_coverage > threshold
    if kind is ChallengeKind.LINE_COVERAGE:
        return 3 if high else 2
    return 2 if high else 1


def method_lines(
    snapshot: CoverageSnapshot, class_fqn: str
) -> dict[str, list[LineCoverageDetail]]:
    grouped: dict[str, list[LineCoverageDetail]] = {}
    for detail in snapshot.lines_for(class_fqn):
        if detail.owning_method:
            grouped.setdefault(detail.owning_method, []).append(detail)
    return grouped


def method_coverage_ratio(
    snapshot: CoverageSnapshot, class_fqn: str, method: str
) -> float | None:
    lines = method_lines(snapshot, class_fqn).get(method)
    if not lines:
        return None
    covered = sum(d.covered_instructions for d in lines)
    total = covered + sum(d.missed_instructions for d in lines)
    return 1.0 if total == 0 else covered / total


def class_targets(
    ctx: GenerationContext, class_fqn: str, exclude: frozenset[str]
) -> dict[ChallengeKind, list[TargetRef]]:
    """All valid, non-excluded, non-rejected targets in one class, per kind."""

    def usable(ref: TargetRef) -> bool:
        return (
            ref.fingerprint not in exclude
            and ref.fingerprint not in ctx.rejected_fingerprints
        )

    targets: dict[ChallengeKind, list[TargetRef]] = {}
    row = ctx.snapshot.row_for(class_fqn)

    if (
        row is not None
        and row.coverage_ratio < 1.0
        and class_fqn not in ctx.rejected_class_fqns
    ):
        ref = TargetRef(ChallengeKind.CLASS_COVERAGE, target_class=class_fqn)
        if usable(ref):
            targets[ChallengeKind.CLASS_COVERAGE] = [ref]

    method_refs = []
    for method in sorted(method_lines(ctx.snapshot, class_fqn)):
        ratio = method_coverage_ratio(ctx.snapshot, class_fqn, method)
        if ratio is not None and ratio < 1.0:
            ref = TargetRef(
                ChallengeKind.METHOD_COVERAGE,
                target_class=class_fqn,
                target_method=method,
            )
            if usable(ref):
                method_refs.append(ref)
    if method_refs:
        targets[ChallengeKind.METHOD_COVERAGE] = method_refs

    line_refs = []
    for detail in ctx.snapshot.lines_for(class_fqn):
        if not detail.fully_covered:
            ref = TargetRef(
                ChallengeKind.LINE_COVERAGE,
                target_class=class_fqn,
                target_line=detail.line_number,
            )
            if usable(ref):
                line_refs.append(ref)
    if line_refs:
        targets[ChallengeKind.LINE_COVERAGE] = line_refs

    mutant_refs = []
    for mutant in sorted(ctx.mutants, key=lambda m: m.mutant_id):
        if mutant.class_fqn == class_fqn and mutant.status.live:
            ref = TargetRef(
                ChallengeKind.MUTATION, target_mutant_id=mutant.mutant_id
            )
            if usable(ref):
                mutant_refs.append(ref)
    if mutant_refs:
        targets[ChallengeKind.MUTATION] = mutant_refs

    roots = tuple(ctx.config.source_roots)
    smell_refs = []
    for smell in sorted(ctx.smells, key=lambda s: s.smell_id):
        if path_to_class(smell.file, roots) == class_fqn:
            ref = TargetRef(ChallengeKind.SMELL, target_smell_id=smell.smell_id)
            if usable(ref):
                smell_refs.append(ref)
    if smell_refs:
        targets[ChallengeKind.SMELL] = smell_refs

    return targets


def read_snippet(path: Path | None, line_number: int) -> str:
    """line_number with SNIPPET_CONTEXT_LINES either side; '' on any failure."""
    if path is None or line_number < 1:
        return ""
    try:
        lines = path.read_text(encoding="utf-8", errors="replace").splitlines()
    except OSError:
        return ""
    start = max(0, line_number - 1 - SNIPPET_CONTEXT_LINES)
    end = min(len(lines), line_number + SNIPPET_CONTEXT_LINES)
    return "\n".join(lines[start:end])


def source_path(ctx: GenerationContext, class_fqn: str) -> Path | None:
    """Working-copy path of the class's source file, via line details."""
    if ctx.repo_root is None:
        return None
    lines = ctx.snapshot.lines_for(class_fqn)
    if not lines:
        return None
    relative = lines[0].source_file
    for root in ctx.config.source_roots:
        candidate = ctx.repo_root / root / relative
        if candidate.is_file():
            return candidate
    return None


def _smell_by_id(ctx: GenerationContext, smell_id: str) -> SmellRecord | None:
    for smell in ctx.smells:
        if smell.smell_id == smell_id:
            return smell
    return None


def _snippet_anchor(ctx: GenerationContext, ref: TargetRef) -> int:
    """The illustrative line for coverage kinds: the first uncovered line."""
    if ref.kind is ChallengeKind.LINE_COVERAGE:
        return ref.target_line
    if ref.kind is ChallengeKind.METHOD_COVERAGE:
        for detail in ctx.snapshot.lines_for(ref.target_class):
            if detail.owning_method == ref.target_method and not detail.fully_covered:
                return detail.line_number
        return 0
    for detail in ctx.snapshot.lines_for(ref.target_class):
        if not detail.fully_covered:
            return detail.line_number
    return 0


def freeze_baseline(ctx: GenerationContext, ref: TargetRef) -> Baseline:
    """Capture the metrics the solve check will later compare against."""
    baseline = Baseline(test_count=ctx.snapshot.total_test_count)
    if not ctx.has_test_report and ctx.previous is not None:
        baseline.test_count = ctx.previous.total_test_count
    if ref.kind in (
        ChallengeKind.CLASS_COVERAGE,
        ChallengeKind.METHOD_COVERAGE,
        ChallengeKind.LINE_COVERAGE,
    ):
        row = ctx.snapshot.row_for(ref.target_class)
        if row is not None:
            baseline.class_coverage = row.coverage_ratio
            baseline.class_lines_covered = row.lines_covered
        if ref.kind is ChallengeKind.METHOD_COVERAGE:
            ratio = method_coverage_ratio(
                ctx.snapshot, ref.target_class, ref.target_method
            )
            baseline.method_coverage = ratio if ratio is not None else 0.0
        if ref.kind is ChallengeKind.LINE_COVERAGE:
            detail = ctx.snapshot.line_at(ref.target_class, ref.target_line)
            baseline.line_covered_branches = (
                detail.covered_branches if detail else 0
            )
    return baseline


def build_challenge(
    state: ProjectState, ctx: GenerationContext, ref: TargetRef
) -> Challenge:
    """Freeze baseline metrics, points, and snippet for a chosen target."""
    baseline = freeze_baseline(ctx, ref)
    points = 1
    snippet = ""
    mutated = ""

    if ref.kind in (
        ChallengeKind.CLASS_COVERAGE,
        ChallengeKind.METHOD_COVERAGE,
        ChallengeKind.LINE_COVERAGE,
    ):
        row = ctx.snapshot.row_for(ref.target_class)
        if row is None:
            raise MissingArgument(f"no coverage row for {ref.target_class}")
        points = compute_points(
            ref.kind, row.coverage_ratio, ctx.config.coverage_threshold
        )
        snippet = read_snippet(
            source_path(ctx, ref.target_class), _snippet_anchor(ctx, ref)
        )
    elif ref.kind is ChallengeKind.MUTATION:
        points = compute_points(ref.kind)
        for mutant in ctx.mutants:
            if mutant.mutant_id == ref.target_mutant_id:
                snippet = mutant.original_snippet
                mutated = mutant.mutated_snippet
                break
    elif ref.kind is ChallengeKind.SMELL:
        smell = _smell_by_id(ctx, ref.target_smell_id)
        if smell is None:
            raise MissingArgument(f"no smell record {ref.target_smell_id}")
        points = compute_points(ref.kind, smell_severity=smell.severity.value)
        if ctx.repo_root is not None:
            snippet = read_snippet(ctx.repo_root / smell.file, smell.start_line)
    else:
        points = compute_points(ref.kind)

    return Challenge(
        challenge_id=state.new_challenge_id(),
        owner_user_id=ctx.user_id,
        kind=ref.kind,
        points=points,
        created_build=ctx.build_id,
        baseline=baseline,
        target_class=ref.target_class,
        target_method=ref.target_method,
        target_line=ref.target_line,
        target_mutant_id=ref.target_mutant_id,
        target_smell_id=ref.target_smell_id,
        snippet=snippet,
        mutated_snippet=mutated,
    )


def generate_challenge(
    state: ProjectState,
    ctx: GenerationContext,
    exclude: frozenset[str] = frozenset(),
    bound_class: str | None = None,
    bound_package: str | None = None,
    allow_fallback: bool = True,
) -> Challenge | None:
    """One new challenge for the context user.

    Unbound: weighted class pick, uniform kind among kinds-with-targets,
    uniform target, falling back to a Test challenge when nothing is
    available. Bound forms restrict the candidate classes (quest steps);
    with allow_fallback=False they return None instead of a Test challenge.
    """
    if bound_class is not None:
        row = ctx.snapshot.row_for(bound_class)
        ratio = row.coverage_ratio if row is not None else 1.0
        candidates = [(bound_class, ratio)]
    else:
        candidates = candidate_classes(ctx)
        if bound_package is not None:
            candidates = [
                (fqn, ratio)
                for fqn, ratio in candidates
                if fqn.rsplit(".", 1)[0] == bound_package
            ]

    remaining = list(candidates)
    while remaining:
        chosen = select_weighted(remaining, ctx.rng)
        targets = class_targets(ctx, chosen, exclude)
        if targets:
            kind = ctx.rng.choice(sorted(targets, key=lambda k: k.value))
            ref = ctx.rng.choice(targets[kind])
            return build_challenge(state, ctx, ref)
        if bound_class is not None or bound_package is None:
            # a single weighted pick for the unbound and class-bound forms
            break
        remaining = [pair for pair in remaining if pair[0] != chosen]

    if not allow_fallback:
        return None
    return build_challenge(state, ctx, TargetRef(ChallengeKind.TEST))


def check_solved(challenge: Challenge, ctx: GenerationContext) -> bool:
    """Kind-specific solve predicate against the frozen baseline.

    Raises MissingReport when the needed report was not supplied this
    run; callers treat that as not-solved without expiring anything.
    """
    kind = challenge.kind
    if kind is ChallengeKind.BUILD:
        return ctx.snapshot.build_succeeded
    if kind is ChallengeKind.TEST:
        if not ctx.has_test_report:
            raise MissingReport("no test results this run")
        return ctx.snapshot.total_test_count > challenge.baseline.test_count
    if kind is ChallengeKind.CLASS_COVERAGE:
        if not ctx.has_class_coverage:
            raise MissingReport("no class coverage this run")
        row = ctx.snapshot.row_for(challenge.target_class)
        if row is None:
            return False
        return row.lines_covered > challenge.baseline.class_lines_covered
    if kind is ChallengeKind.METHOD_COVERAGE:
        if not ctx.has_line_coverage:
            raise MissingReport("no line coverage this run")
        ratio = method_coverage_ratio(
            ctx.snapshot, challenge.target_class, challenge.target_method
        )
        if ratio is None:
            return False
        return ratio > challenge.baseline.method_coverage
    if kind is ChallengeKind.LINE_COVERAGE:
        if not ctx.has_line_coverage:
            raise MissingReport("no line coverage this run")
        detail = ctx.snapshot.line_at(challenge.target_class, challenge.target_line)
        if detail is None:
            return False
        return (
            detail.fully_covered
            or detail.covered_branches > challenge.baseline.line_covered_branches
        )
    if kind is ChallengeKind.MUTATION:
        if not ctx.has_mutation_report:
            raise MissingReport("no mutation report this run")
        return any(
            m.mutant_id == challenge.target_mutant_id and not m.status.live
            for m in ctx.mutants
        )
    # Smell: gone when nothing matches rule+file within three lines
    if not ctx.has_smell_report:
        raise MissingReport("no smell report this run")
    rule, file, start = (challenge.target_smell_id.split("|") + ["", "", "0"])[:3]
    original_start = int(start)
    return not any(
        s.rule_id == rule
        and s.file == file
        and abs(s.start_line - original_start) <= 3
        for s in ctx.smells
    )


def check_solvable(challenge: Challenge, ctx: GenerationContext) -> bool:
    """False when the target no longer exists; such challenges expire.

    Raises MissingReport when the needed report is absent; callers treat
    that as still-solvable.
    """
    kind = challenge.kind
    if kind in (ChallengeKind.BUILD, ChallengeKind.TEST):
        return True
    if kind is ChallengeKind.CLASS_COVERAGE:
        if not ctx.has_class_coverage:
            raise MissingReport("no class coverage this run")
        row = ctx.snapshot.row_for(challenge.target_class)
        return row is not None and row.coverage_ratio < 1.0
    if kind is ChallengeKind.METHOD_COVERAGE:
        if not ctx.has_line_coverage:
            raise MissingReport("no line coverage this run")
        ratio = method_coverage_ratio(
            ctx.snapshot, challenge.target_class, challenge.target_method
        )
        return ratio is not None and ratio < 1.0
    if kind is ChallengeKind.LINE_COVERAGE:
        if not ctx.has_line_coverage:
            raise MissingReport("no line coverage this run")
        return (
            ctx.snapshot.line_at(challenge.target_class, challenge.target_line)
            is not None
        )
    if kind is ChallengeKind.MUTATION:
        if not ctx.has_mutation_report:
            raise MissingReport("no mutation report this run")
        return any(m.mutant_id == challenge.target_mutant_id for m in ctx.mutants)
    # Smell: solvable while the smelly file still exists in the project
    file = (challenge.target_smell_id.split("|") + ["", ""])[1]
    if ctx.repo_root is None:
        return True
    return (ctx.repo_root / file).is_file()


def solved_or_false(challenge: Challenge, ctx: GenerationContext) -> bool:
    try:
        return check_solved(challenge, ctx)
    except MissingReport as exc:
        ctx.warnings.append(f"{challenge.challenge_id}: {exc}")
        return False


def solvable_or_true(challenge: Challenge, ctx: GenerationContext) -> bool:
    try:
        return check_solvable(challenge, ctx)
    except MissingReport:
        return True


def reject_challenge(
    state: ProjectState, challenge_id: str, reason: str, timestamp: int
) -> EngineEvent:
    """Reject an open challenge; the fingerprint (and for ClassCoverage the
    class) is excluded from all future generation.
    """
    if not reason.strip():
        raise EmptyReason("a rejection reason is required")
    challenge = state.challenges.get(challenge_id)
    if challenge is None:
        raise KeyError(challenge_id)
    if challenge.state is not ChallengeState.OPEN:
        raise NotOpen(f"challenge {challenge_id} is {challenge.state.value}")
    challenge.transition(ChallengeState.REJECTED)
    challenge.rejection_reason = reason
    if challenge.kind not in (ChallengeKind.BUILD, ChallengeKind.TEST):
        state.rejected_fingerprints.add(challenge.fingerprint)
    if challenge.kind is ChallengeKind.CLASS_COVERAGE:
        state.rejected_class_fqns.add(challenge.target_class)
    return EngineEvent(
        event_id=state.new_event_id(),
        build_id=state.build_counter,
        user_id=challenge.owner_user_id,
        type=EventType.CHALLENGE_REJECTED,
        payload={"challenge_id": challenge_id, "reason": reason},
        timestamp=timestamp,
    )


def award(
    state: ProjectState,
    ctx: GenerationContext,
    user_id: str,
    points: int,
    source_id: str,
) -> None:
    state.score_ledger.append(
        LedgerEntry(
            user_id=user_id,
            points=points,
            source_id=source_id,
            build_id=ctx.build_id,
            timestamp=ctx.build_time,
        )
    )
    state.users[user_id].score += points


def open_fingerprints(state: ProjectState, user_id: str) -> set[str]:
    """Fingerprints the top-up must avoid duplicating: the user's open
    standalone challenges and every step of their active quests.
    """
    from .model.entities import QuestState

    fingerprints = {c.fingerprint for c in state.open_challenges(user_id)}
    for quest in state.quests_of_user(user_id):
        if quest.state is QuestState.ACTIVE:
            fingerprints.update(step.fingerprint for step in quest.steps)
    return fingerprints


def run_user_update(
    state: ProjectState, user_id: str, ctx: GenerationContext
) -> list[EngineEvent]:
    """The ordered per-user pass for one build."""
    from . import achievements as achievements_module
    from . import quests as quests_module

    events: list[EngineEvent] = []
    user = state.users[user_id]

    def emit(event_type: EventType, payload: dict) -> None:
        events.append(
            EngineEvent(
                event_id=state.new_event_id(),
                build_id=ctx.build_id,
                user_id=user_id,
                type=event_type,
                payload=payload,
                timestamp=ctx.build_time,
            )
        )

    # a failing build without coverage reports runs a restricted pass:
    # build-challenge bookkeeping only, no generation
    restricted = not ctx.snapshot.build_succeeded and not (
        ctx.has_class_coverage or ctx.has_line_coverage
    )

    for challenge in state.open_challenges(user_id):
        if solved_or_false(challenge, ctx):
            challenge.transition(ChallengeState.SOLVED)
            challenge.solved_build = ctx.build_id
            user.completed_challenge_count += 1
            award(state, ctx, user_id, challenge.points, challenge.challenge_id)
            emit(
                EventType.CHALLENGE_SOLVED,
                {
                    "challenge_id": challenge.challenge_id,
                    "kind": challenge.kind.value,
                    "points": challenge.points,
                },
            )
        elif not solvable_or_true(challenge, ctx):
            challenge.transition(ChallengeState.EXPIRED)
            emit(
                EventType.CHALLENGE_EXPIRED,
                {
                    "challenge_id": challenge.challenge_id,
                    "kind": challenge.kind.value,
                },
            )

    if not ctx.snapshot.build_succeeded:
        has_open_build = any(
            c.kind is ChallengeKind.BUILD
            for c in state.open_challenges(user_id)
        )
        if not has_open_build:
            challenge = build_challenge(state, ctx, TargetRef(ChallengeKind.BUILD))
            state.challenges[challenge.challenge_id] = challenge
            emit(
                EventType.BUILD_CHALLENGE_ISSUED,
                {"challenge_id": challenge.challenge_id},
            )

    if restricted:
        return events

    exclude = open_fingerprints(state, user_id)
    while (
        len(
            [
                c
                for c in state.open_challenges(user_id)
                if c.kind is not ChallengeKind.BUILD
            ]
        )
        < ctx.config.open_challenge_target
    ):
        challenge = generate_challenge(state, ctx, frozenset(exclude))
        state.challenges[challenge.challenge_id] = challenge
        exclude.add(challenge.fingerprint)
        emit(
            EventType.CHALLENGE_GENERATED,
            {
                "challenge_id": challenge.challenge_id,
                "kind": challenge.kind.value,
                "points": challenge.points,
                "title": challenge.title,
            },
        )

    events.extend(quests_module.run_quest_update(state, user_id, ctx))
    events.extend(
        achievements_module.evaluate_achievements(state, user_id, ctx)
    )
    return events
