"""Three-step quests: composition, strictly sequential progress, awards.

Steps are full Challenge records produced by the challenge generator with
the quest's locus pre-bound. Only the current step is ever checked;
dormant steps get fresh baselines the moment they become current.
"""

from __future__ import annotations

from .challenges import (
    EmptyReason,
    GenerationContext,
    TargetRef,
    award,
    build_challenge,
    candidate_classes,
    class_targets,
    freeze_baseline,
    generate_challenge,
    open_fingerprints,
    select_weighted,
    solvable_or_true,
    solved_or_false,
)
from .model.entities import (
    Challenge,
    ChallengeKind,
    ChallengeState,
    EngineEvent,
    EventType,
    ProjectState,
    Quest,
    QuestKind,
    QuestState,
)


class NotActive(Exception):
    """Rejection aimed at a quest that is not active."""


def _pools(
    ctx: GenerationContext, exclude: frozenset[str]
) -> dict[QuestKind, list[tuple[str, float]]]:
    """Per quest kind, the candidate loci (classes, or one class per
    package for Package quests) able to supply that kind's three steps.
    """
    pools: dict[QuestKind, list[tuple[str, float]]] = {}
    candidates = candidate_classes(ctx)
    package_refs: dict[str, int] = {}
    for fqn, ratio in candidates:
        targets = class_targets(ctx, fqn, exclude)
        counts = {kind: len(refs) for kind, refs in targets.items()}
        if counts.get(ChallengeKind.CLASS_COVERAGE, 0) >= 1:
            pools.setdefault(QuestKind.CLASS, []).append((fqn, ratio))
        if counts.get(ChallengeKind.METHOD_COVERAGE, 0) >= 3:
            pools.setdefault(QuestKind.METHOD, []).append((fqn, ratio))
        if counts.get(ChallengeKind.LINE_COVERAGE, 0) >= 3:
            pools.setdefault(QuestKind.LINE, []).append((fqn, ratio))
        if counts.get(ChallengeKind.MUTATION, 0) >= 3:
            pools.setdefault(QuestKind.MUTATION, []).append((fqn, ratio))
        if counts.get(ChallengeKind.SMELL, 0) >= 3:
            pools.setdefault(QuestKind.SMELL, []).append((fqn, ratio))
        if (
            counts.get(ChallengeKind.CLASS_COVERAGE, 0) >= 1
            and counts.get(ChallengeKind.METHOD_COVERAGE, 0) >= 1
            and counts.get(ChallengeKind.LINE_COVERAGE, 0) >= 1
        ):
            pools.setdefault(QuestKind.EXPANDING, []).append((fqn, ratio))
            pools.setdefault(QuestKind.DECREASING, []).append((fqn, ratio))
        package_refs[fqn.rsplit(".", 1)[0]] = package_refs.get(
            fqn.rsplit(".", 1)[0], 0
        ) + sum(counts.values())
    package_pool = [
        (fqn, ratio)
        for fqn, ratio in candidates
        if package_refs.get(fqn.rsplit(".", 1)[0], 0) >= 3
    ]
    if package_pool:
        pools[QuestKind.PACKAGE] = package_pool
    return pools


def feasible_quest_kinds(
    ctx: GenerationContext, exclude: frozenset[str] = frozenset()
) -> set[QuestKind]:
    """Kinds whose three steps can be generated right now; Test always."""
    return set(_pools(ctx, exclude)) | {QuestKind.TEST}


def _pick_steps(
    state: ProjectState,
    ctx: GenerationContext,
    refs: list[TargetRef],
    count: int,
) -> list[Challenge]:
    remaining = list(refs)
    steps = []
    for _ in range(count):
        ref = ctx.rng.choice(remaining)
        remaining.remove(ref)
        steps.append(build_challenge(state, ctx, ref))
    return steps


def generate_quest(
    state: ProjectState,
    ctx: GenerationContext,
    exclude: frozenset[str] = frozenset(),
) -> Quest:
    """One new quest: kind uniform over the feasible kinds, locus chosen
    by the same weighted selection as standalone challenges.
    """
    pools = _pools(ctx, exclude)
    kinds = sorted(set(pools) | {QuestKind.TEST}, key=lambda k: k.value)
    kind = ctx.rng.choice(kinds)
    steps: list[Challenge] = []

    if kind is not QuestKind.TEST:
        locus = select_weighted(pools[kind], ctx.rng)
        targets = class_targets(ctx, locus, exclude)
        if kind is QuestKind.CLASS:
            ref = targets[ChallengeKind.CLASS_COVERAGE][0]
            steps = [build_challenge(state, ctx, ref) for _ in range(3)]
        elif kind is QuestKind.METHOD:
            steps = _pick_steps(
                state, ctx, targets[ChallengeKind.METHOD_COVERAGE], 3
            )
        elif kind is QuestKind.LINE:
            steps = _pick_steps(
                state, ctx, targets[ChallengeKind.LINE_COVERAGE], 3
            )
        elif kind is QuestKind.MUTATION:
            steps = _pick_steps(state, ctx, targets[ChallengeKind.MUTATION], 3)
        elif kind is QuestKind.SMELL:
            steps = _pick_steps(state, ctx, targets[ChallengeKind.SMELL], 3)
        elif kind in (QuestKind.EXPANDING, QuestKind.DECREASING):
            line_step = _pick_steps(
                state, ctx, targets[ChallengeKind.LINE_COVERAGE], 1
            )[0]
            method_step = _pick_steps(
                state, ctx, targets[ChallengeKind.METHOD_COVERAGE], 1
            )[0]
            class_step = build_challenge(
                state, ctx, targets[ChallengeKind.CLASS_COVERAGE][0]
            )
            if kind is QuestKind.EXPANDING:
                steps = [line_step, method_step, class_step]
            else:
                steps = [class_step, method_step, line_step]
        else:  # Package
            package = locus.rsplit(".", 1)[0]
            step_exclude = set(exclude)
            for _ in range(3):
                challenge = generate_challenge(
                    state,
                    ctx,
                    frozenset(step_exclude),
                    bound_package=package,
                    allow_fallback=False,
                )
                if challenge is None:
                    steps = []
                    break
                step_exclude.add(challenge.fingerprint)
                steps.append(challenge)

    if not steps:
        kind = QuestKind.TEST
        steps = [
            build_challenge(state, ctx, TargetRef(ChallengeKind.TEST))
            for _ in range(3)
        ]

    for step in steps[1:]:
        step.state = ChallengeState.DORMANT
    quest = Quest(
        quest_id=state.new_quest_id(),
        owner_user_id=ctx.user_id,
        kind=kind,
        steps=steps,
        created_build=ctx.build_id,
    )
    state.quests[quest.quest_id] = quest
    return quest


def _expire_quest(quest: Quest) -> None:
    quest.transition(QuestState.EXPIRED)
    for step in quest.steps:
        if step.state in (ChallengeState.OPEN, ChallengeState.DORMANT):
            step.transition(ChallengeState.EXPIRED)


def advance_quest(
    state: ProjectState,
    quest: Quest,
    ctx: GenerationContext,
) -> list[EngineEvent]:
    """Check the current step only; advance, complete, or expire."""
    events: list[EngineEvent] = []

    def emit(event_type: EventType, payload: dict) -> None:
        events.append(
            EngineEvent(
                event_id=state.new_event_id(),
                build_id=ctx.build_id,
                user_id=quest.owner_user_id,
                type=event_type,
                payload=payload,
                timestamp=ctx.build_time,
            )
        )

    step = quest.current_step
    if step is None:
        return events
    if solved_or_false(step, ctx):
        step.transition(ChallengeState.SOLVED)
        step.solved_build = ctx.build_id
        state.users[quest.owner_user_id].completed_challenge_count += 1
        emit(
            EventType.QUEST_STEP_SOLVED,
            {
                "quest_id": quest.quest_id,
                "step_index": quest.current_index,
                "challenge_id": step.challenge_id,
            },
        )
        quest.current_index += 1
        if quest.current_index >= len(quest.steps):
            quest.transition(QuestState.COMPLETED)
            points = quest.award_points
            state.users[quest.owner_user_id].completed_quest_count += 1
            award(state, ctx, quest.owner_user_id, points, quest.quest_id)
            emit(
                EventType.QUEST_COMPLETED,
                {"quest_id": quest.quest_id, "points": points},
            )
        else:
            next_step = quest.steps[quest.current_index]
            next_step.transition(ChallengeState.OPEN)
            next_step.baseline = freeze_baseline(
                ctx,
                TargetRef(
                    kind=next_step.kind,
                    target_class=next_step.target_class,
                    target_method=next_step.target_method,
                    target_line=next_step.target_line,
                    target_mutant_id=next_step.target_mutant_id,
                    target_smell_id=next_step.target_smell_id,
                ),
            )
            if not solvable_or_true(next_step, ctx):
                _expire_quest(quest)
                emit(EventType.QUEST_EXPIRED, {"quest_id": quest.quest_id})
    elif not solvable_or_true(step, ctx):
        _expire_quest(quest)
        emit(EventType.QUEST_EXPIRED, {"quest_id": quest.quest_id})
    return events


def run_quest_update(
    state: ProjectState, user_id: str, ctx: GenerationContext
) -> list[EngineEvent]:
    """Advance the user's active quests, then top up to the target."""
    events: list[EngineEvent] = []
    for quest in state.quests_of_user(user_id):
        if quest.state is QuestState.ACTIVE:
            events.extend(advance_quest(state, quest, ctx))

    def active_count() -> int:
        return sum(
            1
            for quest in state.quests_of_user(user_id)
            if quest.state is QuestState.ACTIVE
        )

    while active_count() < ctx.config.open_quest_target:
        quest = generate_quest(
            state, ctx, frozenset(open_fingerprints(state, user_id))
        )
        events.append(
            EngineEvent(
                event_id=state.new_event_id(),
                build_id=ctx.build_id,
                user_id=user_id,
                type=EventType.QUEST_GENERATED,
                payload={"quest_id": quest.quest_id, "kind": quest.kind.value},
                timestamp=ctx.build_time,
            )
        )
    return events


def reject_quest(
    state: ProjectState, quest_id: str, reason: str, timestamp: int
) -> EngineEvent:
    """Reject a whole active quest; all step fingerprints are excluded."""
    if not reason.strip():
        raise EmptyReason("a rejection reason is required")
    quest = state.quests.get(quest_id)
    if quest is None:
        raise KeyError(quest_id)
    if quest.state is not QuestState.ACTIVE:
        raise NotActive(f"quest {quest_id} is {quest.state.value}")
    quest.transition(QuestState.REJECTED)
    quest.rejection_reason = reason
    for step in quest.steps:
        if step.state in (ChallengeState.OPEN, ChallengeState.DORMANT):
            step.transition(ChallengeState.REJECTED)
        if step.kind not in (ChallengeKind.BUILD, ChallengeKind.TEST):
            state.rejected_fingerprints.add(step.fingerprint)
    return EngineEvent(
        event_id=state.new_event_id(),
        build_id=state.build_counter,
        user_id=quest.owner_user_id,
        type=EventType.QUEST_REJECTED,
        payload={"quest_id": quest_id, "reason": reason},
        timestamp=timestamp,
    )
