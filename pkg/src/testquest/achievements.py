"""Declarative achievement registry and post-run evaluation.

Achievements are trophies: permanent, dated, never worth points.
Project-scope achievements land on every registered user at once.
"""

from __future__ import annotations

import json
from importlib import resources

from .challenges import GenerationContext
from .model.entities import (
    Achievement,
    AchievementPredicate,
    AchievementScope,
    ChallengeKind,
    Comparator,
    EngineEvent,
    EventType,
    Metric,
    ProjectState,
)


class DuplicateId(ValueError):
    """Two registry entries share an id."""


class UnknownMetric(ValueError):
    """A registry entry names a metric outside the closed vocabulary."""


def load_registry(document: str) -> list[Achievement]:
    """Parse a registry document: a JSON list of achievement entries."""
    try:
        payload = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ValueError(f"registry is not valid JSON: {exc}") from exc
    if not isinstance(payload, list):
        raise ValueError("registry must be a JSON list")
    achievements: list[Achievement] = []
    seen: set[str] = set()
    for position, entry in enumerate(payload, start=1):
        if not isinstance(entry, dict):
            raise ValueError(f"registry entry {position} is not an object")
        achievement_id = str(entry["id"])
        if achievement_id in seen:
            raise DuplicateId(f"duplicate achievement id {achievement_id!r}")
        seen.add(achievement_id)
        raw_metric = str(entry["metric"])
        try:
            metric = Metric(raw_metric)
        except ValueError:
            raise UnknownMetric(
                f"achievement {achievement_id!r}: unknown metric {raw_metric!r}"
            ) from None
        kind_filter = entry.get("kindFilter")
        achievements.append(
            Achievement(
                achievement_id=achievement_id,
                title=str(entry["title"]),
                description=str(entry["description"]),
                secret=bool(entry["secret"]),
                scope=AchievementScope(entry["scope"]),
                predicate=AchievementPredicate(
                    metric=metric,
                    comparator=Comparator(entry["comparator"]),
                    threshold=float(entry["threshold"]),
                    kind_filter=ChallengeKind(kind_filter) if kind_filter else None,
                ),
            )
        )
    return achievements


def load_default_registry() -> list[Achievement]:
    document = (
        resources.files("testquest.data")
        .joinpath("default_achievements.json")
        .read_text(encoding="utf-8")
    )
    return load_registry(document)


def _solved_kind_count(
    state: ProjectState, user_id: str, kind: ChallengeKind
) -> int:
    return sum(
        1
        for challenge in state.solved_challenges_of_user(user_id)
        if challenge.kind is kind
    )


def metric_value(
    state: ProjectState,
    user_id: str,
    predicate: AchievementPredicate,
) -> float:
    """Current value of one predicate's metric for one user."""
    metric = predicate.metric
    user = state.users[user_id]
    snapshot = state.last_snapshot
    if metric is Metric.CHALLENGES_SOLVED_TOTAL:
        return len(state.solved_challenges_of_user(user_id))
    if metric is Metric.CHALLENGES_SOLVED_OF_KIND:
        assert predicate.kind_filter is not None
        return _solved_kind_count(state, user_id, predicate.kind_filter)
    if metric is Metric.QUESTS_COMPLETED:
        return user.completed_quest_count
    if metric is Metric.PROJECT_LINE_COVERAGE:
        return snapshot.line_coverage if snapshot else 0.0
    if metric is Metric.PROJECT_BRANCH_COVERAGE:
        return snapshot.branch_coverage if snapshot else 0.0
    if metric is Metric.PROJECT_TEST_COUNT:
        return snapshot.total_test_count if snapshot else 0
    if metric is Metric.CLASS_FULLY_COVERED_COUNT:
        return snapshot.fully_covered_class_count if snapshot else 0
    if metric is Metric.MUTANTS_KILLED_TOTAL:
        return _solved_kind_count(state, user_id, ChallengeKind.MUTATION)
    if metric is Metric.SMELLS_REMOVED_TOTAL:
        return _solved_kind_count(state, user_id, ChallengeKind.SMELL)
    if metric is Metric.BUILDS_FIXED_TOTAL:
        return _solved_kind_count(state, user_id, ChallengeKind.BUILD)
    return user.score


def _satisfied(predicate: AchievementPredicate, value: float) -> bool:
    if predicate.comparator is Comparator.AT_LEAST:
        return value >= predicate.threshold
    return value == predicate.threshold


def _grant(
    state: ProjectState,
    achievement: Achievement,
    user_id: str,
    timestamp: int,
) -> bool:
    completions = state.completed_achievements.setdefault(user_id, {})
    if achievement.achievement_id in completions:
        return False
    completions[achievement.achievement_id] = timestamp
    state.users[user_id].completed_achievement_count += 1
    return True


def evaluate_achievements(
    state: ProjectState, user_id: str, ctx: GenerationContext
) -> list[EngineEvent]:
    """Evaluate every incomplete achievement for the user; project scope
    spreads to all registered users on trigger.
    """
    events: list[EngineEvent] = []
    completions = state.completed_achievements.setdefault(user_id, {})
    for achievement in state.achievement_registry:
        if achievement.achievement_id in completions:
            continue
        value = metric_value(state, user_id, achievement.predicate)
        if not _satisfied(achievement.predicate, value):
            continue
        if achievement.scope is AchievementScope.PROJECT:
            recipients = list(state.user_order)
        else:
            recipients = [user_id]
        for recipient in recipients:
            if _grant(state, achievement, recipient, ctx.build_time):
                events.append(
                    EngineEvent(
                        event_id=state.new_event_id(),
                        build_id=ctx.build_id,
                        user_id=recipient,
                        type=EventType.ACHIEVEMENT_COMPLETED,
                        payload={
                            "achievement_id": achievement.achievement_id,
                            "title": achievement.title,
                        },
                        timestamp=ctx.build_time,
                    )
                )
    return events
