"""Persistent game state: entities, invariants, atomic storage."""

from .entities import (
    AVATAR_COUNT,
    QUEST_STEP_COUNT,
    Achievement,
    AchievementPredicate,
    AchievementScope,
    Baseline,
    Challenge,
    ChallengeKind,
    ChallengeState,
    Comparator,
    EngineEvent,
    EventType,
    IllegalTransition,
    InvariantViolation,
    LedgerEntry,
    Metric,
    ProjectConfig,
    ProjectState,
    Quest,
    QuestKind,
    QuestState,
    SnapshotSummary,
    Team,
    UserProfile,
)
from .store import (
    EVENTS_FILE_NAME,
    STATE_FILE_NAME,
    STATE_VERSION,
    Corrupt,
    Disabled,
    IoFailure,
    NotFound,
    SchemaMismatch,
    append_events,
    canonical_json,
    events_path,
    export_statistics,
    load_state,
    pseudonyms,
    read_events,
    reset_project,
    save_state,
    state_checksum,
    state_path,
    validate_state,
)

__all__ = [
    "AVATAR_COUNT",
    "Achievement",
    "AchievementPredicate",
    "AchievementScope",
    "Baseline",
    "Challenge",
    "ChallengeKind",
    "ChallengeState",
    "Comparator",
    "Corrupt",
    "Disabled",
    "EVENTS_FILE_NAME",
    "EngineEvent",
    "EventType",
    "IllegalTransition",
    "InvariantViolation",
    "IoFailure",
    "LedgerEntry",
    "Metric",
    "NotFound",
    "ProjectConfig",
    "ProjectState",
    "QUEST_STEP_COUNT",
    "Quest",
    "QuestKind",
    "QuestState",
    "STATE_FILE_NAME",
    "STATE_VERSION",
    "SchemaMismatch",
    "SnapshotSummary",
    "Team",
    "UserProfile",
    "append_events",
    "canonical_json",
    "events_path",
    "export_statistics",
    "load_state",
    "pseudonyms",
    "read_events",
    "reset_project",
    "save_state",
    "state_checksum",
    "state_path",
    "validate_state",
]
