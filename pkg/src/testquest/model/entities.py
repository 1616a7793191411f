"""Persistent game-state entities and their serialization.

All to_dict/from_dict pairs are lossless; sets become sorted lists so the
canonical JSON form is byte-stable for identical states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class IllegalTransition(Exception):
    """A challenge or quest left a terminal state."""


class InvariantViolation(Exception):
    """State offered for persistence breaks a type invariant."""


class ChallengeKind(str, Enum):
    BUILD = "Build"
    TEST = "Test"
    CLASS_COVERAGE = "ClassCoverage"
    METHOD_COVERAGE = "MethodCoverage"
    LINE_COVERAGE = "LineCoverage"
    MUTATION = "Mutation"
    SMELL = "Smell"


class ChallengeState(str, Enum):
    # Dormant is used only by quest steps waiting their turn
    DORMANT = "Dormant"
    OPEN = "Open"
    SOLVED = "Solved"
    REJECTED = "Rejected"
    EXPIRED = "Expired"


TERMINAL_CHALLENGE_STATES = frozenset(
    {ChallengeState.SOLVED, ChallengeState.REJECTED, ChallengeState.EXPIRED}
)

_ALLOWED_TRANSITIONS = {
    ChallengeState.DORMANT: {
        ChallengeState.OPEN,
        ChallengeState.REJECTED,
        ChallengeState.EXPIRED,
    },
    ChallengeState.OPEN: {
        ChallengeState.SOLVED,
        ChallengeState.REJECTED,
        ChallengeState.EXPIRED,
    },
}

# legal point ranges per kind
_POINT_RANGES: dict[ChallengeKind, tuple[int, ...]] = {
    ChallengeKind.BUILD: (1,),
    ChallengeKind.TEST: (1,),
    ChallengeKind.CLASS_COVERAGE: (1, 2),
    ChallengeKind.METHOD_COVERAGE: (1, 2),
    ChallengeKind.LINE_COVERAGE: (2, 3),
    ChallengeKind.MUTATION: (4,),
    ChallengeKind.SMELL: (1, 2, 3, 4),
}

# which target fields each kind requires; all others must stay empty
_REQUIRED_TARGETS: dict[ChallengeKind, tuple[str, ...]] = {
    ChallengeKind.BUILD: (),
    ChallengeKind.TEST: (),
    ChallengeKind.CLASS_COVERAGE: ("target_class",),
    ChallengeKind.METHOD_COVERAGE: ("target_class", "target_method"),
    ChallengeKind.LINE_COVERAGE: ("target_class", "target_line"),
    ChallengeKind.MUTATION: ("target_mutant_id",),
    ChallengeKind.SMELL: ("target_smell_id",),
}


@dataclass
class Baseline:
    """Metrics frozen at challenge creation; only kind-relevant ones are used."""

    class_coverage: float = 0.0
    class_lines_covered: int = 0
    method_coverage: float = 0.0
    line_covered_branches: int = 0
    test_count: int = 0

    def to_dict(self) -> dict:
        return {
            "class_coverage": self.class_coverage,
            "class_lines_covered": self.class_lines_covered,
            "method_coverage": self.method_coverage,
            "line_covered_branches": self.line_covered_branches,
            "test_count": self.test_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Baseline":
        return cls(
            class_coverage=float(data["class_coverage"]),
            class_lines_covered=int(data["class_lines_covered"]),
            method_coverage=float(data["method_coverage"]),
            line_covered_branches=int(data["line_covered_branches"]),
            test_count=int(data["test_count"]),
        )


@dataclass
class Challenge:
    challenge_id: str
    owner_user_id: str
    kind: ChallengeKind
    points: int
    created_build: int
    baseline: Baseline = field(default_factory=Baseline)
    target_class: str = ""
    target_method: str = ""
    target_line: int = 0
    target_mutant_id: str = ""
    target_smell_id: str = ""
    state: ChallengeState = ChallengeState.OPEN
    solved_build: int | None = None
    rejection_reason: str | None = None
    snippet: str = ""
    mutated_snippet: str = ""

    def __post_init__(self) -> None:
        if self.points not in _POINT_RANGES[self.kind]:
            raise InvariantViolation(
                f"{self.kind.value} challenge with illegal points {self.points}"
            )
        required = _REQUIRED_TARGETS[self.kind]
        all_targets = {
            "target_class": self.target_class,
            "target_method": self.target_method,
            "target_line": self.target_line,
            "target_mutant_id": self.target_mutant_id,
            "target_smell_id": self.target_smell_id,
        }
        empty = {"target_line": 0}
        for name, value in all_targets.items():
            expected_empty = empty.get(name, "")
            if name in required and value == expected_empty:
                raise InvariantViolation(
                    f"{self.kind.value} challenge requires {name}"
                )
            if name not in required and value != expected_empty:
                raise InvariantViolation(
                    f"{self.kind.value} challenge must not set {name}"
                )

    def transition(self, new_state: ChallengeState) -> None:
        allowed = _ALLOWED_TRANSITIONS.get(self.state, set())
        if new_state not in allowed:
            raise IllegalTransition(
                f"challenge {self.challenge_id}: {self.state.value} → {new_state.value}"
            )
        self.state = new_state

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

    @property
    def title(self) -> str:
        if self.kind is ChallengeKind.BUILD:
            return "Fix the failing build"
        if self.kind is ChallengeKind.TEST:
            return "Write a new test"
        if self.kind is ChallengeKind.CLASS_COVERAGE:
            return f"Raise the line coverage of class {self.target_class}"
        if self.kind is ChallengeKind.METHOD_COVERAGE:
            return f"Cover more of method {self.target_method} in {self.target_class}"
        if self.kind is ChallengeKind.LINE_COVERAGE:
            return f"Cover line {self.target_line} of {self.target_class}"
        if self.kind is ChallengeKind.MUTATION:
            return f"Write a test that kills mutant {self.target_mutant_id}"
        rule, file, start = (self.target_smell_id.split("|") + ["", "", ""])[:3]
        return f"Remove the {rule} smell at {file}:{start}"

    def to_dict(self) -> dict:
        return {
            "challenge_id": self.challenge_id,
            "owner_user_id": self.owner_user_id,
            "kind": self.kind.value,
            "points": self.points,
            "created_build": self.created_build,
            "baseline": self.baseline.to_dict(),
            "target_class": self.target_class,
            "target_method": self.target_method,
            "target_line": self.target_line,
            "target_mutant_id": self.target_mutant_id,
            "target_smell_id": self.target_smell_id,
            "state": self.state.value,
            "solved_build": self.solved_build,
            "rejection_reason": self.rejection_reason,
            "snippet": self.snippet,
            "mutated_snippet": self.mutated_snippet,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Challenge":
        return cls(
            challenge_id=data["challenge_id"],
            owner_user_id=data["owner_user_id"],
            kind=ChallengeKind(data["kind"]),
            points=int(data["points"]),
            created_build=int(data["created_build"]),
            baseline=Baseline.from_dict(data["baseline"]),
            target_class=data["target_class"],
            target_method=data["target_method"],
            target_line=int(data["target_line"]),
            target_mutant_id=data["target_mutant_id"],
            target_smell_id=data["target_smell_id"],
            state=ChallengeState(data["state"]),
            solved_build=data["solved_build"],
            rejection_reason=data["rejection_reason"],
            snippet=data["snippet"],
            mutated_snippet=data["mutated_snippet"],
        )


class QuestKind(str, Enum):
    TEST = "Test"
    PACKAGE = "Package"
    CLASS = "Class"
    METHOD = "Method"
    LINE = "Line"
    EXPANDING = "Expanding"
    DECREASING = "Decreasing"
    MUTATION = "Mutation"
    SMELL = "Smell"


class QuestState(str, Enum):
    ACTIVE = "Active"
    COMPLETED = "Completed"
    REJECTED = "Rejected"
    EXPIRED = "Expired"


QUEST_STEP_COUNT = 3


@dataclass
class Quest:
    quest_id: str
    owner_user_id: str
    kind: QuestKind
    steps: list[Challenge]
    created_build: int
    current_index: int = 0
    state: QuestState = QuestState.ACTIVE
    rejection_reason: str | None = None

    def __post_init__(self) -> None:
        if len(self.steps) != QUEST_STEP_COUNT:
            raise InvariantViolation(
                f"quest {self.quest_id} has {len(self.steps)} steps"
            )
        if not 0 <= self.current_index <= QUEST_STEP_COUNT:
            raise InvariantViolation(
                f"quest {self.quest_id} current_index {self.current_index}"
            )

    def transition(self, new_state: QuestState) -> None:
        if self.state is not QuestState.ACTIVE:
            raise IllegalTransition(
                f"quest {self.quest_id}: {self.state.value} → {new_state.value}"
            )
        self.state = new_state

    @property
    def current_step(self) -> Challenge | None:
        if self.current_index >= QUEST_STEP_COUNT:
            return None
        return self.steps[self.current_index]

    @property
    def award_points(self) -> int:
        return sum(step.points for step in self.steps) + QUEST_STEP_COUNT

    def to_dict(self) -> dict:
        return {
            "quest_id": self.quest_id,
            "owner_user_id": self.owner_user_id,
            "kind": self.kind.value,
            "steps": [step.to_dict() for step in self.steps],
            "created_build": self.created_build,
            "current_index": self.current_index,
            "state": self.state.value,
            "rejection_reason": self.rejection_reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Quest":
        return cls(
            quest_id=data["quest_id"],
            owner_user_id=data["owner_user_id"],
            kind=QuestKind(data["kind"]),
            steps=[Challenge.from_dict(step) for step in data["steps"]],
            created_build=int(data["created_build"]),
            current_index=int(data["current_index"]),
            state=QuestState(data["state"]),
            rejection_reason=data["rejection_reason"],
        )


class AchievementScope(str, Enum):
    INDIVIDUAL = "Individual"
    PROJECT = "Project"


class Comparator(str, Enum):
    AT_LEAST = ">="
    EXACTLY = "="


class Metric(str, Enum):
    CHALLENGES_SOLVED_TOTAL = "challenges_solved_total"
    CHALLENGES_SOLVED_OF_KIND = "challenges_solved_of_kind"
    QUESTS_COMPLETED = "quests_completed"
    PROJECT_LINE_COVERAGE = "project_line_coverage"
    PROJECT_BRANCH_COVERAGE = "project_branch_coverage"
    PROJECT_TEST_COUNT = "project_test_count"
    CLASS_FULLY_COVERED_COUNT = "class_fully_covered_count"
    MUTANTS_KILLED_TOTAL = "mutants_killed_total"
    SMELLS_REMOVED_TOTAL = "smells_removed_total"
    BUILDS_FIXED_TOTAL = "builds_fixed_total"
    SCORE_TOTAL = "score_total"


@dataclass(frozen=True)
class AchievementPredicate:
    metric: Metric
    comparator: Comparator
    threshold: float
    kind_filter: ChallengeKind | None = None

    def __post_init__(self) -> None:
        if self.threshold < 0:
            raise InvariantViolation(f"negative threshold {self.threshold}")
        if (self.kind_filter is not None) != (
            self.metric is Metric.CHALLENGES_SOLVED_OF_KIND
        ):
            raise InvariantViolation(
                "kind_filter is required by exactly the challenges_solved_of_kind metric"
            )

    def to_dict(self) -> dict:
        return {
            "metric": self.metric.value,
            "comparator": self.comparator.value,
            "threshold": self.threshold,
            "kind_filter": self.kind_filter.value if self.kind_filter else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AchievementPredicate":
        kind_filter = data.get("kind_filter")
        return cls(
            metric=Metric(data["metric"]),
            comparator=Comparator(data["comparator"]),
            threshold=float(data["threshold"]),
            kind_filter=ChallengeKind(kind_filter) if kind_filter else None,
        )


@dataclass(frozen=True)
class Achievement:
    achievement_id: str
    title: str
    description: str
    secret: bool
    scope: AchievementScope
    predicate: AchievementPredicate

    def to_dict(self) -> dict:
        return {
            "achievement_id": self.achievement_id,
            "title": self.title,
            "description": self.description,
            "secret": self.secret,
            "scope": self.scope.value,
            "predicate": self.predicate.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Achievement":
        return cls(
            achievement_id=data["achievement_id"],
            title=data["title"],
            description=data["description"],
            secret=bool(data["secret"]),
            scope=AchievementScope(data["scope"]),
            predicate=AchievementPredicate.from_dict(data["predicate"]),
        )


AVATAR_COUNT = 50


@dataclass
class UserProfile:
    user_id: str
    display_name: str
    git_identities: set[str] = field(default_factory=set)
    avatar_id: int = 1
    notifications_enabled: bool = True
    score: int = 0
    completed_challenge_count: int = 0
    completed_quest_count: int = 0
    completed_achievement_count: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.avatar_id <= AVATAR_COUNT:
            raise InvariantViolation(
                f"avatar_id {self.avatar_id} outside 1..{AVATAR_COUNT}"
            )
        if self.score < 0:
            raise InvariantViolation(f"negative score {self.score}")

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "display_name": self.display_name,
            "git_identities": sorted(self.git_identities),
            "avatar_id": self.avatar_id,
            "notifications_enabled": self.notifications_enabled,
            "score": self.score,
            "completed_challenge_count": self.completed_challenge_count,
            "completed_quest_count": self.completed_quest_count,
            "completed_achievement_count": self.completed_achievement_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UserProfile":
        return cls(
            user_id=data["user_id"],
            display_name=data["display_name"],
            git_identities=set(data["git_identities"]),
            avatar_id=int(data["avatar_id"]),
            notifications_enabled=bool(data["notifications_enabled"]),
            score=int(data["score"]),
            completed_challenge_count=int(data["completed_challenge_count"]),
            completed_quest_count=int(data["completed_quest_count"]),
            completed_achievement_count=int(data["completed_achievement_count"]),
        )


@dataclass
class Team:
    team_id: str
    name: str
    member_user_ids: set[str] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "team_id": self.team_id,
            "name": self.name,
            "member_user_ids": sorted(self.member_user_ids),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Team":
        return cls(
            team_id=data["team_id"],
            name=data["name"],
            member_user_ids=set(data["member_user_ids"]),
        )


@dataclass
class ProjectConfig:
    project_id: str
    open_challenge_target: int = 3
    open_quest_target: int = 1
    coverage_threshold: float = 0.80
    search_commit_count: int = 50
    source_roots: list[str] = field(
        default_factory=lambda: ["src/main/java", "src/main/kotlin"]
    )
    test_globs: list[str] = field(default_factory=lambda: ["test", "tests"])
    group_id: str | None = None
    leaderboard_enabled: bool = True
    statistics_enabled: bool = True
    achievement_registry_path: str | None = None

    def __post_init__(self) -> None:
        if self.open_challenge_target < 1:
            raise InvariantViolation(
                f"open_challenge_target {self.open_challenge_target} < 1"
            )
        if self.open_quest_target < 1:
            raise InvariantViolation(f"open_quest_target {self.open_quest_target} < 1")
        if not 0 < self.coverage_threshold < 1:
            raise InvariantViolation(
                f"coverage_threshold {self.coverage_threshold} outside (0,1)"
            )
        if self.search_commit_count < 1:
            raise InvariantViolation(
                f"search_commit_count {self.search_commit_count} < 1"
            )

    def to_dict(self) -> dict:
        return {
            "project_id": self.project_id,
            "open_challenge_target": self.open_challenge_target,
            "open_quest_target": self.open_quest_target,
            "coverage_threshold": self.coverage_threshold,
            "search_commit_count": self.search_commit_count,
            "source_roots": list(self.source_roots),
            "test_globs": list(self.test_globs),
            "group_id": self.group_id,
            "leaderboard_enabled": self.leaderboard_enabled,
            "statistics_enabled": self.statistics_enabled,
            "achievement_registry_path": self.achievement_registry_path,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProjectConfig":
        return cls(
            project_id=data["project_id"],
            open_challenge_target=int(data["open_challenge_target"]),
            open_quest_target=int(data["open_quest_target"]),
            coverage_threshold=float(data["coverage_threshold"]),
            search_commit_count=int(data["search_commit_count"]),
            source_roots=list(data["source_roots"]),
            test_globs=list(data["test_globs"]),
            group_id=data["group_id"],
            leaderboard_enabled=bool(data["leaderboard_enabled"]),
            statistics_enabled=bool(data["statistics_enabled"]),
            achievement_registry_path=data.get("achievement_registry_path"),
        )


@dataclass(frozen=True)
class LedgerEntry:
    user_id: str
    points: int
    source_id: str
    build_id: int
    timestamp: int

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "points": self.points,
            "source_id": self.source_id,
            "build_id": self.build_id,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LedgerEntry":
        return cls(
            user_id=data["user_id"],
            points=int(data["points"]),
            source_id=data["source_id"],
            build_id=int(data["build_id"]),
            timestamp=int(data["timestamp"]),
        )


@dataclass
class SnapshotSummary:
    """Per-build aggregate retained for history and statistics export."""

    build_id: int
    build_succeeded: bool
    total_test_count: int
    failed_test_count: int
    lines_covered: int
    lines_missed: int
    branches_covered: int
    branches_missed: int
    class_count: int
    fully_covered_class_count: int
    timestamp: int

    @property
    def line_coverage(self) -> float:
        total = self.lines_covered + self.lines_missed
        return 1.0 if total == 0 else self.lines_covered / total

    @property
    def branch_coverage(self) -> float:
        total = self.branches_covered + self.branches_missed
        return 1.0 if total == 0 else self.branches_covered / total

    def to_dict(self) -> dict:
        return {
            "build_id": self.build_id,
            "build_succeeded": self.build_succeeded,
            "total_test_count": self.total_test_count,
            "failed_test_count": self.failed_test_count,
            "lines_covered": self.lines_covered,
            "lines_missed": self.lines_missed,
            "branches_covered": self.branches_covered,
            "branches_missed": self.branches_missed,
            "class_count": self.class_count,
            "fully_covered_class_count": self.fully_covered_class_count,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SnapshotSummary":
        return cls(
            build_id=int(data["build_id"]),
            build_succeeded=bool(data["build_succeeded"]),
            total_test_count=int(data["total_test_count"]),
            failed_test_count=int(data["failed_test_count"]),
            lines_covered=int(data["lines_covered"]),
            lines_missed=int(data["lines_missed"]),
            branches_covered=int(data["branches_covered"]),
            branches_missed=int(data["branches_missed"]),
            class_count=int(data["class_count"]),
            fully_covered_class_count=int(data["fully_covered_class_count"]),
            timestamp=int(data["timestamp"]),
        )


class EventType(str, Enum):
    CHALLENGE_GENERATED = "ChallengeGenerated"
    CHALLENGE_SOLVED = "ChallengeSolved"
    CHALLENGE_EXPIRED = "ChallengeExpired"
    CHALLENGE_REJECTED = "ChallengeRejected"
    QUEST_GENERATED = "QuestGenerated"
    QUEST_STEP_SOLVED = "QuestStepSolved"
    QUEST_COMPLETED = "QuestCompleted"
    QUEST_EXPIRED = "QuestExpired"
    QUEST_REJECTED = "QuestRejected"
    ACHIEVEMENT_COMPLETED = "AchievementCompleted"
    BUILD_CHALLENGE_ISSUED = "BuildChallengeIssued"
    USER_UNRESOLVED = "UserUnresolved"


@dataclass(frozen=True)
class EngineEvent:
    event_id: int
    build_id: int
    user_id: str
    type: EventType
    payload: dict
    timestamp: int

    def to_dict(self) -> dict:
        return {
            "event_id": self.event_id,
            "build_id": self.build_id,
            "user_id": self.user_id,
            "type": self.type.value,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EngineEvent":
        return cls(
            event_id=int(data["event_id"]),
            build_id=int(data["build_id"]),
            user_id=data["user_id"],
            type=EventType(data["type"]),
            payload=dict(data["payload"]),
            timestamp=int(data["timestamp"]),
        )


@dataclass
class ProjectState:
    config: ProjectConfig
    users: dict[str, UserProfile] = field(default_factory=dict)
    user_order: list[str] = field(default_factory=list)
    teams: dict[str, Team] = field(default_factory=dict)
    challenges: dict[str, Challenge] = field(default_factory=dict)
    quests: dict[str, Quest] = field(default_factory=dict)
    achievement_registry: list[Achievement] = field(default_factory=list)
    completed_achievements: dict[str, dict[str, int]] = field(default_factory=dict)
    rejected_class_fqns: set[str] = field(default_factory=set)
    rejected_fingerprints: set[str] = field(default_factory=set)
    build_counter: int = 0
    snapshot_history: list[SnapshotSummary] = field(default_factory=list)
    score_ledger: list[LedgerEntry] = field(default_factory=list)
    next_challenge_number: int = 1
    next_quest_number: int = 1
    next_event_id: int = 1

    @property
    def last_snapshot(self) -> SnapshotSummary | None:
        return self.snapshot_history[-1] if self.snapshot_history else None

    def new_challenge_id(self) -> str:
        challenge_id = f"c{self.next_challenge_number}"
        self.next_challenge_number += 1
        return challenge_id

    def new_quest_id(self) -> str:
        quest_id = f"q{self.next_quest_number}"
        self.next_quest_number += 1
        return quest_id

    def new_event_id(self) -> int:
        event_id = self.next_event_id
        self.next_event_id += 1
        return event_id

    def challenges_of_user(self, user_id: str) -> list[Challenge]:
        out = [c for c in self.challenges.values() if c.owner_user_id == user_id]
        out.sort(key=lambda c: int(c.challenge_id[1:]))
        return out

    def quests_of_user(self, user_id: str) -> list[Quest]:
        out = [q for q in self.quests.values() if q.owner_user_id == user_id]
        out.sort(key=lambda q: int(q.quest_id[1:]))
        return out

    def open_challenges(self, user_id: str) -> list[Challenge]:
        return [
            c
            for c in self.challenges_of_user(user_id)
            if c.state is ChallengeState.OPEN
        ]

    def team_of_user(self, user_id: str) -> Team | None:
        for team_id in sorted(self.teams):
            if user_id in self.teams[team_id].member_user_ids:
                return self.teams[team_id]
        return None

    def solved_challenges_of_user(self, user_id: str) -> list[Challenge]:
        """Solved standalone challenges plus solved quest steps."""
        solved = [
            c
            for c in self.challenges_of_user(user_id)
            if c.state is ChallengeState.SOLVED
        ]
        for quest in self.quests_of_user(user_id):
            solved.extend(
                step for step in quest.steps if step.state is ChallengeState.SOLVED
            )
        return solved

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "users": {uid: user.to_dict() for uid, user in self.users.items()},
            "user_order": list(self.user_order),
            "teams": {tid: team.to_dict() for tid, team in self.teams.items()},
            "challenges": {
                cid: challenge.to_dict()
                for cid, challenge in self.challenges.items()
            },
            "quests": {qid: quest.to_dict() for qid, quest in self.quests.items()},
            "achievement_registry": [
                achievement.to_dict() for achievement in self.achievement_registry
            ],
            "completed_achievements": {
                uid: dict(sorted(completions.items()))
                for uid, completions in self.completed_achievements.items()
            },
            "rejected_class_fqns": sorted(self.rejected_class_fqns),
            "rejected_fingerprints": sorted(self.rejected_fingerprints),
            "build_counter": self.build_counter,
            "snapshot_history": [s.to_dict() for s in self.snapshot_history],
            "score_ledger": [entry.to_dict() for entry in self.score_ledger],
            "next_challenge_number": self.next_challenge_number,
            "next_quest_number": self.next_quest_number,
            "next_event_id": self.next_event_id,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProjectState":
        return cls(
            config=ProjectConfig.from_dict(data["config"]),
            users={
                uid: UserProfile.from_dict(user)
                for uid, user in data["users"].items()
            },
            user_order=list(data["user_order"]),
            teams={
                tid: Team.from_dict(team) for tid, team in data["teams"].items()
            },
            challenges={
                cid: Challenge.from_dict(challenge)
                for cid, challenge in data["challenges"].items()
            },
            quests={
                qid: Quest.from_dict(quest)
                for qid, quest in data["quests"].items()
            },
            achievement_registry=[
                Achievement.from_dict(a) for a in data["achievement_registry"]
            ],
            completed_achievements={
                uid: {aid: int(ts) for aid, ts in completions.items()}
                for uid, completions in data["completed_achievements"].items()
            },
            rejected_class_fqns=set(data["rejected_class_fqns"]),
            rejected_fingerprints=set(data["rejected_fingerprints"]),
            build_counter=int(data["build_counter"]),
            snapshot_history=[
                SnapshotSummary.from_dict(s) for s in data["snapshot_history"]
            ],
            score_ledger=[
                LedgerEntry.from_dict(entry) for entry in data["score_ledger"]
            ],
            next_challenge_number=int(data["next_challenge_number"]),
            next_quest_number=int(data["next_quest_number"]),
            next_event_id=int(data["next_event_id"]),
        )
