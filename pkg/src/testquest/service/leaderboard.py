"""Leaderboards (user, team, group) and per-user notification digests."""

from __future__ import annotations

from dataclasses import dataclass

from ..model.entities import EngineEvent, EventType, ProjectState
from ..model.store import Disabled


class UnknownUser(Exception):
    """Digest requested for an unregistered user."""


@dataclass
class LeaderboardRow:
    subject: str
    display_name: str
    avatar_id: int
    completed_challenges: int
    completed_quests: int
    completed_achievements: int
    score: int

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "displayName": self.display_name,
            "avatarId": self.avatar_id,
            "completedChallenges": self.completed_challenges,
            "completedQuests": self.completed_quests,
            "completedAchievements": self.completed_achievements,
            "score": self.score,
        }


def sort_rows(rows: list[LeaderboardRow]) -> list[LeaderboardRow]:
    return sorted(
        rows,
        key=lambda row: (-row.score, -row.completed_challenges, row.display_name),
    )


def _user_rows(state: ProjectState) -> list[LeaderboardRow]:
    rows = []
    for user_id in state.user_order:
        user = state.users[user_id]
        rows.append(
            LeaderboardRow(
                subject=user_id,
                display_name=user.display_name,
                avatar_id=user.avatar_id,
                completed_challenges=user.completed_challenge_count,
                completed_quests=user.completed_quest_count,
                completed_achievements=user.completed_achievement_count,
                score=user.score,
            )
        )
    return rows


def _team_rows(state: ProjectState) -> list[LeaderboardRow]:
    rows = []
    for team_id in sorted(state.teams):
        team = state.teams[team_id]
        members = [state.users[uid] for uid in sorted(team.member_user_ids)]
        rows.append(
            LeaderboardRow(
                subject=team_id,
                display_name=team.name,
                avatar_id=0,
                completed_challenges=sum(
                    m.completed_challenge_count for m in members
                ),
                completed_quests=sum(m.completed_quest_count for m in members),
                completed_achievements=sum(
                    m.completed_achievement_count for m in members
                ),
                score=sum(m.score for m in members),
            )
        )
    return rows


def leaderboard(state: ProjectState, mode: str = "user") -> list[LeaderboardRow]:
    if not state.config.leaderboard_enabled:
        raise Disabled("leaderboard is disabled for this project")
    if mode == "team":
        return sort_rows(_team_rows(state))
    return sort_rows(_user_rows(state))


def group_leaderboard(states: list[ProjectState]) -> list[LeaderboardRow]:
    """Merge user rows across all projects of a group, summing per user."""
    for state in states:
        if not state.config.leaderboard_enabled:
            raise Disabled(
                f"leaderboard is disabled for {state.config.project_id}"
            )
    merged: dict[str, LeaderboardRow] = {}
    for state in sorted(states, key=lambda s: s.config.project_id):
        for row in _user_rows(state):
            existing = merged.get(row.subject)
            if existing is None:
                merged[row.subject] = row
            else:
                existing.completed_challenges += row.completed_challenges
                existing.completed_quests += row.completed_quests
                existing.completed_achievements += row.completed_achievements
                existing.score += row.score
    return sort_rows(list(merged.values()))


_EVENT_VIEWS = {
    EventType.CHALLENGE_GENERATED: "challenges",
    EventType.CHALLENGE_SOLVED: "challenges",
    EventType.CHALLENGE_EXPIRED: "challenges",
    EventType.CHALLENGE_REJECTED: "challenges",
    EventType.BUILD_CHALLENGE_ISSUED: "challenges",
    EventType.QUEST_GENERATED: "quests",
    EventType.QUEST_STEP_SOLVED: "quests",
    EventType.QUEST_COMPLETED: "quests",
    EventType.QUEST_EXPIRED: "quests",
    EventType.QUEST_REJECTED: "quests",
    EventType.ACHIEVEMENT_COMPLETED: "achievements",
}


def notification_digest(
    state: ProjectState,
    events: list[EngineEvent],
    user_id: str,
    since_build: int = 0,
) -> dict:
    """The user's events since the given build, each with a deep link."""
    if user_id not in state.users:
        raise UnknownUser(user_id)
    project_id = state.config.project_id
    entries = []
    if state.users[user_id].notifications_enabled:
        for event in events:
            if event.user_id != user_id or event.build_id <= since_build:
                continue
            view = _EVENT_VIEWS.get(event.type, "leaderboard")
            entries.append(
                {
                    "event_id": event.event_id,
                    "build_id": event.build_id,
                    "type": event.type.value,
                    "payload": event.payload,
                    "timestamp": event.timestamp,
                    "link": f"/#/projects/{project_id}/users/{user_id}/{view}",
                }
            )
    return {
        "user_id": user_id,
        "since_build": since_build,
        "entries": entries,
    }
