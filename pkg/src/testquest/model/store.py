"""Atomic, checksummed persistence for project state and the event log."""

from __future__ import annotations

import hashlib
import json
import os
from collections.abc import Callable
from pathlib import Path

from .entities import (
    ChallengeKind,
    ChallengeState,
    EngineEvent,
    InvariantViolation,
    ProjectState,
    QuestState,
)

STATE_VERSION = 1
STATE_FILE_NAME = "state.json"
EVENTS_FILE_NAME = "events.ndjson"


class NotFound(Exception):
    """No state file exists at the given path."""


class SchemaMismatch(Exception):
    """The state file was written under a different schema version."""


class Corrupt(Exception):
    """The state file fails its checksum or cannot be decoded."""


class IoFailure(Exception):
    """The state file could not be written; the old file is untouched."""


class Disabled(Exception):
    """The requested feature is switched off in the project config."""


def canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def state_checksum(state_payload: dict) -> str:
    return hashlib.sha256(canonical_json(state_payload).encode("utf-8")).hexdigest()


def state_path(data_dir: str | Path, project_id: str) -> Path:
    return Path(data_dir) / project_id / STATE_FILE_NAME


def events_path(data_dir: str | Path, project_id: str) -> Path:
    return Path(data_dir) / project_id / EVENTS_FILE_NAME


def validate_state(state: ProjectState) -> None:
    """Check the cross-entity invariants; raise InvariantViolation on breach."""
    ledger_totals: dict[str, int] = {}
    for entry in state.score_ledger:
        ledger_totals[entry.user_id] = (
            ledger_totals.get(entry.user_id, 0) + entry.points
        )
    for user_id, user in state.users.items():
        expected = ledger_totals.get(user_id, 0)
        if user.score != expected:
            raise InvariantViolation(
                f"user {user_id} score {user.score} != ledger sum {expected}"
            )
        if user_id not in state.user_order:
            raise InvariantViolation(f"user {user_id} missing from user_order")
        memberships = [
            team_id
            for team_id, team in state.teams.items()
            if user_id in team.member_user_ids
        ]
        if len(memberships) > 1:
            raise InvariantViolation(
                f"user {user_id} in multiple teams: {sorted(memberships)}"
            )
    for user_id in ledger_totals:
        if user_id not in state.users:
            raise InvariantViolation(f"ledger entry for unknown user {user_id}")

    target = state.config.open_challenge_target
    for user_id in state.users:
        open_non_build = [
            c
            for c in state.open_challenges(user_id)
            if c.kind is not ChallengeKind.BUILD
        ]
        if len(open_non_build) > target:
            raise InvariantViolation(
                f"user {user_id} has {len(open_non_build)} open challenges, "
                f"target {target}"
            )

    for challenge in state.challenges.values():
        if challenge.state is ChallengeState.DORMANT:
            raise InvariantViolation(
                f"standalone challenge {challenge.challenge_id} is dormant"
            )

    for quest in state.quests.values():
        for position, step in enumerate(quest.steps):
            if quest.state is not QuestState.ACTIVE:
                continue
            if position < quest.current_index:
                if step.state is not ChallengeState.SOLVED:
                    raise InvariantViolation(
                        f"quest {quest.quest_id} step {position} behind the "
                        f"cursor is {step.state.value}"
                    )
            elif position == quest.current_index:
                if step.state is not ChallengeState.OPEN:
                    raise InvariantViolation(
                        f"quest {quest.quest_id} current step is {step.state.value}"
                    )
            elif step.state is not ChallengeState.DORMANT:
                raise InvariantViolation(
                    f"quest {quest.quest_id} step {position} ahead of the "
                    f"cursor is {step.state.value}"
                )


def save_state(
    state: ProjectState,
    path: str | Path,
    fault_hook: Callable[[], None] | None = None,
) -> None:
    """Persist state atomically: temp file, fsync, rename.

    fault_hook runs between the temp write and the rename; tests raise
    from it to prove a crash there leaves the old file intact.
    """
    validate_state(state)
    path = Path(path)
    state_payload = state.to_dict()
    document = {
        "version": STATE_VERSION,
        "checksum": state_checksum(state_payload),
        "state": state_payload,
    }
    encoded = canonical_json(document).encode("utf-8")
    temp_path = path.with_suffix(".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(temp_path, "wb") as handle:
            handle.write(encoded)
            handle.flush()
            os.fsync(handle.fileno())
        if fault_hook is not None:
            fault_hook()
        os.replace(temp_path, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    finally:
        temp_path.unlink(missing_ok=True)


def load_state(path: str | Path) -> ProjectState:
    path = Path(path)
    if not path.exists():
        raise NotFound(f"no state file at {path}")
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise Corrupt(f"cannot read {path}: {exc}") from exc
    try:
        document = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise Corrupt(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "version" not in document:
        raise Corrupt(f"{path} lacks a version field")
    version = document["version"]
    if version != STATE_VERSION:
        raise SchemaMismatch(
            f"{path} was written by schema version {version}; this build reads "
            f"version {STATE_VERSION}; migrate or reset the project"
        )
    state_payload = document.get("state")
    if not isinstance(state_payload, dict):
        raise Corrupt(f"{path} lacks a state object")
    if document.get("checksum") != state_checksum(state_payload):
        raise Corrupt(f"{path} fails its checksum")
    try:
        return ProjectState.from_dict(state_payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise Corrupt(f"{path} state object is malformed: {exc}") from exc


def reset_project(state: ProjectState) -> ProjectState:
    """Wipe everything the engine collected; keep config and registrations."""
    fresh = ProjectState(config=state.config)
    fresh.achievement_registry = list(state.achievement_registry)
    for user_id in state.user_order:
        user = state.users[user_id]
        fresh.users[user_id] = type(user)(
            user_id=user.user_id,
            display_name=user.display_name,
            git_identities=set(user.git_identities),
            avatar_id=user.avatar_id,
            notifications_enabled=user.notifications_enabled,
        )
        fresh.user_order.append(user_id)
    for team_id in sorted(state.teams):
        team = state.teams[team_id]
        fresh.teams[team_id] = type(team)(
            team_id=team.team_id,
            name=team.name,
            member_user_ids=set(team.member_user_ids),
        )
    return fresh


def pseudonyms(state: ProjectState) -> dict[str, str]:
    """Stable user → pseudonym mapping in registration order."""
    return {
        user_id: f"p{position}"
        for position, user_id in enumerate(state.user_order, start=1)
    }


def export_statistics(state: ProjectState) -> dict:
    """Anonymized data dump: pseudonymous users, per-build metrics,
    challenge lifecycles, and the score ledger. Never includes git
    identities, display names, or code snippets.
    """
    if not state.config.statistics_enabled:
        raise Disabled("statistics export is disabled for this project")
    alias = pseudonyms(state)

    def challenge_record(challenge, quest_id: str = "") -> dict:
        return {
            "subject": alias[challenge.owner_user_id],
            "kind": challenge.kind.value,
            "points": challenge.points,
            "state": challenge.state.value,
            "created_build": challenge.created_build,
            "solved_build": challenge.solved_build,
            "quest_id": quest_id,
        }

    challenges = [
        challenge_record(state.challenges[cid])
        for cid in sorted(state.challenges, key=lambda c: int(c[1:]))
    ]
    quests = []
    for qid in sorted(state.quests, key=lambda q: int(q[1:])):
        quest = state.quests[qid]
        challenges.extend(challenge_record(step, qid) for step in quest.steps)
        quests.append(
            {
                "subject": alias[quest.owner_user_id],
                "kind": quest.kind.value,
                "state": quest.state.value,
                "created_build": quest.created_build,
                "current_index": quest.current_index,
            }
        )
    return {
        "project_id": state.config.project_id,
        "builds": [s.to_dict() for s in state.snapshot_history],
        "users": [
            {
                "subject": alias[user_id],
                "score": state.users[user_id].score,
                "completed_challenges": state.users[user_id].completed_challenge_count,
                "completed_quests": state.users[user_id].completed_quest_count,
                "completed_achievements": state.users[
                    user_id
                ].completed_achievement_count,
            }
            for user_id in state.user_order
        ],
        "challenges": challenges,
        "quests": quests,
        "scores": [
            {
                "subject": alias[entry.user_id],
                "points": entry.points,
                "source_id": entry.source_id,
                "build_id": entry.build_id,
                "timestamp": entry.timestamp,
            }
            for entry in state.score_ledger
        ],
    }


def append_events(path: str | Path, events: list[EngineEvent]) -> None:
    if not events:
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as handle:
        for event in events:
            handle.write(canonical_json(event.to_dict()) + "\n")


def read_events(path: str | Path, since_event_id: int = 0) -> list[EngineEvent]:
    path = Path(path)
    if not path.exists():
        return []
    events = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            event = EngineEvent.from_dict(json.loads(line))
            if event.event_id > since_event_id:
                events.append(event)
    return events
