"""HTTP API for the dashboard: read state, reject, profile settings.

Single shared token (X-Api-Token) guards every endpoint; user identity
is asserted by the caller, matching the CI-side git mapping trust model.
Mutations are serialized per project; reads serve the last persisted
snapshot without locking.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .. import challenges as challenges_module
from .. import quests as quests_module
from ..ingest.vcs import AmbiguousIdentity
from ..model.entities import (
    AVATAR_COUNT,
    Challenge,
    ChallengeState,
    ProjectState,
    Quest,
    QuestState,
)
from ..model.store import (
    Corrupt,
    Disabled,
    NotFound,
    SchemaMismatch,
    STATE_FILE_NAME,
    append_events,
    events_path,
    export_statistics,
    load_state,
    read_events,
    reset_project,
    save_state,
    state_path,
)
from .leaderboard import group_leaderboard, leaderboard


class RejectBody(BaseModel):
    reason: str


class AvatarBody(BaseModel):
    avatarId: int


class IdentitiesBody(BaseModel):
    gitNames: list[str]


class NotificationsBody(BaseModel):
    enabled: bool


def challenge_json(challenge: Challenge) -> dict:
    return {
        "id": challenge.challenge_id,
        "kind": challenge.kind.value,
        "title": challenge.title,
        "points": challenge.points,
        "state": challenge.state.value,
        "targetClass": challenge.target_class,
        "targetMethod": challenge.target_method,
        "targetLine": challenge.target_line,
        "targetMutantId": challenge.target_mutant_id,
        "targetSmellId": challenge.target_smell_id,
        "snippet": challenge.snippet,
        "mutatedSnippet": challenge.mutated_snippet,
        "createdBuild": challenge.created_build,
        "solvedBuild": challenge.solved_build,
        "rejectionReason": challenge.rejection_reason,
    }


def quest_json(quest: Quest) -> dict:
    # dormant steps stay hidden until it is their turn
    steps = [
        {"index": index, **challenge_json(step)}
        for index, step in enumerate(quest.steps)
        if step.state is not ChallengeState.DORMANT
    ]
    return {
        "id": quest.quest_id,
        "kind": quest.kind.value,
        "state": quest.state.value,
        "currentIndex": quest.current_index,
        "totalSteps": len(quest.steps),
        "points": quest.award_points,
        "steps": steps,
        "rejectionReason": quest.rejection_reason,
    }


def user_json(state: ProjectState, user_id: str) -> dict:
    user = state.users[user_id]
    team = state.team_of_user(user_id)
    return {
        "id": user.user_id,
        "displayName": user.display_name,
        "avatarId": user.avatar_id,
        "notificationsEnabled": user.notifications_enabled,
        "score": user.score,
        "completedChallenges": user.completed_challenge_count,
        "completedQuests": user.completed_quest_count,
        "completedAchievements": user.completed_achievement_count,
        "team": team.team_id if team else None,
    }


def create_app(data_dir: str, token: str) -> FastAPI:
    if not token:
        raise ValueError("an API token is required")
    app = FastAPI(title="testquest", docs_url=None, redoc_url=None)
    # the dashboard is a static page served from anywhere; the token is
    # the actual access control, so any origin may talk to the API
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["X-Api-Token", "Content-Type"],
    )
    data_root = Path(data_dir)
    locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()

    def project_lock(project_id: str) -> threading.Lock:
        with locks_guard:
            return locks.setdefault(project_id, threading.Lock())

    def require_token(request: Request) -> None:
        if request.headers.get("X-Api-Token") != token:
            raise HTTPException(status_code=401, detail="bad or missing token")

    guarded = Depends(require_token)

    def load(project_id: str) -> ProjectState:
        try:
            return load_state(state_path(data_root, project_id))
        except NotFound:
            raise HTTPException(
                status_code=404, detail=f"unknown project {project_id}"
            ) from None
        except (Corrupt, SchemaMismatch) as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    def need_user(state: ProjectState, user_id: str) -> None:
        if user_id not in state.users:
            raise HTTPException(
                status_code=404, detail=f"unknown user {user_id}"
            )

    @app.get("/api/v1/projects", dependencies=[guarded])
    def list_projects() -> list[dict]:
        out = []
        if data_root.is_dir():
            for child in sorted(data_root.iterdir()):
                if not (child / STATE_FILE_NAME).is_file():
                    continue
                try:
                    state = load_state(child / STATE_FILE_NAME)
                except (Corrupt, SchemaMismatch, NotFound):
                    continue
                out.append(
                    {
                        "id": state.config.project_id,
                        "groupId": state.config.group_id,
                        "leaderboardEnabled": state.config.leaderboard_enabled,
                        "statisticsEnabled": state.config.statistics_enabled,
                        "buildCounter": state.build_counter,
                    }
                )
        return out

    @app.get("/api/v1/projects/{project_id}/users", dependencies=[guarded])
    def list_users(project_id: str) -> list[dict]:
        state = load(project_id)
        return [user_json(state, uid) for uid in state.user_order]

    @app.get("/api/v1/projects/{project_id}/leaderboard", dependencies=[guarded])
    def project_leaderboard(project_id: str, mode: str = "user") -> list[dict]:
        if mode not in ("user", "team"):
            raise HTTPException(status_code=422, detail=f"unknown mode {mode!r}")
        state = load(project_id)
        try:
            rows = leaderboard(state, mode)
        except Disabled as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from exc
        return [row.to_json() for row in rows]

    @app.get("/api/v1/groups/{group_id}/leaderboard", dependencies=[guarded])
    def group_board(group_id: str) -> list[dict]:
        states = []
        if data_root.is_dir():
            for child in sorted(data_root.iterdir()):
                if not (child / STATE_FILE_NAME).is_file():
                    continue
                try:
                    state = load_state(child / STATE_FILE_NAME)
                except (Corrupt, SchemaMismatch, NotFound):
                    continue
                if state.config.group_id == group_id:
                    states.append(state)
        if not states:
            raise HTTPException(
                status_code=404, detail=f"no projects in group {group_id}"
            )
        try:
            rows = group_leaderboard(states)
        except Disabled as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from exc
        return [row.to_json() for row in rows]

    @app.get(
        "/api/v1/projects/{project_id}/users/{user_id}/challenges",
        dependencies=[guarded],
    )
    def user_challenges(project_id: str, user_id: str) -> dict:
        state = load(project_id)
        need_user(state, user_id)
        mine = state.challenges_of_user(user_id)
        return {
            "open": [
                challenge_json(c)
                for c in mine
                if c.state is ChallengeState.OPEN
            ],
            "history": [
                challenge_json(c)
                for c in mine
                if c.state is not ChallengeState.OPEN
            ],
        }

    @app.get(
        "/api/v1/projects/{project_id}/users/{user_id}/quests",
        dependencies=[guarded],
    )
    def user_quests(project_id: str, user_id: str) -> dict:
        state = load(project_id)
        need_user(state, user_id)
        mine = state.quests_of_user(user_id)
        return {
            "active": [
                quest_json(q) for q in mine if q.state is QuestState.ACTIVE
            ],
            "history": [
                quest_json(q) for q in mine if q.state is not QuestState.ACTIVE
            ],
        }

    @app.get(
        "/api/v1/projects/{project_id}/users/{user_id}/achievements",
        dependencies=[guarded],
    )
    def user_achievements(project_id: str, user_id: str) -> dict:
        state = load(project_id)
        need_user(state, user_id)
        completions = state.completed_achievements.get(user_id, {})
        completed = []
        unsolved = []
        hidden = 0
        for achievement in state.achievement_registry:
            entry = {
                "id": achievement.achievement_id,
                "title": achievement.title,
                "description": achievement.description,
                "secret": achievement.secret,
                "scope": achievement.scope.value,
            }
            if achievement.achievement_id in completions:
                entry["completedDate"] = completions[achievement.achievement_id]
                completed.append(entry)
            elif not achievement.secret:
                unsolved.append(entry)
            else:
                # secret and unearned: disclose only that it exists
                hidden += 1
        return {"completed": completed, "unsolved": unsolved, "secretCount": hidden}

    @app.post(
        "/api/v1/projects/{project_id}/challenges/{challenge_id}/reject",
        dependencies=[guarded],
    )
    def reject_challenge_endpoint(
        project_id: str, challenge_id: str, body: RejectBody
    ) -> dict:
        with project_lock(project_id):
            state = load(project_id)
            try:
                event = challenges_module.reject_challenge(
                    state, challenge_id, body.reason, int(time.time())
                )
            except challenges_module.EmptyReason as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            except challenges_module.NotOpen as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
            except KeyError:
                raise HTTPException(
                    status_code=404, detail=f"unknown challenge {challenge_id}"
                ) from None
            save_state(state, state_path(data_root, project_id))
            append_events(events_path(data_root, project_id), [event])
        return challenge_json(state.challenges[challenge_id])

    @app.post(
        "/api/v1/projects/{project_id}/quests/{quest_id}/reject",
        dependencies=[guarded],
    )
    def reject_quest_endpoint(
        project_id: str, quest_id: str, body: RejectBody
    ) -> dict:
        with project_lock(project_id):
            state = load(project_id)
            try:
                event = quests_module.reject_quest(
                    state, quest_id, body.reason, int(time.time())
                )
            except challenges_module.EmptyReason as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            except quests_module.NotActive as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
            except KeyError:
                raise HTTPException(
                    status_code=404, detail=f"unknown quest {quest_id}"
                ) from None
            save_state(state, state_path(data_root, project_id))
            append_events(events_path(data_root, project_id), [event])
        return quest_json(state.quests[quest_id])

    @app.post(
        "/api/v1/projects/{project_id}/users/{user_id}/avatar",
        dependencies=[guarded],
    )
    def set_avatar(project_id: str, user_id: str, body: AvatarBody) -> dict:
        if not 1 <= body.avatarId <= AVATAR_COUNT:
            raise HTTPException(
                status_code=422,
                detail=f"avatarId must be in 1..{AVATAR_COUNT}",
            )
        with project_lock(project_id):
            state = load(project_id)
            need_user(state, user_id)
            state.users[user_id].avatar_id = body.avatarId
            save_state(state, state_path(data_root, project_id))
        return user_json(state, user_id)

    @app.post(
        "/api/v1/projects/{project_id}/users/{user_id}/identities",
        dependencies=[guarded],
    )
    def set_identities(
        project_id: str, user_id: str, body: IdentitiesBody
    ) -> dict:
        names = [name.strip() for name in body.gitNames if name.strip()]
        if not names:
            raise HTTPException(
                status_code=422, detail="at least one git name is required"
            )
        with project_lock(project_id):
            state = load(project_id)
            need_user(state, user_id)
            for other_id in state.user_order:
                if other_id == user_id:
                    continue
                overlap = state.users[other_id].git_identities & set(names)
                if overlap:
                    raise HTTPException(
                        status_code=409,
                        detail=f"identities already claimed by {other_id}: "
                        f"{sorted(overlap)}",
                    )
            state.users[user_id].git_identities = set(names)
            save_state(state, state_path(data_root, project_id))
        return user_json(state, user_id)

    @app.post(
        "/api/v1/projects/{project_id}/users/{user_id}/notifications",
        dependencies=[guarded],
    )
    def set_notifications(
        project_id: str, user_id: str, body: NotificationsBody
    ) -> dict:
        with project_lock(project_id):
            state = load(project_id)
            need_user(state, user_id)
            state.users[user_id].notifications_enabled = body.enabled
            save_state(state, state_path(data_root, project_id))
        return user_json(state, user_id)

    @app.get("/api/v1/projects/{project_id}/events", dependencies=[guarded])
    def project_events(project_id: str, since: int = 0) -> list[dict]:
        load(project_id)
        events = read_events(events_path(data_root, project_id), since)
        return [
            {
                "eventId": e.event_id,
                "buildId": e.build_id,
                "userId": e.user_id,
                "type": e.type.value,
                "payload": e.payload,
                "timestamp": e.timestamp,
            }
            for e in events
        ]

    @app.get("/api/v1/projects/{project_id}/statistics", dependencies=[guarded])
    def project_statistics(project_id: str) -> dict:
        state = load(project_id)
        try:
            return export_statistics(state)
        except Disabled as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from exc

    @app.post("/api/v1/projects/{project_id}/reset", dependencies=[guarded])
    def reset(project_id: str) -> dict:
        with project_lock(project_id):
            state = load(project_id)
            fresh = reset_project(state)
            save_state(fresh, state_path(data_root, project_id))
            events_file = events_path(data_root, project_id)
            events_file.unlink(missing_ok=True)
        return {"reset": True, "project": project_id}

    return app
