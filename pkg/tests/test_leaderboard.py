"""Ranking rules, team and group aggregation, notification digests."""

import pytest

from testquest.model.entities import EngineEvent, EventType, Team
from testquest.model.store import Disabled
from testquest.service.leaderboard import (
    UnknownUser,
    group_leaderboard,
    leaderboard,
    notification_digest,
)

from conftest import make_config, make_state


def scored_state(scores, config=None, counts=None):
    state = make_state(tuple(scores), config=config)
    for user_id, score in scores.items():
        state.users[user_id].score = score
        state.users[user_id].completed_challenge_count = (counts or {}).get(
            user_id, 0
        )
    return state


class TestUserLeaderboard:
    def test_sorted_by_score_descending(self):
        state = scored_state({"ann": 5, "ben": 9, "cy": 7})
        assert [r.subject for r in leaderboard(state)] == ["ben", "cy", "ann"]

    def test_score_tie_broken_by_completed_challenges(self):
        state = scored_state(
            {"ann": 5, "ben": 5}, counts={"ann": 1, "ben": 4}
        )
        assert [r.subject for r in leaderboard(state)] == ["ben", "ann"]

    def test_full_tie_broken_by_display_name(self):
        state = scored_state({"zoe": 5, "abe": 5})
        # display names are capitalized registration names
        assert [r.subject for r in leaderboard(state)] == ["abe", "zoe"]

    def test_rows_carry_profile_fields(self):
        state = make_state(("ann",))
        profile = state.users["ann"]
        profile.score = 12
        profile.completed_challenge_count = 3
        profile.completed_quest_count = 2
        profile.completed_achievement_count = 4
        (row,) = leaderboard(state)
        assert row.to_json() == {
            "subject": "ann",
            "displayName": "Ann",
            "avatarId": 1,
            "completedChallenges": 3,
            "completedQuests": 2,
            "completedAchievements": 4,
            "score": 12,
        }

    def test_disabled_leaderboard_raises(self):
        state = make_state(config=make_config(leaderboard_enabled=False))
        with pytest.raises(Disabled):
            leaderboard(state)


class TestTeamLeaderboard:
    def test_team_rows_sum_member_counters(self):
        state = scored_state(
            {"ann": 5, "ben": 7, "cy": 2}, counts={"ann": 1, "ben": 2, "cy": 3}
        )
        state.users["ann"].completed_quest_count = 1
        state.teams["t1"] = Team(
            team_id="t1", name="Firewall", member_user_ids={"ann", "ben"}
        )
        state.teams["t2"] = Team(team_id="t2", name="Anvil", member_user_ids={"cy"})
        rows = leaderboard(state, mode="team")
        assert [r.subject for r in rows] == ["t1", "t2"]
        firewall = rows[0]
        assert firewall.display_name == "Firewall"
        assert firewall.score == 12
        assert firewall.completed_challenges == 3
        assert firewall.completed_quests == 1
        assert firewall.avatar_id == 0

    def test_user_mode_still_lists_individuals(self):
        state = scored_state({"ann": 5, "ben": 7})
        state.teams["t1"] = Team(
            team_id="t1", name="Firewall", member_user_ids={"ann", "ben"}
        )
        assert [r.subject for r in leaderboard(state, mode="user")] == [
            "ben",
            "ann",
        ]


class TestGroupLeaderboard:
    def test_shared_users_are_summed_across_projects(self):
        first = scored_state(
            {"ann": 5, "ben": 2},
            config=make_config(project_id="p1"),
            counts={"ann": 1},
        )
        second = scored_state(
            {"ann": 4, "cy": 3},
            config=make_config(project_id="p2"),
            counts={"ann": 2},
        )
        rows = group_leaderboard([first, second])
        assert [(r.subject, r.score) for r in rows] == [
            ("ann", 9),
            ("cy", 3),
            ("ben", 2),
        ]
        ann = rows[0]
        assert ann.completed_challenges == 3

    def test_single_project_group_matches_its_own_board(self):
        state = scored_state({"ann": 5, "ben": 2})
        assert [r.to_json() for r in group_leaderboard([state])] == [
            r.to_json() for r in leaderboard(state)
        ]

    def test_any_disabled_project_disables_the_group(self):
        enabled = scored_state({"ann": 1}, config=make_config(project_id="p1"))
        disabled = make_state(
            config=make_config(project_id="p2", leaderboard_enabled=False)
        )
        with pytest.raises(Disabled):
            group_leaderboard([enabled, disabled])


def event(event_id, build_id, user_id, event_type, payload=None):
    return EngineEvent(
        event_id=event_id,
        build_id=build_id,
        user_id=user_id,
        type=event_type,
        payload=payload or {},
        timestamp=event_id * 10,
    )


class TestNotificationDigest:
    def _events(self):
        return [
            event(1, 1, "dev", EventType.CHALLENGE_GENERATED, {"challenge_id": "c1"}),
            event(2, 2, "dev", EventType.CHALLENGE_SOLVED, {"challenge_id": "c1"}),
            event(3, 2, "other", EventType.CHALLENGE_SOLVED, {"challenge_id": "c9"}),
            event(4, 3, "dev", EventType.QUEST_COMPLETED, {"quest_id": "q1"}),
            event(5, 3, "dev", EventType.ACHIEVEMENT_COMPLETED, {"achievement_id": "a"}),
        ]

    def test_unknown_user_raises(self):
        with pytest.raises(UnknownUser):
            notification_digest(make_state(), [], "ghost")

    def test_filters_by_user_and_build_window(self):
        state = make_state(("dev", "other"))
        digest = notification_digest(state, self._events(), "dev", since_build=1)
        assert digest["user_id"] == "dev"
        assert digest["since_build"] == 1
        assert [entry["event_id"] for entry in digest["entries"]] == [2, 4, 5]

    def test_links_route_to_the_matching_view(self):
        state = make_state(("dev",))
        digest = notification_digest(state, self._events(), "dev")
        links = {e["event_id"]: e["link"] for e in digest["entries"]}
        assert links[2] == "/#/projects/proj/users/dev/challenges"
        assert links[4] == "/#/projects/proj/users/dev/quests"
        assert links[5] == "/#/projects/proj/users/dev/achievements"

    def test_unmapped_event_types_link_to_the_leaderboard(self):
        state = make_state(("dev",))
        stray = [event(9, 1, "dev", EventType.USER_UNRESOLVED)]
        digest = notification_digest(state, stray, "dev")
        assert digest["entries"][0]["link"] == "/#/projects/proj/users/dev/leaderboard"

    def test_disabled_notifications_mute_the_digest(self):
        state = make_state(("dev",))
        state.users["dev"].notifications_enabled = False
        digest = notification_digest(state, self._events(), "dev")
        assert digest["entries"] == []
