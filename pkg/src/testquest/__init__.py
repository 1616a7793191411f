"""testquest: a CI-agnostic gamification engine for software testing.

Feed each build's coverage, test, mutation, and smell reports into `testquest
run` and the engine keeps per-developer challenges, quests, achievements, and
leaderboards. `testquest serve` exposes the same state over HTTP for the
dashboard.
"""

__version__ = "0.1.0"
