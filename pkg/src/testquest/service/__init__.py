"""Orchestration: per-build engine runs, the CLI, the HTTP API, and
leaderboard/notification views.
"""
