"""Acceptance verdicts collected during the run, printed in the terminal summary."""

LINES: dict[int, str] = {}
