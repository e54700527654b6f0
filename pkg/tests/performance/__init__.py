"""Acceptance-scale suites for the solver package."""
