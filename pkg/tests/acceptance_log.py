"""Collected PASS/FAIL lines of the acceptance criteria, echoed at the end of the pytest run."""

LINES = []
