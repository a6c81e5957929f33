"""Per-criterion verdicts collected by test_acceptance and printed by conftest."""

RESULTS: dict = {}
