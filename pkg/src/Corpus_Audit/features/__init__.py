"""Feature tiers, call structure and class-definition detection."""  # noqa: N999
