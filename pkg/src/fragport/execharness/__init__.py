"""Source and target test execution, result parsing, failure classification."""
