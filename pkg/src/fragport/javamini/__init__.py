"""Grammar-based parser, interpreter and test runner for the Java subset
used by the bundled fixtures."""
