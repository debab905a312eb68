"""Command-line front end: problem-file grammar, builders and task runners."""
