"""Command-line tools for qubitsep."""
