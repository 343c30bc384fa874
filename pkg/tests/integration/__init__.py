"""End-to-end tests of the qrclab command-line interface."""
