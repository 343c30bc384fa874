"""Shared test configuration and helpers."""
