"""Unit tests for individual qrclab modules."""
