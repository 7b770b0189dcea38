"""Test suite for qnf-engine."""
