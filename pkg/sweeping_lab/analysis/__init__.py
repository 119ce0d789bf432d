"""Verification harness for the quantitative statements."""
