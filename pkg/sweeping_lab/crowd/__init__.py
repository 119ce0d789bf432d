"""Disk-based crowd motion."""
