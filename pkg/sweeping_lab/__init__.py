"""Sweeping-process laboratory package initialization."""
