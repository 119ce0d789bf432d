"""Geometry package initialization."""
