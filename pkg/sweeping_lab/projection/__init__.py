"""Projection package initialization."""
