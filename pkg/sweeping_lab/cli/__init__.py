"""Scenario-driven command-line front end."""
