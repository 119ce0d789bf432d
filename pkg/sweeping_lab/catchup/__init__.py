"""Catching-up discretization of sweeping processes."""
