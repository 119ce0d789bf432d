"""Fast-marching distance fields."""
