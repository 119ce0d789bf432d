"""Duality maps of finite-dimensional l_p spaces."""
