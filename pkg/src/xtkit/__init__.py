"""Grids, containers, solvers and localizable functions for discretization codes."""

__version__ = '0.1.0'
