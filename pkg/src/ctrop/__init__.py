"""Exact-arithmetic toolkit for cluster varieties: seed mutation, Laurent
chart transitions, tropical piecewise-linear maps, rational polytopes,
rank-2 scattering diagrams with theta functions, and the rectangles-seed
combinatorics of Grassmannians."""

__version__ = "0.1.0"
