"""Workbench for gap reductions from bounded 3-dimensional matching to
2-dimensional vector bin packing (general and skewed) and vector bin
covering, with exact solvers and brute-force lemma verification."""

__version__ = "0.1.0"
