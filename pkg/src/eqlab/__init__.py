"""Finite-model workbench for ordered and quantitative equational algebra.

The package computes with four finite base categories (posets, extended
metric spaces, graphs, directed multigraphs), their (point-surjection,
embedding) factorization structure, equational theories with ordered or
metric contexts, depth-bounded free algebras, Birkhoff-style closure
operators, and two executable counterexamples.  All arithmetic is exact:
distances are rationals extended with infinity.
"""

__version__ = "0.1.0"
