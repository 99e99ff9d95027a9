"""Exact-arithmetic engine for loop operations on surfaces with boundary.

Computes the Goldman bracket and the Kawazumi-Kuno action of free loops
on a compact oriented surface with boundary entirely in rational
arithmetic, together with the completed-algebra apparatus built on top
of them: Magnus and symplectic expansions, necklace brackets, Adams
operations, bar-construction pairings, Dehn-twist logarithms, and the
Kashiwara-Vergne condition attached to a weight splitting.
"""

__version__ = "0.1.0"
