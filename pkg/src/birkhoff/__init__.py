"""Exact algebraic Birkhoff decomposition over Rota-Baxter algebras.

Rooted-tree and quasi-shuffle Hopf algebras, truncated Laurent series over
Q[PI2, L], Rota-Baxter identities, and renormalized values of regularized
tree integrals and multiple zeta values at non-positive arguments.
"""
from .exactalg import SymbolicPoly, bernoulli, zeta_nonpositive
from .laurent import LaurentSeries, PoleError, PrecisionError, pole_part
from .qshuffle import Letter, parse_word, quasi_shuffle
from .renorm import mzv_char, naive_finite_part, renormalize, tree_char
from .trees import RootedForest, RootedTree, coproduct, parse_forest

__version__ = "0.1.0"

__all__ = [
    "Letter",
    "LaurentSeries",
    "PoleError",
    "PrecisionError",
    "RootedForest",
    "RootedTree",
    "SymbolicPoly",
    "bernoulli",
    "coproduct",
    "mzv_char",
    "naive_finite_part",
    "parse_forest",
    "parse_word",
    "pole_part",
    "quasi_shuffle",
    "renormalize",
    "tree_char",
    "zeta_nonpositive",
]
