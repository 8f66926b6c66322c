"""Effective reproduction number toolkit.

Spectral radius of next-generation matrices under vaccination strategies:
exact evaluation, diagonal-symmetrizability certificates, convexity and
concavity classification, Frobenius atomic decomposition, integral-kernel
discretization and budget-constrained minimization.
"""

from ._rekit import *  # noqa: F401,F403
from ._rekit import __version__  # noqa: F401
