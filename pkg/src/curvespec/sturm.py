"""Weighted Sturm-Liouville problems -(w u')' = lambda w u on (0, d) with
Dirichlet ends, discretized by the conservative symmetric three-point scheme
(weights at flux half-nodes, mass at the nodes). Second-order accurate.
"""

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import GeometryError, ParameterError


def lowest_eigenvalues(weight, d: float, nr: int, k: int = 1):
    """k lowest eigenvalues; `weight` is a callable w(r) > 0 on [0, d]."""
    if not (d > 0):
        raise ParameterError(f"interval length must be positive, got {d}")
    if nr < 8:
        raise ParameterError(f"need nr >= 8, got {nr}")
    dr = d / nr
    r_half = (np.arange(nr) + 0.5) * dr
    r_node = np.arange(1, nr) * dr
    w_half = np.asarray(weight(r_half), dtype=float)
    w_node = np.asarray(weight(r_node), dtype=float)
    if w_half.min() <= 0 or w_node.min() <= 0:
        raise GeometryError("weight must stay positive on the interval")
    # symmetrized generalized problem: D^(-1/2) K D^(-1/2), D = diag(w_node)
    diag = (w_half[:-1] + w_half[1:]) / dr**2 / w_node
    off = -w_half[1:-1] / dr**2 / np.sqrt(w_node[:-1] * w_node[1:])
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1),
                            eigvals_only=True)
    return [float(v) for v in vals]


def lowest_eigenvalue(weight, d: float, nr: int) -> float:
    return lowest_eigenvalues(weight, d, nr, k=1)[0]
