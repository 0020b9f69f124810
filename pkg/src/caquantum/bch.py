"""Baker-Campbell-Hausdorff truncations and the S/D conjugacy reduction.

The combined exponent R with exp(P) exp(Q) = exp(R) is expanded as

    R = P + Q + 1/2 [P,Q] + 1/12 [P,[P,Q]] + 1/12 [[P,Q],Q]
          + 1/24 [[P,[P,Q]],Q] + ...

truncated at nested-commutator degree 1..4.  The S/D reduction rewrites
P = S + D, Q = S - D and conjugates R into a representative that is odd
in S and even in D; with the printed cubic terms the residual scales as
the fifth power of the operator scale.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import InvalidOrderError
from .operators import DenseOperator, _check_dims

MAX_ORDER = 4


def _require_order(order: int) -> int:
    order = int(order)
    if not 1 <= order <= MAX_ORDER:
        raise InvalidOrderError(f"truncation order must be in 1..{MAX_ORDER}, got {order}")
    return order


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def bch_truncation(p: DenseOperator, q: DenseOperator, order: int) -> DenseOperator:
    """Combined-exponent series truncated at the given commutator degree."""
    order = _require_order(order)
    _check_dims(p, q)
    pm, qm = p.matrix, q.matrix
    r = pm + qm
    if order >= 2:
        c1 = _comm(pm, qm)
        r = r + c1 / 2.0
    if order >= 3:
        r = r + _comm(pm, c1) / 12.0 + _comm(c1, qm) / 12.0
    if order >= 4:
        r = r + _comm(_comm(pm, c1), qm) / 24.0
    return DenseOperator(r, tol=p.tol)


def sd_reduction(
    p: DenseOperator, q: DenseOperator, order: int = 3
) -> tuple[DenseOperator, DenseOperator]:
    """Conjugacy-class representative of the combined exponent.

    With S = (P+Q)/2 and D = (P-Q)/2, returns (F, R_reduced) where
    F = -D/2 + [S,[S,D]]/24 and R_reduced = 2S - [D,[S,D]]/12, each
    truncated at the requested degree (even degrees add nothing).
    """
    order = _require_order(order)
    _check_dims(p, q)
    s = (p.matrix + q.matrix) / 2.0
    d = (p.matrix - q.matrix) / 2.0
    f = -d / 2.0
    r_red = 2.0 * s
    if order >= 3:
        sd = _comm(s, d)
        f = f + _comm(s, sd) / 24.0
        r_red = r_red - _comm(d, sd) / 12.0
    return DenseOperator(f, tol=p.tol), DenseOperator(r_red, tol=p.tol)


def sd_conjugation_residual(
    p: DenseOperator, q: DenseOperator, order: int = 3
) -> float:
    """Max-abs of exp(F) log(exp(P)exp(Q)) exp(-F) - R_reduced.

    The exact combined exponent is taken as the principal matrix log, so
    the inputs must be small enough that no eigenvalue wraps.
    """
    f, r_red = sd_reduction(p, q, order)
    u = scipy.linalg.expm(p.matrix) @ scipy.linalg.expm(q.matrix)
    r_exact = scipy.linalg.logm(u)
    ef = scipy.linalg.expm(f.matrix)
    ef_inv = scipy.linalg.expm(-f.matrix)
    return float(np.max(np.abs(ef @ r_exact @ ef_inv - r_red.matrix)))
