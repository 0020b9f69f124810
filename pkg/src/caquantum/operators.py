"""Dense complex operators over the ontological basis, and their
classification as beable / changeable / superimposable.

A beable is diagonal in the ontological basis; a changeable has exactly
one non-vanishing entry per row and per column (a phase-weighted
permutation); anything else genuinely superposes basis states.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    ClassMismatchError,
    DimensionMismatchError,
    InvalidOperatorError,
)


def default_tolerance(dim: int) -> float:
    """Absolute tolerance for approximate predicates, scaled with dimension."""
    return 1e-9 if dim <= 256 else 1e-7


class OperatorClass(str, enum.Enum):
    BEABLE = "beable"
    CHANGEABLE = "changeable"
    SUPERIMPOSABLE = "superimposable"


@dataclass(frozen=True)
class DenseOperator:
    """Square complex matrix plus the tolerance used by approximate checks."""

    matrix: np.ndarray
    tol: float | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidOperatorError(f"operator must be square, got shape {m.shape}")
        if not np.isfinite(m).all():
            raise InvalidOperatorError("operator has non-finite entries")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.tol is None:
            object.__setattr__(self, "tol", default_tolerance(m.shape[0]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.matrix.conj().T, tol=self.tol)

    def is_hermitian(self, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T))) <= tol

    def is_unitary(self, tol: float | None = None) -> bool:
        tol = self.tol if tol is None else tol
        probe = self.matrix.conj().T @ self.matrix - np.eye(self.dim)
        return float(np.max(np.abs(probe))) <= tol

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        _check_dims(self, other)
        return DenseOperator(self.matrix @ other.matrix, tol=self.tol)

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        _check_dims(self, other)
        return DenseOperator(self.matrix + other.matrix, tol=self.tol)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        _check_dims(self, other)
        return DenseOperator(self.matrix - other.matrix, tol=self.tol)

    def __mul__(self, scalar: complex) -> "DenseOperator":
        return DenseOperator(self.matrix * scalar, tol=self.tol)

    __rmul__ = __mul__

    def __neg__(self) -> "DenseOperator":
        return DenseOperator(-self.matrix, tol=self.tol)


def _check_dims(a: DenseOperator, b: DenseOperator) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"operator dims differ: {a.dim} vs {b.dim}")


def identity_operator(dim: int) -> DenseOperator:
    return DenseOperator(np.eye(dim, dtype=np.complex128))


def diagonal_operator(values) -> DenseOperator:
    return DenseOperator(np.diag(np.asarray(values, dtype=np.complex128)))


def permutation_operator(images: np.ndarray, tol: float | None = None) -> DenseOperator:
    """0/1 matrix sending basis vector s to basis vector images[s]."""
    dim = len(images)
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[np.asarray(images, dtype=np.int64), np.arange(dim)] = 1.0
    return DenseOperator(m, tol=tol)


def commutator(a: DenseOperator, b: DenseOperator) -> DenseOperator:
    _check_dims(a, b)
    return DenseOperator(a.matrix @ b.matrix - b.matrix @ a.matrix, tol=a.tol)


def max_abs(op: DenseOperator) -> float:
    return float(np.max(np.abs(op.matrix)))


def classify(op: DenseOperator) -> OperatorClass:
    """Classify by sparsity pattern under the operator's tolerance."""
    m = op.matrix
    significant = np.abs(m) > op.tol
    off_diag = significant.copy()
    np.fill_diagonal(off_diag, False)
    if not off_diag.any():
        return OperatorClass.BEABLE
    row_counts = significant.sum(axis=1)
    col_counts = significant.sum(axis=0)
    if (row_counts == 1).all() and (col_counts == 1).all():
        return OperatorClass.CHANGEABLE
    return OperatorClass.SUPERIMPOSABLE


def conjugate_beable(beable: DenseOperator, changeable: DenseOperator) -> DenseOperator:
    """Advance a beable B through a changeable C: returns B' with B'C = CB."""
    if classify(beable) is not OperatorClass.BEABLE:
        raise ClassMismatchError("first operand does not classify as a beable")
    if classify(changeable) is not OperatorClass.CHANGEABLE:
        raise ClassMismatchError("second operand does not classify as a changeable")
    c_inv = np.linalg.inv(changeable.matrix)
    return DenseOperator(changeable.matrix @ beable.matrix @ c_inv, tol=beable.tol)
