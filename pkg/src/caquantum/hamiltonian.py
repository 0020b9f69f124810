"""Local Hamiltonian density, assembled truncations, and the exact log.

The evolution operator U over one epoch factors as exp(-i a) exp(-i b)
with a, b the sublattice generator sums, and is written U = exp(-2iH).
Feeding P = -ia, Q = -ib into the commutator series and collecting terms
by the site of the leading generator yields local densities:

    order 1:  a(x)/2 on even sites, b(x)/2 on odd sites
    order 2:  -(i/4) [a(x), b]            (even sites)
    order 3:  -(1/24) [a(x) - b(x), [a, b]]   (all sites)
    order 4:  (i/48) [[a(x), [a, b]], b]  (even sites)

Non-neighbor contributions vanish identically inside the commutators, so
each term is supported near its leading site and the site sums reproduce
the global truncation exactly.  The exact Hamiltonian is the branch-fixed
logarithm of U: eigenphase phi in [0, 2pi) with e^{-i phi} the U
eigenvalue, energy phi/2, plus optional integer 2pi offsets per
eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .basis import OntologicalBasis
from .bch import bch_truncation, _require_order
from .errors import NonUnitaryError, InvalidOperatorError
from .lattice import Coord, even_sites, odd_sites
from .lift import build_evolution, build_local_generator
from .operators import DenseOperator, max_abs
from .rules import RuleSpec

LocalTerms = dict[tuple[Coord, int], DenseOperator]


def unitary_eig(op: DenseOperator, tol: float | None = None):
    """Eigenphases (principal, in (-pi, pi]) and orthonormal eigenvectors
    of a unitary operator, via the complex Schur form."""
    tol = op.tol if tol is None else tol
    if not op.is_unitary(tol):
        raise NonUnitaryError("operator is not unitary within tolerance")
    t, z = scipy.linalg.schur(op.matrix, output="complex")
    off = t.copy()
    np.fill_diagonal(off, 0.0)
    norm = max(1.0, float(np.max(np.abs(np.diag(t)))))
    if float(np.max(np.abs(off))) > 1e-9 * norm * op.dim:
        raise InvalidOperatorError("Schur form not diagonal; operator is not normal")
    phases = np.angle(np.diag(t))
    return phases, z


def exact_hamiltonian(
    u: DenseOperator, branch_offsets=None
) -> DenseOperator:
    """Hermitian H with exp(-2iH) = U, eigenvalues phi/2.

    phi is the [0, 2pi) representative of -theta for each U eigenphase
    theta, plus 2pi times the integer offset assigned to that eigenvalue
    (offsets indexed by ascending phi).
    """
    theta, z = unitary_eig(u)
    phi = (-theta) % (2.0 * np.pi)
    order = np.argsort(phi, kind="stable")
    phi = phi[order]
    z = z[:, order]
    if branch_offsets is not None:
        offsets = np.asarray(branch_offsets, dtype=np.int64)
        if offsets.shape == ():
            offsets = np.full(u.dim, int(offsets), dtype=np.int64)
        if offsets.shape != (u.dim,):
            raise InvalidOperatorError(
                f"branch offsets must be scalar or length {u.dim}"
            )
        phi = phi + 2.0 * np.pi * offsets
    h = (z * (phi / 2.0)) @ z.conj().T
    h = (h + h.conj().T) / 2.0
    return DenseOperator(h, tol=u.tol)


def hamiltonian_density(
    basis: OntologicalBasis, rule: RuleSpec, order: int
) -> LocalTerms:
    """Per-site, per-order local Hamiltonian terms up to the given order."""
    order = _require_order(order)
    spec = basis.spec
    evens = even_sites(spec)
    odds = odd_sites(spec)
    a_site = {x: build_local_generator(basis, rule, x).matrix for x in evens}
    b_site = {y: build_local_generator(basis, rule, y).matrix for y in odds}
    a_tot = sum(a_site.values())
    b_tot = sum(b_site.values())

    terms: LocalTerms = {}
    for x in evens:
        terms[(x, 1)] = DenseOperator(a_site[x] / 2.0)
    for y in odds:
        terms[(y, 1)] = DenseOperator(b_site[y] / 2.0)
    if order >= 2:
        for x in evens:
            c = a_site[x] @ b_tot - b_tot @ a_site[x]
            terms[(x, 2)] = DenseOperator(-0.25j * c)
    if order >= 3:
        c_ab = a_tot @ b_tot - b_tot @ a_tot
        for x in evens:
            g = a_site[x]
            terms[(x, 3)] = DenseOperator(-(g @ c_ab - c_ab @ g) / 24.0)
        for y in odds:
            g = -b_site[y]
            terms[(y, 3)] = DenseOperator(-(g @ c_ab - c_ab @ g) / 24.0)
    if order >= 4:
        for x in evens:
            inner = a_site[x] @ c_ab - c_ab @ a_site[x]
            outer = inner @ b_tot - b_tot @ inner
            terms[(x, 4)] = DenseOperator((1j / 48.0) * outer)
    return terms


@dataclass(frozen=True)
class HamiltonianBundle:
    """Local terms, their assembled truncation, and the exact-log reference."""

    basis: OntologicalBasis
    rule: RuleSpec
    order: int
    local_terms: LocalTerms
    h_truncated: DenseOperator
    h_exact: DenseOperator
    branch_offsets: np.ndarray
    u: DenseOperator

    def site_density(self, site) -> DenseOperator:
        """Sum of this site's local terms over all retained orders."""
        site = self.basis.spec.require_site(site)
        acc = np.zeros((self.basis.dim, self.basis.dim), dtype=np.complex128)
        for (s, _), term in self.local_terms.items():
            if s == site:
                acc = acc + term.matrix
        return DenseOperator(acc)


def build_hamiltonian(
    basis: OntologicalBasis,
    rule: RuleSpec,
    order: int,
    branch_offsets=None,
) -> HamiltonianBundle:
    order = _require_order(order)
    terms = hamiltonian_density(basis, rule, order)
    acc = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for term in terms.values():
        acc = acc + term.matrix
    h_trunc = DenseOperator(acc)
    _, _, u = build_evolution(basis, rule)
    h_exact = exact_hamiltonian(u, branch_offsets)
    if branch_offsets is None:
        offsets = np.zeros(basis.dim, dtype=np.int64)
    else:
        offsets = np.asarray(branch_offsets, dtype=np.int64)
        if offsets.shape == ():
            offsets = np.full(basis.dim, int(offsets), dtype=np.int64)
    return HamiltonianBundle(
        basis=basis,
        rule=rule,
        order=order,
        local_terms=terms,
        h_truncated=h_trunc,
        h_exact=h_exact,
        branch_offsets=offsets,
        u=u,
    )


def assembly_deviation(bundle: HamiltonianBundle) -> float:
    """Max-abs gap between the summed local terms and the global series.

    The global reference maps R = bch_truncation(-ia, -ib, k) to a
    Hamiltonian via H = iR/2 (from U = exp(-2iH)).
    """
    from .lift import total_generators

    a, b = total_generators(bundle.basis, bundle.rule)
    r = bch_truncation(
        DenseOperator(-1j * a.matrix), DenseOperator(-1j * b.matrix), bundle.order
    )
    h_global = 0.5j * r.matrix
    return float(np.max(np.abs(bundle.h_truncated.matrix - h_global)))


def reconstruction_deviation(bundle: HamiltonianBundle) -> float:
    """Max-abs of exp(-2i H_exact) - U."""
    recon = scipy.linalg.expm(-2j * bundle.h_exact.matrix)
    return float(np.max(np.abs(recon - bundle.u.matrix)))


def conservation_deviation(bundle: HamiltonianBundle) -> float:
    """Max-abs of [H_exact, U]."""
    h, u = bundle.h_exact.matrix, bundle.u.matrix
    return float(np.max(np.abs(h @ u - u @ h)))


def hermiticity_residual(op: DenseOperator) -> float:
    return float(np.max(np.abs(op.matrix - op.matrix.conj().T)))
