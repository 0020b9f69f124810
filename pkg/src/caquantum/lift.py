"""Quantum lift: permutation evolution operators and local generators.

Every site update is a permutation of the ontological basis: the site's
digit is shifted by Q of its opposite-sublattice neighbors, mod N.  Its
Hermitian generator is the product of the single-site shift log (built in
closed form on the discrete Fourier basis) and the diagonal neighbor
readout of Q, so that exp(-i a(x)) reproduces the update exactly.
"""

from __future__ import annotations

import numpy as np

from .basis import OntologicalBasis
from .errors import InvalidModulusError, InvalidOperatorError
from .lattice import even_sites, odd_sites
from .operators import DenseOperator, permutation_operator
from .rules import RuleSpec, rule_table


def shift_matrix(modulus: int) -> np.ndarray:
    """Explicit cyclic down-shift: column x carries |x> to |x-1 mod N>."""
    s = np.zeros((modulus, modulus), dtype=np.complex128)
    for x in range(modulus):
        s[(x - 1) % modulus, x] = 1.0
    return s


def build_shift_generator(
    modulus: int, mode_offsets=None
) -> DenseOperator:
    """Hermitian P with exp(iP) equal to the cyclic down-shift.

    Built on the discrete Fourier basis with eigenphases 2*pi*k/N for
    k = 0..N-1 (the [0, 2pi) branch).  ``mode_offsets`` adds integer
    multiples of 2*pi per Fourier mode, selecting an alternative branch
    without changing exp(iP).
    """
    if modulus < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {modulus}")
    n = modulus
    if mode_offsets is None:
        offsets = np.zeros(n, dtype=np.int64)
    else:
        offsets = np.asarray(mode_offsets, dtype=np.int64)
        if offsets.shape != (n,):
            raise InvalidOperatorError(
                f"mode_offsets must have length {n}, got shape {offsets.shape}"
            )
    k = np.arange(n)
    x = np.arange(n)
    # Columns F[:, k] are the shift eigenvectors exp(2*pi*i*k*x/N)/sqrt(N).
    fourier = np.exp(2j * np.pi * np.outer(x, k) / n) / np.sqrt(n)
    phases = 2.0 * np.pi * k / n + 2.0 * np.pi * offsets
    p = (fourier * phases) @ fourier.conj().T
    p = (p + p.conj().T) / 2.0
    return DenseOperator(p)


def site_update_images(
    basis: OntologicalBasis, rule: RuleSpec, site
) -> np.ndarray:
    """Basis permutation of one site update: digit += Q(neighbors) mod N."""
    spec = basis.spec
    site = spec.require_site(site)
    n = spec.modulus
    digits = basis.digit_matrix()
    pos = basis.position_of(site)
    table = rule_table(rule, spec)
    tidx = np.zeros(basis.dim, dtype=np.int64)
    for k, coord in enumerate(spec.neighbor_coords(site)):
        tidx += digits[:, basis.position_of(coord)] * n**k
    q = table[tidx]
    d = digits[:, pos]
    return np.arange(basis.dim, dtype=np.int64) + ((d + q) % n - d) * basis.place(pos)


def build_site_update(
    basis: OntologicalBasis, rule: RuleSpec, site
) -> DenseOperator:
    """Permutation operator A(x) (even site) or B(x) (odd site)."""
    return permutation_operator(site_update_images(basis, rule, site))


def evolution_images(
    basis: OntologicalBasis, rule: RuleSpec
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index maps of A (all even updates), B (all odd), and U = A*B."""
    spec = basis.spec
    im_a = np.arange(basis.dim, dtype=np.int64)
    for site in even_sites(spec):
        im_a = site_update_images(basis, rule, site)[im_a]
    im_b = np.arange(basis.dim, dtype=np.int64)
    for site in odd_sites(spec):
        im_b = site_update_images(basis, rule, site)[im_b]
    im_u = im_a[im_b]
    return im_a, im_b, im_u


def build_evolution(
    basis: OntologicalBasis, rule: RuleSpec
) -> tuple[DenseOperator, DenseOperator, DenseOperator]:
    """(A, B, U) as 0/1 permutation operators, U = A @ B."""
    im_a, im_b, im_u = evolution_images(basis, rule)
    return (
        permutation_operator(im_a),
        permutation_operator(im_b),
        permutation_operator(im_u),
    )


def build_local_generator(
    basis: OntologicalBasis, rule: RuleSpec, site, mode_offsets=None
) -> DenseOperator:
    """Hermitian generator a(x) (even site) or b(x) (odd site).

    Acts as the shift log on the site's own factor, weighted by the
    diagonal Q readout of the opposite-sublattice neighbors, so
    exp(-i a(x)) equals the site-update permutation.
    """
    spec = basis.spec
    site = spec.require_site(site)
    n = spec.modulus
    p = build_shift_generator(n, mode_offsets).matrix
    digits = basis.digit_matrix()
    pos = basis.position_of(site)
    table = rule_table(rule, spec)
    tidx = np.zeros(basis.dim, dtype=np.int64)
    for k, coord in enumerate(spec.neighbor_coords(site)):
        tidx += digits[:, basis.position_of(coord)] * n**k
    q = table[tidx].astype(np.float64)
    d = digits[:, pos]
    place = basis.place(pos)
    cols = np.arange(basis.dim, dtype=np.int64)
    gen = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for d_new in range(n):
        rows = cols + (d_new - d) * place
        gen[rows, cols] = p[d_new, d] * q
    return DenseOperator(gen)


def total_generators(
    basis: OntologicalBasis, rule: RuleSpec, mode_offsets=None
) -> tuple[DenseOperator, DenseOperator]:
    """Sublattice sums (a, b) of the local generators."""
    spec = basis.spec
    a = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for site in even_sites(spec):
        a += build_local_generator(basis, rule, site, mode_offsets).matrix
    b = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for site in odd_sites(spec):
        b += build_local_generator(basis, rule, site, mode_offsets).matrix
    return DenseOperator(a), DenseOperator(b)


def translation_images(basis: OntologicalBasis, axis: int = 0) -> np.ndarray:
    """Basis permutation of the two-site translation along one axis."""
    spec = basis.spec
    src_positions = []
    for site in basis.site_order:
        shifted = list(site)
        shifted[axis] = (shifted[axis] - 2) % spec.extents[axis]
        src_positions.append(basis.position_of(tuple(shifted)))
    digits = basis.digit_matrix()
    places = np.array([basis.place(p) for p in range(len(basis.site_order))], dtype=np.int64)
    return digits[:, src_positions] @ places


def build_translation(basis: OntologicalBasis, axis: int = 0) -> DenseOperator:
    return permutation_operator(translation_images(basis, axis))
