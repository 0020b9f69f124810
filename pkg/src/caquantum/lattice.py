"""Periodic checkerboard lattice geometry.

Cells carry values modulo N and are split into an even and an odd
sublattice by coordinate-sum parity.  All extents must be even so the
two sublattices stay consistent under periodic wrap and have equal size.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidLatticeError, InvalidModulusError, InvalidSiteError

Coord = tuple[int, ...]


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry and value modulus of the automaton lattice.

    extents: per-axis size, each a positive even integer (periodic wrap).
    modulus: cell values live in [0, modulus).
    """

    extents: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if not self.extents:
            raise InvalidLatticeError("lattice needs at least one axis")
        if not isinstance(self.extents, tuple):
            object.__setattr__(self, "extents", tuple(int(e) for e in self.extents))
        for e in self.extents:
            if e <= 0 or e % 2 != 0:
                raise InvalidLatticeError(
                    f"every extent must be a positive even integer, got {self.extents}"
                )
        if self.modulus < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def dims(self) -> int:
        return len(self.extents)

    @property
    def cell_count(self) -> int:
        return int(np.prod(self.extents))

    def is_valid_site(self, site) -> bool:
        return len(site) == self.dims and all(
            0 <= c < e for c, e in zip(site, self.extents)
        )

    def require_site(self, site) -> Coord:
        site = tuple(int(c) for c in site)
        if not self.is_valid_site(site):
            raise InvalidSiteError(f"site {site} outside lattice {self.extents}")
        return site

    def site_parity(self, site) -> int:
        return sum(site) % 2

    def wrap(self, site) -> Coord:
        return tuple(int(c) % e for c, e in zip(site, self.extents))

    def neighbor_coords(self, site) -> tuple[Coord, ...]:
        """Nearest neighbors in the fixed order: per axis ascending, minus
        direction before plus."""
        site = self.require_site(site)
        out = []
        for axis in range(self.dims):
            for step in (-1, +1):
                nb = list(site)
                nb[axis] = (nb[axis] + step) % self.extents[axis]
                out.append(tuple(nb))
        return tuple(out)

    def l1_distance(self, a, b) -> int:
        """Periodic (torus) L1 distance."""
        d = 0
        for ca, cb, e in zip(a, b, self.extents):
            delta = abs(int(ca) - int(cb)) % e
            d += min(delta, e - delta)
        return d


@lru_cache(maxsize=None)
def parity_mask(spec: LatticeSpec, parity: int) -> np.ndarray:
    """Boolean mask over the grid selecting cells of the given parity."""
    total = np.indices(spec.extents).sum(axis=0)
    mask = (total % 2) == (parity % 2)
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=None)
def sites_of_parity(spec: LatticeSpec, parity: int) -> tuple[Coord, ...]:
    """Cells of one sublattice in row-major coordinate order."""
    return tuple(
        tuple(int(c) for c in site)
        for site in np.ndindex(*spec.extents)
        if sum(site) % 2 == parity % 2
    )


def even_sites(spec: LatticeSpec) -> tuple[Coord, ...]:
    return sites_of_parity(spec, 0)


def odd_sites(spec: LatticeSpec) -> tuple[Coord, ...]:
    return sites_of_parity(spec, 1)
