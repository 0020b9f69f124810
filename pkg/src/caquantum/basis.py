"""Ontological basis: enumeration of all classical configurations.

The Hilbert-space basis of a lifted lattice is the set of configurations,
indexed by a mixed-radix (base-N) integer.  Convention, fixed once and
echoed in every exported report: even sites in row-major order are the
low digits, odd sites in row-major order follow; digits are little-endian
(the first site in that order is the least significant digit).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .automaton import AutomatonState
from .errors import DimensionCapError
from .lattice import Coord, LatticeSpec, even_sites, odd_sites

DEFAULT_DIM_CAP = 4096

CONVENTION = (
    "basis: little-endian base-N digits, site order = even sites row-major "
    "then odd sites row-major; neighbor order = per axis ascending, minus "
    "before plus"
)


@dataclass(frozen=True)
class OntologicalBasis:
    """Bijection between basis indices and classical configurations."""

    spec: LatticeSpec
    dim: int
    site_order: tuple[Coord, ...]
    cap: int
    _digit_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def convention(self) -> str:
        return CONVENTION

    def position_of(self, site) -> int:
        site = self.spec.require_site(site)
        return self.site_order.index(site)

    def place(self, position: int) -> int:
        return self.spec.modulus**position

    def encode(self, state_or_grid) -> int:
        """Basis index of a configuration."""
        grid = (
            state_or_grid.grid
            if isinstance(state_or_grid, AutomatonState)
            else np.asarray(state_or_grid)
        )
        idx = 0
        for pos, site in enumerate(self.site_order):
            idx += int(grid[site]) * self.spec.modulus**pos
        return idx

    def decode(self, index: int) -> np.ndarray:
        """Configuration grid of a basis index."""
        if not 0 <= index < self.dim:
            raise IndexError(f"basis index {index} outside [0, {self.dim})")
        grid = np.zeros(self.spec.extents, dtype=np.int64)
        n = self.spec.modulus
        rem = int(index)
        for site in self.site_order:
            grid[site] = rem % n
            rem //= n
        return grid

    def decode_state(self, index: int, epoch: int = 0) -> AutomatonState:
        return AutomatonState(self.spec, self.decode(index), epoch=epoch)

    def digit_matrix(self) -> np.ndarray:
        """(dim, cells) array of digits for every basis index; cached."""
        if "digits" not in self._digit_cache:
            n = self.spec.modulus
            cells = len(self.site_order)
            idx = np.arange(self.dim, dtype=np.int64)
            digits = np.empty((self.dim, cells), dtype=np.int64)
            rem = idx.copy()
            for pos in range(cells):
                digits[:, pos] = rem % n
                rem //= n
            digits.setflags(write=False)
            self._digit_cache["digits"] = digits
        return self._digit_cache["digits"]


def build_basis(spec: LatticeSpec, cap: int = DEFAULT_DIM_CAP) -> OntologicalBasis:
    """Enumerate the basis; refuses lattices whose dimension exceeds the cap."""
    dim = spec.modulus**spec.cell_count
    if dim > cap:
        raise DimensionCapError(
            f"basis dimension {dim} exceeds cap {cap}; a cap of at least {dim} is required"
        )
    site_order = even_sites(spec) + odd_sites(spec)
    return OntologicalBasis(spec=spec, dim=int(dim), site_order=site_order, cap=cap)
