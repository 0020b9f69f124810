"""Classical engine: reversible two-step evolution and experiments.

One epoch is the two-step update U = A*B read right to left: the odd
sublattice is updated first (Y += Q of its X neighbors, mod N), then the
even sublattice (X += Q of its Y neighbors).  Each half-step reads only
the opposite sublattice, so the per-site updates within a half-step
commute and the whole evolution is exactly invertible over the integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePerturbationError,
    InvalidStateError,
    LightConeViolationError,
)
from .lattice import Coord, LatticeSpec, parity_mask
from .rules import RuleSpec, q_grid, q_value


@dataclass(frozen=True)
class AutomatonState:
    """Field values at one epoch; value-like, never mutated in place."""

    spec: LatticeSpec
    grid: np.ndarray
    epoch: int = 0

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.int64)
        if grid.shape != self.spec.extents:
            raise InvalidStateError(
                f"grid shape {grid.shape} does not match extents {self.spec.extents}"
            )
        if ((grid < 0) | (grid >= self.spec.modulus)).any():
            raise InvalidStateError(f"cell values outside [0, {self.spec.modulus})")
        grid = grid.copy()
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @property
    def x_values(self) -> np.ndarray:
        """Even-sublattice values, row-major site order."""
        return self.grid[parity_mask(self.spec, 0)]

    @property
    def y_values(self) -> np.ndarray:
        """Odd-sublattice values, row-major site order."""
        return self.grid[parity_mask(self.spec, 1)]


def zero_state(spec: LatticeSpec) -> AutomatonState:
    return AutomatonState(spec, np.zeros(spec.extents, dtype=np.int64))


def random_state(spec: LatticeSpec, seed: int) -> AutomatonState:
    rng = np.random.default_rng(seed)
    grid = rng.integers(0, spec.modulus, size=spec.extents, dtype=np.int64)
    return AutomatonState(spec, grid)


def single_seed_state(spec: LatticeSpec, value: int = 1, site: Coord | None = None) -> AutomatonState:
    """All cells zero except one (default: an even cell near the center)."""
    if site is None:
        center = [e // 2 for e in spec.extents]
        if sum(center) % 2 != 0:
            center[0] = (center[0] + 1) % spec.extents[0]
        site = tuple(center)
    site = spec.require_site(site)
    grid = np.zeros(spec.extents, dtype=np.int64)
    grid[site] = value % spec.modulus
    return AutomatonState(spec, grid)


def state_from_values(
    spec: LatticeSpec, x_values, y_values, epoch: int = 0
) -> AutomatonState:
    """Assemble a state from per-sublattice value lists (row-major order)."""
    grid = np.zeros(spec.extents, dtype=np.int64)
    grid[parity_mask(spec, 0)] = np.asarray(x_values, dtype=np.int64)
    grid[parity_mask(spec, 1)] = np.asarray(y_values, dtype=np.int64)
    return AutomatonState(spec, grid, epoch=epoch)


def neighbor_tuple(state: AutomatonState, site) -> tuple[int, ...]:
    """Values at site +- unit vector per axis, minus before plus, wrapped."""
    coords = state.spec.neighbor_coords(site)
    return tuple(int(state.grid[c]) for c in coords)


def _half_step(state: AutomatonState, rule: RuleSpec, parity: int, sign: int) -> AutomatonState:
    spec = state.spec
    q = q_grid(rule, spec, state.grid)
    mask = parity_mask(spec, parity)
    grid = state.grid.copy()
    grid[mask] = (grid[mask] + sign * q[mask]) % spec.modulus
    return AutomatonState(spec, grid, epoch=state.epoch)


def half_step_even(state: AutomatonState, rule: RuleSpec) -> AutomatonState:
    """X(x) -> X(x) + Q(neighbor Y values) mod N, all even sites at once."""
    return _half_step(state, rule, parity=0, sign=+1)


def half_step_odd(state: AutomatonState, rule: RuleSpec) -> AutomatonState:
    """Y(x) -> Y(x) + Q(neighbor X values) mod N, all odd sites at once."""
    return _half_step(state, rule, parity=1, sign=+1)


def half_step_even_inverse(state: AutomatonState, rule: RuleSpec) -> AutomatonState:
    return _half_step(state, rule, parity=0, sign=-1)


def half_step_odd_inverse(state: AutomatonState, rule: RuleSpec) -> AutomatonState:
    return _half_step(state, rule, parity=1, sign=-1)


def step_epoch(state: AutomatonState, rule: RuleSpec) -> AutomatonState:
    """One two-step epoch: odd half-step first, then even."""
    stepped = half_step_even(half_step_odd(state, rule), rule)
    return AutomatonState(state.spec, stepped.grid, epoch=state.epoch + 1)


def step_epoch_inverse(state: AutomatonState, rule: RuleSpec) -> AutomatonState:
    """Exact inverse of :func:`step_epoch`: subtract Q, reverse order."""
    stepped = half_step_odd_inverse(half_step_even_inverse(state, rule), rule)
    return AutomatonState(state.spec, stepped.grid, epoch=state.epoch - 1)


def evolve(state: AutomatonState, rule: RuleSpec, epochs: int) -> AutomatonState:
    step = step_epoch if epochs >= 0 else step_epoch_inverse
    for _ in range(abs(epochs)):
        state = step(state, rule)
    return state


@dataclass(frozen=True)
class DiffPatternReport:
    """Support of the difference between a run and its perturbed twin."""

    changed_cells: tuple[Coord, ...]
    support_radius: int
    per_direction_extents: tuple[tuple[int, int], ...]  # (minus, plus) per axis
    anisotropy_ratio: float
    perturb_site: Coord
    perturb_delta: int
    epochs: int
    elapsed_single_steps: int
    light_cone_bound: int

    def to_dict(self) -> dict:
        return {
            "changed_cells": [list(c) for c in self.changed_cells],
            "changed_cell_count": len(self.changed_cells),
            "support_radius": self.support_radius,
            "per_direction_extents": [list(e) for e in self.per_direction_extents],
            "anisotropy_ratio": self.anisotropy_ratio,
            "perturb_site": list(self.perturb_site),
            "perturb_delta": self.perturb_delta,
            "epochs": self.epochs,
            "elapsed_single_steps": self.elapsed_single_steps,
            "light_cone_bound": self.light_cone_bound,
        }


def difference_pattern(
    spec: LatticeSpec,
    rule: RuleSpec,
    seed_state: AutomatonState,
    perturb_site,
    perturb_delta: int,
    epochs: int,
) -> DiffPatternReport:
    """Run the original and a one-cell-perturbed evolution side by side and
    report the support of their difference after ``epochs`` epochs.

    Raises :class:`LightConeViolationError` if any changed cell lies outside
    the causal radius of 2*epochs single steps (periodic L1 distance).
    """
    site = spec.require_site(perturb_site)
    delta = int(perturb_delta) % spec.modulus
    if delta == 0:
        raise DegeneratePerturbationError(
            f"perturbation delta {perturb_delta} is 0 mod {spec.modulus}"
        )
    grid = seed_state.grid.copy()
    grid[site] = (grid[site] + delta) % spec.modulus
    perturbed = AutomatonState(spec, grid, epoch=seed_state.epoch)

    base = evolve(seed_state, rule, epochs)
    twin = evolve(perturbed, rule, epochs)

    changed_mask = base.grid != twin.grid
    changed = tuple(tuple(int(c) for c in idx) for idx in np.argwhere(changed_mask))

    radius = 0
    minus = [0] * spec.dims
    plus = [0] * spec.dims
    for cell in changed:
        radius = max(radius, spec.l1_distance(cell, site))
        for axis in range(spec.dims):
            extent = spec.extents[axis]
            delta_ax = (cell[axis] - site[axis]) % extent
            if delta_ax <= extent - delta_ax:
                plus[axis] = max(plus[axis], delta_ax)
            if delta_ax >= extent - delta_ax:
                minus[axis] = max(minus[axis], extent - delta_ax)

    directions = [d for pair in zip(minus, plus) for d in pair]
    if max(directions) == 0:
        ratio = 1.0
    elif min(directions) == 0:
        ratio = math.inf
    else:
        ratio = max(directions) / min(directions)

    bound = 2 * epochs
    report = DiffPatternReport(
        changed_cells=changed,
        support_radius=radius,
        per_direction_extents=tuple(zip(minus, plus)),
        anisotropy_ratio=ratio,
        perturb_site=site,
        perturb_delta=delta,
        epochs=epochs,
        elapsed_single_steps=2 * epochs,
        light_cone_bound=bound,
    )
    if radius > bound:
        raise LightConeViolationError(
            f"difference support radius {radius} exceeds causal bound {bound}"
        )
    return report
