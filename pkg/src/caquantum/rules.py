"""Update-rule families for the automaton.

A rule is the integer function Q applied to the tuple of nearest-neighbor
values (fixed order: per axis ascending, minus before plus).  Three
families are supported:

* ``linear-sum``     Q = sum of neighbor values mod N (analytically tame).
* ``seeded-table``   full lookup table filled deterministically from a
                     64-bit seed (an irregular, generic rule).
* ``explicit-table`` caller-supplied table, exchangeable as a text file.

Lookup tables are flat arrays indexed by the little-endian base-N encoding
of the neighbor tuple: index = sum_k tuple[k] * N**k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidRuleError
from .lattice import LatticeSpec

FAMILIES = ("linear-sum", "seeded-table", "explicit-table")


@dataclass(frozen=True)
class RuleSpec:
    """One update function Q, as a named family or an explicit table."""

    family: str
    seed: int | None = None
    table: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidRuleError(
                f"unknown rule family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.family == "seeded-table" and self.seed is None:
            raise InvalidRuleError("seeded-table rule requires a seed")
        if self.family == "explicit-table" and self.table is None:
            raise InvalidRuleError("explicit-table rule requires a table")

    @staticmethod
    def linear_sum() -> "RuleSpec":
        return RuleSpec(family="linear-sum")

    @staticmethod
    def seeded(seed: int) -> "RuleSpec":
        return RuleSpec(family="seeded-table", seed=int(seed))

    @staticmethod
    def explicit(
        table: Mapping[tuple[int, ...], int], spec: LatticeSpec
    ) -> "RuleSpec":
        """Build an explicit rule from a tuple->value map, validated against
        the lattice's neighbor arity and modulus."""
        arity = 2 * spec.dims
        n = spec.modulus
        flat = np.full(n**arity, -1, dtype=np.int64)
        for key, value in table.items():
            key = tuple(int(k) for k in key)
            if len(key) != arity or any(not 0 <= k < n for k in key):
                raise InvalidRuleError(f"table key {key} invalid for arity {arity}, modulus {n}")
            if not 0 <= int(value) < n:
                raise InvalidRuleError(f"table value {value} outside [0, {n})")
            flat[tuple_index(key, n)] = int(value)
        if (flat < 0).any():
            missing = int((flat < 0).sum())
            raise InvalidRuleError(
                f"explicit table covers {len(table)} tuples; {missing} of {n**arity} missing"
            )
        return RuleSpec(family="explicit-table", table=tuple(int(v) for v in flat))


def tuple_index(values: Iterable[int], modulus: int) -> int:
    """Little-endian base-N index of a neighbor tuple."""
    idx = 0
    for k, v in enumerate(values):
        idx += int(v) * modulus**k
    return idx


def index_tuple(idx: int, arity: int, modulus: int) -> tuple[int, ...]:
    out = []
    for _ in range(arity):
        out.append(idx % modulus)
        idx //= modulus
    return tuple(out)


@lru_cache(maxsize=None)
def rule_table(rule: RuleSpec, spec: LatticeSpec) -> np.ndarray:
    """Flat lookup table of Q over all neighbor tuples for this lattice."""
    arity = 2 * spec.dims
    n = spec.modulus
    size = n**arity
    if rule.family == "linear-sum":
        digits = _tuple_digits(arity, n)
        table = digits.sum(axis=1) % n
    elif rule.family == "seeded-table":
        rng = np.random.default_rng(rule.seed)
        table = rng.integers(0, n, size=size, dtype=np.int64)
    else:
        if len(rule.table) != size:
            raise InvalidRuleError(
                f"explicit table has {len(rule.table)} entries, lattice needs {size}"
            )
        table = np.array(rule.table, dtype=np.int64)
        if ((table < 0) | (table >= n)).any():
            raise InvalidRuleError(f"explicit table values outside [0, {n})")
    table = table.astype(np.int64)
    table.setflags(write=False)
    return table


def _tuple_digits(arity: int, modulus: int) -> np.ndarray:
    """(size, arity) array: row i is the tuple with little-endian index i."""
    size = modulus**arity
    idx = np.arange(size)
    return np.stack(
        [(idx // modulus**k) % modulus for k in range(arity)], axis=1
    )


def q_value(rule: RuleSpec, spec: LatticeSpec, neighbor_values: Iterable[int]) -> int:
    return int(rule_table(rule, spec)[tuple_index(neighbor_values, spec.modulus)])


def q_grid(rule: RuleSpec, spec: LatticeSpec, grid: np.ndarray) -> np.ndarray:
    """Q evaluated at every cell from its own neighbors, vectorized.

    Only the cells of the sublattice being updated are meaningful to the
    caller; values elsewhere are computed but ignored.
    """
    n = spec.modulus
    if rule.family == "linear-sum":
        acc = np.zeros_like(grid)
        for axis in range(spec.dims):
            acc += np.roll(grid, +1, axis=axis)
            acc += np.roll(grid, -1, axis=axis)
        return acc % n
    table = rule_table(rule, spec)
    idx = np.zeros_like(grid)
    place = 1
    for axis in range(spec.dims):
        idx += np.roll(grid, +1, axis=axis) * place
        place *= n
        idx += np.roll(grid, -1, axis=axis) * place
        place *= n
    return table[idx]


def write_rule_table(path, rule: RuleSpec, spec: LatticeSpec) -> None:
    """Dump the full table as ``tuple -> value`` lines, tuple in the fixed
    neighbor order."""
    table = rule_table(rule, spec)
    arity = 2 * spec.dims
    n = spec.modulus
    with open(path, "w", encoding="utf-8") as fh:
        for idx, value in enumerate(table):
            key = ",".join(str(d) for d in index_tuple(idx, arity, n))
            fh.write(f"{key} -> {int(value)}\n")


def read_rule_table(path, spec: LatticeSpec) -> RuleSpec:
    """Parse a ``tuple -> value`` file into an explicit rule."""
    table: dict[tuple[int, ...], int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                key_text, value_text = line.split("->")
                key = tuple(int(t) for t in key_text.strip().split(","))
                value = int(value_text)
            except ValueError as exc:
                raise InvalidRuleError(f"{path}:{lineno}: cannot parse {line!r}") from exc
            if key in table:
                raise InvalidRuleError(f"{path}:{lineno}: duplicate tuple {key}")
            table[key] = value
    return RuleSpec.explicit(table, spec)
