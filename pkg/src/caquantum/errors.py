"""Exception hierarchy with stable machine-readable error codes.

Every failure path in the library raises a subclass of :class:`CaqError`
carrying a distinct ``code`` string; the CLI serializes these to JSON on
stderr and maps them to exit codes.
"""

from __future__ import annotations


class CaqError(Exception):
    """Base error; ``code`` is a stable machine-readable identifier."""

    code = "error"


class InvalidConfigError(CaqError):
    code = "invalid-config"


class InvalidLatticeError(CaqError):
    code = "invalid-lattice"


class InvalidModulusError(CaqError):
    code = "invalid-modulus"


class InvalidRuleError(CaqError):
    code = "invalid-rule"


class InvalidSiteError(CaqError):
    code = "invalid-site"


class InvalidStateError(CaqError):
    code = "invalid-state"


class DegeneratePerturbationError(CaqError):
    code = "degenerate-perturbation"


class DimensionCapError(CaqError):
    code = "dimension-cap"


class DimensionMismatchError(CaqError):
    code = "dimension-mismatch"


class InvalidOperatorError(CaqError):
    code = "invalid-operator"


class InvalidOperatorFileError(CaqError):
    code = "invalid-operator-file"


class ClassMismatchError(CaqError):
    code = "class-mismatch"


class NonUnitaryError(CaqError):
    code = "non-unitary"


class InvalidOrderError(CaqError):
    code = "invalid-order"


class InvalidCutError(CaqError):
    code = "invalid-cut"


class InvariantViolationError(CaqError):
    """An internal runtime invariant failed; never expected on valid inputs."""

    code = "invariant-violation"


class LightConeViolationError(InvariantViolationError):
    code = "light-cone-violation"


class AssemblyIdentityError(InvariantViolationError):
    code = "assembly-identity-failure"


class ReconstructionError(InvariantViolationError):
    code = "reconstruction-failure"


class GroundStateBoundError(InvariantViolationError):
    code = "ground-state-bound-violation"
