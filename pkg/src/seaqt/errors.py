"""Exception hierarchy shared across the library."""


class SeaqtError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(SeaqtError):
    """Operands live on Hilbert spaces of different dimension."""


class NotHermitianError(SeaqtError):
    """Matrix fails the Hermiticity tolerance."""


class NotPositiveError(SeaqtError):
    """State operator has an eigenvalue below the clamp floor."""


class TraceError(SeaqtError):
    """State operator trace is too far from one to renormalize."""


class NonCommutingGeneratorError(SeaqtError):
    """A declared generator does not commute with the Hamiltonian."""


class NonPositiveTauError(SeaqtError):
    """Relaxation time constant must be strictly positive."""


class SingularStateError(SeaqtError):
    """Operation requires a full-rank state operator."""


class SingularCompositeStateError(SeaqtError):
    """Composite log operator is undefined on a singular non-product state."""


class TargetInfeasibleError(SeaqtError):
    """Requested mean values lie outside the attainable range."""


class NoConvergenceError(SeaqtError):
    """Iterative solver exhausted its iteration budget."""


class StepUnderflowError(SeaqtError):
    """Adaptive integrator hit dt_min with error still above tolerance."""


class StateInvalidError(SeaqtError):
    """Integrated matrix left the valid state set beyond repair."""


class NonCommutingFError(SeaqtError):
    """Double-commutator generator F must commute with H."""


class MeasureWeightError(SeaqtError):
    """Statistical weights must be positive and sum to one."""


class UncoveredSupportError(SeaqtError):
    """A support state maps to no cell of the partition."""


class ConfigError(SeaqtError):
    """Scenario configuration failed to parse or validate."""
