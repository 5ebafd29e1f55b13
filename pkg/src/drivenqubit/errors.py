"""Exception types raised across the package."""


class DrivenQubitError(Exception):
    """Base class for all package errors."""


class NonPositiveInput(DrivenQubitError):
    """A physical parameter that must be strictly positive (or finite) is not."""


class ResonantDrive(DrivenQubitError):
    """Drive exactly on resonance: the displacement amplitude diverges."""


class DimensionTooSmall(DrivenQubitError):
    """Fock-space truncation below the minimum usable size."""


class TruncationOverflow(DrivenQubitError):
    """State places non-negligible weight beyond the truncated basis."""


class TraceDrift(DrivenQubitError):
    """Integrator let the density-matrix trace drift beyond tolerance."""


class HermiticityLoss(DrivenQubitError):
    """Evolved density matrix is no longer Hermitian within tolerance."""


class StepTooLarge(DrivenQubitError):
    """Finite-difference step too coarse for the requested residual budget."""


class ZeroTime(DrivenQubitError):
    """Propagator kernel requested at zero elapsed time (delta function)."""


class GridTooCoarse(DrivenQubitError):
    """Lattice does not resolve the propagator kernel width."""


class NoRecurrence(DrivenQubitError):
    """Trajectory never returns to the positive x-axis within the horizon."""


class DegenerateStart(DrivenQubitError):
    """Initial point coincides with the attractor; classification undefined."""


class ConfigError(DrivenQubitError):
    """Malformed or incomplete run configuration."""
