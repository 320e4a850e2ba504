"""Exception types shared across the package."""


class PolarDiracError(Exception):
    """Base class for all package-specific errors."""


class ImaginaryResidue(PolarDiracError):
    """A bilinear that must be real came out with a non-negligible imaginary part."""


class SingularSpinor(PolarDiracError):
    """Polar decomposition requested at a point where Theta^2 + Phi^2 vanishes."""


class InvalidPolar(PolarDiracError):
    """Polar data violates its normalization constraints (u.u=1, s.s=-1, u.s=0)."""


class ZeroSpinor(PolarDiracError):
    """A two-component spinor with vanishing norm cannot be decomposed."""


class OffShell(PolarDiracError):
    """Plane-wave momentum does not satisfy p.p = m^2 with positive energy."""


class MassMismatch(PolarDiracError):
    """Superposed plane waves must share a single mass."""


class GridMismatch(PolarDiracError):
    """Field arrays defined on incompatible grids were combined."""


class OutOfBounds(PolarDiracError):
    """Interpolation or evaluation requested outside the grid domain."""


class BasisLeak(PolarDiracError):
    """A logarithmic derivative has components outside span{i*identity, sigma_ab}."""


class NotAntisymmetric(PolarDiracError):
    """Tensor expected antisymmetric in its first index pair is not."""


class PreconditionViolated(PolarDiracError):
    """An evaluator was called outside its domain of validity."""


class ConfigError(PolarDiracError):
    """Run configuration is malformed or contains unknown keys."""
