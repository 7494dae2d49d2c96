"""Exception hierarchy shared by the closed-form tracks and the Fock oracle."""


class ZenoDistillError(Exception):
    """Base class for every error raised by this package."""


class RegimeError(ZenoDistillError):
    """The single-step kernel is outside the distilling regime."""


class DegenerateKernel(RegimeError):
    """Squeeze strength G vanishes, so q_tilde = ... + i sin/G is undefined."""


class MarginalKernel(RegimeError):
    """|lambda| = 1: no eigenvalue gap, the N-step closed forms do not converge."""


class QuadratureNotConverged(ZenoDistillError):
    """Doubling the quadrature order moved the result by more than the tolerance,
    or the integrand does not decay."""


class TruncationTooSmall(ZenoDistillError):
    """The truncated number basis loses more norm than allowed."""


class GapTooSmall(ZenoDistillError):
    """The two largest eigenvalue moduli of the projected kernel coincide."""
