"""The second-derivative operator on odd periodic functions and its inverse.

On the full space of T-periodic functions, u -> u'' is resonant: constants
are in its kernel and only mean-zero functions are in its range.  Restricted
to odd functions the kernel is trivial and the operator acts diagonally on
the sine basis, mode n picking up the factor -(2*pi*n/T)^2, so inversion is
exact per mode.  The certified sup-norm bound on the inverse is T^2/2, which
is what every downstream certificate uses; the actual per-mode gains are far
smaller, and that slack is reported, never exploited.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .funcspace import OddPeriodicFunction, from_samples, grid_samples, sup_norm

__all__ = [
    "OperatorNormBound",
    "NonFiniteNonlinearityError",
    "inverse_norm_bound",
    "invert_second_derivative",
    "nonlinear_rhs",
    "fixed_point_map",
]

_TWO_PI = 2.0 * np.pi


class NonFiniteNonlinearityError(ArithmeticError):
    """g(u) evaluated to inf/nan at some grid node."""


@dataclass(frozen=True)
class OperatorNormBound:
    """Certified sup-norm data for the inverse of u -> u''.

    Attributes
    ----------
    period : float
        The period T.
    certified_bound : float
        T^2/2, the bound used by every certificate.
    """

    period: float
    certified_bound: float

    def per_mode_gain(self, n: int) -> float:
        """(T/(2*pi*n))^2: the exact gain of the inverse on sine mode n."""
        if n < 1:
            raise ValueError("mode index must be >= 1")
        return (self.period / (_TWO_PI * n)) ** 2


def inverse_norm_bound(period: float) -> OperatorNormBound:
    """Certified sup-norm bound T^2/2 for the inverse operator.

    Raises
    ------
    ValueError
        If period <= 0.
    """
    period = float(period)
    if not np.isfinite(period) or period <= 0.0:
        raise ValueError(f"period must be positive, got {period}")
    return OperatorNormBound(period=period, certified_bound=period * period / 2.0)


def invert_second_derivative(f: OddPeriodicFunction) -> OddPeriodicFunction:
    """The unique odd periodic u with u'' = f.

    Diagonal in the sine basis: b_n(u) = -(T/(2*pi*n))^2 * b_n(f).  No mode
    is exceptional because the basis has no constant term -- this is exactly
    the non-resonance that makes the fixed-point formulation well posed.
    """
    n = np.arange(1, f.modes + 1)
    gain = (f.period / (_TWO_PI * n)) ** 2
    return OddPeriodicFunction(f.period, -gain * f.coeffs)


def nonlinear_rhs(problem, u: OddPeriodicFunction) -> OddPeriodicFunction:
    """k - g(u) as an odd periodic function at u's truncation order.

    g(u) is sampled on a 2x oversampled grid (4N points for N modes) to
    absorb the spectral spreading of the composition, then projected back to
    N modes.  The samples are checked for odd symmetry before projection;
    failure means g is not actually odd and the problem definition is bad.

    Raises
    ------
    NonFiniteNonlinearityError
        If g produces inf/nan at any node.
    OddSymmetryError
        If the sampled g(u(.)) values are not odd-symmetric within
        1e-10 * (1 + sup|u|).
    """
    N = u.modes
    su = grid_samples(u, 4 * N)
    with np.errstate(over="ignore", invalid="ignore"):
        gu = problem.g.value(su)
    # the 1e300 cap keeps the analysis sums representable
    if not np.all(np.isfinite(gu)) or np.max(np.abs(gu)) > 1e300:
        raise NonFiniteNonlinearityError(
            "g(u) is non-finite (or beyond overflow scale) on the sampling "
            "grid; the iterate has left the region where this nonlinearity "
            "can be evaluated"
        )
    # the relative term admits plain rounding at the scale of g(u) (some
    # vectorized kernels are not bitwise sign-symmetric); a genuinely
    # non-odd g sits orders of magnitude above it
    tol = 1e-10 * (1.0 + sup_norm(u)) + 1e-13 * float(np.max(np.abs(gu)))
    g_of_u = from_samples(gu, u.period, modes=N, tol=tol)
    return problem.k - g_of_u


def fixed_point_map(problem, u: OddPeriodicFunction) -> OddPeriodicFunction:
    """One application of the solution map: invert u'' = k - g(u).

    Solutions of u'' + g(u) = k are exactly the fixed points of this map.
    """
    return invert_second_derivative(nonlinear_rhs(problem, u))
