"""Odd and even T-periodic functions as truncated trigonometric series.

The working space is the set of continuous, odd, T-periodic functions,
represented here as finite sine series

    u(t) = sum_{n=1}^{N} b_n sin(2*pi*n*t / T).

Oddness, T-periodicity and zero mean are structural: no sine polynomial can
violate them, so membership never has to be checked after construction.
Truncation order N is the single approximation knob.

Grids are uniform over one full period, t_j = j*T/P for j = 0..P-1.  A grid
of P points resolves sine modes 1..P/2-1 exactly; mode P/2 vanishes
identically on that grid (it aliases to zero), so recovering all N modes of a
function requires sampling on at least 2*(N+1) points.

Synthesis/analysis tables are built with integer phase reduction and explicit
half-grid mirroring, which makes grid samples of any series odd-symmetric to
the last bit.  Point evaluation reduces the argument to [-T/2, T/2] and pulls
the sign out front, so ``u(-t) == -u(t)`` holds exactly in floating point.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "OddPeriodicFunction",
    "EvenPeriodicFunction",
    "OddSymmetryError",
    "from_samples",
    "grid_samples",
    "sup_norm",
    "mean",
    "odd_symmetry_defect",
    "differentiate",
]

_TWO_PI = 2.0 * np.pi

# Above this grid size, synthesis bypasses the table cache and evaluates
# pointwise in chunks (keeps the cache from holding huge matrices).
_TABLE_POINT_LIMIT = 16384

_sine_tables: dict[tuple[int, int], np.ndarray] = {}


class OddSymmetryError(ValueError):
    """Samples are not odd-periodic within tolerance; the data is outside
    the working space."""

    def __init__(self, defect: float, tol: float):
        self.defect = float(defect)
        self.tol = float(tol)
        super().__init__(
            f"odd-symmetry defect {defect:.3e} exceeds tolerance {tol:.3e}; "
            "samples do not come from an odd periodic function"
        )


def _sine_table(n_points: int, n_modes: int) -> np.ndarray:
    """Synthesis matrix B with B[j, n-1] = sin(2*pi*n*j / n_points).

    Entries are computed from the integer phase q = (2*j*n) mod (2*P), which
    keeps every sine argument in [0, 2*pi) and lets the exact zeros of the
    basis (q = 0 or P) be forced to 0.0.  Rows j > P/2 are written as the
    negation of their mirror row, so B[P-j] == -B[j] bitwise.
    """
    key = (n_points, n_modes)
    table = _sine_tables.get(key)
    if table is not None:
        return table
    P = n_points
    if P % 2:
        raise ValueError("grid size must be even")
    half = P // 2
    j = np.arange(half + 1, dtype=np.int64)
    n = np.arange(1, n_modes + 1, dtype=np.int64)
    q = (2 * np.outer(j, n)) % (2 * P)
    top = np.sin(np.pi * q.astype(float) / P)
    top[(q == 0) | (q == P)] = 0.0
    table = np.empty((P, n_modes))
    table[: half + 1] = top
    table[half + 1 :] = -top[1:half][::-1]
    table.flags.writeable = False
    _sine_tables[key] = table
    return table


class _PeriodicSeries:
    """Shared plumbing for sine (odd) and cosine (even) series."""

    parity = ""

    def __init__(self, period: float, coeffs) -> None:
        period = float(period)
        if not np.isfinite(period) or period <= 0.0:
            raise ValueError(f"period must be positive and finite, got {period}")
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise ValueError("coeffs must be a 1-d sequence with at least one mode")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coeffs must be finite")
        coeffs.flags.writeable = False
        self._period = period
        self._coeffs = coeffs

    @property
    def period(self) -> float:
        return self._period

    @property
    def coeffs(self) -> np.ndarray:
        """Mode coefficients for n = 1..N (read-only)."""
        return self._coeffs

    @property
    def modes(self) -> int:
        """Truncation order N."""
        return self._coeffs.size

    def _reduce(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map t to s in [-T/2, T/2] by periodicity; return (|s|, sign(s)).

        Round-half-even is symmetric under negation, so s(-t) == -s(t)
        bitwise and parity of the evaluation is exact.
        """
        T = self._period
        s = t - T * np.round(t / T)
        return np.abs(s), np.sign(s)

    def _synth_at(self, x: np.ndarray, kernel) -> np.ndarray:
        """Evaluate sum_n c_n * kernel(2*pi*n*x/T) in memory-bounded chunks."""
        freqs = _TWO_PI * np.arange(1, self.modes + 1) / self._period
        flat = x.ravel()
        out = np.empty(flat.size)
        block = max(1, 2_000_000 // self.modes)
        for lo in range(0, flat.size, block):
            hi = min(lo + block, flat.size)
            out[lo:hi] = kernel(np.outer(flat[lo:hi], freqs)) @ self._coeffs
        return out.reshape(x.shape)

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(period={self._period!r}, modes={self.modes}, "
            f"coeffs={np.array2string(self._coeffs, threshold=6)})"
        )


class OddPeriodicFunction(_PeriodicSeries):
    """A truncated sine series u(t) = sum b_n sin(2*pi*n*t/T).

    Instances are immutable and safe to share between threads.  Every
    instance is odd, T-periodic and has zero mean by construction, and
    satisfies u(0) = u(T/2) = 0.

    Parameters
    ----------
    period : float
        The period T > 0.
    coeffs : array_like
        Sine coefficients b_1..b_N.
    """

    parity = "odd"

    def __call__(self, t):
        """Evaluate at scalar or array ``t`` (reduced mod T).

        The reduction makes ``u(-t) == -u(t)`` exact, not just up to
        rounding.
        """
        arr = np.asarray(t, dtype=float)
        x, sign = self._reduce(arr)
        val = sign * self._synth_at(x, np.sin)
        return float(val) if arr.ndim == 0 else val

    @classmethod
    def zero(cls, period: float, modes: int = 1) -> "OddPeriodicFunction":
        """The zero element with the requested truncation order."""
        return cls(period, np.zeros(max(int(modes), 1)))

    def with_modes(self, modes: int) -> "OddPeriodicFunction":
        """Copy padded with zero modes or truncated to ``modes``."""
        modes = int(modes)
        if modes < 1:
            raise ValueError("modes must be >= 1")
        out = np.zeros(modes)
        keep = min(modes, self.modes)
        out[:keep] = self._coeffs[:keep]
        return OddPeriodicFunction(self._period, out)

    def _combine(self, other, sign: float) -> "OddPeriodicFunction":
        if not isinstance(other, OddPeriodicFunction):
            return NotImplemented
        if other._period != self._period:
            raise ValueError(
                f"period mismatch: {self._period!r} vs {other._period!r}"
            )
        n = max(self.modes, other.modes)
        out = np.zeros(n)
        out[: self.modes] = self._coeffs
        out[: other.modes] += sign * other._coeffs
        return OddPeriodicFunction(self._period, out)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return OddPeriodicFunction(self._period, -self._coeffs)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return OddPeriodicFunction(self._period, float(scalar) * self._coeffs)

    __rmul__ = __mul__


class EvenPeriodicFunction(_PeriodicSeries):
    """A truncated cosine series sum a_n cos(2*pi*n*t/T), mean zero.

    Returned by :func:`differentiate` with order 1: the derivative of an odd
    function is even, and the parity tag records that.  Evaluation is
    structurally even: ``f(-t) == f(t)`` exactly.
    """

    parity = "even"

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        x, _ = self._reduce(arr)
        val = self._synth_at(x, np.cos)
        return float(val) if arr.ndim == 0 else val


def grid_samples(f, n_points: int) -> np.ndarray:
    """Samples of ``f`` at the uniform grid t_j = j*T/P, j = 0..P-1.

    For odd series the cached synthesis table is used (exactly
    odd-symmetric samples); other parities fall back to point evaluation.
    """
    P = int(n_points)
    if P < 2 or P % 2:
        raise ValueError("n_points must be even and >= 2")
    if isinstance(f, OddPeriodicFunction) and P <= _TABLE_POINT_LIMIT:
        return _sine_table(P, f.modes) @ f.coeffs
    t = np.arange(P) * (f.period / P)
    return f(t)


def from_samples(samples, period: float, *, modes: int | None = None,
                 tol: float | None = None) -> OddPeriodicFunction:
    """Sine-analyze uniform full-period samples of an odd periodic function.

    Parameters
    ----------
    samples : array_like
        Values at t_j = j*T/P, j = 0..P-1, with P even and >= 4.
    period : float
        The period T.
    modes : int, optional
        Truncation order of the result; defaults to P/2.  Mode P/2 is
        invisible on this grid and always comes back 0.
    tol : float, optional
        Odd-symmetry rejection threshold; defaults to 1e-8 * max|sample|.

    Returns
    -------
    OddPeriodicFunction
        The interpolating sine polynomial: round trips reproduce the input
        samples of any sine polynomial of order <= P/2 to machine precision.

    Raises
    ------
    OddSymmetryError
        If the samples fail the odd-symmetry check (the data is not in the
        working space).
    ValueError
        For non-finite samples, odd or too-short sample counts, or a
        requested order above P/2.
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1 or s.size < 4 or s.size % 2:
        raise ValueError("need a 1-d array with an even number (>= 4) of samples")
    if not np.all(np.isfinite(s)):
        raise ValueError("samples must be finite")
    defect = odd_symmetry_defect(s)
    if tol is None:
        tol = 1e-8 * float(np.max(np.abs(s)))
    if defect > tol:
        raise OddSymmetryError(defect, tol)
    P = s.size
    if modes is None:
        modes = P // 2
    modes = int(modes)
    if not 1 <= modes <= P // 2:
        raise ValueError(f"modes must be in 1..{P // 2} for {P} samples")
    coeffs = (2.0 / P) * (_sine_table(P, modes).T @ s)
    return OddPeriodicFunction(period, coeffs)


def odd_symmetry_defect(samples) -> float:
    """max_j |u(t_j) + u(T - t_j)| over a uniform full-period grid.

    Zero (up to rounding) exactly for samples of odd periodic functions.
    """
    s = np.asarray(samples, dtype=float)
    if s.ndim != 1 or s.size < 2 or s.size % 2:
        raise ValueError("need a 1-d array with an even number of samples")
    mirrored = np.roll(s[::-1], 1)  # index j -> (P - j) mod P
    return float(np.max(np.abs(s + mirrored)))


def mean(f) -> float:
    """Mean (1/T) * integral of f over one period, by trapezoidal quadrature.

    Accepts an odd/even series or raw uniform-grid samples over one full
    period.  On a periodic uniform grid the trapezoidal rule reduces to the
    plain sample average.  For any odd series the result is zero up to
    rounding.
    """
    if isinstance(f, _PeriodicSeries):
        samples = grid_samples(f, max(4 * f.modes, 8))
    else:
        samples = np.asarray(f, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("need a 1-d array of samples over one period")
    return float(np.mean(samples))


def sup_norm(f, refinement: int = 8) -> float:
    """Grid maximum of |f| over ``refinement * modes`` equispaced points.

    A lower bound on the true sup norm; the refinement factor trades cost
    for sharpness (the exact maximum of a trigonometric polynomial would
    need root finding).
    """
    refinement = int(refinement)
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    P = max(refinement * f.modes, 8)
    P += P % 2
    return float(np.max(np.abs(grid_samples(f, P))))


def differentiate(f: OddPeriodicFunction, order: int):
    """Spectral derivative of an odd series, with explicit parity tags.

    Order 1 returns an :class:`EvenPeriodicFunction` (cosine series with
    coefficients b_n * (2*pi*n/T)); order 2 returns an
    :class:`OddPeriodicFunction` with coefficients -(2*pi*n/T)^2 * b_n.
    """
    if not isinstance(f, OddPeriodicFunction):
        raise TypeError("differentiate expects an OddPeriodicFunction")
    w = _TWO_PI * np.arange(1, f.modes + 1) / f.period
    if order == 1:
        return EvenPeriodicFunction(f.period, w * f.coeffs)
    if order == 2:
        return OddPeriodicFunction(f.period, -(w * w) * f.coeffs)
    raise ValueError("order must be 1 or 2")
