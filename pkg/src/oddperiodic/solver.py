"""Fixed-point solvers for u'' + g(u) = k(t) on the odd periodic space.

Two regimes, matching the two existence results the library implements:

* **Certified contraction.**  When sup|g'| < 2/T^2 the solution map
  u -> invert_second_derivative(k - g(u)) is a contraction with factor
  lambda = (T^2/2) * sup|g'| < 1, so plain Picard iteration converges to the
  unique odd periodic solution from any start, with step norms shrinking at
  least geometrically with ratio lambda.  :func:`certify` computes the
  certificate; :func:`solve_picard` runs the iteration.

* **Sublinear continuation.**  When g is merely sublinear (|g(x)| <= M(eps)
  + eps*|x| for declared majorant pairs), a solution still exists and every
  solution of the scaled family u = lam * map(u), lam in (0, 1], obeys the
  explicit a-priori bound of :func:`apriori_bound`.  The existence argument
  is non-constructive; :func:`solve_continuation` is its numerical analogue,
  climbing lam from 0 to 1 with warm starts and step halving.  Failure of
  the path following is reported honestly -- it never refutes existence.

Certificates always use the conservative operator-norm constant T^2/2.  The
per-mode analysis shows the true gains are much smaller, so Picard often
converges well outside the certified region; such runs are flagged
``uncertified_picard`` and their convergence is an observation, not a
guarantee.

Stopping is on the sup norm of the iteration step, not on the equation
residual; the residual is computed once at the end through the independent
oracle and reported.  No acceleration is applied, so the measured step-norm
ratios remain directly comparable to the certificate factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .funcspace import OddPeriodicFunction, sup_norm
from .operators import (
    NonFiniteNonlinearityError,
    fixed_point_map,
    inverse_norm_bound,
)
from .oracle import ode_residual

__all__ = [
    "ContractionCertificate",
    "SolveReport",
    "ProbeResult",
    "CertificateError",
    "MajorantError",
    "certify",
    "solve_picard",
    "solve_continuation",
    "apriori_bound",
    "uniqueness_probe",
]

DEFAULT_MODES = 256
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


class CertificateError(ValueError):
    """No usable derivative bound is declared for g."""


class MajorantError(ValueError):
    """No declared majorant pair is usable at this period."""


@dataclass(frozen=True)
class ContractionCertificate:
    """The uniqueness certificate: lambda = sup|g'| * T^2/2.

    ``holds`` is equivalent to sup|g'| < 2/T^2.  When it holds, Picard
    iteration is guaranteed to converge to the unique odd periodic solution
    and successive step norms contract at least by ``factor``.
    """

    lipschitz_g: float
    norm_bound: float
    factor: float
    holds: bool

    def as_dict(self) -> dict:
        return {
            "lipschitz_g": self.lipschitz_g,
            "norm_bound": self.norm_bound,
            "lambda": self.factor,
            "holds": self.holds,
        }


@dataclass
class SolveReport:
    """Everything a solve produced, converged or not.

    ``regime`` is one of ``certified_contraction``, ``uncertified_picard``
    or ``continuation``.  ``failure`` is None on success, else ``max_iter``,
    ``non_finite`` or ``step_underflow``; the best iterate is still
    returned.  ``max_iterate_norm`` tracks sup|u_j| over every iterate seen,
    which is what the a-priori bound is checked against.
    """

    solution: OddPeriodicFunction
    iterations: int
    step_norms: list[float]
    residual: float
    regime: str
    converged: bool
    failure: str | None = None
    lambda_path: list[float] = field(default_factory=list)
    apriori_bound: float | None = None
    max_iterate_norm: float = 0.0
    certificate: ContractionCertificate | None = None


@dataclass(frozen=True)
class ProbeResult:
    """Multi-start agreement check: ``agrees`` iff all converged solutions
    coincide within 100x the solve tolerance."""

    agrees: bool
    max_distance: float
    trials: int


def certify(problem) -> ContractionCertificate:
    """Evaluate the contraction certificate lambda = sup|g'| * T^2/2.

    Raises
    ------
    CertificateError
        If no derivative bound is declared for g (e.g. the cubic family).
    """
    bound = problem.gprime_bound
    if bound is None:
        raise CertificateError(
            f"no sup|g'| bound is available for g = {problem.g.name!r}; "
            "the contraction certificate cannot be evaluated")
    norm_bound = inverse_norm_bound(problem.period).certified_bound
    factor = float(bound) * norm_bound
    return ContractionCertificate(
        lipschitz_g=float(bound),
        norm_bound=norm_bound,
        factor=factor,
        holds=factor < 1.0,
    )


def _try_certificate(problem) -> ContractionCertificate | None:
    try:
        return certify(problem)
    except CertificateError:
        return None


def solve_picard(problem, *, initial_guess: OddPeriodicFunction | None = None,
                 tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                 modes: int = DEFAULT_MODES) -> SolveReport:
    """Picard iteration u_{j+1} = invert_second_derivative(k - g(u_j)).

    Runs until the step sup norm drops below ``tol``.  In the certified
    regime convergence is guaranteed; outside it, non-convergence is a
    reportable outcome (``converged=False`` with diagnostics), not an error.

    Parameters
    ----------
    initial_guess : OddPeriodicFunction, optional
        Starting iterate; defaults to the zero function.
    tol : float
        Step sup-norm stopping threshold.
    max_iter : int
        Iteration cap; exceeding it reports ``failure="max_iter"``.
    modes : int
        Working truncation order (raised to the forcing's order if needed).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    N = max(int(modes), problem.k.modes)
    if initial_guess is None:
        u = OddPeriodicFunction.zero(problem.period, N)
    else:
        u = initial_guess.with_modes(max(N, initial_guess.modes))

    cert = _try_certificate(problem)
    regime = ("certified_contraction" if cert is not None and cert.holds
              else "uncertified_picard")

    step_norms: list[float] = []
    max_norm = sup_norm(u)
    converged = False
    failure = None
    iterations = 0
    for iterations in range(1, max_iter + 1):
        try:
            u_next = fixed_point_map(problem, u)
        except NonFiniteNonlinearityError:
            failure = "non_finite"
            break
        step = sup_norm(u_next - u)
        step_norms.append(step)
        u = u_next
        max_norm = max(max_norm, sup_norm(u))
        if step < tol:
            converged = True
            break
    else:
        iterations = max_iter
    if not converged and failure is None:
        failure = "max_iter"

    residual = ode_residual(problem, u)
    return SolveReport(
        solution=u,
        iterations=iterations,
        step_norms=step_norms,
        residual=residual,
        regime=regime,
        converged=converged,
        failure=failure,
        max_iterate_norm=max_norm,
        certificate=cert,
    )


def _damped_picard(problem, u: OddPeriodicFunction, lam: float, tol: float,
                   max_iter: int) -> tuple[OddPeriodicFunction, bool, list[float], float]:
    """Fixed point of u = lam * map(u) by Picard with optional damping.

    Damping theta drops from 1 to 0.5 once the iteration oscillates (three
    consecutive direction reversals of the coefficient step).  Returns
    (iterate, converged, step_norms, max_iterate_norm).
    """
    theta = 1.0
    prev_step = None
    reversals = 0
    step_norms: list[float] = []
    max_norm = sup_norm(u)
    for _ in range(max_iter):
        target = lam * fixed_point_map(problem, u)
        step_vec = target - u
        if prev_step is not None and theta == 1.0:
            # align coefficient arrays; lengths match within one stage
            n = min(step_vec.modes, prev_step.modes)
            if float(np.dot(step_vec.coeffs[:n], prev_step.coeffs[:n])) < 0.0:
                reversals += 1
                if reversals >= 3:
                    theta = 0.5
            else:
                reversals = 0
        prev_step = step_vec
        u = u + theta * step_vec
        step = theta * sup_norm(step_vec)
        step_norms.append(step)
        max_norm = max(max_norm, sup_norm(u))
        if step < tol:
            return u, True, step_norms, max_norm
    return u, False, step_norms, max_norm


def solve_continuation(problem, *, lambda_step: float = 0.1,
                       tol: float = DEFAULT_TOL,
                       max_iter_per_step: int = 5000,
                       modes: int = DEFAULT_MODES,
                       min_lambda_step: float = 1e-4) -> SolveReport:
    """Homotopy in the scaling of the solution map: u = lam * map(u).

    Climbs lam from 0 (where u = 0) to 1 (the original problem), warm
    starting each stage from the previous solution and halving the step on
    stage failure.  The step aborting below ``min_lambda_step`` is reported
    as ``failure="step_underflow"`` -- the existence theory guarantees a
    solution, not that this path reaches it.

    When the declared majorants admit an a-priori bound, every accepted
    stage solution is checked against it; a violation would mean numerical
    breakdown and raises ``RuntimeError``.
    """
    if not (0 < lambda_step <= 1):
        raise ValueError("lambda_step must be in (0, 1]")
    try:
        bound = apriori_bound(problem)
    except MajorantError:
        if not problem.majorants:
            raise MajorantError(
                "continuation requires a sublinearity declaration: g must "
                f"carry majorant pairs, but {problem.g.name!r} has none")
        bound = None

    N = max(int(modes), problem.k.modes)
    u = OddPeriodicFunction.zero(problem.period, N)
    lam = 0.0
    path: list[float] = []
    step = float(lambda_step)
    max_norm = 0.0
    step_norms: list[float] = []
    converged = False
    failure = None
    iterations = 0
    while True:
        lam_next = lam + step
        if lam_next >= 1.0 - 1e-12:  # snap the endpoint: accumulation dust
            lam_next = 1.0
        try:
            u_trial, ok, hist, stage_max = _damped_picard(
                problem, u, lam_next, tol, max_iter_per_step)
        except NonFiniteNonlinearityError:
            # a blown-up stage is just a failed stage: retry smaller
            ok, u_trial, hist, stage_max = False, u, [], max_norm
        iterations += len(hist)
        max_norm = max(max_norm, stage_max)
        if ok:
            lam = lam_next
            u = u_trial
            path.append(lam)
            step_norms = hist
            if bound is not None and sup_norm(u) > bound * (1 + 1e-9) + 10 * tol:
                raise RuntimeError(
                    "accepted continuation solution violates the a-priori "
                    "bound; this indicates numerical breakdown")
            if lam >= 1.0:
                converged = True
                break
        else:
            step *= 0.5
            if step < min_lambda_step:
                failure = "step_underflow"
                break

    residual = ode_residual(problem, u)
    return SolveReport(
        solution=u,
        iterations=iterations,
        step_norms=step_norms,
        residual=residual,
        regime="continuation",
        converged=converged,
        failure=failure,
        lambda_path=path,
        apriori_bound=bound,
        max_iterate_norm=max_norm,
        certificate=_try_certificate(problem),
    )


def apriori_bound(problem) -> float:
    """Explicit bound on sup|u| for every solution of the scaled family.

    For each declared majorant pair (eps, M) with eps < 2/T^2, every u
    solving u = lam * map(u) for some lam in (0, 1] satisfies

        sup|u| <= (T^2/2) * (sup|k| + M) / (1 - eps * T^2/2),

    and the returned value is the minimum over usable pairs.

    Raises
    ------
    MajorantError
        If no pair is declared or every declared eps >= 2/T^2.
    """
    nb = inverse_norm_bound(problem.period).certified_bound
    k_norm = sup_norm(problem.k)
    best = None
    for eps, M in problem.majorants:
        denom = 1.0 - eps * nb
        if denom <= 0.0:
            continue
        value = nb * (k_norm + M) / denom
        if best is None or value < best:
            best = value
    if best is None:
        raise MajorantError(
            f"no usable majorant at period {problem.period:g}: need a "
            f"declared pair with eps < {2.0 / problem.period ** 2:.6g}")
    return best


def uniqueness_probe(problem, trials: int, *, tol: float = DEFAULT_TOL,
                     seed: int = 0, modes: int = DEFAULT_MODES) -> ProbeResult:
    """Empirical uniqueness check in the certified regime.

    Runs :func:`solve_picard` from ``trials`` random initial guesses
    (coefficients uniform in [-10, 10] on modes 1..8, seeded for
    reproducibility) and measures the maximum pairwise sup-norm distance of
    the converged solutions.

    Raises
    ------
    ValueError
        If the certificate does not hold (the guarantee being probed would
        not apply) or trials < 2.
    """
    if trials < 2:
        raise ValueError("trials must be >= 2")
    cert = certify(problem)
    if not cert.holds:
        raise ValueError(
            f"uniqueness probe requires a holding certificate; lambda = "
            f"{cert.factor:.4g} >= 1")
    rng = np.random.default_rng(seed)
    solutions = []
    for _ in range(trials):
        guess = OddPeriodicFunction(problem.period, rng.uniform(-10.0, 10.0, 8))
        report = solve_picard(problem, initial_guess=guess, tol=tol, modes=modes)
        if not report.converged:
            raise RuntimeError(
                "probe solve failed to converge in the certified regime; "
                f"failure={report.failure!r}")
        solutions.append(report.solution)
    max_distance = 0.0
    for i in range(trials):
        for j in range(i + 1, trials):
            max_distance = max(max_distance, sup_norm(solutions[i] - solutions[j]))
    return ProbeResult(agrees=max_distance <= 100.0 * tol,
                       max_distance=max_distance, trials=trials)
