"""Closed-form, non-recursive estimates of the resource scaling exponent.

The estimators replace the step-by-step purification trace with interval
averages: the mean fidelity gain over the purification window gives the step
count, and the geometric mean of the acceptance probability gives the cost
per step.  Each average has two evaluation routes, adaptive quadrature
(ground truth) and an explicit antiderivative (fast path), which are required
to agree.
"""

import math
from dataclasses import dataclass

from .exceptions import InfeasibleError
from .fixed_points import BOUNDARY_PAD, find_fixed_points
from .maps import ErrorParams, purify, swap_fidelity
from .recursive import ScalingResult

__all__ = [
    "AnalyticOptions",
    "adaptive_simpson",
    "average_gain",
    "steps_estimate",
    "acceptance_geomean",
    "exponent_estimate",
    "optimal_target_fidelity",
    "small_error_exponent",
    "minimize_exponent",
]

QUADRATURE = "quadrature"
CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class AnalyticOptions:
    """Evaluation switches for the non-recursive estimators.

    The step count is real-valued by default; ``use_ceiling`` rounds it up to
    the next integer.  Every headline estimate is defined without the ceiling.
    """

    use_ceiling: bool = False
    integral_mode: str = QUADRATURE
    quad_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.integral_mode not in (QUADRATURE, CLOSED_FORM):
            raise ValueError(f"unknown integral_mode {self.integral_mode!r}")
        if not 0.0 < self.quad_tol <= 1e-6:
            raise ValueError(f"quad_tol must lie in (0, 1e-6], got {self.quad_tol}")


DEFAULT_OPTIONS = AnalyticOptions()


def adaptive_simpson(func, lower: float, upper: float, tol: float = 1e-10) -> float:
    """Adaptive Simpson quadrature with Richardson error control."""

    def recurse(a, b, fa, fm, fb, whole, eps, depth):
        mid = 0.5 * (a + b)
        lm, rm = 0.5 * (a + mid), 0.5 * (mid + b)
        flm, frm = func(lm), func(rm)
        left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        return recurse(a, mid, fa, flm, fm, left, 0.5 * eps, depth - 1) + recurse(
            mid, b, fm, frm, fb, right, 0.5 * eps, depth - 1
        )

    fa, fb = func(lower), func(upper)
    fm = func(0.5 * (lower + upper))
    whole = (upper - lower) / 6.0 * (fa + 4.0 * fm + fb)
    return recurse(lower, upper, fa, fm, fb, whole, tol, 48)


def _require_window(f0: float, ft: float, err: ErrorParams) -> None:
    if not f0 < ft:
        raise ValueError(f"expected f0 < ft, got f0={f0}, ft={ft}")
    fps = find_fixed_points(err)
    if not (
        fps.feasible
        and fps.lower + BOUNDARY_PAD < f0
        and ft < fps.upper - BOUNDARY_PAD
    ):
        raise InfeasibleError(
            f"({f0}, {ft}) is not strictly inside the purification fixed points"
        )


# --- explicit antiderivatives of the two interval averages -------------------


def _gain_antiderivative(f: float, err: ErrorParams) -> float:
    """Antiderivative of the purification gain (map output minus input).

    The gain is a cubic over the quadratic acceptance polynomial, so the
    integral splits into a polynomial, a logarithm of the acceptance
    polynomial and an arctangent (its discriminant is always negative).
    """
    eta = err.eta
    ms = eta * eta + (1.0 - eta) * (1.0 - eta)
    mc = eta * (1.0 - eta)
    u = (1.0 - err.eps_g) ** 2
    p_z = err.p_z
    q_xy = err.p_x + err.p_y
    # 9 * acceptance polynomial = a F^2 + b F + c
    a = 8.0 * ms - 16.0 * mc
    b = -4.0 * ms + 8.0 * mc
    c = 5.0 * ms + 8.0 * mc
    # 9 * (numerator of the map minus F * acceptance polynomial), a cubic with
    # leading coefficient -a; n2, n1, n0 are its remaining coefficients.
    n2 = 10.0 * u * ms - 4.0 * u * mc + 2.0 * (1.0 - u) * (q_xy - 3.0 * p_z) - b
    n1 = -2.0 * u * ms + 2.0 * u * mc + 2.0 * (1.0 - u) * (3.0 * p_z - 2.0 * q_xy) - c
    n0 = u * ms + 2.0 * u * mc + 2.0 * (1.0 - u) * q_xy
    quot = (n2 + b) / a
    lin = (n1 + c) - quot * b
    const = n0 - quot * c
    root = math.sqrt(4.0 * a * c - b * b)
    return (
        -0.5 * f * f
        + quot * f
        + lin / (2.0 * a) * math.log(a * f * f + b * f + c)
        + (const - lin * b / (2.0 * a)) * 2.0 / root * math.atan((2.0 * a * f + b) / root)
    )


def _log_acceptance_integral(f0: float, ft: float, eps_r: float) -> float:
    """Antiderivative of log(acceptance probability) over the window."""
    quad = 16.0 * eps_r**2 - 16.0 * eps_r + 4.0
    lin = 3.0 - 6.0 * eps_r
    total = 0.0
    for f_alpha, sign in ((f0, 1.0), (ft, -1.0)):
        accept = (
            8.0 * eps_r * (f_alpha - 1.0) * (2.0 * f_alpha + 1.0) * (eps_r - 1.0) / 9.0
            + (eps_r**2 + (eps_r - 1.0) ** 2)
            * (
                3.0 * f_alpha**2
                - 2.0 * f_alpha * (f_alpha - 1.0)
                + 5.0 * (f_alpha - 1.0) ** 2 / 3.0
            )
            / 3.0
        )
        total += sign * (-f_alpha) * math.log(accept)
        total += sign * (
            2.0 * lin / quad * math.atan(lin / ((f_alpha - 0.25) * quad))
            + 0.25 * math.log(lin**2 / quad**2 + (f_alpha - 0.25) ** 2)
        )
    return total - 2.0 * (ft - f0)


# --- interval averages -------------------------------------------------------


def _average_gain_raw(f0, ft, err, opts: AnalyticOptions) -> float:
    if opts.integral_mode == CLOSED_FORM:
        integral = _gain_antiderivative(ft, err) - _gain_antiderivative(f0, err)
    else:
        integral = adaptive_simpson(
            lambda f: purify(f, err).fidelity - f, f0, ft, opts.quad_tol
        )
    return integral / (ft - f0)


def _acceptance_geomean_raw(f0, ft, err, opts: AnalyticOptions) -> float:
    if opts.integral_mode == CLOSED_FORM:
        integral = _log_acceptance_integral(f0, ft, err.eps_r)
    else:
        integral = adaptive_simpson(
            lambda f: math.log(purify(f, err).p_accept), f0, ft, opts.quad_tol
        )
    return math.exp(integral / (ft - f0))


def average_gain(f0: float, ft: float, err: ErrorParams, opts: AnalyticOptions = DEFAULT_OPTIONS) -> float:
    """Mean fidelity improvement of one purification round over [f0, ft]."""
    _require_window(f0, ft, err)
    gain = _average_gain_raw(f0, ft, err, opts)
    if gain <= 0.0:
        raise InfeasibleError(f"purification gain is not positive on [{f0}, {ft}]")
    return gain


def steps_estimate(f0: float, ft: float, err: ErrorParams, opts: AnalyticOptions = DEFAULT_OPTIONS) -> float:
    """Window width divided by the mean gain: the non-recursive step count."""
    steps = (ft - f0) / average_gain(f0, ft, err, opts)
    return math.ceil(steps) if opts.use_ceiling else steps


def acceptance_geomean(f0: float, ft: float, err: ErrorParams, opts: AnalyticOptions = DEFAULT_OPTIONS) -> float:
    """Geometric mean of the purification acceptance probability over the window."""
    _require_window(f0, ft, err)
    mean = _acceptance_geomean_raw(f0, ft, err, opts)
    if not 0.0 < mean <= 1.0:
        raise ValueError(f"acceptance geometric mean left (0, 1]: {mean}")
    return mean


def _exponent_from_parts(steps: float, geomean: float, ps: float, method: str) -> ScalingResult:
    # computed in log space: near the feasibility boundary the step count and
    # with it the pair count blow up past the float range
    log2_pairs = steps * (1.0 - math.log2(ps * geomean))
    pairs = 2.0**log2_pairs if log2_pairs < 1000.0 else math.inf
    return ScalingResult(
        feasible=True,
        method=method,
        steps=steps,
        pairs_per_level=pairs,
        exponent=log2_pairs + 1.0,
    )


def exponent_estimate(
    f0: float,
    ft: float,
    err: ErrorParams,
    ps: float = 1.0,
    opts: AnalyticOptions = DEFAULT_OPTIONS,
) -> ScalingResult:
    """Non-recursive resource exponent for one nesting level; infeasibility in-band."""
    method = "analytic" if opts.integral_mode == QUADRATURE else "analytic-closed-form"
    try:
        steps = steps_estimate(f0, ft, err, opts)
        geomean = acceptance_geomean(f0, ft, err, opts)
    except InfeasibleError:
        return ScalingResult(feasible=False, method=method)
    return _exponent_from_parts(steps, geomean, ps, method)


# --- optimal target fidelity -------------------------------------------------


def optimal_target_fidelity(eps_g: float, eps_r: float | None = None) -> float:
    """Target fidelity minimising the resource exponent, in closed form.

    The reduced form (``eps_r`` omitted) neglects the read-out error, whose
    influence on the optimum is small; passing ``eps_r`` selects the longer
    expression that retains it.
    """
    if eps_g < 0.0:
        raise ValueError(f"eps_g must be non-negative, got {eps_g}")
    if eps_r is None:
        radicand = eps_g**2 + 0.15 * eps_g
        if radicand < 0.0:
            raise ValueError("negative radicand in optimal target fidelity")
        return (-1.16 * eps_g - 4.28 * math.sqrt(radicand) + 1.9) / (2.66 * eps_g + 1.9)
    radicand = (
        0.04 * eps_g**2 * eps_r**2
        + eps_g**2 * eps_r
        + 0.45 * eps_g**2
        - 0.04 * eps_g * eps_r**2
        - 0.4 * eps_g * eps_r
        + 0.07 * eps_g
        + 0.007 * eps_r**2
        - 0.001 * eps_r
    )
    if radicand < 0.0:
        raise ValueError("negative radicand in optimal target fidelity")
    num = 8.31 * eps_g * eps_r - 0.40 * eps_g - 3.35 * eps_r - 2.0 * math.sqrt(radicand) + 0.61
    den = 8.36 * eps_g * eps_r + 0.8 * eps_g - 3.37 * eps_r + 0.61
    return num / den


def small_error_exponent(eps_g: float) -> float:
    """Small-gate-error expansion of the optimal exponent; 3 is its floor."""
    if eps_g < 0.0:
        raise ValueError(f"eps_g must be non-negative, got {eps_g}")
    return 3.0 + 14.0 * math.sqrt(eps_g) + 38.0 * eps_g


# --- numerical minimisation over the target fidelity -------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
FT_MARGIN = 1e-4


def _feasible_target_window(err: ErrorParams) -> tuple[float, float]:
    fps = find_fixed_points(err)
    if not fps.feasible:
        raise InfeasibleError("no purification fixed points for these errors")
    lo, hi = fps.lower + FT_MARGIN, fps.upper - FT_MARGIN
    if lo >= hi or swap_fidelity(hi, 2, err) <= fps.lower:
        raise InfeasibleError("no target fidelity survives the swap for these errors")
    if swap_fidelity(lo, 2, err) <= fps.lower:
        a, b = lo, hi
        while b - a > 1e-12:
            mid = 0.5 * (a + b)
            if swap_fidelity(mid, 2, err) <= fps.lower:
                a = mid
            else:
                b = mid
        lo = b + FT_MARGIN
    if lo >= hi:
        raise InfeasibleError("feasible target window is empty")
    return lo, hi


def minimize_exponent(
    err: ErrorParams,
    ps: float = 1.0,
    opts: AnalyticOptions = DEFAULT_OPTIONS,
    ft_tol: float = 1e-5,
) -> tuple[float, ScalingResult]:
    """Numerically minimise the non-recursive exponent over the target fidelity.

    The post-swap fidelity is tied to the target through the exact two-link
    swap, not its linear approximation.  A coarse scan brackets the minimum
    (the exponent diverges at both window ends), then golden-section search
    refines it to ``ft_tol``.
    """
    lo, hi = _feasible_target_window(err)
    method = "analytic" if opts.integral_mode == QUADRATURE else "analytic-closed-form"

    def objective(ft: float) -> float:
        f0 = float(swap_fidelity(ft, 2, err))
        steps = (ft - f0) / _average_gain_raw(f0, ft, err, opts)
        if opts.use_ceiling:
            steps = math.ceil(steps)
        geomean = _acceptance_geomean_raw(f0, ft, err, opts)
        return steps * (1.0 - math.log2(ps * geomean)) + 1.0

    coarse = 64
    values = []
    for i in range(coarse):
        ft = lo + (hi - lo) * i / (coarse - 1)
        values.append((objective(ft), ft))
    _, best_ft = min(values)
    cell = (hi - lo) / (coarse - 1)
    a, b = max(lo, best_ft - cell), min(hi, best_ft + cell)

    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = objective(x1), objective(x2)
    while b - a > ft_tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = objective(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = objective(x2)
    ft_best = 0.5 * (a + b)
    f0_best = float(swap_fidelity(ft_best, 2, err))
    steps = (ft_best - f0_best) / _average_gain_raw(f0_best, ft_best, err, opts)
    if opts.use_ceiling:
        steps = math.ceil(steps)
    geomean = _acceptance_geomean_raw(f0_best, ft_best, err, opts)
    return ft_best, _exponent_from_parts(steps, geomean, ps, method)
