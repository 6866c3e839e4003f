"""Fixed points of the error-modelled purification map and feasibility tests."""

from dataclasses import dataclass

import numpy as np

from .exceptions import InfeasibleError
from .maps import ErrorParams, purify, swap_fidelity

__all__ = [
    "FixedPointResult",
    "find_fixed_points",
    "feasible_for",
    "protocol_feasible",
    "gate_error_threshold",
]

SCAN_LOWER = 0.25
SCAN_STEP = 1e-3
ROOT_TOL = 1e-12
# Roots are located to ROOT_TOL; points this close to a root count as outside
# the open interval between the fixed points.
BOUNDARY_PAD = 1e-9


@dataclass(frozen=True)
class FixedPointResult:
    """The largest two fidelities left invariant by the purification map.

    ``feasible`` is False when fewer than two crossings exist (including the
    tangent case, where the purification gain vanishes and no finite protocol
    converges).
    """

    feasible: bool
    lower: float | None = None
    upper: float | None = None
    residuals: tuple[float, ...] = ()


def _gain(f: float, err: ErrorParams) -> float:
    return purify(f, err).fidelity - f


def _bisect_root(lo: float, hi: float, g_lo: float, err: ErrorParams) -> float:
    # g changes sign on [lo, hi]; shrink the bracket below ROOT_TOL.
    while hi - lo > ROOT_TOL:
        mid = 0.5 * (lo + hi)
        g_mid = _gain(mid, err)
        if g_mid == 0.0:
            return mid
        if (g_mid > 0.0) == (g_lo > 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_fixed_points(err: ErrorParams, scan_step: float = SCAN_STEP) -> FixedPointResult:
    """Locate the largest two solutions of ``purify(F) == F`` on (1/4, 1].

    The map is a ratio of quadratics in F, so the fixed-point equation is a
    cubic; a dense scan brackets every sign change and bisection refines each
    bracket.  Grid points that are exact zeros (the error-free map at 1/2 and
    1) are kept as roots directly.
    """
    lo = SCAN_LOWER + scan_step
    count = int(round((1.0 - lo) / scan_step)) + 1
    grid = np.linspace(lo, 1.0, count)
    gains = purify(grid, err).fidelity - grid

    roots: list[float] = []
    for i in range(count):
        if gains[i] == 0.0:
            roots.append(float(grid[i]))
    for i in range(count - 1):
        if gains[i] == 0.0 or gains[i + 1] == 0.0:
            continue
        if (gains[i] > 0.0) != (gains[i + 1] > 0.0):
            roots.append(_bisect_root(float(grid[i]), float(grid[i + 1]), float(gains[i]), err))

    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)

    if len(deduped) < 2:
        return FixedPointResult(feasible=False)
    lower, upper = deduped[-2], deduped[-1]
    residuals = (abs(_gain(lower, err)), abs(_gain(upper, err)))
    return FixedPointResult(feasible=True, lower=lower, upper=upper, residuals=residuals)


def feasible_for(f0: float, ft: float, err: ErrorParams) -> bool:
    """True when purification can carry ``f0`` up to ``ft``.

    Both fidelities must lie strictly inside the open interval between the
    two fixed points; points within the root tolerance of a fixed point are
    treated as outside.
    """
    if f0 > ft:
        raise ValueError(f"expected f0 <= ft, got f0={f0}, ft={ft}")
    fps = find_fixed_points(err)
    if not fps.feasible:
        return False
    return fps.lower + BOUNDARY_PAD < f0 and ft < fps.upper - BOUNDARY_PAD


def protocol_feasible(err: ErrorParams) -> bool:
    """True when some target fidelity survives the swap-then-purify cycle.

    Swapping at a target just below the upper fixed point must land above the
    lower fixed point, otherwise no target fidelity is maintainable.
    """
    fps = find_fixed_points(err)
    if not fps.feasible:
        return False
    return swap_fidelity(fps.upper, 2, err) > fps.lower


def gate_error_threshold(eps_r: float = 0.0, tol: float = 1e-4, upper: float = 0.1) -> float:
    """Largest gate error (to ``tol``) for which purification fixed points exist.

    Bisects the feasible/infeasible classification of :func:`find_fixed_points`
    in the gate error at fixed read-out error.
    """
    lo = 0.0
    if not find_fixed_points(ErrorParams(eps_g=lo, eps_r=eps_r)).feasible:
        raise InfeasibleError(f"purification infeasible even at eps_g=0 for eps_r={eps_r}")
    hi = upper
    if find_fixed_points(ErrorParams(eps_g=hi, eps_r=eps_r)).feasible:
        raise ValueError(f"still feasible at eps_g={hi}; raise the search bound")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if find_fixed_points(ErrorParams(eps_g=mid, eps_r=eps_r)).feasible:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
