"""Recursive (iterated) resource estimates for the nested repeater protocol.

The purification trace is the ground truth that the closed-form estimators
approximate: it records every successful purification step from the post-swap
fidelity up to the target.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .exceptions import InfeasibleError, NonConvergenceError
from .fixed_points import feasible_for, find_fixed_points
from .maps import ErrorParams, purify, swap_fidelity

__all__ = [
    "ProtocolParams",
    "TraceStep",
    "PurificationTrace",
    "ScalingResult",
    "purification_trace",
    "pairs_per_level",
    "resource_exponent",
    "optimal_recursive_exponent",
    "total_resources",
    "entanglement_rate",
]

MAX_TRACE_STEPS = 10**6


@dataclass(frozen=True)
class ProtocolParams:
    """One nesting level of the protocol: swap to ``f0``, purify back to ``ft``.

    When ``f0`` is omitted it is derived by swapping two links of fidelity
    ``ft``, which ties the whole level to the single target fidelity.
    Swapping is deterministic by default (``ps = 1``).
    """

    ft: float
    err: ErrorParams
    f0: float | None = None
    ps: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.ft <= 1.0:
            raise ValueError(f"ft must lie in (0, 1], got {self.ft}")
        if not 0.0 < self.ps <= 1.0:
            raise ValueError(f"ps must lie in (0, 1], got {self.ps}")
        if self.f0 is None:
            object.__setattr__(self, "f0", float(swap_fidelity(self.ft, 2, self.err)))
        if not self.f0 < self.ft:
            raise ValueError(f"expected f0 < ft, got f0={self.f0}, ft={self.ft}")


class TraceStep(NamedTuple):
    fidelity_in: float
    fidelity_out: float
    p_accept: float


@dataclass(frozen=True)
class PurificationTrace:
    steps: tuple[TraceStep, ...]

    @property
    def step_count(self) -> int:
        return len(self.steps)

    @property
    def final_fidelity(self) -> float:
        return self.steps[-1].fidelity_out


@dataclass(frozen=True)
class ScalingResult:
    """Resource scaling of one nesting level.

    ``exponent`` is the polynomial degree relating base-pair consumption to
    path length; it equals ``log2(pairs_per_level) + 1``.  When infeasible all
    numeric fields are None; presentation layers may render 0 or a cap, the
    library does not.
    """

    feasible: bool
    method: str
    steps: float | None = None
    pairs_per_level: float | None = None
    exponent: float | None = None


def _iterate_steps(f0: float, ft: float, err: ErrorParams) -> list[TraceStep]:
    steps: list[TraceStep] = []
    f = f0
    while f < ft:
        if len(steps) >= MAX_TRACE_STEPS:
            raise NonConvergenceError("purification trace exceeded step limit")
        f_next, p_accept = purify(f, err)
        steps.append(TraceStep(f, float(f_next), float(p_accept)))
        f = float(f_next)
    return steps


def _result_from_steps(steps: list[TraceStep], ps: float) -> ScalingResult:
    prod = 1.0
    for step in steps:
        prod *= step.p_accept
    pairs = 2.0 ** len(steps) / (ps ** len(steps) * prod)
    return ScalingResult(
        feasible=True,
        method="recursive",
        steps=len(steps),
        pairs_per_level=pairs,
        exponent=math.log2(pairs) + 1.0,
    )


def purification_trace(params: ProtocolParams) -> PurificationTrace:
    """Iterate the purification map from ``f0`` until the target is reached.

    The final step keeps its overshoot; there is no fractional last step.
    """
    if not feasible_for(params.f0, params.ft, params.err):
        raise InfeasibleError(
            f"({params.f0}, {params.ft}) lies outside the purification fixed points"
        )
    return PurificationTrace(tuple(_iterate_steps(params.f0, params.ft, params.err)))


def pairs_per_level(params: ProtocolParams) -> float:
    """Expected pairs consumed per purified link of one nesting level."""
    trace = purification_trace(params)
    prod = 1.0
    for step in trace.steps:
        prod *= step.p_accept
    return 2.0**trace.step_count / (params.ps**trace.step_count * prod)


def resource_exponent(params: ProtocolParams) -> ScalingResult:
    """Exact resource exponent from the iterated trace; infeasibility in-band."""
    try:
        trace = purification_trace(params)
    except InfeasibleError:
        return ScalingResult(feasible=False, method="recursive")
    return _result_from_steps(list(trace.steps), params.ps)


def optimal_recursive_exponent(
    err: ErrorParams, ps: float = 1.0, grid: int = 512
) -> tuple[float, ScalingResult]:
    """Target fidelity minimising the recursive exponent, by two-stage grid scan.

    The recursive exponent is piecewise in the target fidelity (the step count
    is an integer), so a smooth optimiser is not applicable; a fine scan inside
    the feasible target window is.  At larger errors the minimum can sit far
    from the closed-form optimal target.
    """
    fps = find_fixed_points(err)
    if not fps.feasible:
        raise InfeasibleError("no purification fixed points for these errors")
    margin = 1e-4
    lo, hi = fps.lower + margin, fps.upper - margin
    if lo >= hi or swap_fidelity(hi, 2, err) <= fps.lower:
        raise InfeasibleError("swapping drops every target below the lower fixed point")
    # Restrict to targets whose post-swap fidelity is still purifiable.
    if swap_fidelity(lo, 2, err) <= fps.lower:
        swap_lo, swap_hi = lo, hi
        while swap_hi - swap_lo > 1e-12:
            mid = 0.5 * (swap_lo + swap_hi)
            if swap_fidelity(mid, 2, err) <= fps.lower:
                swap_lo = mid
            else:
                swap_hi = mid
        lo = swap_hi + margin
    if lo >= hi:
        raise InfeasibleError("feasible target window is empty")

    def scan(a: float, b: float, n: int) -> tuple[float, ScalingResult]:
        best_ft, best = None, None
        for i in range(n):
            ft = a + (b - a) * i / (n - 1)
            f0 = float(swap_fidelity(ft, 2, err))
            if not fps.lower < f0 < ft:
                continue
            result = _result_from_steps(_iterate_steps(f0, ft, err), ps)
            if best is None or result.exponent < best.exponent:
                best_ft, best = ft, result
        if best is None:
            raise InfeasibleError("no feasible target fidelity in the scan window")
        return best_ft, best

    coarse_ft, _ = scan(lo, hi, grid)
    cell = (hi - lo) / (grid - 1)
    return scan(max(lo, coarse_ft - cell), min(hi, coarse_ft + cell), grid)


def total_resources(path_links: float, exponent: float) -> float:
    """Base-level pairs consumed to span ``path_links`` fundamental links."""
    if path_links < 1:
        raise ValueError(f"path_links must be >= 1, got {path_links}")
    return float(path_links) ** exponent


def entanglement_rate(
    distance: float, neighbor_distance: float, neighbor_rate: float, exponent: float
) -> float:
    """Average end-to-end entanglement rate at a physical distance.

    Power law inherited from the resource scaling: the prefactor is the
    neighbour rate, the exponent is ``1 - exponent``.
    """
    if not 0.0 < neighbor_distance <= distance:
        raise ValueError("expected distance >= neighbor_distance > 0")
    if neighbor_rate <= 0.0:
        raise ValueError(f"neighbor_rate must be positive, got {neighbor_rate}")
    return neighbor_rate * neighbor_distance ** (exponent - 1.0) * distance ** (-exponent + 1.0)
