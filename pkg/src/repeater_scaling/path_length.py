"""Decoherence-limited maximum path length of a repeater chain.

Stored pairs decay while the chain accumulates the pairs needed for a path;
once swapping a decayed target fidelity lands below the lower purification
fixed point, the chain cannot be maintained.
"""

import math
from dataclasses import dataclass

from .analytic import optimal_target_fidelity
from .fixed_points import find_fixed_points
from .maps import ErrorParams, decay

__all__ = [
    "LinkBudget",
    "link_budget",
    "swap_after_decay",
    "within_decoherence_budget",
    "max_path_length",
]


@dataclass(frozen=True)
class LinkBudget:
    """Everything the decoherence condition needs about one platform.

    ``rate_hz`` is the neighbour-neighbour entanglement generation rate,
    ``t2_s`` the memory coherence time, ``exponent`` the resource exponent
    used to count the pairs a path needs, ``ft_star`` the maintained target
    fidelity, ``f_lower`` the lower purification fixed point and ``eta`` the
    effective read-out efficiency of the swap.
    """

    rate_hz: float
    t2_s: float
    exponent: float
    ft_star: float
    f_lower: float
    eta: float

    def __post_init__(self) -> None:
        if self.rate_hz <= 0.0:
            raise ValueError(f"rate_hz must be positive, got {self.rate_hz}")
        if self.t2_s <= 0.0:
            raise ValueError(f"t2_s must be positive, got {self.t2_s}")
        if self.exponent < 1.0:
            raise ValueError(f"exponent must be >= 1, got {self.exponent}")
        if not 0.5 < self.f_lower < self.ft_star <= 1.0:
            raise ValueError("expected 1/2 < f_lower < ft_star <= 1")
        if not 0.5 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0.5, 1], got {self.eta}")


def link_budget(err: ErrorParams, rate_hz: float, t2_s: float, exponent: float) -> LinkBudget:
    """Assemble a budget from error rates: fixed point, optimal target, read-out."""
    fps = find_fixed_points(err)
    if not fps.feasible:
        raise ValueError("no purification fixed points for these errors")
    return LinkBudget(
        rate_hz=rate_hz,
        t2_s=t2_s,
        exponent=exponent,
        ft_star=optimal_target_fidelity(err.eps_g),
        f_lower=fps.lower,
        eta=err.eta,
    )


def swap_after_decay(path_links: float, budget: LinkBudget) -> float:
    """Fidelity of a swapped pair after waiting for the path's pair budget.

    The wait is the time to generate ``path_links ** exponent`` pairs at the
    neighbour rate; the decayed target is then swapped once.
    """
    wait_s = path_links**budget.exponent / budget.rate_hz
    decayed = decay(budget.ft_star, wait_s, budget.t2_s)
    link_factor = (4.0 * budget.eta**2 - 1.0) / 3.0
    x = (4.0 * decayed - 1.0) / 3.0
    return 0.25 * (1.0 + 3.0 * link_factor * x * x)


def within_decoherence_budget(path_links: int, budget: LinkBudget) -> bool:
    """True when the swapped, decayed fidelity still exceeds the lower fixed point."""
    if path_links < 1:
        raise ValueError(f"path_links must be >= 1, got {path_links}")
    return swap_after_decay(path_links, budget) > budget.f_lower


def max_path_length(budget: LinkBudget, floored: bool = False) -> float:
    """Longest path (in links) the budget sustains; real-valued unless floored."""
    ratio = (4.0 * budget.f_lower - 1.0) / (4.0 * budget.eta**2 - 1.0)
    if ratio < 0.0:
        raise ValueError(f"negative radicand (4*f_lower - 1)/(4*eta^2 - 1) = {ratio}")
    log_arg = (3.0 * math.sqrt(ratio) + 1.0) / (4.0 * budget.ft_star)
    if not 0.0 < log_arg < 1.0:
        raise ValueError(f"logarithm argument {log_arg} outside (0, 1); no real path length")
    length = (budget.rate_hz * budget.t2_s * math.sqrt(-math.log(log_arg))) ** (
        1.0 / budget.exponent
    )
    return math.floor(length) if floored else length
