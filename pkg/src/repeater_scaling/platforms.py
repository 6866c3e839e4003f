"""Platform dataset handling and derived figure-of-merit tables and sweeps."""

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .analytic import (
    AnalyticOptions,
    DEFAULT_OPTIONS,
    _acceptance_geomean_raw,
    _average_gain_raw,
    _exponent_from_parts,
    exponent_estimate,
    optimal_target_fidelity,
)
from .exceptions import InfeasibleError
from .fixed_points import find_fixed_points
from .maps import ErrorParams, swap_fidelity
from .path_length import LinkBudget, max_path_length
from .recursive import ProtocolParams, optimal_recursive_exponent, resource_exponent

__all__ = [
    "Platform",
    "PlatformRow",
    "SweepCell",
    "SweepGrid",
    "default_platforms_path",
    "load_platforms",
    "dump_platforms",
    "save_platforms",
    "evaluate_platform",
    "evaluate_all",
    "sweep",
]

_FIELDS = ("name", "eps_g", "eps_r", "rate_hz", "t2_s")

SWEEP_QUANTITIES = ("lambda", "lambda-tilde", "ft-star", "dstar")


@dataclass(frozen=True)
class Platform:
    """One hardware platform: error rates, entanglement rate, coherence time."""

    name: str
    eps_g: float
    eps_r: float
    rate_hz: float
    t2_s: float
    note: str = ""

    def __post_init__(self) -> None:
        problems = self.validate()
        if problems:
            raise ValueError("; ".join(problems))

    def validate(self) -> list[str]:
        problems = []
        if not self.name:
            problems.append("name must be non-empty")
        if self.eps_g < 0.0:
            problems.append(f"eps_g must be >= 0, got {self.eps_g}")
        if self.eps_r < 0.0:
            problems.append(f"eps_r must be >= 0, got {self.eps_r}")
        if self.rate_hz <= 0.0:
            problems.append(f"rate_hz must be > 0, got {self.rate_hz}")
        if self.t2_s <= 0.0:
            problems.append(f"t2_s must be > 0, got {self.t2_s}")
        return problems

    @property
    def errors(self) -> ErrorParams:
        return ErrorParams(eps_g=self.eps_g, eps_r=self.eps_r)


@dataclass(frozen=True)
class PlatformRow:
    """Derived figures of merit for one platform; None where infeasible.

    ``lambda_recursive`` and ``d_star`` evaluate the iterated trace at the
    closed-form optimal target; the ``_optimal`` twins re-optimise the target
    for the trace itself, whose step count is integer-valued and therefore
    has its own optimum.  Published reference tables do not state which
    convention they used, so both are kept.
    """

    platform: Platform
    feasible: bool
    ft_star: float | None = None
    lambda_tilde: float | None = None
    lambda_recursive: float | None = None
    d_star: float | None = None
    lambda_recursive_optimal: float | None = None
    d_star_optimal: float | None = None


@dataclass(frozen=True)
class SweepCell:
    eps_r: float
    eps_g: float
    value: float | None
    feasible: bool


@dataclass(frozen=True)
class SweepGrid:
    """Rectangular (eps_r, eps_g) grid request for one derived quantity."""

    quantity: str
    eps_r_start: float
    eps_r_stop: float
    eps_r_steps: int
    eps_g_start: float
    eps_g_stop: float
    eps_g_steps: int
    rate_hz: float | None = None
    t2_s: float | None = None

    def __post_init__(self) -> None:
        if self.quantity not in SWEEP_QUANTITIES:
            raise ValueError(f"quantity must be one of {SWEEP_QUANTITIES}, got {self.quantity!r}")
        for label, start, stop, steps in (
            ("eps_r", self.eps_r_start, self.eps_r_stop, self.eps_r_steps),
            ("eps_g", self.eps_g_start, self.eps_g_stop, self.eps_g_steps),
        ):
            if steps < 2:
                raise ValueError(f"{label} steps must be >= 2, got {steps}")
            if not 0.0 <= start <= stop <= 0.1:
                raise ValueError(f"{label} range must satisfy 0 <= start <= stop <= 0.1")
        if self.quantity == "dstar" and (self.rate_hz is None or self.t2_s is None):
            raise ValueError("dstar sweeps need rate_hz and t2_s")

    def eps_r_values(self) -> list[float]:
        return _linspace(self.eps_r_start, self.eps_r_stop, self.eps_r_steps)

    def eps_g_values(self) -> list[float]:
        return _linspace(self.eps_g_start, self.eps_g_stop, self.eps_g_steps)


def _linspace(start: float, stop: float, steps: int) -> list[float]:
    return [start + (stop - start) * i / (steps - 1) for i in range(steps)]


def default_platforms_path() -> Path:
    """Path of the dataset shipped with the package."""
    return Path(resources.files("repeater_scaling").joinpath("data/platforms.json"))


def load_platforms(path) -> list[Platform]:
    """Load and validate a platform dataset file.

    The file is a JSON array of objects with the contractual fields
    name, eps_g, eps_r, rate_hz, t2_s and an optional free-text note.
    """
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if raw == []:
        return []
    if not isinstance(raw, list):
        raise ValueError(f"{path}: expected a JSON array of platform objects")
    platforms = []
    problems = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            problems.append(f"entry {i}: expected an object")
            continue
        missing = [f for f in _FIELDS if f not in entry]
        if missing:
            problems.append(f"entry {i}: missing fields {missing}")
            continue
        unknown = [f for f in entry if f not in _FIELDS + ("note",)]
        if unknown:
            problems.append(f"entry {i}: unknown fields {unknown}")
            continue
        try:
            platforms.append(
                Platform(
                    name=str(entry["name"]),
                    eps_g=float(entry["eps_g"]),
                    eps_r=float(entry["eps_r"]),
                    rate_hz=float(entry["rate_hz"]),
                    t2_s=float(entry["t2_s"]),
                    note=str(entry.get("note", "")),
                )
            )
        except (TypeError, ValueError) as exc:
            problems.append(f"entry {i} ({entry.get('name', '?')}): {exc}")
    if problems:
        raise ValueError(f"{path}: " + "; ".join(problems))
    return platforms


def dump_platforms(platforms: list[Platform]) -> str:
    """Serialise platforms to the dataset JSON format."""
    entries = []
    for p in platforms:
        entry = {f: getattr(p, f) for f in _FIELDS}
        entry["note"] = p.note
        entries.append(entry)
    return json.dumps(entries, indent=2) + "\n"


def save_platforms(platforms: list[Platform], path) -> None:
    Path(path).write_text(dump_platforms(platforms), encoding="utf-8")


def evaluate_platform(platform: Platform, opts: AnalyticOptions = DEFAULT_OPTIONS) -> PlatformRow:
    """Derived figures of merit for one platform.

    The target fidelity comes from the closed-form optimum, the post-swap
    fidelity from the exact two-link swap; the analytic exponent is computed
    without the step ceiling.  The path-length columns use the corresponding
    recursive exponents.
    """
    err = platform.errors
    try:
        ft = optimal_target_fidelity(platform.eps_g)
        fps = find_fixed_points(err)
        if not (fps.feasible and fps.lower < ft < fps.upper):
            return PlatformRow(platform=platform, feasible=False)
        f0 = float(swap_fidelity(ft, 2, err))
        if not fps.lower < f0:
            return PlatformRow(platform=platform, feasible=False)
        tilde = exponent_estimate(f0, ft, err, opts=opts)
        recursive = resource_exponent(ProtocolParams(ft=ft, err=err, f0=f0))
        _, recursive_opt = optimal_recursive_exponent(err)
        if not (tilde.feasible and recursive.feasible):
            return PlatformRow(platform=platform, feasible=False)

        def d_star_for(exponent: float) -> float:
            return max_path_length(
                LinkBudget(
                    rate_hz=platform.rate_hz,
                    t2_s=platform.t2_s,
                    exponent=exponent,
                    ft_star=ft,
                    f_lower=fps.lower,
                    eta=err.eta,
                )
            )

        d_star = d_star_for(recursive.exponent)
        d_star_opt = d_star_for(recursive_opt.exponent)
    except (InfeasibleError, ValueError):
        return PlatformRow(platform=platform, feasible=False)
    return PlatformRow(
        platform=platform,
        feasible=True,
        ft_star=ft,
        lambda_tilde=tilde.exponent,
        lambda_recursive=recursive.exponent,
        d_star=d_star,
        lambda_recursive_optimal=recursive_opt.exponent,
        d_star_optimal=d_star_opt,
    )


def evaluate_all(platforms: list[Platform], opts: AnalyticOptions = DEFAULT_OPTIONS) -> list[PlatformRow]:
    return [evaluate_platform(p, opts) for p in platforms]


def _sweep_cell(quantity: str, eps_r: float, eps_g: float, grid: SweepGrid,
                opts: AnalyticOptions) -> SweepCell:
    err = ErrorParams(eps_g=eps_g, eps_r=eps_r)
    try:
        ft = optimal_target_fidelity(eps_g)
        f0 = float(swap_fidelity(ft, 2, err)) if ft > 0.25 else None

        if quantity in ("lambda-tilde", "dstar"):
            # Surface-plot convention: evaluate the interval averages over the
            # swap-tied window regardless of the fixed points and classify the
            # cell by the sign of the resulting step count.
            if f0 is None or not f0 < ft:
                return SweepCell(eps_r, eps_g, None, False)
            gain = _average_gain_raw(f0, ft, err, opts)
            if not gain > 0.0:
                return SweepCell(eps_r, eps_g, None, False)
            steps = (ft - f0) / gain
            geomean = _acceptance_geomean_raw(f0, ft, err, opts)
            result = _exponent_from_parts(steps, geomean, 1.0, "analytic")
            if quantity == "lambda-tilde":
                return SweepCell(eps_r, eps_g, result.exponent, True)
            fps = find_fixed_points(err)
            if not fps.feasible:
                return SweepCell(eps_r, eps_g, None, False)
            budget = LinkBudget(
                rate_hz=grid.rate_hz,
                t2_s=grid.t2_s,
                exponent=result.exponent,
                ft_star=ft,
                f_lower=fps.lower,
                eta=err.eta,
            )
            return SweepCell(eps_r, eps_g, max_path_length(budget), True)

        # Trace-backed quantities need the target inside the fixed-point window.
        fps = find_fixed_points(err)
        if not (fps.feasible and fps.lower < ft < fps.upper):
            return SweepCell(eps_r, eps_g, None, False)
        if quantity == "ft-star":
            return SweepCell(eps_r, eps_g, ft, True)
        if not fps.lower < f0:
            return SweepCell(eps_r, eps_g, None, False)
        result = resource_exponent(ProtocolParams(ft=ft, err=err, f0=f0))
        if not result.feasible:
            return SweepCell(eps_r, eps_g, None, False)
        return SweepCell(eps_r, eps_g, result.exponent, True)
    except (InfeasibleError, ValueError):
        return SweepCell(eps_r, eps_g, None, False)


def sweep(grid: SweepGrid, opts: AnalyticOptions = DEFAULT_OPTIONS) -> list[SweepCell]:
    """Evaluate one quantity over the error grid; row order follows the grid.

    Infeasible cells carry the flag with the value unset.  Presentation-level
    clamping (zero floor, cap at 20) belongs to the CLI, never here.
    """
    cells = []
    for eps_r in grid.eps_r_values():
        for eps_g in grid.eps_g_values():
            cells.append(_sweep_cell(grid.quantity, eps_r, eps_g, grid, opts))
    return cells
