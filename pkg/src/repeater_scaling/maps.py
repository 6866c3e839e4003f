"""Scalar fidelity maps: purification, entanglement swapping and memory decay.

Entangled pairs are treated as Werner states parametrised by their fidelity
with the target Bell state.  All maps accept floats or numpy arrays and
broadcast elementwise; they are pure functions and safe to call concurrently.
"""

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import FidelityClampWarning

__all__ = [
    "ErrorParams",
    "DepolarizingGateParams",
    "PurifyResult",
    "purify_ideal",
    "purify",
    "purify_depolarizing",
    "swap_fidelity",
    "decay",
]

# Tolerated floating-point excursion outside (0, 1] before clamping is an error.
CLAMP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ErrorParams:
    """Effective gate and read-out error rates of a repeater node.

    ``eps_g`` is the probability that a Pauli error hits the source qubit
    between two idealised entangling gates; ``p_x``, ``p_y``, ``p_z`` are the
    conditional weights of the three Pauli operators given that an error
    occurred.  ``eps_r`` is the effective read-out error on measured qubits
    (bit flips after the gate are absorbed into it).  ``eta_s`` is the
    read-out efficiency used during entanglement swapping; it defaults to
    ``1 - eps_r`` since swapping and purification run on the same hardware.
    """

    eps_g: float = 0.0
    eps_r: float = 0.0
    p_x: float = 0.25
    p_y: float = 0.25
    p_z: float = 0.5
    eta_s: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.eps_g < 1.0:
            raise ValueError(f"eps_g must be in [0, 1), got {self.eps_g}")
        if not 0.0 <= self.eps_r < 0.5:
            raise ValueError(f"eps_r must be in [0, 0.5), got {self.eps_r}")
        if min(self.p_x, self.p_y, self.p_z) < 0.0:
            raise ValueError("Pauli weights must be non-negative")
        if abs(self.p_x + self.p_y + self.p_z - 1.0) > 1e-12:
            raise ValueError("Pauli weights must sum to 1 within 1e-12")
        if self.eta_s is None:
            object.__setattr__(self, "eta_s", 1.0 - self.eps_r)
        if not 0.5 < self.eta_s <= 1.0:
            raise ValueError(f"eta_s must be in (0.5, 1], got {self.eta_s}")

    @property
    def eta(self) -> float:
        """Read-out efficiency on the purification target qubits."""
        return 1.0 - self.eps_r


@dataclass(frozen=True)
class DepolarizingGateParams:
    """Parameters of the reference purification map whose entangling gate is
    modelled as ideal with probability ``p2`` and fully depolarising otherwise.
    Kept as a standalone comparison; ``p2`` has no defined relation to
    :class:`ErrorParams`.
    """

    eta: float = 1.0
    p2: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.p2 <= 1.0:
            raise ValueError(f"p2 must be in (0, 1], got {self.p2}")
        if not 0.5 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0.5, 1], got {self.eta}")


class PurifyResult(NamedTuple):
    fidelity: float
    p_accept: float


def _check_fidelity(value, lower: float = 0.0, name: str = "fidelity") -> None:
    arr = np.asarray(value)
    if np.any(arr <= lower) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in ({lower}, 1], got {value}")


def _clamp_unit(value):
    """Clamp floating-point excursions outside (0, 1] and flag them.

    Excursions beyond CLAMP_TOLERANCE are never silently absorbed.
    """
    arr = np.asarray(value)
    high = arr - 1.0
    if np.any(high > 0.0):
        if np.any(high > CLAMP_TOLERANCE):
            raise ValueError(f"fidelity {value} exceeds 1 beyond tolerance")
        warnings.warn("fidelity clamped to 1.0", FidelityClampWarning, stacklevel=3)
        arr = np.minimum(arr, 1.0)
        return arr if arr.ndim else float(arr)
    return value


def purify_ideal(fidelity):
    """Error-free purification map for two Werner pairs of equal fidelity.

    Both fixed points of the map, 1/2 and 1, delimit the region where
    purification gains fidelity.
    """
    _check_fidelity(fidelity)
    f = fidelity
    w = (1.0 - f) / 3.0
    num = f * f + w * w
    den = f * f + 2.0 * f * w + 5.0 * w * w
    return _clamp_unit(num / den)


def purify(fidelity, err: ErrorParams) -> PurifyResult:
    """Purification map with gate and read-out errors.

    Returns the fidelity after a successful round together with the
    acceptance probability of the round.  The acceptance probability depends
    only on the read-out efficiency: source-qubit gate errors never flip the
    measured target qubits.
    """
    _check_fidelity(fidelity)
    f = fidelity
    eta = err.eta
    eps_g = err.eps_g
    w = (1.0 - f) / 3.0
    meas_same = eta * eta + (1.0 - eta) * (1.0 - eta)
    meas_cross = eta * (1.0 - eta)
    cross = f * w + w * w
    gate = (2.0 * eps_g - eps_g * eps_g) / ((1.0 - eps_g) * (1.0 - eps_g))
    num = (
        (f * f + w * w) * meas_same
        + cross * 2.0 * meas_cross
        + 2.0 * gate * (err.p_z * f * w + (err.p_x + err.p_y) * w * w)
    )
    p_accept = (f * f + 2.0 * f * w + 5.0 * w * w) * meas_same + cross * 8.0 * meas_cross
    den = p_accept / ((1.0 - eps_g) * (1.0 - eps_g))
    return PurifyResult(_clamp_unit(num / den), p_accept)


def purify_depolarizing(fidelity, gate: DepolarizingGateParams):
    """Reference purification map with a depolarising entangling gate."""
    _check_fidelity(fidelity)
    f = fidelity
    eta = gate.eta
    p2sq = gate.p2 * gate.p2
    w = (1.0 - f) / 3.0
    meas_same = eta * eta + (1.0 - eta) * (1.0 - eta)
    meas_cross = eta * (1.0 - eta)
    cross = f * w + w * w
    num = (f * f + w * w) * meas_same + cross * 2.0 * meas_cross + (1.0 - p2sq) / (8.0 * p2sq)
    den = (
        (f * f + 2.0 * f * w + 5.0 * w * w) * meas_same
        + cross * 8.0 * meas_cross
        + (1.0 - p2sq) / (2.0 * p2sq)
    )
    return _clamp_unit(num / den)


def swap_fidelity(fidelity, n_links: int, err: ErrorParams, absorbed: bool = True):
    """Fidelity after joining ``n_links`` adjacent links of equal fidelity.

    With ``absorbed=True`` the gate errors of the Bell-state measurements are
    absorbed into the swap read-out efficiency ``eta_s``; otherwise the gate
    error enters explicitly alongside the purification read-out efficiency.
    """
    if n_links < 2:
        raise ValueError(f"swapping joins at least 2 links, got {n_links}")
    arr = np.asarray(fidelity)
    if np.any(arr <= 0.25) or np.any(arr > 1.0):
        raise ValueError(f"swap input fidelity must lie in (1/4, 1], got {fidelity}")
    if absorbed:
        eta_s = err.eta_s
        link_factor = (4.0 * eta_s * eta_s - 1.0) / 3.0
    else:
        eta = err.eta
        link_factor = (1.0 - err.eps_g) ** 3 * (4.0 * eta * eta - 1.0) / 3.0
    x = (4.0 * fidelity - 1.0) / 3.0
    return _clamp_unit(0.25 * (1.0 + 3.0 * link_factor ** (n_links - 1) * x**n_links))


def decay(fidelity, elapsed_s, t2_s):
    """Fidelity of a stored pair after ``elapsed_s`` seconds of memory decay.

    Gaussian envelope for a dynamically decoupled memory with coherence time
    ``t2_s``.
    """
    _check_fidelity(fidelity)
    if t2_s <= 0.0:
        raise ValueError(f"t2_s must be positive, got {t2_s}")
    if np.any(np.asarray(elapsed_s) < 0.0):
        raise ValueError(f"elapsed_s must be non-negative, got {elapsed_s}")
    ratio = np.asarray(elapsed_s) / t2_s
    out = fidelity * np.exp(-(ratio * ratio))
    return out if np.ndim(out) else float(out)
