"""Exact Bell-diagonal oracle for one purification round and one swap.

States are probability vectors over the four Bell components, indexed by an
amplitude bit (Phi vs Psi) and a phase bit (+ vs -).  Every channel in scope
(bilateral CNOT, single-qubit Pauli errors, classical read-out flips) only
permutes these labels, so the oracle is exact without density matrices and
serves as the assumption-free reference for the first-order purification map.
"""

from dataclasses import dataclass

from .maps import ErrorParams

__all__ = [
    "PHI_PLUS",
    "PHI_MINUS",
    "PSI_PLUS",
    "PSI_MINUS",
    "PAULI_LABEL_FLIP",
    "BellDiagState",
    "apply_pauli",
    "purify_pair",
    "swap_pair",
]

# Component index = 2 * amplitude_bit + phase_bit.
PHI_PLUS = 0b00
PHI_MINUS = 0b01
PSI_PLUS = 0b10
PSI_MINUS = 0b11

_AMPLITUDE = 0b10
_PHASE = 0b01

# XOR masks for a single-qubit Pauli acting on either qubit of a Bell pair:
# x flips the amplitude bit, z flips the phase bit, y flips both.
PAULI_LABEL_FLIP = {"x": _AMPLITUDE, "y": _AMPLITUDE | _PHASE, "z": _PHASE}

_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class BellDiagState:
    """Probabilities over (Phi+, Phi-, Psi+, Psi-) for one entangled pair."""

    probs: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.probs) != 4:
            raise ValueError("need exactly four Bell components")
        if min(self.probs) < 0.0:
            raise ValueError(f"negative component in {self.probs}")
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError(f"components must sum to 1 within 1e-12, got {sum(self.probs)}")

    @classmethod
    def werner(cls, fidelity: float) -> "BellDiagState":
        if not 0.0 <= fidelity <= 1.0:
            raise ValueError(f"fidelity must lie in [0, 1], got {fidelity}")
        rest = (1.0 - fidelity) / 3.0
        return cls((fidelity, rest, rest, rest))

    @property
    def fidelity(self) -> float:
        return self.probs[PHI_PLUS]

    def depolarized(self) -> "BellDiagState":
        """Werner state of the same fidelity (error-free twirl)."""
        return BellDiagState.werner(self.probs[PHI_PLUS])


def apply_pauli(state: BellDiagState, axis: str) -> BellDiagState:
    """Deterministic single-qubit Pauli on one qubit of the pair."""
    flip = PAULI_LABEL_FLIP[axis]
    out = [0.0] * 4
    for label, p in enumerate(state.probs):
        out[label ^ flip] = p
    return BellDiagState(tuple(out))


def _pauli_channel(weights: list[float], err: ErrorParams) -> list[float]:
    # One source qubit: identity with 1 - eps_g, else a Pauli label flip.
    out = [w * (1.0 - err.eps_g) for w in weights]
    for axis, p_axis in (("x", err.p_x), ("y", err.p_y), ("z", err.p_z)):
        flip = PAULI_LABEL_FLIP[axis]
        for label in range(4):
            out[label ^ flip] += err.eps_g * p_axis * weights[label]
    return out


def purify_pair(
    source: BellDiagState,
    target: BellDiagState,
    err: ErrorParams,
    depolarize: bool = False,
) -> tuple[BellDiagState, float]:
    """One purification round on a source and a target pair.

    Bilateral CNOT in the Bell basis: the source amplitude bit propagates to
    the target, the target phase bit propagates back to the source.  The
    target pair is then measured on both sides; each read-out flips
    independently with probability ``1 - eta`` and the round is accepted on
    coincident outcomes.  A Pauli channel of strength ``eps_g`` acts on each
    of the two source qubits after the gate.  Returns the post-selected
    source state and the acceptance probability.
    """
    eta = err.eta
    p_same = eta * eta + (1.0 - eta) * (1.0 - eta)
    p_diff = 2.0 * eta * (1.0 - eta)

    weights = [0.0] * 4
    acceptance = 0.0
    for s_label, p_s in enumerate(source.probs):
        for t_label, p_t in enumerate(target.probs):
            joint = p_s * p_t
            if joint == 0.0:
                continue
            s_out = s_label ^ (t_label & _PHASE)
            t_out = t_label ^ (s_label & _AMPLITUDE)
            # Correlated measurement outcomes coincide for Phi components,
            # anti-correlated ones need a read-out flip to coincide.
            p_acc = p_same if (t_out & _AMPLITUDE) == 0 else p_diff
            weights[s_out] += joint * p_acc
            acceptance += joint * p_acc

    if acceptance < _UNDERFLOW:
        raise ValueError("acceptance probability underflow; degenerate input states")

    weights = _pauli_channel(_pauli_channel(weights, err), err)
    state = BellDiagState(tuple(w / acceptance for w in weights))
    if depolarize:
        state = state.depolarized()
    return state, acceptance


def swap_pair(a: BellDiagState, b: BellDiagState, err: ErrorParams) -> BellDiagState:
    """Entanglement swap of two pairs via a Bell-state measurement.

    Bell labels compose additively (XOR over the two label bits) under an
    ideal measurement with perfect corrections.  An imperfect read-out flips
    each of the two measured bits independently with probability
    ``1 - eta_s``, which mistakes the correction and acts as a label flip on
    the output.
    """
    conv = [0.0] * 4
    for la, pa in enumerate(a.probs):
        for lb, pb in enumerate(b.probs):
            conv[la ^ lb] += pa * pb

    eta_s = err.eta_s
    p_ok = eta_s * eta_s
    p_one = eta_s * (1.0 - eta_s)
    p_both = (1.0 - eta_s) * (1.0 - eta_s)
    out = [0.0] * 4
    for label, p in enumerate(conv):
        out[label] += p * p_ok
        out[label ^ _AMPLITUDE] += p * p_one
        out[label ^ _PHASE] += p * p_one
        out[label ^ (_AMPLITUDE | _PHASE)] += p * p_both
    return BellDiagState(tuple(out))
