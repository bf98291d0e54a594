"""The quantization protocol: entangle, apply local SU(2) gates, disentangle.

All payoff formulas printed here are re-derived closed forms; the direct
state-vector simulation in ``final_state``/``expected_payoff`` is the ground
truth they are tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .decision import OutcomeDistribution
from .qstate import (
    Gate,
    StateVector,
    apply_entangler,
    apply_single_qubit_gate,
    basis_state,
    bit_complement,
    hamming_weight,
)

TWO_PI = 2.0 * math.pi

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)  # i**k for k mod 4


@dataclass(frozen=True)
class UnitaryParams:
    """Angles (theta, alpha, beta) of a single-qubit SU(2) action."""

    theta: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        theta, alpha, beta = float(self.theta), float(self.alpha), float(self.beta)
        if not all(math.isfinite(x) for x in (theta, alpha, beta)):
            raise ValueError("angles must be finite")
        if not 0.0 <= theta <= math.pi:
            raise ValueError(f"theta={theta!r} outside [0, pi]")
        if not 0.0 <= alpha < TWO_PI:
            raise ValueError(f"alpha={alpha!r} outside [0, 2pi)")
        if not 0.0 <= beta < TWO_PI:
            raise ValueError(f"beta={beta!r} outside [0, 2pi)")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


def build_gate(params: UnitaryParams) -> Gate:
    """The SU(2) gate with columns

    U|0> = cos(theta/2) e^{i alpha} |0> + sin(theta/2) e^{i(pi/2 - beta)} |1>
    U|1> = sin(theta/2) e^{i(pi/2 + beta)} |0> + cos(theta/2) e^{-i alpha} |1>
    """
    c = math.cos(params.theta / 2.0)
    s = math.sin(params.theta / 2.0)
    ea = complex(math.cos(params.alpha), math.sin(params.alpha))
    eb = complex(math.cos(params.beta), math.sin(params.beta))
    return Gate(np.array([
        [c * ea, 1j * s * eb],
        [1j * s * eb.conjugate(), c * ea.conjugate()],
    ]))


IDENTITY_PARAMS = UnitaryParams(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class EwlGame:
    """Basis-indexed payoffs (or outcome labels) for an m-qubit protocol run.

    Numeric maps may omit entries, which default to payoff 0; label maps must
    cover every basis state.
    """

    m: int
    payoff_map: Mapping[int, float] | Mapping[int, str]

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"qubit count must be an integer >= 1, got {self.m}")
        dim = 1 << self.m
        if any(not isinstance(y, int) or not 0 <= y < dim for y in self.payoff_map):
            raise ValueError("payoff map keys must be basis indices")
        values = list(self.payoff_map.values())
        if values and all(isinstance(v, str) for v in values):
            if len(self.payoff_map) != dim:
                raise ValueError("label-valued games must label every basis state")
            table = {y: str(v) for y, v in self.payoff_map.items()}
        elif all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            table = {y: 0.0 for y in range(dim)}
            table.update({y: float(v) for y, v in self.payoff_map.items()})
        else:
            raise ValueError("payoff map values must be all numbers or all labels")
        object.__setattr__(self, "payoff_map", table)

    @property
    def has_labels(self) -> bool:
        return any(isinstance(v, str) for v in self.payoff_map.values())


def n_tuple_driver_game(n: int, lam: float) -> EwlGame:
    """Driver payoffs on n+1 qubits: lam on |1..10>, 1 on |1..11>, 0 elsewhere."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    dim = 1 << (n + 1)
    return EwlGame(n + 1, {dim - 2: float(lam), dim - 1: 1.0})


def driver_game(lam: float) -> EwlGame:
    return n_tuple_driver_game(1, lam)


def two_stage_game(labels: Sequence[str] = ("o00", "o01", "o10", "o11")) -> EwlGame:
    """Two-qubit game whose four basis states carry the four outcome labels."""
    if len(labels) != 4 or len(set(labels)) != 4:
        raise ValueError("need four distinct labels")
    return EwlGame(2, {y: str(labels[y]) for y in range(4)})


def leading_ones(y: int, m: int) -> int:
    """Number of consecutive 1-bits of y starting at the most significant bit."""
    count = 0
    for bit in range(m - 1, -1, -1):
        if (y >> bit) & 1:
            count += 1
        else:
            break
    return count


def n_tuple_outcome_game(n: int) -> EwlGame:
    """Label-valued driver game, grouping basis states by first-exit position.

    A basis state starting with t ones followed by a zero means the driver
    exited at intersection t+1, so it carries label o{t+1}; the all-ones
    state carries o{n+2}.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    m = n + 1
    table = {}
    for y in range(1 << m):
        t = leading_ones(y, m)
        table[y] = f"o{t + 1}" if t < m else f"o{n + 2}"
    return EwlGame(m, table)


# --------------------------------------------------------------------------
# protocol simulation


def final_state(game: EwlGame, gates: Sequence[Gate]) -> StateVector:
    """J^dag (U_1 x ... x U_m) J |0...0> by structured application."""
    if len(gates) != game.m:
        raise ValueError(f"need exactly {game.m} gates, got {len(gates)}")
    state = apply_entangler(basis_state(game.m))
    for qubit, gate in enumerate(gates, start=1):
        state = apply_single_qubit_gate(state, qubit, gate)
    return apply_entangler(state, dagger=True)


def expected_payoff(game: EwlGame, gates: Sequence[Gate]) -> float:
    """Sum of payoff(y) * |<psi_f|y>|^2 over the basis."""
    if game.has_labels:
        raise TypeError("label-valued game: use outcome_distribution_ewl")
    probs = final_state(game, gates).probabilities
    return float(sum(game.payoff_map[y] * probs[y] for y in range(1 << game.m)))


def outcome_distribution_ewl(game: EwlGame, gates: Sequence[Gate]) -> OutcomeDistribution:
    """Distribution over outcome labels induced by measuring the final state."""
    if not game.has_labels:
        raise TypeError("numeric game: use expected_payoff")
    probs = final_state(game, gates).probabilities
    acc: dict[str, float] = {}
    for y in range(1 << game.m):
        lab = game.payoff_map[y]
        acc[lab] = acc.get(lab, 0.0) + float(probs[y])
    return OutcomeDistribution(acc)


# --------------------------------------------------------------------------
# closed forms (validated against the simulation above)


def amplitude_one_param(y: int, theta: float, m: int) -> complex:
    """<y|psi_f> when the same U(theta, 0, 0) acts on all m qubits:

    i^r(y) * cos^r(ybar)(theta/2) * sin^r(y)(theta/2),
    with r the Hamming weight and ybar the bit complement.
    """
    r = hamming_weight(y, m)
    rbar = hamming_weight(bit_complement(y, m), m)
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return _I_POW[r % 4] * (c ** rbar) * (s ** r)


def payoff_one_param(n: int, lam: float, theta: float) -> float:
    """Driver payoff under U(theta,0,0) on all n+1 qubits:

    lam * cos^2(theta/2) sin^2n(theta/2) + sin^(2n+2)(theta/2).

    Equals the classical behavioral payoff at exit probability
    p = cos^2(theta/2).
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    c2 = math.cos(theta / 2.0) ** 2
    s2 = math.sin(theta / 2.0) ** 2
    return lam * c2 * s2 ** n + s2 ** (n + 1)


def _three_param_value(n: int, lam: float, theta: float, alpha: float, beta: float) -> float:
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    amp_home = (1j * (c ** n) * s * math.sin(n * alpha - beta)
                + _I_POW[n % 4] * c * (s ** n) * math.cos(alpha - n * beta))
    amp_lodge = ((c ** (n + 1)) * math.sin((n + 1) * alpha)
                 + _I_POW[(n + 1) % 4] * (s ** (n + 1)) * math.cos((n + 1) * beta))
    return lam * abs(amp_home) ** 2 + abs(amp_lodge) ** 2


def payoff_three_param(n: int, lam: float, params: UnitaryParams) -> float:
    """Driver payoff under U(theta, alpha, beta) on all n+1 qubits:

    lam * |i cos^n(t/2) sin(t/2) sin(n a - b) + i^n cos(t/2) sin^n(t/2) cos(a - n b)|^2
        + |cos^(n+1)(t/2) sin((n+1) a)      + i^(n+1) sin^(n+1)(t/2) cos((n+1) b)|^2
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    return _three_param_value(n, lam, params.theta, params.alpha, params.beta)


def payoff_three_param_fn(n: int, lam: float) -> Callable[[float, float, float], float]:
    """Raw-angle objective for the optimizers (periodic in alpha and beta)."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")

    def objective(theta: float, alpha: float, beta: float) -> float:
        return _three_param_value(n, lam, theta, alpha, beta)

    return objective


def payoff_two_qubit_general(outcome_payoffs: Sequence[float], p1: UnitaryParams,
                             p2: UnitaryParams) -> float:
    """Two-qubit expected payoff with independent gates, by direct simulation.

    ``outcome_payoffs`` orders the basis as (o00, o01, o10, o11).
    """
    if len(outcome_payoffs) != 4:
        raise ValueError("need four basis payoffs")
    game = EwlGame(2, {y: float(outcome_payoffs[y]) for y in range(4)})
    return expected_payoff(game, [build_gate(p1), build_gate(p2)])


def eta_symmetry_check(params: UnitaryParams) -> float:
    """|<01|psi_f> - <10|psi_f>| for the same gate on both qubits."""
    gate = build_gate(params)
    psi = final_state(EwlGame(2, {}), [gate, gate])
    return float(abs(psi.amps[1] - psi.amps[2]))
