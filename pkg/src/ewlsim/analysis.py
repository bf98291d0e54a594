"""Constructive verification of the protocol's three structural claims.

prop1: every mixed strategy of the forgetful two-stage problem has an
outcome-equivalent pure unitary strategy (solved in closed form, checked by
simulation).  prop2: the one-parameter protocol implements the label-valued
n-tuple driver problem exactly.  prop3: above a threshold payoff there is a
unitary strategy strictly better than every classical one.

Every sweep returns a structured report: a list of checks with stable keys
(check, inputs, expected, actual, deviation, pass) suitable for JSON output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decision import BehavioralStrategy, expected_payoff_classical, has_imperfect_recall
from .decision import DecisionProblem, n_tuple_driver, two_stage_problem
from .ewl import (
    IDENTITY_PARAMS,
    EwlGame,
    UnitaryParams,
    amplitude_one_param,
    build_gate,
    eta_symmetry_check,
    expected_payoff,
    final_state,
    n_tuple_driver_game,
    n_tuple_outcome_game,
    outcome_distribution_ewl,
    payoff_one_param,
    payoff_three_param,
    payoff_two_qubit_general,
    two_stage_game,
)
from .optimize import maximize_1d

AMP_TOL = 1e-12
MASS_TOL = 1e-9
PROB1_TOL = 1e-9


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def make_check(check: str, inputs: dict, expected, actual, deviation: float,
               passed: bool, note: str | None = None) -> dict:
    entry = {
        "check": check,
        "inputs": _jsonable(inputs),
        "expected": _jsonable(expected),
        "actual": _jsonable(actual),
        "deviation": float(deviation),
        "pass": bool(passed),
    }
    if note is not None:
        entry["note"] = note
    return entry


def make_report(checks: list[dict]) -> dict:
    return {"checks": checks, "pass": all(c["pass"] for c in checks)}


# --------------------------------------------------------------------------
# claim 1: mixed strategies are reachable by pure unitary strategies


@dataclass(frozen=True)
class Prop1Solution:
    """First-qubit gate parameters reproducing a mixed-strategy outcome."""

    params1: UnitaryParams
    branch: str  # general | diagonal_segment | antidiagonal_segment
    gate2_is_identity: bool = True


def _arccos_sqrt(x: float) -> float:
    return math.acos(math.sqrt(min(max(x, 0.0), 1.0)))


def prop1_solve(p00: float, p01: float, p10: float, p11: float) -> Prop1Solution:
    """Gate on qubit 1 (identity on qubit 2) whose outcome is the given mixture.

    General branch: cos^2(theta/2) = p00 + p11, cos^2(alpha) = p00/(p00+p11),
    cos^2(beta) = p10/(p01+p10).  Degenerate mixtures fall back to the pure
    diagonal/antidiagonal segments; all angles take principal values in
    [0, pi/2], residual free angles are fixed to 0.
    """
    probs = [float(p) for p in (p00, p01, p10, p11)]
    if any(p < -1e-12 for p in probs):
        raise ValueError("probabilities must be nonnegative")
    if abs(sum(probs) - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {sum(probs)!r}, not 1")
    p00, p01, p10, p11 = (max(p, 0.0) for p in probs)

    diag = p00 + p11
    anti = p01 + p10
    if anti == 0.0:
        return Prop1Solution(UnitaryParams(0.0, _arccos_sqrt(p00), 0.0), "diagonal_segment")
    if diag == 0.0:
        return Prop1Solution(UnitaryParams(math.pi, 0.0, _arccos_sqrt(p10)), "antidiagonal_segment")
    theta = 2.0 * _arccos_sqrt(diag)
    alpha = _arccos_sqrt(p00 / diag)
    beta = _arccos_sqrt(p10 / anti)
    return Prop1Solution(UnitaryParams(theta, alpha, beta), "general")


def prop1_outcome(solution: Prop1Solution):
    """Outcome distribution of the solved unitary strategy, by simulation."""
    gates = [build_gate(solution.params1), build_gate(IDENTITY_PARAMS)]
    return outcome_distribution_ewl(two_stage_game(), gates)


def _prop1_deviation(probs) -> float:
    sol = prop1_solve(*probs)
    dist = prop1_outcome(sol)
    expected = dict(zip(("o00", "o01", "o10", "o11"), probs))
    return max(abs(dist[k] - expected[k]) for k in expected)


def prop1_verify(sample_count: int = 1000, seed: int = 7) -> dict:
    """Seeded sweep of random and boundary mixtures through prop1_solve."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    checks = []

    dev = max(_prop1_deviation(rng.dirichlet((1.0,) * 4)) for _ in range(sample_count))
    checks.append(make_check(
        "prop1_random_mixtures", {"samples": sample_count, "seed": seed},
        0.0, dev, dev, dev <= PROB1_TOL))

    units = [tuple(1.0 if i == j else 0.0 for j in range(4)) for i in range(4)]
    dev = max(_prop1_deviation(u) for u in units)
    checks.append(make_check(
        "prop1_unit_vectors", {}, 0.0, dev, dev, dev <= PROB1_TOL))

    boundary = []
    for hole in range(4):
        for _ in range(5):
            w = rng.dirichlet((1.0,) * 3)
            vec = list(w[:hole]) + [0.0] + list(w[hole:])
            boundary.append(tuple(vec))
    for a in (0.3, 0.5, 0.9):
        boundary.append((a, 0.0, 0.0, 1.0 - a))
        boundary.append((0.0, a, 1.0 - a, 0.0))
    dev = max(_prop1_deviation(b) for b in boundary)
    checks.append(make_check(
        "prop1_boundary_mixtures", {"cases": len(boundary), "seed": seed},
        0.0, dev, dev, dev <= PROB1_TOL))
    return make_report(checks)


# --------------------------------------------------------------------------
# claim 2: one-parameter gates implement the label-valued n-tuple problem


def prop2_verify(n_max: int = 5, theta_grid: int = 101) -> dict:
    """Exhaustive closed-form vs simulation check over n <= n_max and a theta grid."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    checks = []
    for n in range(1, n_max + 1):
        m = n + 1
        game = n_tuple_outcome_game(n)
        amp_dev = 0.0
        mass_dev = 0.0
        for theta in np.linspace(0.0, math.pi, theta_grid):
            theta = float(theta)
            gate = build_gate(UnitaryParams(theta))
            psi = final_state(EwlGame(m, {}), [gate] * m)
            for y in range(1 << m):
                amp_dev = max(amp_dev, abs(psi.amps[y] - amplitude_one_param(y, theta, m)))
            p = math.cos(theta / 2.0) ** 2
            dist = outcome_distribution_ewl(game, [gate] * m)
            for t in range(1, n + 2):
                mass_dev = max(mass_dev, abs(dist[f"o{t}"] - (1.0 - p) ** (t - 1) * p))
            mass_dev = max(mass_dev, abs(dist[f"o{n + 2}"] - (1.0 - p) ** (n + 1)))
        checks.append(make_check(
            f"prop2_amplitudes_n{n}", {"n": n, "theta_grid": theta_grid},
            0.0, amp_dev, amp_dev, amp_dev <= AMP_TOL))
        checks.append(make_check(
            f"prop2_outcome_masses_n{n}", {"n": n, "theta_grid": theta_grid},
            0.0, mass_dev, mass_dev, mass_dev <= MASS_TOL))
    return make_report(checks)


# --------------------------------------------------------------------------
# claim 3: strict quantum dominance above a threshold payoff


def classical_max_closed_form(n: int, lam: float) -> tuple[float, float]:
    """Maximizer and maximum of (1-p)^n ((lam-1)p + 1) over p in [0, 1]."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    lam = float(lam)
    if lam > 1.0:
        p_star = (lam - 1.0 - n) / ((lam - 1.0) * (n + 1))
        p_star = min(max(p_star, 0.0), 1.0)
    else:
        p_star = 0.0
    value = (1.0 - p_star) ** n * ((lam - 1.0) * p_star + 1.0)
    return p_star, value


def prop3_params(n: int) -> tuple[float, float, float, float]:
    """Dominating gate angles and the payoff threshold for n >= 2:

    theta' = 2 arccos(1/sqrt(n+1)),
    alpha' = (pi + 2 pi chi(n)) n / (2 (n^2 - 1)),  beta' = alpha'/n,
    lambda0 = 1 / (cos^2n(theta'/2) sin^2(theta'/2)),
    with chi(n) = 1 iff n = 3 (mod 4), which is when i^(n-1) = -1.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    theta = 2.0 * math.acos(1.0 / math.sqrt(n + 1.0))
    chi = 1 if n % 4 == 3 else 0
    alpha = (math.pi + 2.0 * math.pi * chi) * n / (2.0 * (n * n - 1))
    beta = (math.pi + 2.0 * math.pi * chi) / (2.0 * (n * n - 1))
    lam0 = 1.0 / (math.cos(theta / 2.0) ** (2 * n) * math.sin(theta / 2.0) ** 2)
    return theta, alpha, beta, lam0


@dataclass(frozen=True)
class Prop3Certificate:
    n: int
    theta: float
    alpha: float
    beta: float
    lam0: float
    delta: float
    lam: float
    quantum_payoff: float
    classical_max: float
    margin: float
    dominates: bool


def prop3_verify(n: int, delta: float = 1.5, lam: float | None = None) -> Prop3Certificate:
    """Compare the fixed dominating unitary strategy against the classical optimum.

    The payoff is lam if given, else delta * lambda0(n).  The quantum side is
    a direct simulation; the classical side is a 1D maximization verified
    against the closed form (disagreement raises, as an internal failure).
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    if lam is None and delta <= 1.0:
        raise ValueError("delta must exceed 1 when lam is not given")
    if n == 1:
        theta, alpha, beta, lam0 = math.pi / 2.0, math.pi / 4.0, 0.0, 2.0
    else:
        theta, alpha, beta, lam0 = prop3_params(n)
    lam_eff = float(lam) if lam is not None else delta * lam0

    gate = build_gate(UnitaryParams(theta, alpha, beta))
    quantum = expected_payoff(n_tuple_driver_game(n, lam_eff), [gate] * (n + 1))

    res = maximize_1d(lambda t: payoff_one_param(n, lam_eff, t), 0.0, math.pi, tol=1e-10)
    _, closed = classical_max_closed_form(n, lam_eff)
    if abs(res.value - closed) > 1e-9 * max(1.0, abs(closed)):
        raise ArithmeticError(
            f"classical optimum mismatch: numeric {res.value!r} vs closed form {closed!r}")
    classical = res.value
    margin = quantum - classical
    return Prop3Certificate(n, theta, alpha, beta, lam0, delta, lam_eff,
                            quantum, classical, margin, margin > 0.0)


def prop3_sweep(n_values=(2, 3, 4, 5, 6), deltas=(1.1, 1.5, 3.0)) -> dict:
    """Dominance certificates over a grid of (n, delta); all must be strict."""
    checks = []
    for n in n_values:
        for delta in deltas:
            cert = prop3_verify(n, delta)
            checks.append(make_check(
                f"prop3_dominance_n{n}_delta{delta}",
                {"n": n, "delta": delta, "lam": cert.lam},
                "quantum > classical",
                {"quantum": cert.quantum_payoff, "classical": cert.classical_max,
                 "margin": cert.margin},
                -cert.margin, cert.dominates))
    return make_report(checks)


# --------------------------------------------------------------------------
# printed-formula cross-check ledger


def _two_param_sine_variant(lam: float, theta: float, alpha: float) -> float:
    # Linear-sine variant of the two-parameter payoff; deviates from
    # simulation and is kept only so the ledger can document the deviation.
    return (0.25 * lam * (math.sin(2.0 * alpha) + 1.0) * math.sin(theta)
            + (math.sin(2.0 * alpha) * math.cos(theta / 2.0) ** 2
               - math.sin(theta / 2.0) ** 2) ** 2)


def formulas_verify(n_max: int = 5, samples: int = 500, seed: int = 11) -> dict:
    """Cross-check every closed-form payoff against direct simulation."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = np.random.default_rng(seed)
    checks = []
    two_pi = 2.0 * math.pi

    dev = 0.0
    for _ in range(samples):
        n = int(rng.integers(1, n_max + 1))
        lam = float(rng.uniform(0.0, 20.0))
        params = UnitaryParams(float(rng.uniform(0.0, math.pi)),
                               float(rng.uniform(0.0, two_pi)),
                               float(rng.uniform(0.0, two_pi)))
        sim = expected_payoff(n_tuple_driver_game(n, lam), [build_gate(params)] * (n + 1))
        dev = max(dev, abs(sim - payoff_three_param(n, lam, params)))
    checks.append(make_check(
        "three_param_closed_form_vs_simulation",
        {"samples": samples, "seed": seed, "n_max": n_max},
        0.0, dev, dev, dev <= 1e-9))

    dev_sim = 0.0
    dev_tree = 0.0
    lam = 4.0
    for n in range(1, max(n_max, 6) + 1):
        problem = n_tuple_driver(n, lam)
        game = n_tuple_driver_game(n, lam)
        for theta in np.linspace(0.0, math.pi, 101):
            theta = float(theta)
            closed = payoff_one_param(n, lam, theta)
            gate = build_gate(UnitaryParams(theta))
            dev_sim = max(dev_sim, abs(closed - expected_payoff(game, [gate] * (n + 1))))
            p = math.cos(theta / 2.0) ** 2
            tree = expected_payoff_classical(problem, BehavioralStrategy(((p, 1.0 - p),)))
            dev_tree = max(dev_tree, abs(closed - tree))
    checks.append(make_check(
        "one_param_closed_form_vs_simulation", {"n_max": max(n_max, 6), "lam": lam},
        0.0, dev_sim, dev_sim, dev_sim <= 1e-9))
    checks.append(make_check(
        "one_param_closed_form_vs_tree_model", {"n_max": max(n_max, 6), "lam": lam},
        0.0, dev_tree, dev_tree, dev_tree <= 1e-9))

    payoffs = (3.0, -1.0, 2.0, 0.5)
    dev = 0.0
    for theta1 in np.linspace(0.0, math.pi, 21):
        for theta2 in np.linspace(0.0, math.pi, 21):
            theta1, theta2 = float(theta1), float(theta2)
            sim = payoff_two_qubit_general(payoffs, UnitaryParams(theta1), UnitaryParams(theta2))
            form = sum(payoffs[2 * k + l]
                       * math.cos((theta1 - k * math.pi) / 2.0) ** 2
                       * math.cos((theta2 - l * math.pi) / 2.0) ** 2
                       for k in (0, 1) for l in (0, 1))
            dev = max(dev, abs(sim - form))
    checks.append(make_check(
        "two_qubit_product_form_vs_simulation", {"grid": 21, "payoffs": list(payoffs)},
        0.0, dev, dev, dev <= 1e-9))

    dev = 0.0
    for _ in range(100):
        theta1 = float(rng.uniform(0.0, math.pi))
        alpha1 = float(rng.uniform(0.0, two_pi))
        beta1 = float(rng.uniform(0.0, two_pi))
        c2 = math.cos(theta1 / 2.0) ** 2
        s2 = math.sin(theta1 / 2.0) ** 2
        form = ((payoffs[0] * math.cos(alpha1) ** 2 + payoffs[3] * math.sin(alpha1) ** 2) * c2
                + (payoffs[1] * math.sin(beta1) ** 2 + payoffs[2] * math.cos(beta1) ** 2) * s2)
        sim = payoff_two_qubit_general(payoffs, UnitaryParams(theta1, alpha1, beta1),
                                       IDENTITY_PARAMS)
        dev = max(dev, abs(sim - form))
    checks.append(make_check(
        "first_qubit_only_form_vs_simulation", {"samples": 100, "seed": seed},
        0.0, dev, dev, dev <= 1e-9))

    dev = 0.0
    for _ in range(100):
        params = UnitaryParams(float(rng.uniform(0.0, math.pi)),
                               float(rng.uniform(0.0, two_pi)),
                               float(rng.uniform(0.0, two_pi)))
        dev = max(dev, eta_symmetry_check(params))
    checks.append(make_check(
        "eta_symmetry", {"samples": 100, "seed": seed}, 0.0, dev, dev, dev <= 1e-12))

    lam = 4.0
    dev_linear = 0.0
    dev_beta0 = 0.0
    game = n_tuple_driver_game(1, lam)
    for theta in np.linspace(0.0, math.pi, 41):
        for alpha in np.linspace(0.0, two_pi, 41):
            theta, alpha = float(theta), float(alpha)
            params = UnitaryParams(theta, alpha if alpha < two_pi else 0.0, 0.0)
            sim = expected_payoff(game, [build_gate(params)] * 2)
            dev_linear = max(dev_linear, abs(sim - _two_param_sine_variant(lam, theta, alpha)))
            dev_beta0 = max(dev_beta0, abs(sim - payoff_three_param(1, lam, params)))
    checks.append(make_check(
        "two_param_form_known_discrepancy", {"lam": lam, "grid": 41},
        {"beta0_reduction_deviation": 0.0, "sine_linear_variant": "documented deviation"},
        {"beta0_reduction_deviation": dev_beta0, "sine_linear_deviation": dev_linear},
        dev_beta0, dev_beta0 <= 1e-9,
        note=("known discrepancy: the sine-linear two-parameter variant deviates from "
              f"simulation by up to {dev_linear:.6f}; the beta=0 reduction of the "
              "three-parameter form matches simulation and is the form this package uses")))
    return make_report(checks)


# --------------------------------------------------------------------------
# recall structure report


def perfect_recall_control() -> DecisionProblem:
    """Two-stage tree whose second move sits in singleton information sets."""
    histories = [(), (0,), (1,)] + [(k, l) for k in (0, 1) for l in (0, 1)]
    labels = {(k, l): f"o{k}{l}" for k in (0, 1) for l in (0, 1)}
    return DecisionProblem(
        histories=tuple(histories),
        terminal_labels=labels,
        info_partition=(((),), ((0,),), ((1,),)),
    )


def recall_verify(problem: DecisionProblem | None = None) -> dict:
    """Flag the imperfect-recall structure of the built-in problems."""
    cases = [
        ("two_stage_imperfect_recall", two_stage_problem(), True),
        ("driver_imperfect_recall", n_tuple_driver(1, 4.0), True),
        ("n_tuple_imperfect_recall", n_tuple_driver(3, 4.0), True),
        ("perfect_recall_control", perfect_recall_control(), False),
    ]
    checks = []
    for name, prob, expected in cases:
        actual = has_imperfect_recall(prob)
        checks.append(make_check(
            name, {"information_sets": len(prob.info_partition)},
            expected, actual, 0.0 if actual == expected else 1.0, actual == expected))
    if problem is not None:
        actual = has_imperfect_recall(problem)
        checks.append(make_check(
            "user_problem_imperfect_recall",
            {"information_sets": len(problem.info_partition)},
            None, actual, 0.0, True,
            note="informational: no expected value for user-supplied problems"))
    return make_report(checks)
