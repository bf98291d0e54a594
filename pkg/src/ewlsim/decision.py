"""One-player extensive-form decision problems.

A problem is a prefix-closed tree of action-index sequences, an information
partition over the nonterminal histories, outcome labels on the terminal
histories and (optionally) real payoffs per label.  Strategies come in the
three classical flavors: pure, mixed, behavioral.  Outcome distributions over
terminal labels are the common currency for every equivalence check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Mapping, Sequence, Union

from . import optimize

PROB_TOL = 1e-12

History = tuple[int, ...]


@dataclass(frozen=True)
class DecisionProblem:
    """Finite history tree with an information partition and terminal labels."""

    histories: tuple[History, ...]
    terminal_labels: Mapping[History, str]
    info_partition: tuple[tuple[History, ...], ...]
    payoffs: Mapping[str, float] | None = None

    def __post_init__(self):
        hist = tuple(sorted(set(tuple(h) for h in self.histories), key=lambda h: (len(h), h)))
        object.__setattr__(self, "histories", hist)
        hset = set(hist)
        if () not in hset:
            raise ValueError("the empty history must be present")
        for h in hist:
            if h and h[:-1] not in hset:
                raise ValueError(f"history {h} lacks its prefix {h[:-1]}")

        terminal = {h for h in hist if not any(g[:-1] == h for g in hist if g)}
        labels = {tuple(h): str(lab) for h, lab in self.terminal_labels.items()}
        if set(labels) != terminal:
            raise ValueError("terminal labels must cover exactly the terminal histories")
        object.__setattr__(self, "terminal_labels", labels)

        cells = tuple(tuple(sorted(set(tuple(h) for h in cell), key=lambda h: (len(h), h)))
                      for cell in self.info_partition)
        seen: set[History] = set()
        for cell in cells:
            if not cell:
                raise ValueError("information sets must be nonempty")
            if seen & set(cell):
                raise ValueError("information sets must be disjoint")
            seen |= set(cell)
        nonterminal = hset - terminal
        if seen != nonterminal:
            raise ValueError("information partition must cover exactly the nonterminal histories")
        object.__setattr__(self, "info_partition", cells)
        for cell in cells:
            first = self._raw_actions(cell[0], hset)
            for h in cell[1:]:
                if self._raw_actions(h, hset) != first:
                    raise ValueError(f"histories in one information set need equal action sets: {cell}")

        if self.payoffs is not None:
            pay = {str(k): float(v) for k, v in self.payoffs.items()}
            missing = set(labels.values()) - set(pay)
            if missing:
                raise ValueError(f"payoffs missing for labels {sorted(missing)}")
            object.__setattr__(self, "payoffs", pay)

    @staticmethod
    def _raw_actions(h: History, hset: set[History]) -> tuple[int, ...]:
        return tuple(sorted(g[-1] for g in hset if len(g) == len(h) + 1 and g[:-1] == h))

    @cached_property
    def terminals(self) -> tuple[History, ...]:
        return tuple(h for h in self.histories if h in self.terminal_labels)

    @cached_property
    def nonterminals(self) -> tuple[History, ...]:
        return tuple(h for h in self.histories if h not in self.terminal_labels)

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.terminal_labels.values())))

    @cached_property
    def _set_index(self) -> dict[History, int]:
        return {h: i for i, cell in enumerate(self.info_partition) for h in cell}

    def actions(self, h: History) -> tuple[int, ...]:
        """Sorted action indices available after nonterminal history h."""
        if h not in self._set_index:
            raise ValueError(f"{h} is not a nonterminal history")
        return self._raw_actions(h, set(self.histories))

    def info_set_index(self, h: History) -> int:
        if h not in self._set_index:
            raise ValueError(f"{h} is not a nonterminal history")
        return self._set_index[h]

    def pure_strategies(self) -> list["PureStrategy"]:
        """All pure strategies, in lexicographic order over the partition."""
        action_sets = [self.actions(cell[0]) for cell in self.info_partition]
        return [PureStrategy(choice) for choice in product(*action_sets)]


@dataclass(frozen=True)
class PureStrategy:
    """One action index per information set, in partition order."""

    choices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(int(a) for a in self.choices))


@dataclass(frozen=True)
class MixedStrategy:
    """Probability weights over pure strategies."""

    weights: Mapping[PureStrategy, float]

    def __post_init__(self):
        w = {s: float(p) for s, p in self.weights.items()}
        if any(p < -PROB_TOL for p in w.values()):
            raise ValueError("mixed weights must be nonnegative")
        total = sum(w.values())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"mixed weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", {s: max(p, 0.0) for s, p in w.items()})


@dataclass(frozen=True)
class BehavioralStrategy:
    """One probability vector per information set, over its sorted action set."""

    local: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = []
        for row in self.local:
            row = tuple(float(p) for p in row)
            if any(p < -PROB_TOL for p in row):
                raise ValueError("local probabilities must be nonnegative")
            if abs(sum(row) - 1.0) > PROB_TOL:
                raise ValueError(f"local probabilities sum to {sum(row)!r}, not 1")
            rows.append(tuple(max(p, 0.0) for p in row))
        object.__setattr__(self, "local", tuple(rows))


Strategy = Union[PureStrategy, MixedStrategy, BehavioralStrategy]


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probability distribution over terminal-history labels."""

    probs: Mapping[str, float]

    def __post_init__(self):
        p = {str(k): float(v) for k, v in self.probs.items()}
        if any(v < -PROB_TOL for v in p.values()):
            raise ValueError("outcome probabilities must be nonnegative")
        total = sum(p.values())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"outcome probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", {k: max(v, 0.0) for k, v in p.items()})

    def __getitem__(self, label: str) -> float:
        return self.probs.get(label, 0.0)


def outcome_equivalent(d1: OutcomeDistribution, d2: OutcomeDistribution, tol: float) -> bool:
    """True when the two distributions differ by at most tol on every label."""
    if set(d1.probs) != set(d2.probs):
        raise ValueError("outcome distributions are over different label sets")
    return max(abs(d1.probs[k] - d2.probs[k]) for k in d1.probs) <= tol


# --------------------------------------------------------------------------
# constructors for the concrete problems


def two_stage_problem(o00: str = "o00", o01: str = "o01", o10: str = "o10",
                      o11: str = "o11") -> DecisionProblem:
    """Two choices in a row; the first move is forgotten before the second.

    One information set holds the root, the other holds both length-1
    histories, so the second move cannot depend on the first.
    """
    labels = (o00, o01, o10, o11)
    if len(set(labels)) != 4:
        raise ValueError("the four outcome labels must be distinct")
    histories = [(), (0,), (1,)] + [(k, l) for k in (0, 1) for l in (0, 1)]
    terminal_labels = {(k, l): labels[2 * k + l] for k in (0, 1) for l in (0, 1)}
    return DecisionProblem(
        histories=tuple(histories),
        terminal_labels=terminal_labels,
        info_partition=(((),), ((0,), (1,))),
    )


def n_tuple_driver(n: int, lam: float) -> DecisionProblem:
    """Chain of n+1 indistinguishable intersections.

    Exiting at intersections 1..n pays 0, exiting at intersection n+1 pays
    lam, staying on the motorway throughout pays 1.  A single information set
    holds every decision node, so the same rule must apply at all of them.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n}")
    lam = float(lam)
    histories: list[History] = [()]
    terminal_labels: dict[History, str] = {}
    payoffs: dict[str, float] = {}
    for t in range(1, n + 2):
        stay = (1,) * t
        exit_here = (1,) * (t - 1) + (0,)
        histories += [exit_here, stay]
        if t <= n:
            terminal_labels[exit_here] = f"exit{t}"
            payoffs[f"exit{t}"] = 0.0
        else:
            terminal_labels[exit_here] = "home"
            payoffs["home"] = lam
    terminal_labels[(1,) * (n + 1)] = "lodge"
    payoffs["lodge"] = 1.0
    info_set = tuple((1,) * t for t in range(n + 1))
    return DecisionProblem(
        histories=tuple(histories),
        terminal_labels=terminal_labels,
        info_partition=(info_set,),
        payoffs=payoffs,
    )


def absentminded_driver(lam: float) -> DecisionProblem:
    """The two-intersection driver problem (n_tuple_driver with n = 1)."""
    return n_tuple_driver(1, lam)


def n_tuple_outcomes(n: int) -> DecisionProblem:
    """Same tree as n_tuple_driver, with abstract labels o1..o{n+2} and no payoffs."""
    base = n_tuple_driver(n, 0.0)
    relabel = {}
    for h, lab in base.terminal_labels.items():
        t = len(h)  # exit after t-1 motorway moves ends a length-t history
        relabel[h] = f"o{t}" if h[-1] == 0 else f"o{n + 2}"
    return DecisionProblem(
        histories=base.histories,
        terminal_labels=relabel,
        info_partition=base.info_partition,
    )


# --------------------------------------------------------------------------
# outcomes


def outcome_of(problem: DecisionProblem, strategy: Strategy) -> OutcomeDistribution:
    """Exact outcome distribution of a pure, mixed or behavioral strategy."""
    probs = {lab: 0.0 for lab in set(problem.terminal_labels.values())}
    if isinstance(strategy, PureStrategy):
        probs[problem.terminal_labels[_pure_walk(problem, strategy)]] = 1.0
    elif isinstance(strategy, MixedStrategy):
        for pure, w in strategy.weights.items():
            probs[problem.terminal_labels[_pure_walk(problem, pure)]] += w
    elif isinstance(strategy, BehavioralStrategy):
        if len(strategy.local) != len(problem.info_partition):
            raise ValueError("behavioral strategy does not cover every information set")
        for z in problem.terminals:
            probs[problem.terminal_labels[z]] += _path_probability(problem, strategy, z)
    else:
        raise TypeError(f"unsupported strategy type {type(strategy).__name__}")
    return OutcomeDistribution(probs)


def _pure_walk(problem: DecisionProblem, strategy: PureStrategy) -> History:
    if len(strategy.choices) != len(problem.info_partition):
        raise ValueError("pure strategy does not cover every information set")
    h: History = ()
    while h not in problem.terminal_labels:
        a = strategy.choices[problem.info_set_index(h)]
        if a not in problem.actions(h):
            raise ValueError(f"action {a} unavailable after history {h}")
        h = h + (a,)
    return h


def _path_probability(problem: DecisionProblem, strategy: BehavioralStrategy, z: History) -> float:
    prob = 1.0
    for depth, a in enumerate(z):
        h = z[:depth]
        idx = problem.info_set_index(h)
        acts = problem.actions(h)
        row = strategy.local[idx]
        if len(row) != len(acts):
            raise ValueError(f"behavioral row {idx} has {len(row)} entries for {len(acts)} actions")
        prob *= row[acts.index(a)]
    return prob


def expected_payoff_classical(problem: DecisionProblem, strategy: Strategy) -> float:
    """Expected utility of a strategy; the problem must carry payoffs."""
    if problem.payoffs is None:
        raise ValueError("problem has outcome labels only, no payoffs")
    dist = outcome_of(problem, strategy)
    return sum(problem.payoffs[lab] * p for lab, p in dist.probs.items())


# --------------------------------------------------------------------------
# recall structure


def _experience(problem: DecisionProblem, h: History) -> tuple:
    """Alternating information sets and actions along h, ending at h's own set."""
    seq: list[int] = []
    for depth, a in enumerate(h):
        seq.append(problem.info_set_index(h[:depth]))
        seq.append(a)
    seq.append(problem.info_set_index(h))
    return tuple(seq)


def has_imperfect_recall(problem: DecisionProblem) -> bool:
    """True iff some information set holds histories with different experiences."""
    for cell in problem.info_partition:
        experiences = {_experience(problem, h) for h in cell}
        if len(experiences) > 1:
            return True
    return False


# --------------------------------------------------------------------------
# mixed <-> behavioral translations


def mixed_from_behavioral(problem: DecisionProblem, strategy: BehavioralStrategy) -> MixedStrategy:
    """Product-weight mixed strategy of a behavioral one.

    Outcome-equivalent whenever no history passes through the same
    information set twice (which fails, deliberately, for the driver).
    """
    weights: dict[PureStrategy, float] = {}
    for pure in problem.pure_strategies():
        w = 1.0
        for idx, cell in enumerate(problem.info_partition):
            acts = problem.actions(cell[0])
            w *= strategy.local[idx][acts.index(pure.choices[idx])]
        if w > 0.0:
            weights[pure] = w
    return MixedStrategy(weights)


def behavioral_from_mixed(problem: DecisionProblem, strategy: MixedStrategy) -> BehavioralStrategy:
    """Behavioral strategy from conditional choice probabilities given reach.

    Outcome-equivalent to the mixed strategy on perfect-recall problems.
    """
    rows = []
    for idx, cell in enumerate(problem.info_partition):
        acts = problem.actions(cell[0])
        mass = {a: 0.0 for a in acts}
        reach_total = 0.0
        for pure, w in strategy.weights.items():
            for h in cell:
                if _reaches(problem, pure, h):
                    reach_total += w
                    mass[pure.choices[idx]] += w
        if reach_total > 0.0:
            rows.append(tuple(mass[a] / reach_total for a in acts))
        else:
            rows.append(tuple(1.0 / len(acts) for _ in acts))
    return BehavioralStrategy(tuple(rows))


def _reaches(problem: DecisionProblem, pure: PureStrategy, h: History) -> bool:
    for depth, a in enumerate(h):
        if pure.choices[problem.info_set_index(h[:depth])] != a:
            return False
    return True


# --------------------------------------------------------------------------
# behavioral reachability gap


def behavioral_gap(problem: DecisionProblem, target: OutcomeDistribution,
                   grid_points: int = 201) -> float:
    """Smallest max-norm distance from any behavioral outcome to the target.

    Dense grid over the behavioral parameter box followed by cyclic
    golden-section refinement.  Information sets must be binary (every
    problem built in this module is); cost grows as grid_points**k for k
    binary sets.
    """
    if set(target.probs) != set(problem.terminal_labels.values()):
        raise ValueError("target distribution is not over the problem's labels")
    for cell in problem.info_partition:
        if len(problem.actions(cell[0])) != 2:
            raise ValueError("behavioral_gap supports binary action sets only")
    k = len(problem.info_partition)
    labels = sorted(set(problem.terminal_labels.values()))
    target_vec = [target.probs[lab] for lab in labels]

    # per terminal: indices of the (set, side) factors making up its probability
    compiled: list[tuple[int, list[tuple[int, int]]]] = []
    for z in problem.terminals:
        factors = []
        for depth, a in enumerate(z):
            h = z[:depth]
            idx = problem.info_set_index(h)
            side = problem.actions(h).index(a)
            factors.append((idx, side))
        compiled.append((labels.index(problem.terminal_labels[z]), factors))

    def distance(params: Sequence[float]) -> float:
        acc = [0.0] * len(labels)
        for lab_i, factors in compiled:
            prob = 1.0
            for idx, side in factors:
                prob *= params[idx] if side == 0 else 1.0 - params[idx]
            acc[lab_i] += prob
        return max(abs(a - t) for a, t in zip(acc, target_vec))

    best_v = float("inf")
    best: list[float] = [0.0] * k
    axis = [i / (grid_points - 1) for i in range(grid_points)]
    for point in product(axis, repeat=k):
        v = distance(point)
        if v < best_v:
            best_v, best = v, list(point)

    for _ in range(40):
        improved = False
        for coord in range(k):
            def slice_neg(x, coord=coord):
                probe = list(best)
                probe[coord] = x
                return -distance(probe)

            res = optimize.maximize_1d(slice_neg, 0.0, 1.0, tol=1e-10)
            if -res.value < best_v - 1e-14:
                best_v = -res.value
                best[coord] = res.argmax[0]
                improved = True
        if not improved:
            break
    return best_v


# --------------------------------------------------------------------------
# JSON serialization (histories as arrays of action indices, partition as
# arrays of history indices, labels keyed by history index)


def problem_to_json_dict(problem: DecisionProblem) -> dict:
    index = {h: i for i, h in enumerate(problem.histories)}
    return {
        "histories": [list(h) for h in problem.histories],
        "partition": [[index[h] for h in cell] for cell in problem.info_partition],
        "labels": {str(index[h]): lab for h, lab in sorted(problem.terminal_labels.items())},
        "payoffs": dict(problem.payoffs) if problem.payoffs is not None else None,
    }


def problem_from_json_dict(doc: Mapping) -> DecisionProblem:
    histories = [tuple(int(a) for a in h) for h in doc["histories"]]
    partition = tuple(tuple(histories[i] for i in cell) for cell in doc["partition"])
    labels = {histories[int(i)]: str(lab) for i, lab in doc["labels"].items()}
    payoffs = doc.get("payoffs")
    return DecisionProblem(
        histories=tuple(histories),
        terminal_labels=labels,
        info_partition=partition,
        payoffs=payoffs,
    )


def problem_to_json(problem: DecisionProblem, indent: int | None = 2) -> str:
    return json.dumps(problem_to_json_dict(problem), indent=indent)


def problem_from_json(text: str) -> DecisionProblem:
    return problem_from_json_dict(json.loads(text))
