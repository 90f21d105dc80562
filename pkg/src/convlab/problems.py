"""Constructors for the paradigm empirical problems.

Four families: enumerative induction over raven colors (plus its
probabilistic fine-graining), the fair-coin test problem, coin-bias
estimation, and finite binary classification under IID example streams.
World families are finite grids standing in for the continuum the formal
definitions quantify over; tests treat grid membership as the desk-scale
surrogate for "every admissible world".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import seeding
from .core import (
    FAIR,
    NO,
    UNFAIR,
    YES,
    Branch,
    Classifier,
    ConfigurationError,
    EmpiricalProblem,
    FiniteHypothesisSpace,
    InputDomainError,
    IntervalHypothesisSpace,
    LossFunction,
    Measure,
    World,
    absolute_error_loss,
    alternating_branch,
    as_fraction,
    constant_branch,
    identification_loss,
    single_zero_branch,
)

# theta grid used when a coin problem is built without one: a coarse sweep of
# the unit interval plus two near-fair points.
DEFAULT_THETA_GRID = tuple(
    sorted(set(Fraction(k, 10) for k in range(11)) | {Fraction(9, 20), Fraction(11, 20)})
)

BINARY_ALPHABET = (0, 1)


def _num_str(x: Fraction) -> str:
    """Stable decimal rendering for ids: exact when terminating, a/b otherwise."""
    f = float(x)
    if as_fraction(f) == x:
        s = repr(f)
        return s[:-2] if s.endswith(".0") else s
    return f"{x.numerator}/{x.denominator}"


def _truth_of_binary_prefix(prefix) -> str:
    return NO if 0 in prefix else YES


def easy_raven(max_first_zero: int = 20, literal: bool = False) -> EmpiricalProblem:
    """Enumerative induction: are all observations going to be 1?

    The coherent world family pairs each branch with the single truth its
    color pattern supports: a branch whose first 0 arrives at position k
    carries the truth No, and the all-1 branch carries Yes.  The world
    mixing the all-1 branch with No is excluded by the background
    assumption.  ``literal=True`` additionally admits, for each branch with
    a 0, the incoherent twin world that still designates Yes as true; that
    reading is exposed for inspection only and breaks the branch-to-truth
    bijection.
    """
    if max_first_zero < 1:
        raise InputDomainError("max_first_zero must be >= 1")
    worlds = []
    for k in range(1, max_first_zero + 1):
        worlds.append(World(f"first-zero-at-{k}", single_zero_branch(k), NO))
    worlds.append(World("all-ones", constant_branch(1, "all-ones"), YES))
    if literal:
        for k in range(1, max_first_zero + 1):
            worlds.append(
                World(f"first-zero-at-{k}/literal-yes", single_zero_branch(k), YES)
            )
    return EmpiricalProblem(
        name="easy-raven",
        hypothesis_space=FiniteHypothesisSpace((YES, NO)),
        alphabet=BINARY_ALPHABET,
        worlds=tuple(worlds),
        loss=identification_loss(),
        family="easy-raven",
        probe_hypotheses=(YES, NO),
        truth_of_prefix=None if literal else _truth_of_binary_prefix,
    )


def _sampled_raven_branch(p: Fraction, world_id: str, seed: int) -> Branch:
    """One frozen realization of an IID-Bernoulli(p) color stream.

    Sampled by the conditional decomposition: the first-0 position is
    geometric with hit chance 1-p, later tokens are IID draws.  This is
    distributionally identical to direct per-token sampling and records the
    first-zero position, which settles the world's truth.
    """
    rng = seeding.generator(seed, "branch", world_id)
    g = int(rng.geometric(float(1 - p)))
    tail = Measure.iid_bernoulli(p).sample_branch(
        seed, "branch-tail", world_id, branch_id=f"{world_id}/tail"
    )

    def token_at(i: int) -> int:
        if i < g:
            return 1
        if i == g:
            return 0
        return tail.token_at(i - g)

    return Branch(f"sampled/{world_id}", token_at, first_zero=g)


def fine_grained_raven(p_grid: Sequence, seed: int = 0) -> EmpiricalProblem:
    """The raven question with each world carrying an IID color measure.

    Each grid value p is the chance of observing a 1.  p = 1 yields the
    trivial extension: the all-1 branch under a point mass, truth Yes.  For
    p < 1 the frozen branch contains a 0 with probability one, so its truth
    is No by coherence.  Hypotheses and loss are unchanged from the plain
    raven problem.
    """
    ps = [as_fraction(p) for p in p_grid]
    if not ps:
        raise ConfigurationError("p grid must be nonempty")
    for p in ps:
        if not 0 <= p <= 1:
            raise InputDomainError(f"p must lie in [0, 1], got {p}")
    worlds = []
    for p in ps:
        wid = f"p={_num_str(p)}"
        if p == 1:
            branch = constant_branch(1, "all-ones")
            worlds.append(
                World(wid, branch, YES, measure=Measure.point_mass(branch), extras={"p": p})
            )
        else:
            branch = _sampled_raven_branch(p, wid, seed)
            worlds.append(
                World(wid, branch, NO, measure=Measure.iid_bernoulli(p), extras={"p": p})
            )
    return EmpiricalProblem(
        name="fine-grained-raven",
        hypothesis_space=FiniteHypothesisSpace((YES, NO)),
        alphabet=BINARY_ALPHABET,
        worlds=tuple(worlds),
        loss=identification_loss(),
        family="fine-grained-raven",
        probe_hypotheses=(YES, NO),
        truth_of_prefix=_truth_of_binary_prefix,
    )


def _coin_worlds(grid: Sequence[Fraction], seed: int):
    """Shared world construction for the two coin problems.

    Per bias theta: one frozen sampled branch, the alternating 1010...
    branch whenever both tokens have positive probability, and the all-1
    branch at theta = 1/2 (logically possible even under a fair coin).
    Yields (world id, branch, measure, theta).
    """
    alternating = alternating_branch()
    all_ones = constant_branch(1, "all-ones")
    out = []
    for th in grid:
        measure = Measure.iid_bernoulli(th)
        wid = f"theta={_num_str(th)}"
        out.append((wid, measure.sample_branch(seed, "branch", wid, branch_id=f"sampled/{wid}"), measure, th))
        if 0 < th < 1:
            out.append((f"{wid}/alternating", alternating, measure, th))
        if th == Fraction(1, 2):
            out.append((f"{wid}/all-ones", all_ones, measure, th))
    return out


def _normalized_theta_grid(theta_grid) -> tuple[Fraction, ...]:
    grid = DEFAULT_THETA_GRID if theta_grid is None else tuple(as_fraction(t) for t in theta_grid)
    for th in grid:
        if not 0 <= th <= 1:
            raise InputDomainError(f"bias must lie in [0, 1], got {th}")
    return grid


def fair_coin(theta_grid: Optional[Sequence] = None, seed: int = 0) -> EmpiricalProblem:
    """Is the coin fair?  Fair is true exactly in the theta = 1/2 worlds."""
    grid = _normalized_theta_grid(theta_grid)
    if Fraction(1, 2) not in grid or all(th == Fraction(1, 2) for th in grid):
        raise ConfigurationError("theta grid must include 0.5 and at least one other bias")
    worlds = tuple(
        World(wid, branch, FAIR if th == Fraction(1, 2) else UNFAIR, measure, {"theta": th})
        for wid, branch, measure, th in _coin_worlds(grid, seed)
    )
    return EmpiricalProblem(
        name="fair-coin",
        hypothesis_space=FiniteHypothesisSpace((FAIR, UNFAIR)),
        alphabet=BINARY_ALPHABET,
        worlds=worlds,
        loss=identification_loss(),
        family="fair-coin",
        probe_hypotheses=(FAIR, UNFAIR),
    )


def coin_bias(theta_grid: Optional[Sequence] = None, seed: int = 0) -> EmpiricalProblem:
    """What is the coin's bias?  Hypotheses are the unit interval; loss |h - theta|."""
    grid = _normalized_theta_grid(theta_grid)
    worlds = tuple(
        World(wid, branch, th, measure, {"theta": th})
        for wid, branch, measure, th in _coin_worlds(grid, seed)
    )
    return EmpiricalProblem(
        name="coin-bias",
        hypothesis_space=IntervalHypothesisSpace(Fraction(0), Fraction(1)),
        alphabet=BINARY_ALPHABET,
        worlds=worlds,
        loss=absolute_error_loss(),
        family="coin-bias",
        probe_hypotheses=tuple(grid),
    )


# ---------------------------------------------------------------------------
# Binary classification


@dataclass(frozen=True)
class ClassificationTask:
    """A finite feature space, a classifier pool, and a grid of example laws.

    Each distribution maps (feature, label) pairs to exact probabilities
    summing to one.
    """

    features: tuple
    classifiers: tuple[Classifier, ...]
    distribution_grid: tuple[tuple[tuple, ...], ...]  # per D: ((x, y) -> prob) items

    def __post_init__(self):
        if not self.features or not self.classifiers:
            raise ConfigurationError("classification needs nonempty features and classifiers")
        for h in self.classifiers:
            for x in self.features:
                try:
                    h(x)
                except InputDomainError:
                    raise ConfigurationError(
                        f"classifier {h.name!r} is not total on the feature space"
                    ) from None
        for table in self.distribution_grid:
            total = Fraction(0)
            for (x, y), p in table:
                if x not in self.features or y not in (0, 1):
                    raise ConfigurationError(f"pair {(x, y)!r} outside the example space")
                if p < 0:
                    raise ConfigurationError("probabilities must be nonnegative")
                total += p
            if total != 1:
                raise ConfigurationError(f"distribution sums to {total}, not 1")


def classification_task(features, classifiers, distributions) -> ClassificationTask:
    """Normalize plain mappings into an exact-probability task description."""
    grid = tuple(
        tuple(((x, y), as_fraction(p)) for (x, y), p in table.items())
        for table in distributions
    )
    return ClassificationTask(tuple(features), tuple(classifiers), grid)


def risk(h: Classifier, distribution) -> Fraction:
    """Misclassification probability of h under the example distribution."""
    items = distribution.items() if isinstance(distribution, Mapping) else distribution
    total = Fraction(0)
    for (x, y), p in items:
        if h(x) != y:
            total += as_fraction(p)
    return total


def excess_risk_loss(classifiers: tuple[Classifier, ...]) -> LossFunction:
    """Risk above the best achievable in the pool; zero for every minimizer."""

    def ev(h, w):
        table = w.measure.token_probs
        return risk(h, table) - min(risk(g, table) for g in classifiers)

    return LossFunction("excess-risk", ev)


def binary_classification(task: ClassificationTask, seed: int = 0) -> EmpiricalProblem:
    """Which classifier in the pool is best for prediction?

    One world per grid distribution, with a frozen IID example stream.  When
    several classifiers tie at minimum risk the earliest one in the pool
    order is designated as the bookkeeping truth; the excess-risk loss the
    convergence checks consume is unaffected by that designation (every
    minimizer has loss zero, which the validation report then flags as a
    uniqueness gap).
    """
    alphabet = tuple((x, y) for x in task.features for y in (0, 1))
    worlds = []
    for i, table in enumerate(task.distribution_grid):
        measure = Measure.iid_examples(dict(table))
        wid = f"D{i}"
        branch = measure.sample_branch(seed, "branch", wid, branch_id=f"sampled/{wid}")
        risks = [risk(h, table) for h in task.classifiers]
        truth = task.classifiers[risks.index(min(risks))]
        worlds.append(
            World(wid, branch, truth, measure, {"distribution_index": i})
        )
    return EmpiricalProblem(
        name="binary-classification",
        hypothesis_space=FiniteHypothesisSpace(task.classifiers),
        alphabet=alphabet,
        worlds=tuple(worlds),
        loss=excess_risk_loss(task.classifiers),
        family="classification",
        probe_hypotheses=task.classifiers,
    )
