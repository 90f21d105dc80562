"""Success probabilities, convergence-mode checks, and unachievability witnesses.

The engine evaluates, per world and sample size, the probability that a
method's output meets a success criterion (zero loss, or loss within
epsilon).  Probabilities are computed exactly where the budget allows --
full enumeration of the evidence tree level, or an O(n) binomial sum for
count-symmetric methods under IID-Bernoulli data -- and by seeded Monte
Carlo otherwise.  Mode checks aggregate these into finite-horizon verdicts:
a horizon-stamped verdict is evidence about the limit behaviour, not a
proof, except where an analytic bound certifies all larger sample sizes.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import seeding
from .core import (
    FAIR,
    KIND_IID_BERNOULLI,
    KIND_IID_EXAMPLES,
    KIND_POINT_MASS,
    NO,
    SUSPEND,
    YES,
    EmpiricalProblem,
    InferenceMethod,
    InputDomainError,
    PreconditionError,
    ResourceBudgetError,
    World,
    as_fraction,
    loss_of,
    output_at,
)

MODE_IDENTIFICATION = "I"
MODE_STOCHASTIC_IDENTIFICATION = "II"
MODE_STOCHASTIC_APPROXIMATION = "III"
MODES = (MODE_IDENTIFICATION, MODE_STOCHASTIC_IDENTIFICATION, MODE_STOCHASTIC_APPROXIMATION)

SUPPORTED_AT_HORIZON = "SUPPORTED_AT_HORIZON"
REFUTED_AT_HORIZON = "REFUTED_AT_HORIZON"
INCONCLUSIVE = "INCONCLUSIVE"

_SYMMETRIC_HARD_CAP = 10**6


@dataclass(frozen=True)
class SuccessCriterion:
    """Success means zero loss ("exact") or loss strictly below eps ("within")."""

    kind: str
    eps: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("exact", "within"):
            raise InputDomainError(f"unknown criterion kind {self.kind!r}")
        if self.kind == "within" and (self.eps is None or self.eps <= 0):
            raise InputDomainError("within-criterion needs eps > 0")

    def met(self, loss) -> bool:
        if self.kind == "exact":
            return loss == 0
        return loss < self.eps

    @property
    def label(self) -> str:
        if self.kind == "exact":
            return "exact"
        return f"within:{float(self.eps)}"


EXACT = SuccessCriterion("exact")


def within(eps) -> SuccessCriterion:
    return SuccessCriterion("within", as_fraction(eps))


@dataclass(frozen=True)
class Budget:
    """Caps on exact computation, and Monte Carlo trial/margin settings.

    strategy: "auto" picks exact where affordable and falls back to Monte
    Carlo; "exact" refuses to fall back; "mc" always samples.
    """

    strategy: str = "auto"
    exact_enum_cap: int = 2**20
    symmetric_exact_cap: int = 4096
    trials: int = 10_000
    mc_margin: float = 3.0

    def __post_init__(self):
        if self.strategy not in ("auto", "exact", "mc"):
            raise InputDomainError(f"unknown strategy {self.strategy!r}")
        if self.trials < 1:
            raise InputDomainError("trials must be >= 1")
        if self.exact_enum_cap < 1 or self.symmetric_exact_cap < 0:
            raise InputDomainError("budget caps must be positive")


@dataclass(frozen=True)
class ModeParams:
    """Which convergence mode to check, at which horizon, with which margins.

    delta is the probability slack (modes II/III), epsilon the loss radius
    (mode III).  The quantifier order puts delta and epsilon before the
    world, so per-world threshold stages N are reported and no uniform N is
    required.  stages optionally restricts the evaluated sample sizes for
    the stochastic modes; world_ids restricts the world grid.
    """

    mode: str
    horizon: int
    delta: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None
    stages: Optional[tuple[int, ...]] = None
    world_ids: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputDomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.horizon < 1:
            raise InputDomainError("horizon must be >= 1")
        if self.mode in (MODE_STOCHASTIC_IDENTIFICATION, MODE_STOCHASTIC_APPROXIMATION):
            if self.delta is None or not 0 < self.delta < 1:
                raise InputDomainError("stochastic modes need delta in (0, 1)")
        if self.mode == MODE_STOCHASTIC_APPROXIMATION:
            if self.epsilon is None or self.epsilon <= 0:
                raise InputDomainError("mode III needs epsilon > 0")
        if self.stages is not None:
            if not self.stages or any(s < 1 or s > self.horizon for s in self.stages):
                raise InputDomainError("stages must be nonempty and lie in [1, horizon]")
            if list(self.stages) != sorted(set(self.stages)):
                raise InputDomainError("stages must be strictly increasing")


def mode_params(mode, horizon, delta=None, epsilon=None, stages=None, world_ids=None) -> ModeParams:
    return ModeParams(
        mode=mode,
        horizon=int(horizon),
        delta=None if delta is None else as_fraction(delta),
        epsilon=None if epsilon is None else as_fraction(epsilon),
        stages=None if stages is None else tuple(int(s) for s in stages),
        world_ids=None if world_ids is None else tuple(world_ids),
    )


class Estimate(NamedTuple):
    value: object  # Fraction on exact paths, float otherwise
    stderr: float
    exact: bool


@dataclass(frozen=True)
class CurvePoint:
    world_id: str
    n: int
    estimate: object
    stderr: float
    exact: bool
    bound: Optional[object] = None


@dataclass(frozen=True)
class SuccessCurve:
    problem: str
    method: str
    criterion_label: str
    points: tuple[CurvePoint, ...]


@dataclass(frozen=True)
class WorldVerdict:
    world_id: str
    status: str  # "supported" | "refuted" | "inconclusive"
    threshold_stage: Optional[int]
    note: str = ""


@dataclass(frozen=True)
class Verdict:
    status: str
    mode: str
    horizon: int
    worlds: tuple[WorldVerdict, ...]
    witness_world: Optional[str] = None
    curve: Optional[SuccessCurve] = None


# ---------------------------------------------------------------------------
# Analytic bounds


def bernoulli_bound(n: int, eps) -> Fraction:
    """Lower bound on the chance the sample frequency lands within eps of the bias.

    max(0, 1 - 1/(4*n*eps^2)), valid for every bias; exact rational output.
    """
    if n < 1:
        raise InputDomainError("bound requires n >= 1")
    e = as_fraction(eps)
    if e <= 0:
        raise InputDomainError("bound requires eps > 0")
    return max(Fraction(0), 1 - Fraction(1, 1) / (4 * n * e * e))


def required_sample_size(eps, delta) -> int:
    """Smallest n whose frequency-concentration bound strictly exceeds 1 - delta."""
    e = as_fraction(eps)
    d = as_fraction(delta)
    if e <= 0:
        raise InputDomainError("eps must be > 0")
    if not 0 < d < 1:
        raise InputDomainError("delta must lie in (0, 1)")
    return math.floor(Fraction(1, 1) / (4 * d * e * e)) + 1


def analytic_bound(problem, method, world, n, crit):
    """A certified lower bound on the success probability, where one applies."""
    m = world.measure
    if m is None or m.kind != KIND_IID_BERNOULLI or n < 1:
        return None
    if method.name == "frequency-estimator" and crit.kind == "within":
        return bernoulli_bound(n, crit.eps)
    if method.name == "fair-coin-test" and crit.kind == "exact":
        th = m.theta
        if th == Fraction(1, 2):
            return max(0.0, 1 - 1 / (4 * math.sqrt(n)))
        # Off the fair bias the bound kicks in once the acceptance radius
        # drops strictly below half the gap: n**(-1/4) < |theta - 1/2| / 2.
        half_gap = abs(th - Fraction(1, 2)) / 2
        if n * half_gap**4 > 1:
            return max(0.0, 1 - 1 / (4 * math.sqrt(n)))
    return None


# ---------------------------------------------------------------------------
# Exact success probabilities


def _success_at_counts(problem, method, world, n, k, crit) -> bool:
    out = method.decide_counts(n, k)
    return crit.met(loss_of(problem, out, world))


def exact_success_prob(problem, method, world, n, crit, budget: Optional[Budget] = None) -> Fraction:
    """Exact probability mass of length-n sequences whose output meets the criterion.

    Requires the sequences of length n to be enumerable within the budget,
    or a count-symmetric method under an IID-Bernoulli measure, in which
    case the binomial sum over success counts is used (exact rationals).
    """
    budget = budget or Budget()
    m = world.measure
    if m is None:
        raise PreconditionError(f"world {world.id!r} carries no measure")
    if n < 0:
        raise InputDomainError("sample size must be >= 0")

    if m.kind == KIND_POINT_MASS:
        out = method.decide(m.point.prefix(n))
        return Fraction(1) if crit.met(loss_of(problem, out, world)) else Fraction(0)

    if method.count_symmetric and method.decide_counts and m.kind == KIND_IID_BERNOULLI:
        if n > _SYMMETRIC_HARD_CAP:
            raise ResourceBudgetError(
                f"binomial sum capped at n = {_SYMMETRIC_HARD_CAP}; use mc_success_prob"
            )
        th = m.theta
        p, q = th.numerator, th.denominator
        num = 0
        for k in range(n + 1):
            if _success_at_counts(problem, method, world, n, k, crit):
                num += math.comb(n, k) * p**k * (q - p) ** (n - k)
        return Fraction(num, q**n)

    if m.kind in (KIND_IID_BERNOULLI, KIND_IID_EXAMPLES):
        support = [(tok, pr) for tok, pr in m.token_probs if pr > 0]
        if len(support) ** n > budget.exact_enum_cap:
            raise ResourceBudgetError(
                f"enumerating {len(support)}**{n} sequences exceeds the budget; "
                "use mc_success_prob"
            )
        total = Fraction(0)

        def walk(prefix, weight):
            nonlocal total
            if len(prefix) == n:
                if crit.met(loss_of(problem, method.decide(prefix), world)):
                    total += weight
                return
            for tok, pr in support:
                walk(prefix + (tok,), weight * pr)

        walk((), Fraction(1))
        return total

    # Custom measures only expose node probabilities, so enumerate leaves.
    if len(problem.alphabet) ** n > budget.exact_enum_cap:
        raise ResourceBudgetError("enumeration exceeds the budget; use mc_success_prob")
    total = Fraction(0)
    for seq in itertools.product(problem.alphabet, repeat=n):
        w = m.prefix_prob(seq)
        if w > 0 and crit.met(loss_of(problem, method.decide(seq), world)):
            total += w
    return total


# ---------------------------------------------------------------------------
# Monte Carlo success probabilities


def _binomial_stderr(p_hat: float, trials: int) -> float:
    return math.sqrt(max(0.0, p_hat * (1.0 - p_hat)) / trials)


def mc_success_prob(problem, method, world, n, crit, trials: int, seed: int) -> Estimate:
    """Seeded Monte Carlo estimate of the success probability at sample size n.

    The generator is derived from (seed, world id, n), so the estimate is
    reproducible for fixed arguments no matter which worker evaluates it or
    in which order the (world, n) work items run.
    """
    m = world.measure
    if m is None:
        raise PreconditionError(f"world {world.id!r} carries no measure")
    if trials < 1:
        raise InputDomainError("trials must be >= 1")

    if m.kind == KIND_POINT_MASS:
        out = method.decide(m.point.prefix(n))
        hit = crit.met(loss_of(problem, out, world))
        return Estimate(1.0 if hit else 0.0, 0.0, True)

    rng = seeding.generator(seed, "mc", world.id, n)

    if method.success_block is not None and m.kind == KIND_IID_EXAMPLES:
        flags = np.asarray(method.success_block(problem, world, n, crit, trials, rng), dtype=bool)
    elif method.count_symmetric and method.decide_counts and m.kind == KIND_IID_BERNOULLI:
        ks = rng.binomial(n, float(m.theta), size=trials)
        cache = {}
        flags = np.empty(trials, dtype=bool)
        for i, k in enumerate(ks):
            k = int(k)
            if k not in cache:
                cache[k] = _success_at_counts(problem, method, world, n, k, crit)
            flags[i] = cache[k]
    else:
        flags = np.empty(trials, dtype=bool)
        for t in range(trials):
            seq = m.sample_prefix(rng, n)
            flags[t] = crit.met(loss_of(problem, method.decide(seq), world))

    p_hat = float(flags.mean())
    return Estimate(p_hat, _binomial_stderr(p_hat, trials), False)


# ---------------------------------------------------------------------------
# Curves


def _exact_affordable(method, world, n, budget: Budget) -> bool:
    m = world.measure
    if m.kind == KIND_POINT_MASS:
        return True
    if (
        method.count_symmetric
        and method.decide_counts
        and m.kind == KIND_IID_BERNOULLI
        and n <= budget.symmetric_exact_cap
    ):
        return True
    if m.kind in (KIND_IID_BERNOULLI, KIND_IID_EXAMPLES):
        support = sum(1 for _, pr in m.token_probs if pr > 0)
        return support**n <= budget.exact_enum_cap
    return False


def resolve_workers(requested: Optional[int]) -> int:
    """Worker count after applying the CONVLAB_THREADS environment cap."""
    w = 1 if requested is None else max(1, int(requested))
    env = os.environ.get("CONVLAB_THREADS")
    if env:
        try:
            w = min(w, max(1, int(env)))
        except ValueError:
            raise InputDomainError(f"CONVLAB_THREADS must be an integer, got {env!r}") from None
    return w


def _map_items(fn, keys, workers: int) -> dict:
    # Results land in a dict keyed by work item, so assembly order never
    # depends on the execution schedule.
    if workers <= 1:
        return {key: fn(key) for key in keys}
    with ThreadPoolExecutor(max_workers=workers) as ex:
        futures = {key: ex.submit(fn, key) for key in keys}
        return {key: fut.result() for key, fut in futures.items()}


def success_curve(
    problem: EmpiricalProblem,
    method: InferenceMethod,
    worlds: Sequence[World],
    crit: SuccessCriterion,
    horizon: int,
    *,
    budget: Optional[Budget] = None,
    seed: int = 0,
    stages: Optional[Sequence[int]] = None,
    workers: int = 1,
) -> SuccessCurve:
    """Success-probability estimates per (world, n), exact where affordable.

    Rows carry the analytic lower bound when one applies.  Identical
    (arguments, seed) produce identical curves at any worker count.
    """
    budget = budget or Budget()
    if horizon < 1:
        raise InputDomainError("horizon must be >= 1")
    stage_list = tuple(stages) if stages is not None else tuple(range(1, horizon + 1))
    if any(s < 1 or s > horizon for s in stage_list):
        raise InputDomainError("stages must lie in [1, horizon]")
    worlds = tuple(worlds)
    workers = resolve_workers(workers)

    def evaluate(key):
        wi, n = key
        w = worlds[wi]
        if budget.strategy != "mc" and _exact_affordable(method, w, n, budget):
            p = exact_success_prob(problem, method, w, n, crit, budget)
            est = Estimate(p, 0.0, True)
        elif budget.strategy == "exact":
            raise ResourceBudgetError(
                f"exact strategy: no exact path for world {w.id!r} at n={n}"
            )
        else:
            est = mc_success_prob(problem, method, w, n, crit, budget.trials, seed)
        return CurvePoint(
            world_id=w.id,
            n=n,
            estimate=est.value,
            stderr=est.stderr,
            exact=est.exact,
            bound=analytic_bound(problem, method, w, n, crit),
        )

    keys = [(wi, n) for wi in range(len(worlds)) for n in stage_list]
    results = _map_items(evaluate, keys, workers)
    points = tuple(results[k] for k in keys)
    return SuccessCurve(problem.name, method.name, crit.label, points)


# ---------------------------------------------------------------------------
# Mode checks


def _trailing_pass_start(stages, statuses) -> Optional[int]:
    """First stage of the trailing all-PASS run, or None if the run is empty."""
    start = None
    for s, st in zip(reversed(stages), reversed(statuses)):
        if st == "pass":
            start = s
        else:
            break
    return start


def _check_identification(problem, method, worlds, horizon) -> Verdict:
    world_verdicts = []
    witness = None
    for w in worlds:
        stages = list(range(0, horizon + 1))
        losses = [loss_of(problem, output_at(method, w, s), w) for s in stages]
        statuses = ["pass" if L == 0 else "fail" for L in losses]
        n0 = _trailing_pass_start(stages, statuses)
        if n0 is not None:
            world_verdicts.append(WorldVerdict(w.id, "supported", n0))
        else:
            fail_stages = [s for s, st in zip(stages, statuses) if st == "fail"]
            note = (
                f"positive loss at stage {horizon} (loss={losses[-1]}); "
                f"{len(fail_stages)} failing stages, last at {fail_stages[-1]}"
            )
            world_verdicts.append(WorldVerdict(w.id, "refuted", None, note))
            if witness is None:
                witness = w.id
    status = REFUTED_AT_HORIZON if witness else SUPPORTED_AT_HORIZON
    return Verdict(status, MODE_IDENTIFICATION, horizon, tuple(world_verdicts), witness, None)


def _stage_status(point: CurvePoint, threshold: Fraction, margin: float) -> str:
    if point.exact:
        return "pass" if point.estimate > threshold else "fail"
    thr = float(threshold)
    if point.estimate - margin * point.stderr > thr:
        return "pass"
    if point.estimate + margin * point.stderr <= thr:
        return "fail"
    return "marginal"


def check_mode(
    problem: EmpiricalProblem,
    method: InferenceMethod,
    params: ModeParams,
    *,
    budget: Optional[Budget] = None,
    seed: int = 0,
    workers: int = 1,
) -> Verdict:
    """Finite-horizon check of one convergence mode over the world grid.

    Mode I scans per-world losses along the frozen branch for a trailing
    zero-loss run.  Modes II and III require every grid world to carry a
    measure; their success curves must clear 1 - delta from some stage
    through the horizon, with a sampling margin (estimate - margin*stderr)
    on Monte Carlo entries.  Stages that fail the raw threshold but sit
    inside the margin yield an inconclusive world rather than a refuted one.
    """
    budget = budget or Budget()
    worlds = (
        tuple(problem.world(i) for i in params.world_ids)
        if params.world_ids is not None
        else problem.worlds
    )
    if params.mode == MODE_IDENTIFICATION:
        return _check_identification(problem, method, worlds, params.horizon)

    missing = [w.id for w in worlds if w.measure is None]
    if missing:
        raise PreconditionError(
            f"stochastic mode checks need a measure in every world; missing in {missing}"
        )
    crit = EXACT if params.mode == MODE_STOCHASTIC_IDENTIFICATION else within(params.epsilon)
    curve = success_curve(
        problem,
        method,
        worlds,
        crit,
        params.horizon,
        budget=budget,
        seed=seed,
        stages=params.stages,
        workers=workers,
    )
    threshold = 1 - params.delta
    by_world: dict[str, list[CurvePoint]] = {w.id: [] for w in worlds}
    for pt in curve.points:
        by_world[pt.world_id].append(pt)

    world_verdicts = []
    witness = None
    any_inconclusive = False
    for w in worlds:
        pts = by_world[w.id]
        stages = [p.n for p in pts]
        statuses = [_stage_status(p, threshold, budget.mc_margin) for p in pts]
        n0 = _trailing_pass_start(stages, statuses)
        if n0 is not None:
            world_verdicts.append(WorldVerdict(w.id, "supported", n0))
        elif statuses[-1] == "fail":
            last = pts[-1]
            note = (
                f"success probability {float(last.estimate):.6g} "
                f"(stderr {last.stderr:.2g}) at stage {last.n} "
                f"does not exceed 1-delta = {float(threshold):.6g}"
            )
            world_verdicts.append(WorldVerdict(w.id, "refuted", None, note))
            if witness is None:
                witness = w.id
        else:
            world_verdicts.append(
                WorldVerdict(w.id, "inconclusive", None, "final stage within sampling margin")
            )
            any_inconclusive = True

    if witness:
        status = REFUTED_AT_HORIZON
    elif any_inconclusive:
        status = INCONCLUSIVE
    else:
        status = SUPPORTED_AT_HORIZON
    return Verdict(status, params.mode, params.horizon, tuple(world_verdicts), witness, curve)


# ---------------------------------------------------------------------------
# Lock times and success sets


def lock_time(problem, method, world, horizon: int) -> Optional[int]:
    """First stage from which outputs attain zero loss through the horizon.

    For first-zero-locking methods on branches with known zero structure the
    answer is horizon-free (the rule's output settles permanently); otherwise
    it is relative to the horizon.  None when no such stage <= horizon exists.
    """
    if horizon < 1:
        raise InputDomainError("horizon must be >= 1")
    b = world.branch
    if (
        method.locks_at_first_zero
        and problem.loss.name == "identification"
        and (b.zero_free or b.first_zero is not None)
    ):
        coherent = YES if b.zero_free else NO
        if world.truth != coherent:
            return None
        cand = 0 if b.zero_free else b.first_zero
        return cand if cand <= horizon else None
    stages = list(range(0, horizon + 1))
    losses = [loss_of(problem, output_at(method, world, s), world) for s in stages]
    return _trailing_pass_start(stages, ["pass" if L == 0 else "fail" for L in losses])


def _require_success_set_support(problem, world):
    m = world.measure
    if m is None:
        raise PreconditionError(f"world {world.id!r} carries no measure")
    if m.kind not in (KIND_IID_BERNOULLI, KIND_IID_EXAMPLES, KIND_POINT_MASS):
        raise PreconditionError("success-set machinery needs a countably additive catalog measure")
    if problem.truth_of_prefix is None:
        raise PreconditionError(
            "success-set machinery needs a problem whose branches determine truths one-to-one"
        )


def _lock_stage_samples(problem, method, world, horizon, trials, seed) -> np.ndarray:
    """Per sampled branch: the stage at which the method locks onto the truth.

    Exact (horizon-free) via the geometric first-zero law for first-zero
    locking methods; otherwise the start of the trailing zero-loss run
    through the horizon, with horizon+1 where none exists.  The sample is
    derived from (seed, world id, horizon) only, so all stages n share it --
    that is what makes the monotonicity check a genuine set-inclusion test.
    """
    m = world.measure
    rng = seeding.generator(seed, "success-set", world.id, horizon)
    if m.kind == KIND_POINT_MASS:
        lock = lock_time(problem, method, replace_world_truth(problem, world, m.point.prefix(horizon)), horizon)
        val = lock if lock is not None else horizon + 1
        return np.full(trials, val, dtype=np.int64)

    if method.locks_at_first_zero and m.kind == KIND_IID_BERNOULLI:
        # The lock stage is the first-zero position, whose law is geometric
        # with hit chance 1 - theta.  Sampling it directly is horizon-free
        # and avoids the truncation bias of scanning a finite prefix (a
        # branch with no zero by the horizon is almost surely unlocked at
        # a later stage, not locked at 0).
        th = m.theta
        if th == 1:
            return np.zeros(trials, dtype=np.int64)
        return rng.geometric(float(1 - th), size=trials).astype(np.int64)

    locks = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        prefix = m.sample_prefix(rng, horizon)
        truth = problem.truth_of_prefix(prefix)
        ephemeral = replace(world, truth=truth)
        stages = list(range(0, horizon + 1))
        losses = [
            loss_of(problem, method.decide(prefix[:s]), ephemeral) for s in stages
        ]
        n0 = _trailing_pass_start(stages, ["pass" if L == 0 else "fail" for L in losses])
        locks[t] = n0 if n0 is not None else horizon + 1
    return locks


def replace_world_truth(problem, world, prefix):
    """World with its truth re-resolved from a branch prefix (coherence)."""
    return replace(world, truth=problem.truth_of_prefix(prefix))


def success_set_prob(
    problem,
    method,
    world,
    n: int,
    *,
    horizon: Optional[int] = None,
    trials: int = 10_000,
    seed: int = 0,
    strategy: str = "auto",
) -> Estimate:
    """Probability that the method has locked onto the truth by stage n.

    Exact closed form for first-zero-locking methods under IID-Bernoulli(p):
    1 - p**n (the chance a 0 has shown up by stage n); 1 for the point-mass
    world when the lock happens on its branch.  Monte Carlo with an explicit
    horizon otherwise, or always under strategy="mc".
    """
    if strategy not in ("auto", "exact", "mc"):
        raise InputDomainError(f"unknown strategy {strategy!r}")
    _require_success_set_support(problem, world)
    if n < 0:
        raise InputDomainError("n must be >= 0")
    m = world.measure

    if strategy != "mc":
        if method.locks_at_first_zero and m.kind == KIND_IID_BERNOULLI:
            p = m.theta
            return Estimate(1 - p**n, 0.0, True)
        if m.kind == KIND_POINT_MASS:
            scan = max(n, 1) if horizon is None else horizon
            lock = lock_time(
                problem, method, replace_world_truth(problem, world, m.point.prefix(scan)), scan
            )
            hit = lock is not None and lock <= n
            return Estimate(Fraction(1 if hit else 0), 0.0, True)
        if strategy == "exact":
            raise ResourceBudgetError("no exact success-set path for this method/measure")

    T = horizon if horizon is not None else max(n, 1)
    if T < n:
        raise PreconditionError("horizon must be >= n")
    locks = _lock_stage_samples(problem, method, world, T, trials, seed)
    flags = locks <= n
    p_hat = float(flags.mean())
    return Estimate(p_hat, _binomial_stderr(p_hat, trials), False)


def success_set_monotone(
    problem,
    method,
    world,
    n: int,
    n_prime: int,
    *,
    horizon: int,
    trials: int = 10_000,
    seed: int = 0,
) -> bool:
    """Set inclusion on shared samples: every branch locked by n is locked by n'."""
    if not 0 <= n <= n_prime <= horizon:
        raise InputDomainError("need 0 <= n <= n' <= horizon")
    _require_success_set_support(problem, world)
    locks = _lock_stage_samples(problem, method, world, horizon, trials, seed)
    return not bool(np.any((locks <= n) & ~(locks <= n_prime)))


def success_set_curve(
    problem,
    method,
    worlds: Sequence[World],
    stages: Sequence[int],
    *,
    horizon: int,
    trials: int = 10_000,
    seed: int = 0,
    workers: int = 1,
    strategy: str = "auto",
) -> SuccessCurve:
    """Lock-probability curve per (world, n); exact where a closed form exists.

    All stages of one world share the branch sample derived from
    (seed, world id, horizon), so the curve is nondecreasing by construction
    on the Monte Carlo path as well.
    """
    worlds = tuple(worlds)
    stage_list = tuple(stages)
    if any(s < 0 or s > horizon for s in stage_list):
        raise InputDomainError("stages must lie in [0, horizon]")
    workers = resolve_workers(workers)

    def evaluate(wi):
        w = worlds[wi]
        pts = []
        m = w.measure
        exact_path = strategy != "mc" and (
            m.kind == KIND_POINT_MASS
            or (method.locks_at_first_zero and m.kind == KIND_IID_BERNOULLI)
        )
        locks = (
            None
            if exact_path
            else _lock_stage_samples(problem, method, w, horizon, trials, seed)
        )
        for n in stage_list:
            if exact_path:
                est = success_set_prob(
                    problem, method, w, n, horizon=horizon, trials=trials, seed=seed,
                    strategy=strategy,
                )
            else:
                flags = locks <= n
                p_hat = float(flags.mean())
                est = Estimate(p_hat, _binomial_stderr(p_hat, trials), False)
            pts.append(CurvePoint(w.id, n, est.value, est.stderr, est.exact, None))
        return pts

    results = _map_items(evaluate, list(range(len(worlds))), workers)
    points = tuple(pt for wi in range(len(worlds)) for pt in results[wi])
    return SuccessCurve(problem.name, method.name, "success-set", points)


# ---------------------------------------------------------------------------
# Unachievability witnesses


def underdetermination_witness(
    problem: EmpiricalProblem, horizon: int = 64
) -> Optional[tuple[World, World]]:
    """Two admitted worlds sharing one branch but with different truths.

    Any method outputs the same hypothesis on the shared data at every
    stage, so zero loss in one world forces positive loss in the other:
    the pair refutes nonstochastic identification.  None when every branch
    in the family carries a single truth.
    """
    groups: dict[str, list[World]] = {}
    for w in problem.worlds:
        groups.setdefault(w.branch.id, []).append(w)
    for bid, members in groups.items():
        if len(members) < 2:
            continue
        ref = members[0].branch.prefix(horizon)
        if any(w.branch.prefix(horizon) != ref for w in members[1:]):
            continue
        first = next(
            (
                w
                for w in members
                if w.truth == FAIR or w.extras.get("theta") == Fraction(1, 2)
            ),
            members[0],
        )
        partner = next((w for w in members if w.truth != first.truth), None)
        if partner is not None:
            return (first, partner)
    return None


def _enumerate_outputs(method, depth: int):
    if method.count_symmetric and method.decide_counts:
        for n in range(depth + 1):
            for k in range(n + 1):
                yield method.decide_counts(n, k)
        return
    if depth > 20:
        raise ResourceBudgetError("enumerating 2**(depth+1) inputs exceeds the budget")
    for n in range(depth + 1):
        for seq in itertools.product((0, 1), repeat=n):
            yield method.decide(seq)


def _output_gap(method, depth: int):
    values = set()
    for out in _enumerate_outputs(method, depth):
        if out is SUSPEND:
            continue
        if isinstance(out, bool) or not isinstance(out, (int, float, Fraction)):
            raise TypeError(f"cardinality witness needs real-valued outputs, got {out!r}")
        v = Fraction(out)
        if not 0 <= v <= 1:
            raise InputDomainError(f"output {out!r} outside [0, 1]")
        values.add(v)
    points = sorted(values | {Fraction(0), Fraction(1)})
    best_lo, best_hi = points[0], points[1]
    for lo, hi in zip(points, points[1:]):
        if hi - lo > best_hi - best_lo:  # strict: ties keep the lowest interval
            best_lo, best_hi = lo, hi
    return best_lo, best_hi, values


def cardinality_witness(method: InferenceMethod, depth: int = 15) -> Fraction:
    """A hypothesis value in [0, 1] the method never outputs on inputs up to depth.

    Enumerates the method's outputs on all binary inputs of length <= depth,
    augments the sorted value set with the endpoints 0 and 1, and returns the
    midpoint of the widest gap (ties resolved toward the lowest interval).
    Finitely many inputs can only realise finitely many of the continuum of
    values, so the gap is always nonempty.
    """
    if depth < 0:
        raise InputDomainError("depth must be >= 0")
    lo, hi, _ = _output_gap(method, depth)
    return (lo + hi) / 2


def cardinality_witness_report(method: InferenceMethod, depth: int = 15) -> dict:
    """Witness value plus the enumerated-output summary, for serialization."""
    lo, hi, values = _output_gap(method, depth)
    return {
        "witness": str((lo + hi) / 2),
        "witness_float": float((lo + hi) / 2),
        "gap": [str(lo), str(hi)],
        "depth": depth,
        "distinct_outputs": len(values),
    }
