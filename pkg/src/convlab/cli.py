"""Batch front end: experiment configs, execution, and CSV/JSON persistence.

Subcommands: run, curve, verify, witness, bound.  Configs are single JSON
objects; records embed a content digest of the config so a run can be tied
back to the exact bytes that produced it.  Exit codes: 0 success, 2 config
error, 3 runtime/resource error (verify additionally exits 1 when checks
find violations).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import __version__
from .convergence import (
    Budget,
    ModeParams,
    SuccessCurve,
    Verdict,
    bernoulli_bound,
    cardinality_witness_report,
    check_mode,
    mode_params,
    resolve_workers,
    success_curve,
    success_set_curve,
    underdetermination_witness,
    within,
    EXACT,
    MODE_IDENTIFICATION,
    MODE_STOCHASTIC_APPROXIMATION,
    MODE_STOCHASTIC_IDENTIFICATION,
)
from .core import (
    Classifier,
    ConfigurationError,
    EmpiricalProblem,
    InferenceMethod,
    InputDomainError,
    PreconditionError,
    ResourceBudgetError,
    validate_problem,
)
from .methods import ErmConfig, erm_method, fair_coin_test, frequency_estimator, raven_rule
from .problems import (
    binary_classification,
    classification_task,
    coin_bias,
    easy_raven,
    fair_coin,
    fine_grained_raven,
)

CURVE_HEADER = "problem,method,world_id,n,criterion,estimate,stderr,exact,bound"
BOUND_HEADER = "n,eps,bound"


# ---------------------------------------------------------------------------
# Catalogs


def build_problem(name: str, params: dict) -> EmpiricalProblem:
    params = dict(params or {})
    try:
        if name == "easy-raven":
            return easy_raven(
                max_first_zero=int(params.pop("max_first_zero", 20)),
                literal=bool(params.pop("literal", False)),
            )
        if name == "fine-grained-raven":
            return fine_grained_raven(
                params.pop("p_grid"), seed=int(params.pop("world_seed", 0))
            )
        if name == "fair-coin":
            return fair_coin(
                params.pop("theta_grid", None), seed=int(params.pop("world_seed", 0))
            )
        if name == "coin-bias":
            return coin_bias(
                params.pop("theta_grid", None), seed=int(params.pop("world_seed", 0))
            )
        if name == "binary-classification":
            task = classification_task(
                features=params.pop("features"),
                classifiers=[
                    Classifier.from_mapping(c["name"], c["labels"])
                    for c in params.pop("classifiers")
                ],
                distributions=[
                    {(x, y): p for x, y, p in table}
                    for table in params.pop("distributions")
                ],
            )
            return binary_classification(task, seed=int(params.pop("world_seed", 0)))
    except KeyError as e:
        raise ConfigurationError(f"problem.params: missing {e.args[0]!r}") from None
    raise ConfigurationError(f"problem.name: unknown problem {name!r}")


def build_method(name: str, params: dict, problem: EmpiricalProblem) -> InferenceMethod:
    params = dict(params or {})
    if name == "raven-rule":
        return raven_rule
    if name == "fair-coin-test":
        return fair_coin_test
    if name == "frequency-estimator":
        return frequency_estimator
    if name == "erm":
        pool = tuple(problem.hypothesis_space)
        if not pool or not all(isinstance(h, Classifier) for h in pool):
            raise ConfigurationError("method.name: erm needs a classification problem")
        order_names = params.pop("hypothesis_order", None)
        if order_names is not None:
            by_name = {h.name: h for h in pool}
            try:
                pool = tuple(by_name[n] for n in order_names)
            except KeyError as e:
                raise ConfigurationError(
                    f"method.params.hypothesis_order: unknown classifier {e.args[0]!r}"
                ) from None
        return erm_method(ErmConfig(pool))
    raise ConfigurationError(f"method.name: unknown method {name!r}")


# ---------------------------------------------------------------------------
# Config parsing


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    problem_name: str
    problem_params: dict
    method_name: str
    method_params: dict
    mode: ModeParams
    budget: Budget
    seed: int
    workers: int
    curve_path: Optional[str]
    record_path: Optional[str]


def _section(doc: dict, key: str, required: bool = True) -> dict:
    sec = doc.get(key)
    if sec is None:
        if required:
            raise ConfigurationError(f"{key}: section is required")
        return {}
    if not isinstance(sec, dict):
        raise ConfigurationError(f"{key}: expected an object")
    return sec


def parse_config(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigurationError("top level: expected a single experiment object")
    problem = _section(doc, "problem")
    method = _section(doc, "method")
    mode = _section(doc, "mode")
    budget_doc = _section(doc, "budget", required=False)
    output = _section(doc, "output", required=False)
    if "name" not in problem:
        raise ConfigurationError("problem.name: required")
    if "name" not in method:
        raise ConfigurationError("method.name: required")
    try:
        mp = mode_params(
            mode=str(mode.get("mode", "")),
            horizon=mode.get("horizon", 0),
            delta=mode.get("delta"),
            epsilon=mode.get("epsilon"),
            stages=mode.get("stages"),
            world_ids=mode.get("world_ids"),
        )
    except InputDomainError as e:
        raise ConfigurationError(f"mode: {e}") from None
    try:
        budget = Budget(
            strategy=str(budget_doc.get("strategy", "auto")),
            exact_enum_cap=int(budget_doc.get("exact_enum_cap", Budget.exact_enum_cap)),
            symmetric_exact_cap=int(
                budget_doc.get("symmetric_exact_cap", Budget.symmetric_exact_cap)
            ),
            trials=int(budget_doc.get("trials", Budget.trials)),
            mc_margin=float(budget_doc.get("mc_margin", Budget.mc_margin)),
        )
    except (InputDomainError, ValueError) as e:
        raise ConfigurationError(f"budget: {e}") from None
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigurationError("seed: expected an integer")
    workers = doc.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigurationError("workers: expected a positive integer")
    return ExperimentConfig(
        name=str(doc.get("name", "experiment")),
        problem_name=str(problem["name"]),
        problem_params=dict(problem.get("params") or {}),
        method_name=str(method["name"]),
        method_params=dict(method.get("params") or {}),
        mode=mp,
        budget=budget,
        seed=seed,
        workers=workers,
        curve_path=output.get("curve"),
        record_path=output.get("record"),
    )


def config_digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def canonical_bytes(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


# ---------------------------------------------------------------------------
# Serialization


def curve_csv(curve: SuccessCurve) -> str:
    lines = [CURVE_HEADER]
    for pt in curve.points:
        bound = "" if pt.bound is None else repr(float(pt.bound))
        lines.append(
            f"{curve.problem},{curve.method},{pt.world_id},{pt.n},"
            f"{curve.criterion_label},{float(pt.estimate)!r},{float(pt.stderr)!r},"
            f"{'true' if pt.exact else 'false'},{bound}"
        )
    return "\n".join(lines) + "\n"


def emit_bound_table(eps_list, n_values) -> str:
    """CSV of the frequency-concentration lower bound over an (n, eps) grid."""
    lines = [BOUND_HEADER]
    for n in n_values:
        for eps in eps_list:
            b = bernoulli_bound(int(n), eps)
            lines.append(f"{int(n)},{float(eps)!r},{float(b)!r}")
    return "\n".join(lines) + "\n"


def verdict_rows(verdict: Verdict) -> list[dict]:
    return [
        {
            "world_id": wv.world_id,
            "status": wv.status,
            "threshold_stage": wv.threshold_stage,
            "note": wv.note,
        }
        for wv in verdict.worlds
    ]


@dataclass(frozen=True)
class RunRecord:
    config_digest: str
    seed: int
    version: str
    status: str
    mode: str
    horizon: int
    witness_world: Optional[str]
    verdicts: tuple
    curves: tuple[str, ...]
    duration_ms: int
    timestamp: str

    def to_json(self) -> dict:
        return {
            "config_digest": self.config_digest,
            "seed": self.seed,
            "version": self.version,
            "status": self.status,
            "mode": self.mode,
            "horizon": self.horizon,
            "witness_world": self.witness_world,
            "verdicts": list(self.verdicts),
            "curves": list(self.curves),
            "duration_ms": self.duration_ms,
            "timestamp": self.timestamp,
        }


def emit_witness(
    problem: EmpiricalProblem,
    method: Optional[InferenceMethod] = None,
    *,
    depth: Optional[int] = None,
    horizon: int = 64,
) -> dict:
    """JSON-ready description of an unachievability witness.

    With a depth and a method: the never-output hypothesis value plus the
    enumerated-output summary.  Otherwise: a shared-branch world pair with
    distinct truths, or an explicit no-witness statement.
    """
    if depth is not None:
        if method is None:
            raise ConfigurationError("cardinality witness needs a method")
        rep = cardinality_witness_report(method, depth)
        return {"kind": "cardinality", "problem": problem.name, "method": method.name, **rep}
    pair = underdetermination_witness(problem, horizon)
    if pair is None:
        return {
            "kind": "underdetermination",
            "problem": problem.name,
            "witness": None,
            "note": "every branch in the world family carries a single truth",
        }
    w1, w2 = pair
    return {
        "kind": "underdetermination",
        "problem": problem.name,
        "witness": {
            "world_ids": [w1.id, w2.id],
            "truths": [str(w1.truth), str(w2.truth)],
            "shared_branch": w1.branch.id,
            "prefix_equal_through": horizon,
            "prefix_sample": list(w1.branch.prefix(16)),
        },
    }


# ---------------------------------------------------------------------------
# Execution


def run(config: ExperimentConfig, digest: str, out_dir: Path) -> RunRecord:
    """Execute one experiment: mode check, curve CSV, record JSON."""
    t0 = time.perf_counter()
    problem = build_problem(config.problem_name, config.problem_params)
    method = build_method(config.method_name, config.method_params, problem)
    workers = resolve_workers(config.workers)
    verdict = check_mode(
        problem,
        method,
        config.mode,
        budget=config.budget,
        seed=config.seed,
        workers=workers,
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = []
    if verdict.curve is not None:
        curve_name = config.curve_path or f"{config.name}-curve.csv"
        curve_file = out_dir / curve_name
        curve_file.write_text(curve_csv(verdict.curve))
        curves.append(curve_name)
    record = RunRecord(
        config_digest=digest,
        seed=config.seed,
        version=__version__,
        status=verdict.status,
        mode=verdict.mode,
        horizon=verdict.horizon,
        witness_world=verdict.witness_world,
        verdicts=tuple(verdict_rows(verdict)),
        curves=tuple(curves),
        duration_ms=int((time.perf_counter() - t0) * 1000),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    record_name = config.record_path or f"{config.name}-record.json"
    (out_dir / record_name).write_text(json.dumps(record.to_json(), indent=2) + "\n")
    return record


# ---------------------------------------------------------------------------
# Command-line interface


def _load_config(args) -> tuple[ExperimentConfig, str]:
    path = Path(args.config)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ConfigurationError(f"config: cannot read {path}: {e}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"config: invalid JSON at line {e.lineno}: {e.msg}") from None
    overridden = False
    if getattr(args, "seed", None) is not None:
        doc["seed"] = args.seed
        overridden = True
    if getattr(args, "horizon", None) is not None:
        doc.setdefault("mode", {})["horizon"] = args.horizon
        overridden = True
    if getattr(args, "trials", None) is not None:
        doc.setdefault("budget", {})["trials"] = args.trials
        overridden = True
    if getattr(args, "workers", None) is not None:
        doc["workers"] = args.workers
        overridden = True
    digest = config_digest(canonical_bytes(doc) if overridden else raw)
    return parse_config(doc), digest


def _cmd_run(args) -> int:
    config, digest = _load_config(args)
    record = run(config, digest, Path(args.out))
    print(f"{config.name}: {record.status} (mode {record.mode}, horizon {record.horizon})")
    for row in record.verdicts:
        stage = "-" if row["threshold_stage"] is None else row["threshold_stage"]
        print(f"  {row['world_id']}: {row['status']} N={stage}")
    return 0


def _criterion_for(mode: ModeParams):
    if mode.mode == MODE_STOCHASTIC_APPROXIMATION:
        return within(mode.epsilon)
    if mode.mode == MODE_STOCHASTIC_IDENTIFICATION:
        return EXACT
    raise ConfigurationError("mode: success curves need mode II or III")


def _cmd_curve(args) -> int:
    config, _ = _load_config(args)
    problem = build_problem(config.problem_name, config.problem_params)
    method = build_method(config.method_name, config.method_params, problem)
    worlds = (
        tuple(problem.world(i) for i in config.mode.world_ids)
        if config.mode.world_ids is not None
        else problem.worlds
    )
    workers = resolve_workers(config.workers)
    if args.kind == "success-set":
        stages = config.mode.stages or tuple(range(1, config.mode.horizon + 1))
        curve = success_set_curve(
            problem,
            method,
            worlds,
            stages,
            horizon=config.mode.horizon,
            trials=config.budget.trials,
            seed=config.seed,
            workers=workers,
            strategy=config.budget.strategy,
        )
    else:
        curve = success_curve(
            problem,
            method,
            worlds,
            _criterion_for(config.mode),
            config.mode.horizon,
            budget=config.budget,
            seed=config.seed,
            stages=config.mode.stages,
            workers=workers,
        )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / (config.curve_path or f"{config.name}-curve.csv")
    target.write_text(curve_csv(curve))
    print(f"wrote {target}")
    return 0


def _cmd_verify(args) -> int:
    if args.config:
        config, _ = _load_config(args)
        problem = build_problem(config.problem_name, config.problem_params)
    elif args.problem:
        problem = build_problem(args.problem, {})
    else:
        raise ConfigurationError("verify: needs --config or --problem")
    report = validate_problem(problem)
    for check in report.checks:
        flags = []
        if not check.truth_attains_zero:
            flags.append("truth-not-zero-loss")
        if check.rival_zero_loss is not None:
            flags.append(f"second-zero-loss-hypothesis={check.rival_zero_loss!r}")
        if not check.alphabet_ok:
            flags.append("alphabet-violation")
        print(f"{problem.name}/{check.world_id}: {'ok' if check.ok else ';'.join(flags)}")
    if report.all_ok:
        print(f"{problem.name}: all checks passed")
        return 0
    print(f"{problem.name}: violations found")
    return 1


def _cmd_witness(args) -> int:
    if args.config:
        config, _ = _load_config(args)
        problem = build_problem(config.problem_name, config.problem_params)
        method = (
            build_method(config.method_name, config.method_params, problem)
            if args.depth is not None
            else None
        )
    else:
        if not args.problem:
            raise ConfigurationError("witness: needs --config or --problem")
        problem = build_problem(args.problem, {})
        method = build_method(args.method, {}, problem) if args.method else None
    horizon = args.horizon if args.horizon is not None else 64
    doc = emit_witness(problem, method, depth=args.depth, horizon=horizon)
    text = json.dumps(doc, indent=2) + "\n"
    if args.out != ".":
        out = Path(args.out)
        if out.is_dir():
            out = out / f"{problem.name}-witness.json"
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        print(f"wrote {out}")
    else:
        print(text, end="")
    return 0


def _cmd_bound(args) -> int:
    try:
        eps_list = [float(tok) for tok in args.eps.split(",") if tok.strip()]
    except ValueError:
        raise ConfigurationError(f"bound: bad eps list {args.eps!r}") from None
    if not eps_list:
        raise ConfigurationError("bound: eps list is empty")
    if args.n_min < 1 or args.n_max < args.n_min or args.n_step < 1:
        raise ConfigurationError("bound: need 1 <= n-min <= n-max and n-step >= 1")
    n_values = range(args.n_min, args.n_max + 1, args.n_step)
    text = emit_bound_table(eps_list, n_values)
    out = Path(args.out)
    if out.is_dir():
        out = out / "bounds.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(f"wrote {out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the config seed")
    common.add_argument("--horizon", type=int, default=None, help="override the mode horizon")
    common.add_argument("--trials", type=int, default=None, help="override Monte Carlo trials")
    common.add_argument("--workers", type=int, default=None, help="worker thread count")
    common.add_argument("--out", default=".", help="output directory (or file where noted)")

    parser = argparse.ArgumentParser(
        prog="convlab",
        description="Convergence-mode experiments for inductive inference methods.",
    )
    parser.add_argument("--version", action="version", version=f"convlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[common], help="run a configured experiment")
    p_run.add_argument("--config", required=True)
    p_run.set_defaults(handler=_cmd_run)

    p_curve = sub.add_parser("curve", parents=[common], help="emit a success curve CSV")
    p_curve.add_argument("--config", required=True)
    p_curve.add_argument("--kind", choices=["success", "success-set"], default="success")
    p_curve.set_defaults(handler=_cmd_curve)

    p_verify = sub.add_parser("verify", parents=[common], help="validate a problem's worlds")
    p_verify.add_argument("--config")
    p_verify.add_argument("--problem")
    p_verify.set_defaults(handler=_cmd_verify)

    p_wit = sub.add_parser("witness", parents=[common], help="emit an unachievability witness")
    p_wit.add_argument("--config")
    p_wit.add_argument("--problem")
    p_wit.add_argument("--method")
    p_wit.add_argument("--depth", type=int, default=None)
    p_wit.set_defaults(handler=_cmd_witness)

    p_bound = sub.add_parser("bound", parents=[common], help="tabulate the analytic bound")
    p_bound.add_argument("--eps", required=True, help="comma-separated eps values")
    p_bound.add_argument("--n-min", type=int, default=1)
    p_bound.add_argument("--n-max", type=int, required=True)
    p_bound.add_argument("--n-step", type=int, default=1)
    p_bound.set_defaults(handler=_cmd_bound)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigurationError, InputDomainError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (ResourceBudgetError, PreconditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
