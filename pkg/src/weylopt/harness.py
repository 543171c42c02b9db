"""
Experiment runner: optimizer comparison, alpha ablation and step-cost benchmark.

Configs are JSON. Every field is optional; missing ones take the defaults
below and the fully resolved config is echoed into each report::

    {
      "dataset": {"kind": "synthetic", "n": 20000, "d": 10,
                  "positive_rate": 0.005, "separation": 2.0},
      "optimizers": [
        {"name": "classical", "kind": "classical", "learning_rate": 0.1},
        {"name": "weyl", "kind": "weyl", "learning_rate": 0.1, "alpha": 0.6,
         "window": 64, "scale": "logarithmic", "weight": {"rational": 0.1},
         "normalize": true}
      ],
      "epochs": 500,
      "test_fraction": 0.2,
      "seeds": [1, 2, 3, 4, 5],
      "grad_noise": 0.0,
      "alpha_grid": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99],
      "bench": {"windows": [8, 64], "dim": 30, "probe_steps": 200}
    }

A CSV dataset is given as ``{"kind": "csv", "path": ..., "label_column": ...,
"positive_label": ...}``; relative paths resolve against the config file.
``scale`` is ``"logarithmic"``, ``"identity"`` or ``{"power": p}``;
``weight`` is ``{"rational": c}`` or ``"constant"``.

Output layout under ``--out``::

    seed_<s>/report.json, seed_<s>/loss_<name>.csv, seed_<s>/pr_<name>.csv
    ablation.csv, ablation_summary.csv
    bench.csv
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import logging
import os
import statistics
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from weylopt.data import CSVError, Dataset, load_csv, standardize, stratified_split, synth_imbalanced
from weylopt.fracmem import ConfigError, Constant, Identity, Logarithmic, Power, Rational
from weylopt.metrics import pr_curve, total_variation
from weylopt.model import DivergenceError, LogisticModel, predict_proba, train
from weylopt.optim import ClassicalGD, WeylConfig, WeylOptimizer

log = logging.getLogger("weylopt")

DEFAULT_ALPHA_GRID = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]

DEFAULT_DATASET = {"kind": "synthetic", "n": 20000, "d": 10, "positive_rate": 0.005, "separation": 2.0}

DEFAULT_OPTIMIZERS = [
    {"name": "classical", "kind": "classical", "learning_rate": 0.1},
    {"name": "weyl", "kind": "weyl", "learning_rate": 0.1, "alpha": 0.6, "window": 64},
]

_WEYL_DEFAULTS = {
    "learning_rate": 0.1,
    "alpha": 0.6,
    "window": 64,
    "scale": "logarithmic",
    "weight": {"rational": 0.1},
    "normalize": True,
}

PROTOCOL = {
    "batch": "full",
    "split": "stratified",
    "standardization": "z-score with training-split population statistics",
    "initialization": "zeros",
    "loss": "mean binary cross-entropy",
    "pr_auc": "average precision (right-step)",
}


# -- config ---------------------------------------------------------------------


def _parse_scale(spec):
    if spec == "logarithmic":
        return Logarithmic()
    if spec == "identity":
        return Identity()
    if isinstance(spec, dict) and set(spec) == {"power"}:
        return Power(float(spec["power"]))
    raise ConfigError(f"unknown scale {spec!r}; use 'logarithmic', 'identity' or {{'power': p}}")


def _parse_weight(spec):
    if spec == "constant":
        return Constant()
    if isinstance(spec, dict) and set(spec) == {"rational"}:
        return Rational(float(spec["rational"]))
    raise ConfigError(f"unknown weight {spec!r}; use 'constant' or {{'rational': c}}")


def _resolve_optimizer(spec: dict) -> dict:
    if not isinstance(spec, dict):
        raise ConfigError(f"optimizer spec must be an object, got {spec!r}")
    kind = spec.get("kind")
    if kind == "classical":
        out = {"name": "classical", "kind": "classical", "learning_rate": 0.1}
        unknown = set(spec) - set(out)
    elif kind == "weyl":
        out = {"name": "weyl", "kind": "weyl", **_WEYL_DEFAULTS}
        unknown = set(spec) - set(out)
    else:
        raise ConfigError(f"optimizer kind must be 'classical' or 'weyl', got {kind!r}")
    if unknown:
        raise ConfigError(f"unknown optimizer fields {sorted(unknown)}")
    out.update(copy.deepcopy(spec))
    build_optimizer(out)  # validate eagerly
    return out


def build_optimizer(spec: dict):
    if spec["kind"] == "classical":
        return ClassicalGD(float(spec["learning_rate"]))
    return WeylOptimizer(
        WeylConfig(
            alpha=float(spec["alpha"]),
            window=int(spec["window"]),
            scale=_parse_scale(spec["scale"]),
            weight=_parse_weight(spec["weight"]),
            normalize=bool(spec["normalize"]),
            learning_rate=float(spec["learning_rate"]),
        )
    )


@dataclass
class ExperimentConfig:
    dataset: dict = field(default_factory=lambda: dict(DEFAULT_DATASET))
    optimizers: list = field(default_factory=lambda: copy.deepcopy(DEFAULT_OPTIMIZERS))
    epochs: int = 500
    test_fraction: float = 0.2
    seeds: list = field(default_factory=lambda: [1, 2, 3, 4, 5])
    grad_noise: float = 0.0
    alpha_grid: list = field(default_factory=lambda: list(DEFAULT_ALPHA_GRID))
    bench: dict = field(default_factory=lambda: {"windows": [8, 64], "dim": 30, "probe_steps": 200})

    def __post_init__(self):
        ds = self.dataset
        if ds.get("kind") == "synthetic":
            self.dataset = {**DEFAULT_DATASET, **ds}
        elif ds.get("kind") == "csv":
            missing = {"path", "label_column", "positive_label"} - set(ds)
            if missing:
                raise ConfigError(f"csv dataset missing fields {sorted(missing)}")
        else:
            raise ConfigError(f"dataset kind must be 'synthetic' or 'csv', got {ds.get('kind')!r}")
        if not self.optimizers:
            raise ConfigError("at least one optimizer spec is required")
        self.optimizers = [_resolve_optimizer(s) for s in self.optimizers]
        names = [s["name"] for s in self.optimizers]
        if len(set(names)) != len(names):
            raise ConfigError(f"optimizer names must be unique, got {names}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        self.seeds = [int(s) for s in self.seeds]
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ConfigError(f"epochs must be a positive integer, got {self.epochs!r}")
        self.epochs = int(self.epochs)
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError(f"test_fraction must lie in (0, 1), got {self.test_fraction!r}")
        if self.grad_noise < 0:
            raise ConfigError(f"grad_noise must be >= 0, got {self.grad_noise!r}")
        self.bench = {"windows": [8, 64], "dim": 30, "probe_steps": 200, **self.bench}

    @classmethod
    def from_dict(cls, raw: dict, base_dir=None) -> "ExperimentConfig":
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        raw = copy.deepcopy(raw)
        ds = raw.get("dataset")
        if ds and ds.get("kind") == "csv" and base_dir is not None and not os.path.isabs(ds.get("path", "/")):
            ds["path"] = str(Path(base_dir) / ds["path"])
        return cls(**raw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return cls.from_dict(raw, base_dir=Path(path).parent)

    def to_dict(self) -> dict:
        return {name: copy.deepcopy(getattr(self, name)) for name in self.__dataclass_fields__}


# -- runs -------------------------------------------------------------------------


def prepare_data(config: ExperimentConfig, seed: int):
    """Dataset for ``seed``, split and standardized with training statistics."""
    ds = config.dataset
    if ds["kind"] == "synthetic":
        full = synth_imbalanced(int(ds["n"]), int(ds["d"]), float(ds["positive_rate"]), float(ds["separation"]), seed)
    else:
        full = load_csv(ds["path"], ds["label_column"], str(ds["positive_label"]))
    tr, te = stratified_split(full, config.test_fraction, seed)
    _, (tr, te) = standardize(tr, [te])
    return tr, te


def run_one(spec: dict, train_set: Dataset, test_set: Dataset, epochs: int, grad_noise: float, seed: int):
    """Train one optimizer from zero; returns ``(model, trace, pr, seconds_per_step)``."""
    opt = build_optimizer(spec)
    t0 = time.perf_counter()
    model, trace = train(
        LogisticModel.zeros(train_set.d), train_set, opt, epochs, val=test_set, grad_noise=grad_noise, noise_seed=seed
    )
    elapsed = time.perf_counter() - t0
    pr = pr_curve(predict_proba(model, test_set.X), test_set.y)
    return model, trace, pr, elapsed / epochs


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_compare(config: ExperimentConfig, out_dir) -> list:
    """Train every optimizer on identical splits for each seed and write reports."""
    out_dir = Path(out_dir)
    reports = []
    for seed in config.seeds:
        tr, te = prepare_data(config, seed)
        run_dir = out_dir / f"seed_{seed}"
        run_dir.mkdir(parents=True, exist_ok=True)
        results = {}
        for spec in config.optimizers:
            name = spec["name"]
            model, trace, pr, sec = run_one(spec, tr, te, config.epochs, config.grad_noise, seed)
            trace.to_csv(run_dir / f"loss_{name}.csv")
            pr.to_csv(run_dir / f"pr_{name}.csv")
            results[name] = {
                "kind": spec["kind"],
                "final_train_loss": trace.train[-1],
                "final_test_loss": trace.val[-1],
                "test_pr_auc": pr.auc,
                "loss_total_variation": total_variation(trace.train),
                "loss_trace": f"loss_{name}.csv",
                "pr_curve": f"pr_{name}.csv",
                "seconds_per_step": sec,
            }
            log.info("seed %d %-12s pr_auc=%.6f train_loss=%.6f", seed, name, pr.auc, trace.train[-1])
        report = {
            "seed": seed,
            "config": config.to_dict(),
            "protocol": PROTOCOL,
            "data": {
                "n_train": tr.n,
                "n_test": te.n,
                "d": tr.d,
                "train_prevalence": tr.prevalence,
                "test_prevalence": te.prevalence,
            },
            "optimizers": results,
            "pr_auc_ratio_to_classical": _ratios(config, results),
        }
        _write_json(run_dir / "report.json", report)
        reports.append(report)
    return reports


def _ratios(config, results):
    base = next((s["name"] for s in config.optimizers if s["kind"] == "classical"), None)
    if base is None or results[base]["test_pr_auc"] == 0:
        return {}
    ref = results[base]["test_pr_auc"]
    return {name: r["test_pr_auc"] / ref for name, r in results.items() if name != base}


def cmd_ablation(config: ExperimentConfig, out_dir, alpha_grid=None) -> dict:
    """Sweep the fractional order over ``alpha_grid`` for every seed.

    The first Weyl spec in the config supplies every other hyperparameter.
    Writes ``ablation.csv`` (one row per alpha and seed, grid order, duplicates
    kept) and ``ablation_summary.csv`` (median per distinct alpha plus the
    classical baseline, when the config has one).
    """
    grid = list(config.alpha_grid if alpha_grid is None else alpha_grid)
    if not grid:
        raise ConfigError("alpha grid is empty")
    for a in grid:
        if not 0.0 < float(a) < 1.0:
            raise ConfigError(f"ablation alphas must lie in (0, 1), got {a!r}")
    base = next((s for s in config.optimizers if s["kind"] == "weyl"), None)
    base = dict(base) if base else _resolve_optimizer({"kind": "weyl"})
    classical = next((s for s in config.optimizers if s["kind"] == "classical"), None)

    rows, baseline = [], []
    for seed in config.seeds:
        tr, te = prepare_data(config, seed)
        for a in grid:
            spec = {**base, "alpha": float(a)}
            _, trace, pr, _ = run_one(spec, tr, te, config.epochs, config.grad_noise, seed)
            rows.append({"alpha": float(a), "seed": seed, "pr_auc": pr.auc,
                         "train_loss": trace.train[-1], "test_loss": trace.val[-1]})
        if classical is not None:
            _, trace, pr, _ = run_one(classical, tr, te, config.epochs, config.grad_noise, seed)
            baseline.append(pr.auc)
        log.info("ablation seed %d done", seed)

    order = {a: i for i, a in reversed(list(enumerate(float(a) for a in grid)))}
    rows.sort(key=lambda r: (order[r["alpha"]], r["seed"]))
    medians = {}
    for a in order:
        medians[a] = statistics.median(r["pr_auc"] for r in rows if r["alpha"] == a)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "ablation.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha", "seed", "pr_auc", "train_loss", "test_loss"])
        for r in rows:
            w.writerow([repr(r["alpha"]), r["seed"], repr(r["pr_auc"]), repr(r["train_loss"]), repr(r["test_loss"])])
    with open(out_dir / "ablation_summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["optimizer", "alpha", "median_pr_auc", "n_seeds"])
        for a in sorted(medians):
            w.writerow(["weyl", repr(a), repr(medians[a]), len(config.seeds)])
        if baseline:
            w.writerow(["classical", "", repr(statistics.median(baseline)), len(baseline)])
    return {
        "rows": rows,
        "median": medians,
        "classical_median": statistics.median(baseline) if baseline else None,
        "classical": baseline,
    }


def _median_step_time(opt, dim, start, probe, rng):
    params = np.zeros(dim)
    grads = rng.standard_normal((start + probe, dim))
    for k in range(start):
        params = opt.step(params, grads[k])
    times = []
    for k in range(start, start + probe):
        t0 = time.perf_counter()
        params = opt.step(params, grads[k])
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cmd_bench(config: ExperimentConfig, out_dir) -> list:
    """Median per-step wall time at step counts 2L and 10L for each window L.

    Also times the classical optimizer as a baseline. Rows go to ``bench.csv``.
    """
    windows = [int(w) for w in config.bench["windows"]]
    if len(windows) < 2:
        raise ConfigError("bench needs at least two window sizes")
    dim = int(config.bench["dim"])
    probe = int(config.bench["probe_steps"])
    base = next((s for s in config.optimizers if s["kind"] == "weyl"), None)
    base = dict(base) if base else _resolve_optimizer({"kind": "weyl"})
    rng = np.random.default_rng(config.seeds[0])

    rows = []
    for L in windows:
        for mult in (2, 10):
            opt = build_optimizer({**base, "window": L})
            sec = _median_step_time(opt, dim, mult * L, probe, rng)
            rows.append({"optimizer": "weyl", "window": L, "dim": dim, "step_count": mult * L, "seconds_per_step": sec})
    for mult in (2, 10):
        steps = mult * max(windows)
        sec = _median_step_time(ClassicalGD(float(base["learning_rate"])), dim, steps, probe, rng)
        rows.append({"optimizer": "classical", "window": 0, "dim": dim, "step_count": steps, "seconds_per_step": sec})

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "bench.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["optimizer", "window", "dim", "step_count", "seconds_per_step"])
        for r in rows:
            w.writerow([r["optimizer"], r["window"], r["dim"], r["step_count"], repr(r["seconds_per_step"])])
    return rows


# -- CLI ----------------------------------------------------------------------------


def _parse_floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _parse_ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylopt", description="Weighted Weyl optimizer experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("compare", "train each optimizer on identical splits and report metrics"),
        ("ablation", "sweep the fractional order alpha"),
        ("bench", "measure per-step cost against step count and window length"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON config file (defaults apply when omitted)")
        p.add_argument("--out", default="runs", help="output directory (default: runs)")
        p.add_argument("--seed", type=_parse_ints, help="comma-separated seeds, overriding the config")
        if name == "ablation":
            p.add_argument("--alpha", type=_parse_floats, help="comma-separated alpha grid, overriding the config")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        raw_cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
        if args.seed:
            raw_cfg = ExperimentConfig.from_dict({**raw_cfg.to_dict(), "seeds": args.seed})
        if args.command == "compare":
            reports = cmd_compare(raw_cfg, args.out)
            for rep in reports:
                parts = [f"{n}={r['test_pr_auc']:.6f}" for n, r in rep["optimizers"].items()]
                print(f"seed {rep['seed']}: pr_auc " + " ".join(parts))
        elif args.command == "ablation":
            res = cmd_ablation(raw_cfg, args.out, args.alpha)
            for a, m in sorted(res["median"].items()):
                print(f"alpha={a:g} median_pr_auc={m:.6f}")
            if res["classical_median"] is not None:
                print(f"classical median_pr_auc={res['classical_median']:.6f}")
        else:
            for r in cmd_bench(raw_cfg, args.out):
                print(f"{r['optimizer']:9s} L={r['window']:<4d} t={r['step_count']:<5d} {r['seconds_per_step'] * 1e6:.2f} us/step")
    except (ConfigError, CSVError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
