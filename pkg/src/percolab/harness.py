"""Config-driven percolation experiments: trials, aggregates, verdicts."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import theory
from .census import census, isolated_tree_spectrum
from .errors import ConfigInvalid, NotConverged, PercolabError
from .generators import GeneratorSpec, generate
from .graph import Graph
from .percolation import RNG_NAME, SPLIT_RULE, derive_seed, percolate
from .spectral import estimate_lambda, mixing_audit

log = logging.getLogger(__name__)

SPEC_VERSION = 1

CHECKS = (
    "giant_fraction",
    "giant_edge_ratio",
    "second_component",
    "tree_fraction",
    "largest_isolated_tree",
    "forbidden_interval",
    "unicyclic_budget",
    "complex_small_components",
    "mixing_audit",
)

DEFAULT_TOLERANCES = {
    "giant_fraction": 0.02,
    "giant_edge_ratio": 0.03,
    "tree_fraction": 0.02,  # |fraction - alpha_bar/alpha| per trial when alpha > 1
    "tree_fraction_subcritical": 0.01,  # fraction >= 1 - tol per trial when alpha < 1
    "largest_isolated_tree_share": 0.9,
    "unicyclic_budget": 20.0,
    "complex_small_share": 0.9,
    "mixing_samples": 100,
}

ROW_FIELDS = (
    "trial",
    "seed",
    "giant_size",
    "second_size",
    "giant_edges",
    "largest_isolated_tree",
    "tree_vertex_fraction",
    "unicyclic_vertices",
    "complex_small_count",
    "forbidden_hits",
)


@dataclass
class ExperimentConfig:
    generator: GeneratorSpec
    model: str = "G_p"
    alpha: float = 2.0
    trials: int = 10
    master_seed: int = 0
    checks: tuple = ()
    omega: float | None = None
    tolerances: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigInvalid(f"trials must be a positive integer, got {self.trials!r}")
        if not self.alpha > 0 or abs(self.alpha - 1.0) < theory.CRITICAL_EPS:
            raise ConfigInvalid(f"alpha must be positive and not 1, got {self.alpha}")
        if self.model not in ("G_p", "G_m"):
            raise ConfigInvalid(f"model must be G_p or G_m, got {self.model!r}")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ConfigInvalid(f"unknown checks {sorted(unknown)}")
        bad_tol = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if bad_tol:
            raise ConfigInvalid(f"unknown tolerances {sorted(bad_tol)}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigInvalid("master_seed must be a 64-bit unsigned integer")
        self.checks = tuple(self.checks)

    def tol(self, name):
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        version = data.pop("spec_version", SPEC_VERSION)
        if version != SPEC_VERSION:
            raise ConfigInvalid(f"unsupported spec_version {version}")
        try:
            gen = GeneratorSpec.from_dict(data.pop("generator"))
            return cls(generator=gen, **data)
        except KeyError as exc:
            raise ConfigInvalid(f"missing field {exc}") from None
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from None
        except PercolabError as exc:
            if isinstance(exc, ConfigInvalid):
                raise
            raise ConfigInvalid(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {
            "spec_version": SPEC_VERSION,
            "generator": self.generator.to_dict(),
            "model": self.model,
            "alpha": self.alpha,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "checks": list(self.checks),
            "omega": self.omega,
            "tolerances": dict(self.tolerances),
            "workers": self.workers,
        }


@dataclass
class Verdict:
    check: str
    predicted: float
    observed: float
    margin: float  # distance to the failure threshold; negative on failure
    passed: bool
    detail: str = ""


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list
    aggregates: dict
    predictions: dict
    verdicts: list

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def column(self, name) -> np.ndarray:
        return np.array([r[name] for r in self.rows], dtype=float)

    def to_json(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "rows": self.rows,
            "aggregates": self.aggregates,
            "predictions": self.predictions,
            "verdicts": [vars(v) for v in self.verdicts],
            "passed": self.passed,
        }

    def rows_csv(self) -> str:
        return _csv(ROW_FIELDS, ([r[k] for k in ROW_FIELDS] for r in self.rows))

    def verdicts_csv(self) -> str:
        return _csv(
            ("check", "predicted", "observed", "margin", "pass"),
            ([v.check, v.predicted, v.observed, v.margin, int(v.passed)] for v in self.verdicts),
        )

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        meta = _metadata()
        doc = {"metadata": meta, **self.to_json()}
        (out / "report.json").write_text(json.dumps(doc, indent=2, default=_json_default) + "\n")
        header = f"# generated={meta['generated']} rng={RNG_NAME} split={SPLIT_RULE}\n"
        (out / "rows.csv").write_text(header + self.rows_csv())
        (out / "verdicts.csv").write_text(header + self.verdicts_csv())


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def _metadata():
    return {
        "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "rng": RNG_NAME,
        "split_rule": SPLIT_RULE,
    }


def _fmt(x):
    if isinstance(x, float):
        return repr(round(x, 12))
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def run_trial(g: Graph, config: ExperimentConfig, trial: int, interval) -> dict:
    """Percolate once and summarise; a pure function of (graph, config, trial)."""
    seed = derive_seed(config.master_seed, trial)
    sample = percolate(g, config.model, config.alpha, seed)
    c = census(g, sample)
    largest_tree, tree_frac = isolated_tree_spectrum(c)
    if interval is None:
        hits = 0
    else:
        lo, hi = interval
        hits = int(np.count_nonzero((c.sizes >= lo) & (c.sizes <= hi)))
    return {
        "trial": trial,
        "seed": seed,
        "giant_size": c.giant_size,
        "second_size": c.second_size,
        "giant_edges": c.giant_edges,
        "largest_isolated_tree": largest_tree,
        "tree_vertex_fraction": tree_frac,
        "unicyclic_vertices": c.unicyclic_vertices(),
        "complex_small_count": c.small_complex_count(),
        "forbidden_hits": hits,
    }


_WORKER_STATE: dict = {}


def _worker_init(g, config, interval):
    _WORKER_STATE.update(g=g, config=config, interval=interval)


def _worker_trial(trial):
    s = _WORKER_STATE
    return run_trial(s["g"], s["config"], trial, s["interval"])


def _aggregate(rows):
    out = {}
    for name in ROW_FIELDS[2:]:
        vals = np.array([r[name] for r in rows], dtype=float)
        sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
        out[name] = {"mean": float(vals.mean()), "sd": sd}
    return out


def _predictions(config, g):
    alpha = config.alpha
    n = g.n
    pred = {
        "n": n,
        "alpha": alpha,
        "giant_fraction": theory.giant_fraction(alpha),
        "f_alpha": theory.f_closed(alpha),
        "gamma": theory.gamma_of(alpha),
        "zeta": theory.zeta_of(alpha),
    }
    if alpha > 1:
        pred["alpha_bar"] = theory.solve_alpha_bar(alpha)
        pred["giant_edge_ratio"] = theory.giant_edge_ratio(alpha)
    pred["forbidden_lo"] = math.log(n) / (alpha * pred["gamma"])
    pred["forbidden_hi"] = pred["gamma"] * n
    if n >= 16:
        omega = config.omega if config.omega is not None else theory.default_omega(n)
        lo, hi = theory.largest_tree_window(n, alpha, omega)
        pred["omega"] = omega
        pred["largest_tree_lo"] = lo
        pred["largest_tree_hi"] = hi
    return pred


def _evaluate(check, config, g, rows, pred) -> Verdict:
    col = {k: np.array([r[k] for r in rows], dtype=float) for k in ROW_FIELDS[2:]}
    n = g.n
    alpha = config.alpha
    if check == "giant_fraction":
        obs = float(np.mean(col["giant_size"] / n))
        tol = config.tol("giant_fraction")
        margin = tol - abs(obs - pred["giant_fraction"])
        return Verdict(check, pred["giant_fraction"], obs, margin, margin >= 0, f"abs tol {tol}")
    if check == "giant_edge_ratio":
        if alpha < 1:
            raise ConfigInvalid("giant_edge_ratio needs alpha > 1")
        obs = float(np.mean(col["giant_edges"] / col["giant_size"]))
        tol = config.tol("giant_edge_ratio")
        margin = tol - abs(obs - pred["giant_edge_ratio"])
        return Verdict(check, pred["giant_edge_ratio"], obs, margin, margin >= 0, f"abs tol {tol}")
    if check == "second_component":
        lo = pred["forbidden_lo"]
        sizes = col["second_size"] if alpha > 1 else col["giant_size"]
        worst = float(sizes.max())
        which = "second-largest" if alpha > 1 else "largest"
        return Verdict(check, lo, worst, lo - worst, worst < lo, f"max {which} component < ln(n)/(alpha*gamma)")
    if check == "forbidden_interval":
        hits = float(col["forbidden_hits"].sum())
        return Verdict(
            check, 0.0, hits, 0.0 - hits, hits == 0,
            f"components with size in [{pred['forbidden_lo']:.4g}, {pred['forbidden_hi']:.4g}]",
        )
    if check == "tree_fraction":
        frac = col["tree_vertex_fraction"]
        if alpha < 1:
            tol = config.tol("tree_fraction_subcritical")
            worst = float(frac.min())
            margin = worst - (1.0 - tol)
            return Verdict(check, 1.0, worst, margin, margin >= 0, f"min over trials >= {1 - tol}")
        tol = config.tol("tree_fraction")
        worst_dev = float(np.max(np.abs(frac - pred["f_alpha"])))
        margin = tol - worst_dev
        return Verdict(check, pred["f_alpha"], float(frac.mean()), margin, margin >= 0, f"every trial within {tol}")
    if check == "largest_isolated_tree":
        lo, hi = pred["largest_tree_lo"], pred["largest_tree_hi"]
        lt = col["largest_isolated_tree"]
        share = float(np.mean((lt >= lo) & (lt <= hi)))
        need = config.tol("largest_isolated_tree_share")
        return Verdict(
            check, 0.5 * (lo + hi), share, share - need, share >= need,
            f"share of trials in [{lo:.4g}, {hi:.4g}] >= {need}",
        )
    if check == "unicyclic_budget":
        budget = config.tol("unicyclic_budget")
        obs = float(col["unicyclic_vertices"].mean())
        return Verdict(check, budget, obs, budget - obs, obs <= budget, "mean vertices on unicyclic components")
    if check == "complex_small_components":
        need = config.tol("complex_small_share")
        share = float(np.mean(col["complex_small_count"] == 0))
        return Verdict(check, 1.0, share, share - need, share >= need, f"share of trials with none >= {need}")
    if check == "mixing_audit":
        try:
            lam = estimate_lambda(g).lam
        except NotConverged as exc:
            lam = exc.estimate.lam
        reports = mixing_audit(g, lam, int(config.tol("mixing_samples")), config.master_seed)
        worst = max(r.ratio for r in reports)
        ok = all(r.satisfied for r in reports)
        return Verdict(check, 1.0, worst, 1.0 - worst, ok, f"worst discrepancy/bound, lambda={lam:.6g}")
    raise ConfigInvalid(f"unknown check {check!r}")


def run_experiment(config: ExperimentConfig, graph: Graph | None = None) -> ExperimentReport:
    """Generate (or reuse) the host graph, run all trials and judge each check."""
    g = graph if graph is not None else generate(config.generator)
    if config.model == "G_p" and config.alpha > g.d:
        raise ConfigInvalid(f"alpha={config.alpha} exceeds d={g.d}")
    pred = _predictions(config, g)
    interval = (pred["forbidden_lo"], pred["forbidden_hi"])
    if interval[0] >= interval[1]:
        interval = None
    trials = range(config.trials)
    if config.workers > 1:
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(
            config.workers, mp_context=ctx, initializer=_worker_init, initargs=(g, config, interval)
        ) as pool:
            rows = list(pool.map(_worker_trial, trials))
    else:
        rows = [run_trial(g, config, t, interval) for t in trials]
    rows.sort(key=lambda r: r["trial"])
    verdicts = [_evaluate(chk, config, g, rows, pred) for chk in config.checks]
    for v in verdicts:
        log.info("%s: %s (observed %.6g, predicted %.6g)", v.check, "pass" if v.passed else "FAIL", v.observed, v.predicted)
    return ExperimentReport(config, rows, _aggregate(rows), pred, verdicts)


def sweep_alpha(base: ExperimentConfig, alphas, graph: Graph | None = None) -> list[ExperimentReport]:
    """One report per alpha, all on the same host graph."""
    configs = []
    for a in alphas:
        d = base.to_dict()
        d["alpha"] = a
        if a < 1:
            d["checks"] = [c for c in d["checks"] if c != "giant_edge_ratio"]
        configs.append(ExperimentConfig.from_dict(d))
    g = graph if graph is not None else generate(base.generator)
    return [run_experiment(c, g) for c in configs]


def sweep_csv(reports) -> str:
    rows = []
    for r in reports:
        frac = r.column("giant_size") / r.predictions["n"]
        sd = float(frac.std(ddof=1)) if frac.size > 1 else 0.0
        rows.append([r.config.alpha, r.predictions["giant_fraction"], float(frac.mean()), sd])
    return _csv(("alpha", "predicted_fraction", "observed_mean", "observed_sd"), rows)
