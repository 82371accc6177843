"""Command line entry point: ``percolab <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import theory
from .census import census, giant_ratio, isolated_tree_spectrum
from .errors import NotConverged, PercolabError
from .generators import GeneratorSpec, generate
from .graph import read_graph, write_graph
from .harness import ExperimentConfig, run_experiment, sweep_alpha, sweep_csv
from .percolation import percolate_m, percolate_p
from .spectral import estimate_lambda, mixing_audit


def cmd_generate(args):
    spec = GeneratorSpec(family=args.family, n=args.n, d=args.d, q=args.q, seed=args.seed)
    g = generate(spec)
    write_graph(g, args.out)
    print(f"wrote {g!r} to {args.out}")


def cmd_spectra(args):
    g = read_graph(args.graph)
    method = "dense" if args.exact else "auto"
    try:
        est = estimate_lambda(g, tol=args.tol, max_iter=args.max_iter, method=method)
    except NotConverged as exc:
        est = exc.estimate
        print("warning: not converged, reporting best estimate", file=sys.stderr)
    print(f"lambda {est.lam:.12g}")
    print(f"method {est.method}")
    print(f"iterations {est.iterations}")
    print(f"residual {est.residual:.3g}")
    print(f"converged {est.converged}")


def cmd_mixing(args):
    g = read_graph(args.graph)
    if args.lam is None:
        try:
            lam = estimate_lambda(g).lam
        except NotConverged as exc:
            lam = exc.estimate.lam
    else:
        lam = args.lam
    reports = mixing_audit(g, lam, args.samples, args.seed)
    worst = max(reports, key=lambda r: r.ratio)
    print(f"lambda {lam:.12g}")
    print(f"samples {len(reports)}")
    print(f"violations {sum(not r.satisfied for r in reports)}")
    print(f"worst_ratio {worst.ratio:.6g} (|B|={worst.b_size}, |C|={worst.c_size}, e={worst.e_bc})")
    return 0 if all(r.satisfied for r in reports) else 1


def cmd_census(args):
    g = read_graph(args.graph)
    if args.model == "p":
        sample = percolate_p(g, float(args.param), args.seed)
    else:
        sample = percolate_m(g, int(args.param), args.seed)
    c = census(g, sample)
    if args.json:
        print(json.dumps(c.to_json()))
        return
    frac, ratio = giant_ratio(c)
    largest_tree, tree_frac = isolated_tree_spectrum(c)
    print(f"retained {sample.retained} of {g.m} edges")
    print(f"components {c.component_count}")
    print(f"giant {c.giant_size} vertices ({frac:.4f} of n), {c.giant_edges} edges, ratio {ratio:.4f}")
    print(f"second {c.second_size}")
    print(f"largest isolated tree {largest_tree}, tree vertex fraction {tree_frac:.4f}")
    print(f"unicyclic vertices {c.unicyclic_vertices()}, small complex {c.small_complex_count()}")


def cmd_theory(args):
    prof = theory.profile(args.alpha, n=args.n, omega=args.omega)
    print(json.dumps(prof.to_json(), indent=2))


def cmd_experiment(args):
    cfg = ExperimentConfig.load(args.config)
    if args.workers is not None:
        cfg.workers = args.workers
    report = run_experiment(cfg)
    report.write(args.out)
    for v in report.verdicts:
        status = "PASS" if v.passed else "FAIL"
        print(f"{status} {v.check}: observed {v.observed:.6g}, predicted {v.predicted:.6g}, margin {v.margin:.4g}")
    return 0 if report.passed else 1


def cmd_sweep(args):
    cfg = ExperimentConfig.load(args.config)
    alphas = [float(a) for a in args.alphas.split(",")]
    reports = sweep_alpha(cfg, alphas)
    text = sweep_csv(reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in reports) else 1


def build_parser():
    p = argparse.ArgumentParser(prog="percolab", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", help="build a host graph and write it to a file")
    s.add_argument("--family", required=True,
                   choices=["random_regular", "paley", "complete", "cycle", "petersen"])
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("spectra", help="estimate the second eigenvalue magnitude")
    s.add_argument("--graph", required=True)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-iter", type=int, default=10_000)
    s.add_argument("--exact", action="store_true", help="force a dense eigendecomposition")
    s.set_defaults(func=cmd_spectra)

    s = sub.add_parser("mixing", help="audit edge counts between random vertex sets")
    s.add_argument("--graph", required=True)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--lambda", dest="lam", type=float, help="eigenvalue bound (estimated if omitted)")
    s.set_defaults(func=cmd_mixing)

    s = sub.add_parser("census", help="percolate once and print the component census")
    s.add_argument("--graph", required=True)
    s.add_argument("--model", choices=["p", "m"], required=True)
    s.add_argument("--param", required=True, help="p for model p, edge count for model m")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("theory", help="print predicted quantities for alpha")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--omega", type=float)
    s.set_defaults(func=cmd_theory)

    s = sub.add_parser("experiment", help="run a JSON-configured experiment")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("sweep", help="run a config at several alphas and emit a CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--alphas", required=True, help="comma-separated list")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args) or 0
    except PercolabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
