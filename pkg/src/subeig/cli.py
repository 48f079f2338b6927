"""Experiment runner and command line entry point.

An experiment fixes one matrix, one perturbed starting vector, and a
list of correction strategies; every strategy is driven from the same
starting vector so the convergence histories are directly comparable.
Results can be serialized to CSV (one row per outer iteration) and to a
gnuplot script for log-scale residual plots.
"""

import argparse
import hashlib
import sys
from dataclasses import dataclass, field

import numpy as np

from .core import is_hermitian, small_eig
from .corrections import StrategyConfig
from .driver import MODES, SolverConfig, pick_extremal, run
from .errors import SubeigError
from .matio import ModelSpec, gen_model, parse_matrix_market, symmetrize
from .rng import SplitMix64

__all__ = [
    "ExperimentSpec",
    "RunReport",
    "make_initial",
    "run_experiment",
    "emit_csv",
    "emit_plot_script",
    "parse_methods",
    "main",
]

CSV_HEADER = "strategy,outer_iter,subspace_dim,lambda_re,lambda_im,resid_norm,wall_ms"

BASIC_KINDS = ("davidson", "jd", "jdm", "iigd", "iigdm", "n1", "n2", "bordered")


@dataclass
class ExperimentSpec:
    source: object
    mode: str
    strategies: list
    symmetrize: bool = False
    tol: float = 1e-10
    perturb_eps: float = None
    seed: int = 0
    max_outer: int = 30
    max_restarts: int = 20
    allow_nonhermitian_newton: bool = False
    timing: bool = True

    def __post_init__(self):
        if not self.strategies:
            raise ValueError("an experiment needs at least one strategy")
        self.mode = self.mode.upper()
        if self.mode not in MODES:
            raise ValueError("mode must be one of %s" % (MODES,))


@dataclass
class RunReport:
    spec: ExperimentSpec
    hermitian: bool
    perturb_eps: float
    reference_value: complex
    reference_vector: np.ndarray
    x0: np.ndarray
    x0_hash: str
    results: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    csv_path: str = None

    @property
    def all_converged(self):
        return all(r.converged for r in self.results.values())


def _reference_pair(a, mode):
    dec = small_eig(a)
    idx = pick_extremal(dec.values, mode)
    return complex(dec.values[idx]), dec.vectors[:, idx]


def _perturbed_start(v_ref, eps, seed):
    u = SplitMix64(seed).uniform(v_ref.shape[0])
    x0 = v_ref + eps * u
    return x0 / np.linalg.norm(x0)


def make_initial(a, mode, eps, seed):
    """Reference eigenvector for the mode, perturbed by eps times a
    seeded uniform[0,1) vector and renormalized. Returns the starting
    vector and the reference eigenvalue."""
    lam, v = _reference_pair(a, mode)
    return _perturbed_start(v, eps, seed), lam


def _load_matrix(spec):
    if isinstance(spec.source, ModelSpec):
        a = gen_model(spec.source, seed=spec.seed)
    else:
        a, _ = parse_matrix_market(spec.source)
    if spec.symmetrize:
        a = symmetrize(a)
    return a


def run_experiment(spec):
    """Run every strategy of the experiment from one shared starting vector."""
    a = _load_matrix(spec)
    hermitian = is_hermitian(a)
    eps = spec.perturb_eps
    if eps is None:
        eps = 5e-2 if hermitian else 1e-2
    lam_ref, v_ref = _reference_pair(a, spec.mode)
    x0 = _perturbed_start(v_ref, eps, spec.seed)
    x0_hash = hashlib.sha256(x0.tobytes()).hexdigest()

    if not hermitian and spec.allow_nonhermitian_newton:
        if any(s.kind in ("n1", "n2") for s in spec.strategies):
            print("note: the Newton corrections are derived for Hermitian "
                  "matrices; running them on a non-Hermitian one is off-label",
                  file=sys.stderr)

    report = RunReport(spec, hermitian, eps, lam_ref, v_ref, x0, x0_hash)
    for strat in spec.strategies:
        cfg = SolverConfig(spec.mode, strat, tol=spec.tol,
                           max_outer=spec.max_outer,
                           max_restarts=spec.max_restarts)
        res = run(a, x0, cfg, timing=spec.timing)
        if hashlib.sha256(x0.tobytes()).hexdigest() != x0_hash:
            raise AssertionError("a strategy mutated the shared starting vector")
        report.results[strat.name] = res
        report.errors[strat.name] = abs(res.eigenvalue - lam_ref)
    return report


def _fmt(x):
    return "%.17g" % float(x)


def emit_csv(report, path):
    """One init row plus one row per executed expansion, per strategy."""
    lines = [CSV_HEADER]
    for name, res in report.results.items():
        h = res.history
        lines.append(",".join([
            name, "0", "1",
            _fmt(h.init_lam.real), _fmt(h.init_lam.imag),
            _fmt(h.init_rnorm), _fmt(0.0),
        ]))
        for rec in h.records:
            lines.append(",".join([
                name, str(rec.outer), str(rec.dim),
                _fmt(rec.lam.real), _fmt(rec.lam.imag),
                _fmt(rec.rnorm), _fmt(rec.wall_ms),
            ]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    report.csv_path = str(path)


def emit_plot_script(report, path):
    """Gnuplot script plotting residual norm (log scale) against outer
    iteration, one series per strategy, reading the emitted CSV."""
    if report.csv_path is None:
        raise ValueError("emit_csv must run before emit_plot_script")
    csv = report.csv_path
    series = []
    for name in report.results:
        series.append('"%s" using 2:(strcol(1) eq "%s" ? column(6) : NaN) '
                      'with linespoints title "%s"' % (csv, name, name))
    text = "\n".join([
        'set datafile separator ","',
        "set logscale y",
        'set xlabel "outer iteration"',
        'set ylabel "residual norm"',
        'set key top right',
        "plot \\\n    " + ", \\\n    ".join(series),
        "",
    ])
    with open(path, "w") as fh:
        fh.write(text)


def _fmt_param(x):
    return "%g" % x


def parse_methods(text, allow_nonhermitian=False):
    """Parse a comma-separated strategy list. The generalized family is
    written general:a,b (or general:a:b); the two-parameter form eats
    the following comma-separated token."""
    raw = [tok.strip() for tok in text.split(",") if tok.strip()]
    out = []
    i = 0
    while i < len(raw):
        tok = raw[i]
        i += 1
        if tok in BASIC_KINDS:
            allow = allow_nonhermitian if tok in ("n1", "n2") else False
            out.append(StrategyConfig(tok, allow_nonhermitian=allow, label=tok))
            continue
        if tok.startswith("general:"):
            body = tok[len("general:"):]
            parts = body.split(":")
            if len(parts) == 1 and i < len(raw):
                parts.append(raw[i])
                i += 1
            if len(parts) != 2:
                raise ValueError("general strategy needs two parameters, "
                                 "as in general:2,0")
            try:
                alpha, beta = (float(p) for p in parts)
            except ValueError:
                raise ValueError("could not parse general parameters from %r" % tok)
            label = "general:%s:%s" % (_fmt_param(alpha), _fmt_param(beta))
            out.append(StrategyConfig("generalized", alpha=alpha, beta=beta,
                                      label=label))
            continue
        raise ValueError("unknown strategy %r" % tok)
    if not out:
        raise ValueError("no strategies given")
    return out


def _parse_gen(text):
    parts = text.split(":")
    if len(parts) < 2:
        raise ValueError("--gen wants name:n[:param...], e.g. laplace2d:225")
    name = parts[0]
    n = int(parts[1])
    params = tuple(float(p) for p in parts[2:])
    return ModelSpec(name, n, params)


def build_parser():
    p = argparse.ArgumentParser(
        prog="subeig",
        description="Compare subspace correction strategies on one matrix.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", metavar="PATH", help="Matrix Market file")
    src.add_argument("--gen", metavar="NAME:N[:PARAM]",
                     help="generated model, e.g. laplace2d:225 or convdiff2d:225:1.5")
    p.add_argument("--symmetrize", action="store_true",
                   help="replace A by (A + A*)/2 after loading")
    p.add_argument("--mode", required=True, choices=MODES,
                   help="which eigenvalue to track")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="relative residual tolerance (default 1e-10)")
    p.add_argument("--perturb", type=float, default=None,
                   help="starting-vector perturbation size "
                        "(default 5e-2 Hermitian, 1e-2 otherwise)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--method", required=True,
                   help="comma-separated strategies: davidson,jd,jdm,iigd,"
                        "iigdm,n1,n2,general:a,b,bordered")
    p.add_argument("--max-outer", type=int, default=30,
                   help="basis size per restart cycle (default 30)")
    p.add_argument("--max-restarts", type=int, default=20,
                   help="restart budget (default 20)")
    p.add_argument("--out", metavar="CSV", help="write per-iteration CSV here")
    p.add_argument("--plot", metavar="SCRIPT",
                   help="write a gnuplot script here (needs --out)")
    p.add_argument("--allow-nonhermitian-newton", action="store_true",
                   help="let n1/n2 run on non-Hermitian matrices")
    p.add_argument("--no-timing", action="store_true",
                   help="record zero wall times so repeated runs are byte-identical")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.plot and not args.out:
        parser.error("--plot needs --out")
    try:
        strategies = parse_methods(args.method, args.allow_nonhermitian_newton)
    except ValueError as exc:
        parser.error(str(exc))
    source = _parse_gen(args.gen) if args.gen else args.matrix
    try:
        spec = ExperimentSpec(
            source=source,
            mode=args.mode,
            strategies=strategies,
            symmetrize=args.symmetrize,
            tol=args.tol,
            perturb_eps=args.perturb,
            seed=args.seed,
            max_outer=args.max_outer,
            max_restarts=args.max_restarts,
            allow_nonhermitian_newton=args.allow_nonhermitian_newton,
            timing=not args.no_timing,
        )
        report = run_experiment(spec)
    except (SubeigError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2

    print("reference eigenvalue: %s" % report.reference_value)
    for name, res in report.results.items():
        h = res.history
        final_r = h.records[-1].rnorm if h.records else h.init_rnorm
        tag = "converged" if res.converged else "stalled"
        print("%-14s %-9s lambda=%s  |r|=%.3e  iterations=%d  error=%.3e"
              % (name, tag, res.eigenvalue, final_r, res.iterations,
                 report.errors[name]))
    if args.out:
        emit_csv(report, args.out)
    if args.plot:
        emit_plot_script(report, args.plot)
    return 0 if report.all_converged else 1


if __name__ == "__main__":
    sys.exit(main())
