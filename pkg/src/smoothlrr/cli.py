"""Command-line driver.

    smoothlrr gen      synthetic subspace data (matrix + JSON sidecar)
    smoothlrr lrr      Smoothed LRR by IRLS -> Z, trace, summary
    smoothlrr irpca    IRPCA projection by IRLS -> P, trace, summary
    smoothlrr apply    P @ X for new data
    smoothlrr segment  spectral clustering of (|Z| + |Z^T|) / 2, scored against truth

Relative output paths are resolved against ``$SMOOTHLRR_OUTDIR`` when set.
Exit codes: 0 success, 2 bad arguments, 3 I/O failure, 4 solver
non-convergence or numerical failure (best-effort outputs still written).
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import io
from .errors import ConvergenceWarning, MatrixFormatError
from .evaluation import affinity_from_z, clustering_accuracy, spectral_cluster
from .irpca import IrpcaConfig, apply_projection, solve_irpca
from .lrr import SolverConfig, solve_smoothed_lrr
from .synth import gen_subspaces

OUTDIR_ENV = "SMOOTHLRR_OUTDIR"

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_IO = 3
EXIT_SOLVER = 4


class _IOFailure(Exception):
    pass


def _out(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTDIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _read(path):
    try:
        return io.read_matrix(path)
    except (OSError, MatrixFormatError) as exc:
        raise _IOFailure(f"cannot read matrix {path}: {exc}") from exc


def _sidecar_seed(path):
    try:
        return io.load_sidecar(path).get("seed")
    except (OSError, ValueError):
        return None


def _schedule_args(p):
    p.add_argument("--mu-c", type=float, default=0.1, help="mu_0 = mu_c * ||X||_2")
    p.add_argument("--rho", type=float, default=1.1, help="mu_{t+1} = mu_t / rho")
    p.add_argument("--mu-floor", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=1000)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smoothlrr", description=__doc__.split("\n\n")[0])
    ap.add_argument("--threads", type=int, default=None,
                    help="upper bound on BLAS/OpenMP threads")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate synthetic subspace data")
    g.add_argument("--k", type=int, default=15)
    g.add_argument("--r", type=int, default=5)
    g.add_argument("--d", type=int, default=200)
    g.add_argument("--ni", type=int, default=20)
    g.add_argument("--corrupt", type=float, default=0.2)
    g.add_argument("--noise", type=float, default=0.1)
    g.add_argument("--noise-mode", choices=("per_column", "per_entry"), default="per_column")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="data.bin")

    lr = sub.add_parser("lrr", help="solve Smoothed LRR")
    lr.add_argument("--input", required=True)
    lr.add_argument("--p", type=float, default=1.0)
    lr.add_argument("--q", type=float, default=1.0)
    lr.add_argument("--lam", type=float, default=0.5)
    lr.add_argument("--penalty", choices=("power", "log"), default="power")
    lr.add_argument("--mu2-c", type=float, default=None)
    _schedule_args(lr)
    lr.add_argument("--out", default="Z.bin")
    lr.add_argument("--trace", default="trace.jsonl")
    lr.add_argument("--summary", default="summary.json")

    ir = sub.add_parser("irpca", help="learn an IRPCA projection")
    ir.add_argument("--input", required=True)
    ir.add_argument("--lam", type=float, default=0.5)
    _schedule_args(ir)
    ir.add_argument("--out", default="P.bin")
    ir.add_argument("--trace", default="trace.jsonl")
    ir.add_argument("--summary", default="summary.json")

    a = sub.add_parser("apply", help="apply a learned projection to new data")
    a.add_argument("--projection", required=True)
    a.add_argument("--input", required=True)
    a.add_argument("--out", default="cleaned.bin")

    s = sub.add_parser("segment", help="cluster columns from a representation matrix")
    s.add_argument("--z", required=True)
    s.add_argument("--truth", default=None, help="dataset sidecar (or its matrix file)")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="labels.json")
    return ap


def _cmd_gen(args):
    ds = gen_subspaces(args.k, args.r, args.d, args.ni, args.corrupt, args.noise,
                       seed=args.seed, noise_mode=args.noise_mode)
    mat, side = io.save_dataset(_out(args.out), ds)
    print(f"wrote {mat} ({ds.X.shape[0]}x{ds.X.shape[1]}) and {side}")
    return EXIT_OK


def _finish_solve(args, name, M, trace, config, extra):
    io.write_matrix(_out(args.out), M)
    io.write_trace(_out(args.trace), trace)
    summary = io.run_summary(name, trace, config, **extra)
    io.write_json(_out(args.summary), summary)
    print(
        f"{name}: iterations={trace.iterations} converged={trace.converged} "
        f"objective={summary['final_exact_objective']:.6f} seconds={trace.seconds:.2f}"
    )
    if not trace.converged:
        print(f"{name}: max_iter reached before epsilon stop", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _cmd_lrr(args):
    X = _read(args.input)
    cfg = SolverConfig(p=args.p, q=args.q, lam=args.lam, mu_c=args.mu_c, rho=args.rho,
                       mu_floor=args.mu_floor, epsilon=args.epsilon, max_iter=args.max_iter,
                       penalty=args.penalty, mu2_c=args.mu2_c)
    Z, trace = solve_smoothed_lrr(X, cfg)
    extra = {"input": str(args.input), "seed": _sidecar_seed(args.input)}
    return _finish_solve(args, "lrr", Z, trace, cfg.to_dict(), extra)


def _cmd_irpca(args):
    X = _read(args.input)
    cfg = IrpcaConfig(lam=args.lam, mu_c=args.mu_c, rho=args.rho, mu_floor=args.mu_floor,
                      epsilon=args.epsilon, max_iter=args.max_iter)
    P, trace = solve_irpca(X, cfg)
    extra = {"input": str(args.input), "seed": _sidecar_seed(args.input)}
    return _finish_solve(args, "irpca", P, trace, cfg.to_dict(), extra)


def _cmd_apply(args):
    P = _read(args.projection)
    X = _read(args.input)
    out = io.write_matrix(_out(args.out), apply_projection(P, X))
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_segment(args):
    Z = _read(args.z)
    truth = None
    k = args.k
    if args.truth is not None:
        try:
            side = io.load_sidecar(args.truth)
        except (OSError, ValueError) as exc:
            raise _IOFailure(f"cannot read sidecar {args.truth}: {exc}") from exc
        truth = np.asarray(side["labels"])
        k_side = side.get("params", {}).get("k", len(np.unique(truth)))
        if k is None:
            k = k_side
        elif k != k_side:
            print(f"warning: --k {k} differs from sidecar k={k_side}; using {k}",
                  file=sys.stderr)
    if k is None:
        raise ValueError("--k is required when no --truth sidecar is given")
    labels = spectral_cluster(affinity_from_z(Z), k, seed=args.seed)
    report = {"k": int(k), "seed": args.seed, "labels": [int(v) for v in labels]}
    if truth is not None:
        report["accuracy"] = clustering_accuracy(labels, truth)
        report["segmentation_error"] = 1.0 - report["accuracy"]
        print(f"accuracy={report['accuracy']:.4f}")
    io.write_json(_out(args.out), report)
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "lrr": _cmd_lrr,
    "irpca": _cmd_irpca,
    "apply": _cmd_apply,
    "segment": _cmd_segment,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_ARGS
    limiter = contextlib.nullcontext()
    if args.threads is not None:
        from threadpoolctl import threadpool_limits

        limiter = threadpool_limits(limits=args.threads)
    try:
        with limiter, warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            return _COMMANDS[args.command](args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except np.linalg.LinAlgError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
