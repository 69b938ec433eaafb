"""Command-line interface: ``diaggates <subcommand> ...``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or
validation error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import contradiag as cd
from . import fileio, moments, montecarlo, verify
from .ensembles import KINDS, EnsembleConfig, states_from_unimodular
from .errors import InvalidInputError

SEED_ENV = "DIAGGATES_SEED"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")


def _positive(name):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}")
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {v}")
        return v
    return conv


def _manifest(command: str, params: dict, seed, duration: float) -> dict:
    return {
        "command": command,
        "params": params,
        "seed": seed,
        "version": __version__,
        "duration_s": round(duration, 6),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


# --- sample ----------------------------------------------------------------------

def sample_records(kind: str, N: int, samples: int, seed: int, quantity: str = "density"):
    """Per-sample records for ``diaggates sample``.

    ``density``: eigenvalues of the associated density matrix (for
    ``diagonal_gate`` the N nonzero normalised Schmidt coefficients, for
    ``haar_pure_state`` the intensities ``|psi_i|^2``).
    ``complex``: complex eigenvalues of ``A / sqrt(N)`` (unimodular, ginibre).
    """
    # a diagonal gate's phases are exactly the entries of its unimodular matrix
    cfg = EnsembleConfig("unimodular" if kind == "diagonal_gate" else kind, N, samples, seed)
    if quantity == "complex" and kind not in ("unimodular", "ginibre"):
        raise InvalidInputError(f"quantity 'complex' needs kind unimodular or ginibre, got {kind}")
    records = []
    for start, batch in cfg.chunks():
        if quantity == "complex":
            vals = np.linalg.eigvals(batch / np.sqrt(N))
            order = np.lexsort((vals.imag, vals.real), axis=-1)[:, ::-1]
            vals = np.take_along_axis(vals, order, axis=-1)
        elif kind in ("unimodular", "diagonal_gate"):
            vals = np.clip(np.linalg.eigvalsh(states_from_unimodular(batch))[:, ::-1], 0.0, None)
        elif kind == "ginibre":
            W = batch @ batch.conj().transpose(0, 2, 1)
            W /= np.trace(W, axis1=1, axis2=2).real[:, None, None]
            vals = np.clip(np.linalg.eigvalsh(W)[:, ::-1], 0.0, None)
        elif kind == "hilbert_schmidt_state":
            vals = np.clip(np.linalg.eigvalsh(batch)[:, ::-1], 0.0, None)
        else:
            vals = np.abs(batch) ** 2
        for k, row in enumerate(vals):
            rec = {"sample": start + k}
            if np.iscomplexobj(row):
                for i, z in enumerate(row):
                    rec[f"re{i}"] = float(z.real)
                    rec[f"im{i}"] = float(z.imag)
            else:
                for i, v in enumerate(row):
                    rec[f"x{i}"] = float(v)
            records.append(rec)
    return records


def cmd_sample(args) -> int:
    t0 = time.perf_counter()
    recs = sample_records(args.kind, args.n, args.samples, args.seed, args.quantity)
    params = {"kind": args.kind, "n": args.n, "samples": args.samples, "quantity": args.quantity,
              "format": args.format}
    fileio.write_dataset(args.out, _manifest("sample", params, args.seed, time.perf_counter() - t0),
                         recs, args.format)
    return EXIT_OK


# --- histogram -------------------------------------------------------------------

def histogram_records(records, bins: int, scale: float = 1.0, columns_prefix: str = "x"):
    vals = np.array([v for r in records for k, v in r.items()
                     if k.startswith(columns_prefix) and k[len(columns_prefix):].isdigit() and v is not None],
                    dtype=float) * scale
    if vals.size == 0:
        raise InvalidInputError("dataset has no real-valued columns to histogram")
    counts, edges = np.histogram(vals, bins=bins)
    dens = counts / (vals.size * np.diff(edges))
    return [{"left": float(a), "right": float(b), "count": int(c), "density": float(d)}
            for a, b, c, d in zip(edges[:-1], edges[1:], counts, dens)]


def cmd_histogram(args) -> int:
    t0 = time.perf_counter()
    manifest, records = fileio.read_dataset(args.input)
    scale = args.scale
    if scale is None:
        scale = float(manifest.get("params", {}).get("n", 1))
    recs = histogram_records(records, args.bins, scale)
    params = {"input": str(args.input), "bins": args.bins, "scale": scale, "format": args.format,
              "source_manifest": manifest}
    fileio.write_dataset(args.out, _manifest("histogram", params, manifest.get("seed"),
                                             time.perf_counter() - t0), recs, args.format)
    return EXIT_OK


# --- moments ---------------------------------------------------------------------

def moment_records(N: int, n_max: int, samples: int, seed: int):
    reports = montecarlo.mc_moment_reports(N, n_max, samples, seed)
    hs = montecarlo.mc_power_sums(N, (2, 3), samples, seed, kind="hilbert_schmidt_state")
    out = []
    for r in reports:
        n = r.order
        ue = moments.ue_moment(n, N)
        rec = {
            "n": n,
            "ue_moment": str(ue),
            "ue_moment_float": float(ue),
            "scaled_analytic": float(r.analytic),
            "scaled_mc": r.estimate,
            "scaled_stderr": r.stderr,
            "catalan": moments.catalan_number(n),
            "hs_moment": None,
            "hs_scaled_analytic": None,
            "hs_scaled_mc": None,
            "hs_scaled_stderr": None,
        }
        if n in (2, 3):
            h = moments.hs_moment(n, N)
            rec.update(hs_moment=str(h), hs_scaled_analytic=float(N ** (n - 1) * h),
                       hs_scaled_mc=float(hs[n][0]), hs_scaled_stderr=float(hs[n][1]))
        out.append(rec)
    return out


def cmd_moments(args) -> int:
    if args.n_max > 12:
        raise UsageError("--n-max must be <= 12")
    t0 = time.perf_counter()
    recs = moment_records(args.n, args.n_max, args.samples, args.seed)
    params = {"n": args.n, "n_max": args.n_max, "samples": args.samples, "format": args.format}
    fileio.write_dataset(args.out, _manifest("moments", params, args.seed, time.perf_counter() - t0),
                         recs, args.format)
    return EXIT_OK


# --- entropy ---------------------------------------------------------------------

def entropy_record(N: int, samples: int, seed: int, q: float = 1.0) -> dict:
    m, se = montecarlo.mc_mean_entropy(N, samples, seed, kind="diagonal_gate")
    exact = moments.ue_mean_entropy(N)
    rec = {
        "n": N,
        "samples": samples,
        "ue_mean_entropy": exact,
        "hs_mean_entropy": moments.hs_mean_entropy(N),
        "asymptotic": math.log(N) - 0.5,
        "haar_reference": moments.haar_gate_entropy_reference(N),
        "mc_mean_entropy": m,
        "mc_stderr": se,
        "abs_diff": abs(m - exact),
        "consistent": abs(m - exact) < 1.0 / math.sqrt(samples),
        "q": q,
    }
    if q != 1:
        mq, seq = montecarlo.mc_mean_entropy(N, samples, seed, kind="diagonal_gate", q=q)
        rec.update(mc_mean_renyi=mq, mc_renyi_stderr=seq)
    return rec


def cmd_entropy(args) -> int:
    if args.q < 0:
        raise UsageError("--q must be >= 0")
    t0 = time.perf_counter()
    rec = entropy_record(args.n, args.samples, args.seed, args.q)
    params = {"n": args.n, "samples": args.samples, "q": args.q, "format": args.format}
    fileio.write_dataset(args.out, _manifest("entropy", params, args.seed, time.perf_counter() - t0),
                         [rec], args.format)
    return EXIT_OK


# --- contradiag ------------------------------------------------------------------

def contradiag_payload(H, hadamard: str = "fourier") -> dict:
    N = H.shape[0]
    F = cd.fourier_matrix(N) if hadamard == "fourier" else cd.sylvester_hadamard(N)
    r = cd.contradiagonalize(H, F)
    return {
        "A": fileio.matrix_to_json(r.A),
        "U_max": fileio.matrix_to_json(r.U_max),
        "f": r.f,
        "f_max": r.f_max,
        "trace_constant": r.trace_constant,
        "pass": abs(r.f - r.f_max) <= 1e-8,
    }


def cmd_contradiag(args) -> int:
    t0 = time.perf_counter()
    H = fileio.read_matrix(args.input, hermitian=True)
    payload = contradiag_payload(H, args.hadamard)
    params = {"input": str(args.input), "hadamard": args.hadamard}
    doc = {"manifest": _manifest("contradiag", params, None, time.perf_counter() - t0)}
    doc.update(payload)
    try:
        Path(args.out).write_text(json.dumps(doc) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    return EXIT_OK if payload["pass"] else EXIT_FAIL


# --- verify ----------------------------------------------------------------------

def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    checks = verify.run_suite(args.suite, args.seed, args.samples)
    params = {"suite": args.suite, "samples": args.samples}
    lines = json.dumps({"manifest": _manifest("verify", params, args.seed, time.perf_counter() - t0)}) + "\n"
    lines += "".join(json.dumps(c.as_record()) + "\n" for c in checks)
    summary = {"suite": args.suite, "seed": args.seed, "checks": len(checks),
               "failed": sum(not c.passed for c in checks)}
    lines += json.dumps({"summary": summary}) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(lines)
        except OSError as exc:
            raise OSError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(lines)
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


# --- rerun -----------------------------------------------------------------------

def cmd_rerun(args) -> int:
    """Re-execute the command recorded in a dataset's manifest, writing to ``--out``."""
    try:
        text = Path(args.manifest_file).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {args.manifest_file}: {exc.strerror or exc}") from exc
    try:
        manifest = fileio.parse_dataset(text)[0]
    except (ValueError, KeyError, TypeError):
        raise UsageError(f"{args.manifest_file}: no manifest found")
    cmd, p = manifest["command"], manifest["params"]
    argv = [cmd]
    if cmd == "sample":
        argv += ["--kind", p["kind"], "--n", str(p["n"]), "--samples", str(p["samples"]),
                 "--quantity", p["quantity"], "--format", p["format"]]
    elif cmd == "moments":
        argv += ["--n", str(p["n"]), "--n-max", str(p["n_max"]), "--samples", str(p["samples"]),
                 "--format", p["format"]]
    elif cmd == "entropy":
        argv += ["--n", str(p["n"]), "--samples", str(p["samples"]), "--q", str(p["q"]),
                 "--format", p["format"]]
    elif cmd == "verify":
        argv += ["--suite", p["suite"], "--samples", str(p["samples"])]
    elif cmd == "contradiag":
        argv += ["--input", p["input"], "--hadamard", p["hadamard"]]
    else:
        raise UsageError(f"cannot rerun command {cmd!r}")
    if manifest.get("seed") is not None:
        argv += ["--seed", str(manifest["seed"])]
    argv += ["--out", str(args.out)]
    return main(argv)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="diaggates",
        description="Random diagonal gates: ensembles, moments, entropies and contra-diagonalization.",
        epilog="Exit codes: 0 success, 1 a check failed, 2 usage or validation error.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, fmt=True):
        if seed:
            sp.add_argument("--seed", type=int, default=None,
                            help=f"64-bit seed (default: ${SEED_ENV} or 0)")
        if fmt:
            sp.add_argument("--format", choices=fileio.FORMATS, default="jsonl")

    sp = sub.add_parser("sample", help="draw an ensemble and write per-sample spectra")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--n", type=_positive("--n"), required=True)
    sp.add_argument("--samples", type=_positive("--samples"), required=True)
    sp.add_argument("--quantity", choices=("density", "complex"), default="density")
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("histogram", help="bin the values of a sample dataset")
    sp.add_argument("--input", required=True)
    sp.add_argument("--bins", type=_positive("--bins"), default=100)
    sp.add_argument("--scale", type=float, default=None,
                    help="multiply values before binning (default: the dataset's N, giving x = N lambda)")
    sp.add_argument("--out", required=True)
    common(sp, seed=False)
    sp.set_defaults(func=cmd_histogram)

    sp = sub.add_parser("moments", help="analytic vs Monte Carlo spectral moments")
    sp.add_argument("--n", type=_positive("--n"), required=True)
    sp.add_argument("--n-max", type=_positive("--n-max"), default=7)
    sp.add_argument("--samples", type=_positive("--samples"), default=100_000)
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("entropy", help="exact vs Monte Carlo mean entanglement entropy")
    sp.add_argument("--n", type=_positive("--n"), required=True)
    sp.add_argument("--samples", type=_positive("--samples"), default=100_000)
    sp.add_argument("--q", type=float, default=1.0, help="Renyi order for an extra MC column")
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_entropy)

    sp = sub.add_parser("contradiag", help="contra-diagonalize a Hermitian matrix file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--hadamard", choices=("fourier", "sylvester"), default="fourier")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_contradiag)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=verify.SUITES + ("all",), required=True)
    sp.add_argument("--samples", type=_positive("--samples"), default=20_000)
    sp.add_argument("--out", default=None)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("rerun", help="reproduce an output file from its embedded manifest")
    sp.add_argument("manifest_file")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_rerun)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args)
    except (UsageError, InvalidInputError) as exc:
        print(f"diaggates {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"diaggates {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
