"""Command-line front end: exact inversion, family tools, sweeps, sampling,
percentiles, mode tables, the identity suite, and figure reproduction.

Every run writes its outputs plus a ``*.manifest.json`` recording the
subcommand, the full parameter set, the seed, the package version, and a
sha256 checksum per output file.  Manifests contain no timestamps, so
re-running a manifest reproduces byte-identical artifacts.  All numeric
formatting is locale-independent (floats via ``repr``, exact rationals as
"num/den").
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .families import FamilySpec, exp_variance_approx, exp_variance_continuum, family_from_name
from .family_solver import mode_basis, mode_distribution_weights, mode_variance_leading_coefficients
from .identities import run_identity_suite
from .percentiles import cdf_exact, cdf_series_approx, convolve_pmf, percentile
from .polydist import classify, continuum_power_variance, variance_exact
from .sampler import loglog_fit, mc_variance_of_mean, sample_means, sweep
from .vandermonde import inverse_closed_form, inverse_gauss, inverse_harmonic_form, vandermonde_matrix

_OUTDIR_ENV = "MANYOUTCOMES_OUTDIR"


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _resolve_out(path: str) -> Path:
    p = Path(path)
    if not p.is_absolute():
        base = os.environ.get(_OUTDIR_ENV)
        if base:
            p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(primary_out: Path, subcommand: str, parameters: dict, outputs: list[Path],
                    seed=None, is_dir: bool = False) -> Path:
    manifest = {
        "subcommand": subcommand,
        "parameters": parameters,
        "seed": seed,
        "version": __version__,
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    if is_dir:
        mpath = primary_out / "manifest.json"
    else:
        mpath = primary_out.parent / (primary_out.name + ".manifest.json")
    _write_json(mpath, manifest)
    return mpath


def _parse_m_grid(text: str) -> list[int]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("m-grid must be a:b:step or a comma list")
        a, b, step = (int(x) for x in parts)
        if step <= 0 or b < a:
            raise ValueError("m-grid must have positive step and b >= a")
        return list(range(a, b + 1, step))
    return [int(x) for x in text.split(",") if x]


def _family_from_args(args) -> FamilySpec:
    kind = getattr(args, "family", None) or getattr(args, "kind", None)
    if kind is None:
        raise ValueError("a family kind is required")
    return family_from_name(kind, s=args.s, gamma=args.gamma, alpha=args.alpha, x=args.x)


def _add_family_flags(sub, flag="--family") -> None:
    sub.add_argument(flag, dest="family" if flag == "--family" else "kind", required=True,
                     choices=["power", "sqrt", "exp", "counter"])
    sub.add_argument("--s", type=int, default=None, help="order for the power family")
    sub.add_argument("--gamma", type=float, default=None, help="sqrt-order coefficient")
    sub.add_argument("--alpha", type=float, default=None, help="decay rate of the exp family")
    sub.add_argument("--x", type=float, default=2.0, help="exponent power for the counter family")


# ---------------------------------------------------------------------------
# subcommand implementations


def _cmd_invert(args) -> int:
    M = args.m
    if args.method == "closed":
        inv = inverse_closed_form(M)
    elif args.method == "harmonic":
        inv = inverse_harmonic_form(M)
    else:
        inv = inverse_gauss(vandermonde_matrix(M))
    out = _resolve_out(args.out)
    _write_json(out, {"m": M, "method": args.method, "rows": inv.to_str_rows()})
    _write_manifest(out, "invert", {"m": M, "method": args.method, "out": out.name}, [out])
    return 0


def _cmd_classify(args) -> int:
    spec = _family_from_args(args)
    grid = _parse_m_grid(args.m_grid)
    report = classify(lambda m: spec.build(m, exact=args.exact), grid)
    out = _resolve_out(args.out)
    payload = report.to_dict()
    payload["family"] = spec.label()
    _write_json(out, payload)
    _write_manifest(out, "classify", {"family": spec.label(), "m_grid": grid, "exact": args.exact, "out": out.name}, [out])
    return 0


def _cmd_family(args) -> int:
    spec = _family_from_args(args)
    dist = spec.build(args.m)
    out = _resolve_out(args.out)
    norm = dist.normalized
    _write_csv(out, ["j", "weight", "probability"],
               ((j, dist.probs[j], norm[j]) for j in range(dist.M + 1)))
    _write_manifest(out, "family", {"kind": spec.label(), "m": args.m, "out": out.name}, [out])
    return 0


def _cmd_sweep(args) -> int:
    spec = _family_from_args(args)
    grid = _parse_m_grid(args.m_grid)
    result = sweep(lambda m: spec.build(m), grid, N=args.n, workers=args.workers)
    out = _resolve_out(args.out)
    _write_csv(out, ["M", "variance"], result.points)
    outputs = [out]
    if args.fit:
        fit_path = out.parent / (out.name + ".fit.json")
        _write_json(fit_path, {"family": spec.label(), "n": args.n, "fit": list(result.fit)})
        outputs.append(fit_path)
    _write_manifest(out, "sweep", {"family": spec.label(), "m_grid": grid, "n": args.n, "fit": args.fit, "out": out.name}, outputs)
    return 0


def _cmd_sample(args) -> int:
    spec = _family_from_args(args)
    dist = spec.build(args.m)
    est = mc_variance_of_mean(dist, args.n, args.trials, args.seed)
    means = sample_means(dist, args.n, args.trials, args.seed)
    out = _resolve_out(args.out)
    _write_csv(out, ["trial", "sample_mean"], enumerate(means.tolist()))
    summary = out.parent / (out.name + ".summary.json")
    _write_json(summary, {
        "family": spec.label(), "m": args.m, "n": args.n,
        "trials": est.trials, "seed": est.seed,
        "mean": est.mean,
        "variance_of_sample_mean": est.variance_of_sample_mean,
        "standard_error": est.standard_error,
        "variance_standard_error": est.variance_standard_error,
        "exact_variance_over_n": float(variance_exact(dist)) / args.n,
    })
    _write_manifest(out, "sample",
                    {"family": spec.label(), "m": args.m, "n": args.n, "trials": args.trials, "out": out.name},
                    [out, summary], seed=args.seed)
    return 0


def _cmd_percentile(args) -> int:
    spec = _family_from_args(args)
    dist = spec.build(args.m)
    pmf = convolve_pmf(dist, args.n)
    levels = [float(x) for x in args.p.split(",") if x]
    rows = [(p, percentile(dist, args.n, p, pmf=pmf)) for p in levels]
    out = _resolve_out(args.out)
    _write_csv(out, ["p", "z_p"], rows)
    # companion CDF table on a thinned lattice z-grid
    size = args.n * dist.M
    step = max(1, size // 200)
    mu = float(dist.mean())
    grid_rows = []
    for l in range(0, size + 1, step):
        z = l / args.n - mu
        exact_val = cdf_exact(dist, args.n, z, pmf=pmf)
        try:
            approx_val = cdf_series_approx(dist, args.n, z)
        except ValueError:
            approx_val = math.nan
        grid_rows.append((z, float(exact_val), approx_val))
    cdf_path = out.parent / (out.name + ".cdf.csv")
    _write_csv(cdf_path, ["z", "cdf_exact", "cdf_series_approx"], grid_rows)
    _write_manifest(out, "percentile",
                    {"family": spec.label(), "m": args.m, "n": args.n, "p": levels, "out": out.name},
                    [out, cdf_path])
    return 0


def _cmd_modes(args) -> int:
    basis = mode_basis(args.m, args.s)
    rows = []
    for q in range(1, args.s + 1):
        weights = mode_distribution_weights(args.m, args.s, q, basis)
        for j, w in zip(range(args.s + 1, args.m + 1), weights):
            rows.append((q, j, w, float(w)))
    out = _resolve_out(args.out)
    _write_csv(out, ["q", "j", "weight_exact", "weight"], rows)
    _write_manifest(out, "modes", {"m": args.m, "s": args.s, "out": out.name}, [out])
    return 0


def _cmd_identities(args) -> int:
    reports = run_identity_suite(only=args.only, workers=args.workers)
    out = _resolve_out(args.out)
    _write_json(out, [r.to_dict() for r in reports])
    _write_manifest(out, "identities", {"only": args.only, "out": out.name}, [out])
    bad = [r.name for r in reports if not r.passed]
    if bad:
        print(f"identity failures: {', '.join(bad)}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# figure reproduction


def _figure_grids(figure: int, paper_scale: bool) -> list[int]:
    if figure == 1:
        step = 5_000 if paper_scale else 10_000
        return list(range(100_000, 200_001, step))
    if figure == 2:
        n = 21 if paper_scale else 9
        return sorted({int(round(m)) for m in np.geomspace(100_000, 500_000, n)})
    raise ValueError(figure)


def _repro_figure(figure: int, outdir: Path, paper_scale: bool) -> list[Path]:
    written: list[Path] = []
    if figure == 1:
        grid = _figure_grids(1, paper_scale)
        fits = {}
        for s in range(2, 7):
            spec = family_from_name("power", s=s)
            result = sweep(lambda m: spec.build(m), grid, N=1)
            path = outdir / f"figure1_s{s}.csv"
            _write_csv(path, ["M", "variance"], result.points)
            written.append(path)
            fits[str(s)] = {
                "fit": list(result.fit),
                "theory_intercept": math.log((s + 1) / ((s + 3) * (s + 2) ** 2)),
            }
        fit_path = outdir / "figure1_fits.json"
        _write_json(fit_path, fits)
        written.append(fit_path)
    elif figure == 2:
        grid = _figure_grids(2, paper_scale)
        spec = family_from_name("sqrt", gamma=1.0)
        result = sweep(lambda m: spec.build(m), grid, N=1)
        path = outdir / "figure2.csv"
        _write_csv(path, ["M", "variance"], result.points)
        fit_path = outdir / "figure2_fit.json"
        _write_json(fit_path, {"fit": list(result.fit), "slope_band": [1.00, 1.08] if paper_scale else [0.95, 1.10]})
        written += [path, fit_path]
    elif figure == 3:
        s = 10
        m_values = list(range(12, 51))
        lead = mode_variance_leading_coefficients(s, m_values)
        basis = mode_basis(50, s)
        rows = []
        for q in range(1, s + 1):
            for j, w in zip(range(s + 1, 51), mode_distribution_weights(50, s, q, basis)):
                rows.append((q, j, w, float(w)))
        path = outdir / "figure3_modes_m50.csv"
        _write_csv(path, ["q", "j", "weight_exact", "weight"], rows)
        lead_path = outdir / "figure3_leading_coefficients.json"
        _write_json(lead_path, {
            "s": s, "m_values": m_values,
            "leading_coefficients": lead,
            "theory": (s + 1) / ((s + 3) * (s + 2) ** 2),
        })
        written += [path, lead_path]
    elif figure == 4:
        rows = []
        for alpha in (1.0, 1.5, 2.0):
            for M in range(2, 201):
                spec = family_from_name("exp", alpha=alpha)
                exact_discrete = float(variance_exact(spec.build(M)))
                approx = exp_variance_approx(M, alpha)
                continuum = exp_variance_continuum(M, alpha)
                rows.append((alpha, M, exact_discrete, approx, continuum,
                             approx / exact_discrete - 1.0, approx / continuum - 1.0))
        path = outdir / "figure4_exponential.csv"
        _write_csv(path, ["alpha", "M", "variance_discrete", "variance_approx", "variance_continuum",
                          "gap_vs_discrete", "gap_vs_continuum"], rows)
        written.append(path)
    else:
        raise ValueError(f"unknown figure {figure}")
    return written


def _cmd_repro(args) -> int:
    if args.from_manifest:
        manifest = json.loads(Path(args.from_manifest).read_text())
        if manifest.get("subcommand") != "repro":
            raise ValueError("manifest does not describe a repro run")
        params = manifest["parameters"]
        figure = int(params["figure"])
        paper_scale = bool(params["paper_scale"])
    else:
        if args.figure is None:
            raise ValueError("need --figure or --from-manifest")
        figure = args.figure
        paper_scale = args.paper_scale
    outdir = _resolve_out(args.out or f"repro_figure{figure}")
    outdir.mkdir(parents=True, exist_ok=True)
    written = _repro_figure(figure, outdir, paper_scale)
    _write_manifest(outdir, "repro", {"figure": figure, "paper_scale": paper_scale}, written, is_dir=True)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manyoutcomes",
        description="Exact inverse-Vandermonde machinery and variance scaling of finite discrete distributions.",
    )
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="worker hint for parallel grid evaluation (results merge in index order)")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("invert", help="emit an exact inverse Vandermonde matrix as JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--method", choices=["closed", "harmonic", "gauss"], default="closed")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_invert)

    p = subs.add_parser("classify", help="divergence-regime classification over an M grid")
    _add_family_flags(p)
    p.add_argument("--m-grid", required=True)
    p.add_argument("--exact", action="store_true", help="build grid members in exact rational mode")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_classify)

    p = subs.add_parser("family", help="emit a family pmf as CSV (j, weight, probability)")
    _add_family_flags(p, flag="--kind")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_family)

    p = subs.add_parser("sweep", help="deterministic variance sweep over an M grid")
    _add_family_flags(p)
    p.add_argument("--m-grid", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sweep)

    p = subs.add_parser("sample", help="seeded Monte-Carlo sample means")
    _add_family_flags(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sample)

    p = subs.add_parser("percentile", help="sample-mean percentiles and CDF table")
    _add_family_flags(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True, help="comma list of percentile levels in (0, 100)")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_percentile)

    p = subs.add_parser("modes", help="mode vectors of the order-constrained family")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_modes)

    p = subs.add_parser("identities", help="run the exact identity suite")
    p.add_argument("--only", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_identities)

    p = subs.add_parser("repro", help="reproduce the study figures at desk scale")
    p.add_argument("--figure", type=int, choices=[1, 2, 3, 4], default=None)
    p.add_argument("--paper-scale", action="store_true",
                   help="full-size grids (defaults are reduced, documented in the README)")
    p.add_argument("--from-manifest", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_repro)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
