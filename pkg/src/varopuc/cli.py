"""Experiment runner.

    varopuc <kind> --config run.toml --out results/ [--jobs 4]
    varopuc accept [--budget SECONDS] [--only 1,8,11] [--out results/]

``kind`` is one of zeros, density, ratio, compare, balayage, moments, bands.
Each run writes into ``<out>/<run-id>/`` where the run id is a prefix of the
config hash, together with a ``manifest.json`` listing every output and its
sha256.  ``--seedless`` is accepted and ignored: no experiment draws random
numbers (the acceptance suite uses its own fixed seed).
"""
from __future__ import annotations

import argparse
import concurrent.futures as cf
import csv
import hashlib
import json
import math
import sys
import time
import traceback
from pathlib import Path

import numpy as np

from . import __version__, harness, measures, ratio, spectral, zeros
from .cmv import build_cutoff, trace_power_moments
from .errors import ConfigError, VaropucError
from .schedules import (
    Constant,
    Periodic,
    SampledFunction,
    Table,
    _complex_from,
    coefficients,
    schedule_from_dict,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KINDS = ("zeros", "density", "ratio", "compare", "balayage", "moments", "bands")
RUN_ID_LENGTH = 12

# defaults mirror the library constants; configs may only tighten them
DEFAULT_TOLERANCES = {
    "angle": zeros.ANGLE_TOL,
    "ks_max": 0.05,
    "ratio_max": 5e-2,
    "zero_match": 1e-8,
}

CLOSED_FORMS = ("power", "exp", "sqrt", "sine")


# ---------------------------------------------------------------------------
# config


def load_config(path) -> dict:
    path = Path(path)
    text = path.read_text()
    try:
        if path.suffix == ".json":
            raw = json.loads(text)
        else:
            raw = tomllib.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return raw


def _field(cfg, key, kind, default):
    if key not in cfg:
        return default
    value = cfg[key]
    try:
        if kind is float:
            return float(value)
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}") from None


def normalize_config(raw: dict, kind: str | None = None) -> dict:
    """Validate a raw config mapping and fill in defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a table")
    cfg = dict(raw)
    if kind is not None:
        if cfg.get("kind", kind) != kind:
            raise ConfigError(f"kind: config says {cfg['kind']!r} but subcommand is {kind!r}")
        cfg["kind"] = kind
    if cfg.get("kind") not in KINDS:
        raise ConfigError(f"kind: expected one of {', '.join(KINDS)}, got {cfg.get('kind')!r}")
    if "schedule" not in cfg or not isinstance(cfg["schedule"], dict):
        raise ConfigError("schedule: required table missing")
    cfg["t"] = _field(cfg, "t", float, 1.0)
    if not cfg["t"] > 0:
        raise ConfigError("t: must be positive")
    cfg["schedule"] = dict(cfg["schedule"])
    cfg["schedule"].setdefault("t", cfg["t"])
    try:
        schedule_from_dict(cfg["schedule"])
    except (ConfigError, VaropucError, ValueError, TypeError) as exc:
        raise ConfigError(f"schedule: {exc}") from None

    # beta is a list of values, each a number, [re, im] or {angle = ...}
    betas = cfg.get("beta", [1.0])
    if not isinstance(betas, list):
        betas = [betas]
    parsed = []
    for i, b in enumerate(betas):
        try:
            c = _complex_from(b)
        except (TypeError, ValueError, ConfigError):
            raise ConfigError(f"beta[{i}]: not a complex value: {b!r}") from None
        if abs(abs(c) - 1) > 1e-12:
            raise ConfigError(f"beta[{i}]: must be unimodular, |beta| = {abs(c)!r}")
        parsed.append([c.real, c.imag])
    cfg["beta"] = parsed

    if cfg["kind"] != "bands":
        ladder = cfg.get("ladder")
        if not isinstance(ladder, list) or not ladder:
            raise ConfigError("ladder: must be a nonempty list of degrees")
        for i, n in enumerate(ladder):
            if not isinstance(n, int) or n < 1:
                raise ConfigError(f"ladder[{i}]: expected a positive integer, got {n!r}")

    tol = dict(DEFAULT_TOLERANCES)
    for key, value in dict(cfg.get("tolerances", {})).items():
        if key not in DEFAULT_TOLERANCES:
            raise ConfigError(f"tolerances.{key}: unknown tolerance")
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"tolerances.{key}: expected a number, got {value!r}") from None
        if value > DEFAULT_TOLERANCES[key]:
            raise ConfigError(f"tolerances.{key}: {value} loosens the default {DEFAULT_TOLERANCES[key]}")
        tol[key] = value
    cfg["tolerances"] = tol
    return cfg


def run_id(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:RUN_ID_LENGTH]


def _betas(cfg):
    return [complex(re, im) for re, im in cfg["beta"]]


def _N(cfg, n):
    # smallest N with n <= tN, so sampled schedules never hit the cut-off
    return ratio.denominator_for(n, cfg["t"])


# ---------------------------------------------------------------------------
# limit objects


def limit_density(cfg) -> measures.DensityCurve:
    """The predicted zero density for the configured schedule."""
    sched = schedule_from_dict(cfg["schedule"])
    method = cfg.get("density", {}).get("method", "auto")
    if isinstance(sched, Constant):
        return measures.nu_a(abs(sched.alpha))
    if isinstance(sched, Periodic):
        return measures.nu_delta(spectral.discriminant(sched.values))
    if isinstance(sched, Table):
        raise ConfigError("schedule: tables have no limit density")
    name = sched.func.name
    if method != "numeric" and name in CLOSED_FORMS:
        params = {k: v for k, v in sched.func.params.items() if k != "t"}
        return measures.sigma_closed(name, cfg["t"], **params)
    return measures.sigma_t_numeric(sched.func, cfg["t"])


def _grid(cfg, default=1024):
    m = int(cfg.get("grid", default))
    return 2 * math.pi * (np.arange(m) + 0.5) / m


def _ratio_limit(cfg, sched):
    if isinstance(sched, (Constant, Periodic)):
        return sched
    if isinstance(sched, SampledFunction):
        return Constant(complex(sched.func(cfg["t"])))
    raise ConfigError("schedule: ratio experiments need a constant, periodic or sampled schedule")


# ---------------------------------------------------------------------------
# jobs: each writes only its own files and returns their names


def _write_json(path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _zeros_for(cfg, n, beta):
    sched = schedule_from_dict(cfg["schedule"])
    if cfg.get("polynomial", "popuc") == "opuc":
        return zeros.opuc_zeros(sched, n, _N(cfg, n))
    return zeros.popuc_zeros_phase(sched, n, _N(cfg, n), beta)


def _zeros_name(cfg, n, i):
    if cfg.get("polynomial", "popuc") == "opuc":
        return f"zeros_opuc_n{n}.csv"
    return f"zeros_popuc_n{n}_b{i}.csv"


def job_zeros(cfg, outdir, n, i):
    zs = _zeros_for(cfg, n, _betas(cfg)[i])
    name = _zeros_name(cfg, n, i)
    zs.to_csv(outdir / name)
    return [name]


def job_density(cfg, outdir):
    curve = limit_density(cfg)
    th = _grid(cfg)
    curve.to_csv(outdir / "density.csv", th)
    measures.cdf(curve).to_csv(outdir / "cdf.csv", th)
    _write_json(outdir / "density.json", {
        "schema": 1, "label": curve.label, "mass": measures.total_mass(curve),
        "arcs": [list(a) for a in curve.arcs],
        "point_masses": [list(p) for p in curve.point_masses],
    })
    return ["density.csv", "cdf.csv", "density.json"]


def job_ratio(cfg, outdir, kind, zi, i):
    sched = schedule_from_dict(cfg["schedule"])
    z = _complex_from(cfg.get("points", [2.0])[zi])
    rep = ratio.convergence_report(kind, sched, _betas(cfg)[i], z, cfg["ladder"], cfg["t"],
                                   limit=_ratio_limit(cfg, sched))
    rep["within_tolerance"] = rep["rungs"][-1]["error"] <= cfg["tolerances"]["ratio_max"]
    name = f"ratio_{kind}_z{zi}_b{i}.json"
    _write_json(outdir / name, rep)
    return [name]


def job_compare(cfg, outdir, i):
    curve = limit_density(cfg)
    F = measures.cdf(curve)
    th = _grid(cfg)
    files = []
    ks = []
    for n in cfg["ladder"]:
        zs = _zeros_for(cfg, n, _betas(cfg)[i])
        name = _zeros_name(cfg, n, i)
        zs.to_csv(outdir / name)
        files.append(name)
        ks.append(measures.kolmogorov_distance(zs.zeros, F))
    cdf_name = f"cdf_b{i}.csv"
    F.to_csv(outdir / cdf_name, th)
    cmp_name = f"comparison_b{i}.json"
    _write_json(outdir / cmp_name, {
        "schema": 1, "label": curve.label, "ladder": cfg["ladder"], "ks": ks,
        "decreasing": all(a > b for a, b in zip(ks, ks[1:])),
        "within_tolerance": ks[-1] <= cfg["tolerances"]["ks_max"],
    })
    return files + [cdf_name, cmp_name]


def job_balayage(cfg, outdir, n, i):
    K = int(cfg.get("order", 256))
    zs = _zeros_for(cfg, n, _betas(cfg)[i])
    bal = measures.balayage(measures.Empirical(zs.zeros), K)
    th = _grid(cfg)
    name = f"balayage_n{n}_b{i}.csv"
    with open(outdir / name, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "density"])
        for t, d in zip(th, bal.density(th)):
            w.writerow([repr(float(t)), repr(float(d))])
    return [name]


def job_moments(cfg, outdir, n, i):
    k_max = int(cfg.get("k_max", 20))
    sched = schedule_from_dict(cfg["schedule"])
    beta = _betas(cfg)[i]
    zs = zeros.popuc_zeros_phase(sched, n, _N(cfg, n), beta)
    zm = measures.moments(measures.Empirical(zs.zeros), k_max)
    tm = trace_power_moments(build_cutoff(coefficients(sched, n - 1, _N(cfg, n)), beta), k_max)
    out = {"schema": 1, "n": n, "beta": [beta.real, beta.imag],
           "zero_moments": [[c.real, c.imag] for c in zm],
           "trace_moments": [[c.real, c.imag] for c in tm],
           "max_deviation": float(np.max(np.abs(zm - tm)))}
    try:
        lm = measures.moments(limit_density(cfg), k_max)
        out["limit_moments"] = [[c.real, c.imag] for c in lm]
    except (ConfigError, VaropucError):
        pass
    name = f"moments_n{n}_b{i}.json"
    _write_json(outdir / name, out)
    return [name]


def job_bands(cfg, outdir):
    sched = schedule_from_dict(cfg["schedule"])
    if isinstance(sched, Constant):
        values = (sched.alpha,)
    elif isinstance(sched, Periodic):
        values = sched.values
    else:
        raise ConfigError("schedule: bands need a constant or periodic schedule")
    disc = spectral.discriminant(values)
    arcs = spectral.band_set(disc)
    with open(outdir / "bands.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["band", "theta_left", "theta_right"])
        for k, (lo, hi) in enumerate(arcs):
            w.writerow([k, repr(lo), repr(hi)])
    _write_json(outdir / "bands.json", {
        "schema": 1, "period": disc.period, "original_period": disc.original_period,
        "rho_product": disc.rho_product, "bands": [list(a) for a in arcs],
    })
    return ["bands.csv", "bands.json"]


def plan(cfg) -> list:
    """(job name, function, extra args) for every independent job of the run."""
    kind = cfg["kind"]
    nb = len(cfg["beta"])
    if kind == "zeros":
        betas = [0] if cfg.get("polynomial") == "opuc" else range(nb)
        return [(f"zeros n={n} beta#{i}", job_zeros, (n, i)) for n in cfg["ladder"] for i in betas]
    if kind == "density":
        return [("density", job_density, ())]
    if kind == "ratio":
        kinds = cfg.get("ratios", ["popuc_step"])
        for k in kinds:
            if k not in ratio.KINDS:
                raise ConfigError(f"ratios: unknown ratio kind {k!r}")
        npts = len(cfg.get("points", [2.0]))
        return [(f"ratio {k} z#{zi} beta#{i}", job_ratio, (k, zi, i))
                for k in kinds for zi in range(npts) for i in range(nb)]
    if kind == "compare":
        return [(f"compare beta#{i}", job_compare, (i,)) for i in range(nb)]
    if kind == "balayage":
        return [(f"balayage n={n} beta#{i}", job_balayage, (n, i)) for n in cfg["ladder"] for i in range(nb)]
    if kind == "moments":
        return [(f"moments n={n} beta#{i}", job_moments, (n, i)) for n in cfg["ladder"] for i in range(nb)]
    return [("bands", job_bands, ())]


def _run_job(fn, cfg, outdir, args):
    t0 = time.perf_counter()
    try:
        files = fn(cfg, outdir, *args)
        return {"status": "ok", "files": files, "wall": time.perf_counter() - t0}
    except Exception as exc:  # collected per job; other jobs continue
        return {"status": "error", "files": [], "wall": time.perf_counter() - t0,
                "error": f"{type(exc).__name__}: {exc}", "traceback": traceback.format_exc()}


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def run(cfg: dict, out, jobs: int = 1) -> dict:
    """Execute every job of a normalised config and write the manifest."""
    rid = run_id(cfg)
    outdir = Path(out) / rid
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    work = plan(cfg)
    if jobs > 1 and len(work) > 1:
        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_job, fn, cfg, outdir, args) for _, fn, args in work]
            results = [f.result() for f in futures]
    else:
        results = [_run_job(fn, cfg, outdir, args) for _, fn, args in work]
    # join barrier passed: assemble the manifest
    outputs = []
    for res in results:
        for name in res["files"]:
            p = outdir / name
            outputs.append({"file": name, "sha256": _sha256(p), "bytes": p.stat().st_size})
    manifest = {
        "schema": 1,
        "run_id": rid,
        "version": __version__,
        "config": cfg,
        "jobs": [dict(name=name, **{k: v for k, v in res.items() if k != "traceback"})
                 for (name, _, _), res in zip(work, results)],
        "wall_clock": time.perf_counter() - t0,
        "outputs": outputs,
        "ok": all(r["status"] == "ok" for r in results),
    }
    _write_json(outdir / "manifest.json", manifest)
    manifest["outdir"] = str(outdir)
    manifest["_tracebacks"] = [r.get("traceback") for r in results if r["status"] != "ok"]
    return manifest


# ---------------------------------------------------------------------------
# command line


def accept_table(records) -> str:
    rows = [("id", "status", "measured", "tolerance", "seconds", "description")]
    for r in records:
        status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        rows.append((str(r.id), status, f"{r.measured:.3e}", r.tolerance, f"{r.runtime:.2f}", r.description))
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]) - 1)]
    lines = []
    for row in rows:
        cells = [row[c].ljust(widths[c]) for c in range(len(widths))] + [row[-1]]
        lines.append("  ".join(cells))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varopuc", description="OPUC/POPUC experiments for varying coefficients")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment")
        p.add_argument("--config", required=True, help="TOML or JSON experiment config")
        p.add_argument("--out", default="runs", help="output root directory")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.add_argument("--seedless", action="store_true", help="reserved; experiments use no randomness")
    p = sub.add_parser("accept", help="run the acceptance suite")
    p.add_argument("--budget", type=float, default=None, help="time cap in seconds")
    p.add_argument("--only", default=None, help="comma-separated criterion ids")
    p.add_argument("--out", default=None, help="directory for accept.json")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--seedless", action="store_true", help="reserved; the suite uses a fixed seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "accept":
        only = None
        if args.only:
            try:
                only = {int(x) for x in args.only.split(",")}
            except ValueError:
                print(f"error: --only expects comma-separated ids, got {args.only!r}", file=sys.stderr)
                return 2
        records = harness.run_all(args.budget, only, jobs=args.jobs)
        print(accept_table(records))
        js = harness.to_json(records)
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            (Path(args.out) / "accept.json").write_text(js + "\n")
        else:
            print(js)
        return 0 if all(r.passed for r in records if not r.skipped) else 1
    try:
        cfg = normalize_config(load_config(args.config), args.command)
        manifest = run(cfg, args.out, max(1, args.jobs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for job in manifest["jobs"]:
        line = f"{job['status']:5s} {job['name']}"
        if job["status"] != "ok":
            line += f": {job['error']}"
        print(line)
    print(f"manifest: {manifest['outdir']}/manifest.json")
    return 0 if manifest["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
