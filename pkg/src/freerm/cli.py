"""Command-line entry point: ``freerm {list-classes,simulate,target,compare,check}``.

Errors are printed to stderr as ``{"error": {"code": ..., "message": ...}}``
with a nonzero exit status.
"""

from __future__ import annotations

import argparse
import csv
import glob
import json
import os
import sys

import numpy as np

from . import ensemble as ens
from . import paths
from .config import RunConfig, RunManifest
from .errors import ConfigError, EmptyRunError, FreermError
from .spectra import EmpiricalCDF, InterpolatedCDF, esd, ks_distance, wasserstein1

EXIT_ERROR = 2


def _fmt(v):
    return f"{v:.17g}"


def _write_json(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    return str(o)


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def load_config(args) -> RunConfig:
    flat = {}
    if getattr(args, "config", None):
        flat = RunConfig.load(args.config).to_flat()
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        flat[k.strip()] = _parse_value(v)
    if getattr(args, "seed", None) is not None:
        flat["seed"] = args.seed
    if getattr(args, "out", None):
        flat["out"] = args.out
    if getattr(args, "workers", None):
        flat["workers"] = args.workers
    return RunConfig.from_flat(flat)


def _prepare_out(cfg: RunConfig):
    os.makedirs(cfg.out, exist_ok=True)
    return cfg.save(os.path.join(cfg.out, "config.json"))


def _model_spec(cfg: RunConfig, mu=None):
    return ens.MatrixModelSpec(cfg.d, mu or cfg.law_triplet(), cfg.eps, cfg.ar_substitute, cfg.replicas, cfg.seed)


# ---------------------------------------------------------------------------
# list-classes
# ---------------------------------------------------------------------------


def class_rows():
    from .kernels import CLASSES

    return [f"{c.label} / {c.formula} / {c.condition} / example {c.example} / kernel {c.kernel}" for c in CLASSES]


def cmd_list_classes(args):
    for row in class_rows():
        print(row)
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def write_spectra(root, samples):
    """One ``replica, index, lambda`` CSV per replica under ``root/spectra``."""
    sdir = os.path.join(root, "spectra")
    os.makedirs(sdir, exist_ok=True)
    written = []
    for s in samples:
        p = os.path.join(sdir, f"replica_{s.replica_id:05d}.csv")
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["replica", "index", "lambda"])
            for i, lam in enumerate(s.eigenvalues):
                w.writerow([s.replica_id, i, _fmt(lam)])
        written.append(p)
    return written


def write_pooled_cdf(path, emp: EmpiricalCDF):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "cdf"])
        for x, F in zip(emp.jumps, emp(emp.jumps)):
            w.writerow([_fmt(x), _fmt(F)])
    return path


def simulate(cfg: RunConfig):
    """Sample the configured ensemble; returns the spectra and their stream id."""
    kernel = cfg.kernel_object()
    if kernel is None:
        spec = _model_spec(cfg)
        return paths.direct_model_spectra(spec, workers=cfg.n_workers), paths.STREAM_DIRECT
    run = paths.IntegralRunSpec(_model_spec(cfg), kernel)
    if cfg.pathway == "A":
        return paths.pathway_a_spectra(run, cfg.replicas, workers=cfg.n_workers), paths.STREAM_A
    return paths.pathway_b_spectra(run, cfg.replicas, workers=cfg.n_workers), paths.STREAM_B


def cmd_simulate(args):
    cfg = load_config(args)
    manifest = RunManifest.start(cfg, "simulate")
    cfg_path = _prepare_out(cfg)
    samples, stream = simulate(cfg)
    files = [cfg_path] + write_spectra(cfg.out, samples)
    files.append(write_pooled_cdf(os.path.join(cfg.out, "pooled_cdf.csv"), esd(samples)))
    manifest.replica_seeds = [
        {"replica": s.replica_id, "stream": stream, "state": ens.replica_seed_words(cfg.seed, s.replica_id, stream)}
        for s in samples
    ]
    manifest.add_files(cfg.out, files)
    manifest.write(cfg.out)
    print(json.dumps({"out": cfg.out, "replicas": len(samples), "d": cfg.d}))
    return 0


# ---------------------------------------------------------------------------
# target
# ---------------------------------------------------------------------------


def target_triplet(cfg: RunConfig):
    from .integrated import integrated_triplet

    mu = cfg.law_triplet()
    kernel = cfg.kernel_object()
    return mu if kernel is None else integrated_triplet(mu, kernel).as_triplet()


def target_summary(t) -> dict:
    return {
        "atoms": [[a, m] for a, m in t.atoms],
        "escaped_mass": t.escaped_mass,
        "bracket": list(t.bracket),
        "max_residual": t.max_residual,
        "continuous_mass": t.continuous_mass,
        "left_tail": t.meta.get("left_tail", 0.0),
        "grid_points": int(t.x.size),
    }


def cmd_target(args):
    from .free import build_target, write_density_csv

    cfg = load_config(args)
    manifest = RunManifest.start(cfg, "target")
    cfg_path = _prepare_out(cfg)
    t = build_target(target_triplet(cfg), n_grid=cfg.n_grid)
    dens = write_density_csv(os.path.join(cfg.out, "density.csv"), t)
    summary = target_summary(t)
    info = _write_json(os.path.join(cfg.out, "target.json"), summary)
    manifest.add_files(cfg.out, [cfg_path, dens, info])
    manifest.write(cfg.out)
    print(json.dumps(summary, default=_json_default))
    return 0


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def read_spectra(run_dir):
    from .spectra import SpectralSample

    files = sorted(glob.glob(os.path.join(run_dir, "spectra", "replica_*.csv")))
    if not files:
        raise EmptyRunError(f"no spectra found under {run_dir}")
    samples = []
    for p in files:
        data = np.loadtxt(p, delimiter=",", skiprows=1, ndmin=2)
        if data.size == 0:
            raise EmptyRunError(f"empty spectra file {p}")
        ev = np.sort(data[:, 2])
        samples.append(SpectralSample(ev, ev.size, int(data[0, 0])))
    return samples


def read_target_cdf(target_csv):
    """Target CDF from a density CSV; atoms come from a ``target.json`` beside it, if present."""
    try:
        data = np.loadtxt(target_csv, delimiter=",", skiprows=1, ndmin=2)
    except OSError as exc:
        raise EmptyRunError(f"cannot read target {target_csv}: {exc}") from None
    if data.shape[0] < 2:
        raise EmptyRunError(f"target {target_csv} has fewer than two grid points")
    x, F = data[:, 0], data[:, 2]
    atoms = []
    side = os.path.join(os.path.dirname(os.path.abspath(target_csv)), "target.json")
    if os.path.exists(side):
        with open(side) as fh:
            atoms = [tuple(a) for a in json.load(fh).get("atoms", [])]
    for a, m in atoms:
        F = F - m * (x >= a)
    return InterpolatedCDF(x, F, atoms)


def compare(run_dir, target_csv, tolerance):
    emp = esd(read_spectra(run_dir))
    target = read_target_cdf(target_csv)
    ks = ks_distance(emp, target)
    return {
        "run_dir": run_dir,
        "target": target_csv,
        "ks": ks,
        "w1": wasserstein1(emp, target),
        "tolerance": tolerance,
        "passed": bool(ks <= tolerance),
        "n_eigenvalues": int(emp.values.size),
    }


def cmd_compare(args):
    tol = args.tolerance
    if tol is None:
        tol = load_config(args).tolerance if args.config else RunConfig().tolerance
    report = compare(args.run_dir, args.target_csv, tol)
    out = args.out or args.run_dir
    os.makedirs(out, exist_ok=True)
    _write_json(os.path.join(out, "report.json"), report)
    print(json.dumps(report, default=_json_default))
    return 0


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def check_kernels(cfg=None) -> dict:
    from .kernels import ELEMENTARY_MOMENTS, INVERSE_KERNELS, moment_errors, round_trip_errors

    trips = {k: float(round_trip_errors(k).max()) for k in INVERSE_KERNELS}
    moments = {k: moment_errors(k) for k in ELEMENTARY_MOMENTS}
    passed = all(v <= 1e-10 for v in trips.values()) and all(
        max(m.values()) <= 1e-12 for m in moments.values())
    return {"check": "kernels", "round_trip_max": trips, "moments": moments, "passed": passed}


def check_characteristic(cfg: RunConfig) -> dict:
    spec = _model_spec(cfg)
    rows = []
    for i, A in enumerate(ens.standard_test_matrices(cfg.d)):
        r = ens.characteristic_check(spec, A, cfg.n_samples, ens.replica_rng(cfg.seed, i, 31))
        rows.append({"A": i, "empirical": r.empirical, "formula": r.formula, "z": list(r.z),
                     "max_abs_z": r.max_abs_z})
    return {"check": "characteristic", "d": cfg.d, "law": cfg.law, "results": rows,
            "passed": all(r["max_abs_z"] <= 3.0 for r in rows)}


def check_polar(cfg: RunConfig) -> dict:
    spec = _model_spec(cfg)
    reps = ens.polar_form_check(spec, ens.standard_test_sets(cfg.d), ens.replica_rng(cfg.seed, 0, 32),
                                n=cfg.n_samples)
    rows = [{"set": repr(r.test_set), "direct": r.direct.value, "direct_se": r.direct.se,
             "polar": r.polar.value, "polar_se": r.polar.se, "z": r.z} for r in reps]
    return {"check": "polar", "d": cfg.d, "law": cfg.law, "results": rows,
            "passed": all(r.passed for r in reps)}


def check_pathway(cfg: RunConfig) -> dict:
    if not cfg.kernel:
        raise ConfigError("check pathway needs a kernel")
    run = paths.IntegralRunSpec(_model_spec(cfg), cfg.kernel_object())
    rep = paths.pathway_equivalence(run, cfg.replicas, cfg.level, cfg.n_perm, cfg.n_workers)
    return {"check": "pathway", "law": cfg.law, "kernel": cfg.kernel, "d": cfg.d, "replicas": cfg.replicas,
            "ks": rep.ks, "threshold": rep.threshold, "p_value": rep.p_value, "horizon": run.horizon,
            "passed": rep.passed}


CHECKS = {"characteristic": check_characteristic, "polar": check_polar, "pathway": check_pathway,
          "kernels": check_kernels}


def cmd_check(args):
    cfg = load_config(args)
    report = CHECKS[args.which](cfg)
    os.makedirs(cfg.out, exist_ok=True)
    _write_json(os.path.join(cfg.out, "report.json"), report)
    print(json.dumps(report, default=_json_default))
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="freerm", description="Random matrix models for free infinitely divisible laws.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="flat JSON run config")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--workers", type=int)
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    sub.add_parser("list-classes", help="print the kernel class catalog")
    common(sub.add_parser("simulate", help="sample spectra of the configured ensemble"))
    common(sub.add_parser("target", help="density and CDF of the free target law"))
    cp = sub.add_parser("compare", help="KS and W1 between a run and a target CSV")
    cp.add_argument("run_dir")
    cp.add_argument("target_csv")
    cp.add_argument("--tolerance", type=float)
    common(cp)
    ck = sub.add_parser("check", help="identity checks")
    ck.add_argument("which", choices=sorted(CHECKS))
    common(ck)
    return p


COMMANDS = {"list-classes": cmd_list_classes, "simulate": cmd_simulate, "target": cmd_target,
            "compare": cmd_compare, "check": cmd_check}


def _fail(code, message):
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")
    return EXIT_ERROR


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except FreermError as exc:
        return _fail(exc.code, str(exc))
    except OSError as exc:
        return _fail("E_IO", str(exc))
    except (ValueError, TypeError) as exc:
        return _fail("E_INVALID", str(exc))
    except Exception as exc:  # noqa: BLE001 - surface anything else as JSON too
        return _fail("E_INTERNAL", f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
