"""Command-line experiment runner.

Exit codes: 0 success, 2 invalid configuration, 3 desk-scale limit exceeded.
Set ``CAPCERT_WORKERS`` to run seeds on a thread pool; results do not depend
on it.
"""

import argparse
import ast
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field, fields, asdict
import io as _io
import json
import math
import operator
import os
from pathlib import Path
import re
import statistics
import sys
import time

import numpy as np

from . import __version__
from .certify import ball_cover_number, illumination_lower_bound
from .construct import ConstructionParams, DeskScaleError, construct_separated
from .io import dump_json, read_points, write_points
from .pipelines import DEFAULT_EPSILON, theorem1_pipeline, theorem3_pipeline
from .sphere import cap_measure
from .witness import (
    HypothesisError,
    build_witness,
    check_lemma3_ii,
    default_samples_per_ring,
    witness_diameter,
)

MODES = ("construct", "witness", "illum-certify", "ball-cover", "cap-table",
         "theorem1", "theorem2-balls")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    dim: int | None = None
    alpha: float | None = None
    psi: float | None = None
    phi: float | None = None
    epsilon: float | None = None
    seed: int = 0
    seeds: tuple | None = None
    samples_per_ring: int | None = None
    mc_samples: int = 100_000
    exact_limit: int | None = None
    n_override: int | None = None
    cover_mode: str = "exact"
    diameter: float = 1.0
    dims: tuple | None = None
    theta_steps: int = 12
    points: str | None = None
    output_path: str | None = None
    format: str = "json"

    def seed_list(self):
        if self.seeds is None:
            return [self.seed]
        a, b = self.seeds
        return list(range(a, b + 1))

    def echo(self):
        out = asdict(self)
        out["seeds"] = list(self.seeds) if self.seeds else None
        out["dims"] = list(self.dims) if self.dims else None
        # the directory is not part of the experiment
        out["output_path"] = Path(self.output_path).name if self.output_path else None
        return out


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_angle(text):
    """Parse ``"pi/14"``, ``"6pi/14"``, ``"pi/3+0.05"`` or a decimal, in radians."""
    if isinstance(text, (int, float)):
        return float(text)
    src = str(text).strip().replace("π", "pi")
    src = re.sub(r"(\d)\s*pi", r"\1*pi", src)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ConfigError(f"cannot parse angle {text!r}")

    try:
        value = ev(ast.parse(src, mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse angle {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"angle {text!r} is not finite")
    return value


def parse_range(text):
    """``"A..B"`` (inclusive) or a single integer."""
    if isinstance(text, (list, tuple)):
        a, b = text
        return int(a), int(b)
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", str(text))
    if not m:
        raise ConfigError(f"expected a range like 0..9, got {text!r}")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) is not None else a
    if b < a:
        raise ConfigError(f"empty range {text!r}")
    return a, b


def build_parser():
    parser = argparse.ArgumentParser(
        prog="capcert",
        description="Separated spherical point sets and covering lower-bound certificates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="mode", metavar="MODE")
    helps = {
        "construct": "build a separated point set by the deletion method",
        "witness": "sample a witness set around each apex and measure its diameter",
        "illum-certify": "lower/upper bounds on directions illuminating the apexes",
        "ball-cover": "fewest balls of diameter d covering a point set",
        "cap-table": "table of normalized cap measures",
        "theorem1": "full illumination pipeline (alpha = pi/14)",
        "theorem2-balls": "full ball-cover pipeline (balls of diameter 1)",
    }
    for mode in MODES:
        p = sub.add_parser(mode, help=helps[mode], description=helps[mode])
        p.add_argument("--config", help="JSON file of parameters; flags override it")
        p.add_argument("--dim", type=int, help="ambient dimension n (>= 2)")
        p.add_argument("--alpha", help="cone angle, e.g. pi/14 (witness, illum-certify)")
        p.add_argument("--psi", help="separation angle, e.g. 6pi/14")
        p.add_argument("--phi", help="cap radius for N, e.g. 6pi/14+0.05")
        p.add_argument("--epsilon", help=f"phi - psi for the pipelines (default {DEFAULT_EPSILON})")
        p.add_argument("--seed", type=int, help="base seed (default 0)")
        p.add_argument("--seeds", help="inclusive seed range A..B; overrides --seed")
        p.add_argument("--samples-per-ring", type=int, help="ring samples per apex (default max(64, 2n))")
        p.add_argument("--mc-samples", type=int, help="Monte Carlo directions (default 100000)")
        p.add_argument("--exact-limit", type=int,
                       help="largest exact instance (default 64 caps / 24 points)")
        p.add_argument("--n-override", type=int, help="candidate count instead of the formula")
        p.add_argument("--cover-mode", choices=("exact", "greedy", "mc"),
                       help="certificate mode (default exact)")
        p.add_argument("--diameter", type=float, help="ball diameter for ball-cover (default 1)")
        p.add_argument("--dims", help="dimension range A..B for cap-table (default 2..10)")
        p.add_argument("--theta-steps", type=int, help="cap-table grid steps over [0, pi] (default 12)")
        p.add_argument("--points", help="point-set file (.capf or .json) or an inline JSON list")
        p.add_argument("--out", help="report path; point sets are written next to it")
        p.add_argument("--format", choices=("json", "csv"), help="report format (default json)")
    return parser


_ANGLE_KEYS = ("alpha", "psi", "phi", "epsilon")
_INT_KEYS = ("dim", "seed", "samples_per_ring", "mc_samples", "exact_limit", "n_override",
             "theta_steps")


def parse_config(argv):
    """Build an :class:`ExperimentConfig` from argv, merged over ``--config``."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise ConfigError("invalid command line") from exc
    if ns.mode is None:
        raise ConfigError(f"missing mode; choose one of {', '.join(MODES)}")
    values = {}
    if ns.config:
        try:
            values.update(json.loads(Path(ns.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {ns.config}: {exc}") from exc
        values.pop("mode", None)
    flags = vars(ns)
    rename = {"out": "output_path"}
    for key, value in flags.items():
        if key in ("config", "mode") or value is None:
            continue
        values[rename.get(key, key)] = value
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown parameters: {', '.join(sorted(unknown))}")
    for key in _ANGLE_KEYS:
        if values.get(key) is not None:
            values[key] = parse_angle(values[key])
    for key in _INT_KEYS:
        if values.get(key) is not None:
            values[key] = int(values[key])
    if values.get("seeds") is not None:
        values["seeds"] = parse_range(values["seeds"])
    if values.get("dims") is not None:
        values["dims"] = parse_range(values["dims"])
    config = ExperimentConfig(mode=ns.mode, **values)
    validate(config)
    return config


def _require(config, *names):
    for name in names:
        if getattr(config, name) is None:
            raise ConfigError(f"mode {config.mode} requires --{name.replace('_', '-')}")


def validate(config):
    c = config
    if c.mode not in MODES:
        raise ConfigError(f"unknown mode {c.mode!r}")
    if c.dim is not None and c.dim < 2:
        raise ConfigError("--dim must be >= 2")
    if c.alpha is not None and not 0.0 < c.alpha <= math.pi / 6 + 1e-12:
        raise ConfigError("--alpha must lie in (0, pi/6]")
    if c.psi is not None and c.phi is not None and not 0.0 < c.psi < c.phi < math.pi / 2:
        raise ConfigError("need 0 < psi < phi < pi/2 (psi < phi required)")
    if c.mc_samples < 1:
        raise ConfigError("--mc-samples must be positive")
    if c.format not in ("json", "csv"):
        raise ConfigError("--format must be json or csv")
    needs_build = c.points is None
    if c.mode == "construct":
        _require(c, "dim", "psi", "phi")
    elif c.mode in ("witness", "illum-certify"):
        _require(c, "alpha")
        if needs_build:
            _require(c, "dim", "psi", "phi")
    elif c.mode == "ball-cover":
        _require(c, "points")
        if c.diameter <= 0:
            raise ConfigError("--diameter must be positive")
        if c.cover_mode == "mc":
            raise ConfigError("ball-cover supports --cover-mode exact or greedy")
    elif c.mode == "theorem1":
        _require(c, "dim")
        eps = DEFAULT_EPSILON if c.epsilon is None else c.epsilon
        if not 0.0 < eps < math.pi / 14:
            raise ConfigError("--epsilon must lie in (0, pi/14) for theorem1")
    elif c.mode == "theorem2-balls":
        _require(c, "dim")
        eps = DEFAULT_EPSILON if c.epsilon is None else c.epsilon
        if not 0.0 < eps < math.pi / 6:
            raise ConfigError("--epsilon must lie in (0, pi/6) for theorem2-balls")
        if c.cover_mode == "mc":
            raise ConfigError("theorem2-balls supports --cover-mode exact or greedy")
    if c.psi is not None and c.phi is None and c.mode in ("construct", "witness", "illum-certify"):
        raise ConfigError("--psi given without --phi")


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------

def _load_points(spec):
    text = spec.strip()
    if text.startswith("["):
        try:
            return np.asarray(json.loads(text), dtype=np.float64)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"inline --points is not valid JSON: {exc}") from exc
    try:
        pts, _ = read_points(text)
    except OSError as exc:
        raise ConfigError(f"cannot read --points file {text}: {exc}") from exc
    return pts


class _Artifacts:
    """Collects point sets to write next to the report."""

    def __init__(self, out):
        self.base = Path(out) if out else None
        self.files = []

    def add(self, tag, points, metadata):
        if self.base is None:
            return None
        name = f"{self.base.stem}.{tag}.capf"
        write_points(self.base.parent / name, points, metadata)
        self.files.append(name)
        return name


def _construct_or_load(c, seed):
    if c.points is not None:
        return _load_points(c.points), None
    params = ConstructionParams(c.dim, c.psi, c.phi, seed, c.n_override)
    conf = construct_separated(params)
    return conf.points, conf


def _run_construct(c, seed, art):
    t0 = time.perf_counter()
    pts, conf = _construct_or_load(c, seed)
    meta = {"psi": c.psi, "phi": c.phi, "seed": seed, "N": conf.candidate_count}
    name = art.add(f"seed{seed}", pts, meta)
    row = {"seed": seed, "N": conf.candidate_count, "size": len(conf),
           "deleted": conf.deleted_count, "markov_success": conf.markov_success,
           "points_file": name}
    return row, {"construct": time.perf_counter() - t0}


def _run_witness(c, seed, art):
    t0 = time.perf_counter()
    pts, conf = _construct_or_load(c, seed)
    spr = c.samples_per_ring if c.samples_per_ring is not None else default_samples_per_ring(pts.shape[1])
    held = check_lemma3_ii(pts, c.alpha)
    if not held:
        raise HypothesisError("apex set violates the pairwise-angle window [4a, pi - 6a]")
    t1 = time.perf_counter()
    w = build_witness(pts, c.alpha, spr, seed)
    wd = witness_diameter(w)
    t2 = time.perf_counter()
    name = art.add(f"seed{seed}.witness", w.all_points(),
                   {"alpha": c.alpha, "samples_per_ring": spr, "seed": seed})
    row = {"seed": seed, "size": int(pts.shape[0]),
           "N": conf.candidate_count if conf else None,
           "witness_points": int(w.all_points().shape[0]),
           "witness_diameter": wd, "target": 2 * math.cos(c.alpha),
           "hypothesis_held": held, "points_file": name}
    return row, {"construct": t1 - t0, "witness": t2 - t1}


def _run_illum(c, seed, art):
    t0 = time.perf_counter()
    pts, conf = _construct_or_load(c, seed)
    t1 = time.perf_counter()
    limit = c.exact_limit or 64
    cert = illumination_lower_bound(pts, c.alpha, c.cover_mode if c.cover_mode != "greedy" else "mc",
                                    limit, c.mc_samples, seed=seed)
    t2 = time.perf_counter()
    row = {"seed": seed, "size": int(pts.shape[0]),
           "N": conf.candidate_count if conf else None,
           "multiplicity": cert.extras.get("multiplicity"),
           "lower_bound": cert.lower_bound, "upper_bound": cert.upper_bound,
           "certified": cert.certified, "certificate": cert.to_dict()}
    return row, {"construct": t1 - t0, "certify": t2 - t1}


def _run_ball_cover(c, seed, art):
    t0 = time.perf_counter()
    pts = _load_points(c.points)
    cert = ball_cover_number(pts, c.diameter, c.cover_mode, c.exact_limit or 24)
    row = {"seed": seed, "size": int(pts.shape[0]),
           "lower_bound": cert.lower_bound, "upper_bound": cert.upper_bound,
           "certificate": cert.to_dict()}
    return row, {"certify": time.perf_counter() - t0}


def _run_theorem1(c, seed, art):
    t0 = time.perf_counter()
    eps = DEFAULT_EPSILON if c.epsilon is None else c.epsilon
    mode = "mc" if c.cover_mode == "greedy" else c.cover_mode
    cert, report = theorem1_pipeline(
        c.dim, eps, seed, mode,
        samples_per_ring=c.samples_per_ring if c.samples_per_ring is not None else 64,
        mc_samples=c.mc_samples, exact_limit=c.exact_limit or 64, n_override=c.n_override)
    report["certified"] = cert.certified
    return report, {"pipeline": time.perf_counter() - t0}


def _run_theorem3(c, seed, art):
    t0 = time.perf_counter()
    eps = DEFAULT_EPSILON if c.epsilon is None else c.epsilon
    cert, report = theorem3_pipeline(c.dim, eps, seed, c.cover_mode,
                                     exact_limit=c.exact_limit or 24, n_override=c.n_override)
    report["certified"] = cert.certified
    return report, {"pipeline": time.perf_counter() - t0}


_RUNNERS = {
    "construct": _run_construct,
    "witness": _run_witness,
    "illum-certify": _run_illum,
    "ball-cover": _run_ball_cover,
    "theorem1": _run_theorem1,
    "theorem2-balls": _run_theorem3,
}


def cap_table(dims=(2, 10), steps=12):
    rows = []
    for n in range(dims[0], dims[1] + 1):
        for k in range(steps + 1):
            theta = math.pi * k / steps
            rows.append({"n": n, "theta": theta, "omega": cap_measure(n, theta)})
    return rows


def _aggregate(results):
    agg = {"runs": len(results)}
    keys = [k for k in (results[0] if results else {})
            if all(isinstance(r.get(k), (int, float)) and not isinstance(r.get(k), bool)
                   for r in results)]
    for k in keys:
        if k == "seed":
            continue
        vals = [r[k] for r in results]
        agg[k] = {"min": min(vals), "median": statistics.median(vals), "max": max(vals)}
    flags = [r["markov_success"] for r in results if "markov_success" in r]
    if flags:
        agg["success_fraction"] = sum(flags) / len(flags)
    return agg


def workers():
    try:
        return max(1, int(os.environ.get("CAPCERT_WORKERS", "1")))
    except ValueError:
        return 1


def run(config):
    """Execute ``config`` and return the report dict (also written to disk)."""
    timing = {}
    art = _Artifacts(config.output_path)
    if art.base is not None:
        art.base.parent.mkdir(parents=True, exist_ok=True)
    if config.mode == "cap-table":
        t0 = time.perf_counter()
        dims = config.dims or ((config.dim, config.dim) if config.dim else (2, 10))
        results = cap_table(dims, config.theta_steps)
        timing["cap-table"] = time.perf_counter() - t0
    else:
        runner = _RUNNERS[config.mode]
        seeds = config.seed_list()
        with ThreadPoolExecutor(max_workers=workers()) as pool:
            out = list(pool.map(lambda s: runner(config, s, art), seeds))
        results = [row for row, _ in out]
        for seed, (_, phases) in zip(seeds, out):
            timing[f"seed{seed}"] = phases
    art.files.sort()
    report = {
        "config": config.echo(),
        "results": results,
        "aggregate": _aggregate(results) if config.mode != "cap-table" else {"rows": len(results)},
        "timing": None,
        "artifacts": art.files,
    }
    if art.base is not None:
        sidecar = f"{art.base.stem}.timing.json"
        report["timing"] = {"file": sidecar}
        (art.base.parent / sidecar).write_text(dump_json(timing))
    return report


def render(report, fmt):
    if fmt == "json":
        return dump_json(report)
    rows = report["results"]
    cols = [k for k in (rows[0] if rows else {})
            if all(not isinstance(r.get(k), (dict, list)) for r in rows)]
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
        report = run(config)
        text = render(report, config.format)
        if config.output_path:
            Path(config.output_path).write_text(text)
        else:
            sys.stdout.write(text)
    except DeskScaleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, HypothesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
