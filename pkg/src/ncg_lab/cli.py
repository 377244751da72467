"""Batch front-end: ``ncg-lab config.json`` runs the listed experiments.

Exit status is 0 when every check passes, 1 when any invariant check fails
and 2 for unreadable or schema-invalid configurations.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import importlib.metadata
import io
import json
import math
import os
import re
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .algebra import AlgebraElement
from .cocycle import GOLDEN_BETA, innerify
from .lattice import INF, Shape
from .lab import SequenceSpec, default_jobs

_SHAPE_ENTRY = {"oneOf": [{"type": "integer", "minimum": 1}, {"type": "string", "pattern": "^inf$"}]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
_GRID = {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1}
_ELEMENT = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "required": ["m", "c"],
        "properties": {
            "m": {"type": "array", "items": {"type": "integer"}},
            "c": {"oneOf": [{"type": "number"}, {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]},
        },
        "additionalProperties": False,
    },
}
_STATE = {"type": "string", "pattern": "^(trace|axis:[0-9]+)$"}

SCHEMA = {
    "type": "object",
    "required": ["family", "seed", "experiments"],
    "additionalProperties": False,
    "properties": {
        "family": {
            "type": "object",
            "required": ["name"],
            "additionalProperties": False,
            "properties": {
                "name": {"enum": ["clock-shift", "theta-sequence", "custom"]},
                "n_grid": _GRID,
                "theta_inf": _MATRIX,
                "beta": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "shape": {"type": "array", "items": _SHAPE_ENTRY, "minItems": 1},
                "theta": _MATRIX,
            },
        },
        "seed": {"type": "integer", "minimum": 0},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"algebra": {"type": "number", "exclusiveMinimum": 0},
                           "slack": {"type": "number", "minimum": 0}},
        },
        "radius": {"type": "integer", "minimum": 1},
        "out_dir": {"type": "string"},
        "experiments": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kind"],
                "additionalProperties": False,
                "properties": {
                    "kind": {"enum": ["verify", "spectrum", "seminorm", "converge", "dynamics", "mk"]},
                    "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
                    "n": {"type": "integer", "minimum": 2},
                    "n_grid": _GRID,
                    "samples": {"type": "integer", "minimum": 1},
                    "element": _ELEMENT,
                    "limit_radii": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2},
                    "F": {"type": "integer", "minimum": 0},
                    "W": {"type": "integer", "minimum": 1},
                    "t": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                    "phi": _STATE,
                    "psi": _STATE,
                    "budget": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


def _locate(text: str, path) -> int:
    """Best-effort line number of a JSON path: follows the object keys in order."""
    pos = 0
    for key in path:
        if not isinstance(key, str):
            continue
        m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, pos)
        if m is None:
            break
        pos = m.start()
    return text.count("\n", 0, pos) + 1


def load_config(path: str | Path, seed: int | None = None) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        where = "/".join(map(str, e.absolute_path)) or "<root>"
        raise ConfigError(f"{path}:{_locate(text, e.absolute_path)}: {where}: {e.message}")
    if seed is not None:
        cfg["seed"] = int(seed)
    _semantic_checks(cfg, path, text)
    return cfg


def _semantic_checks(cfg: dict, path, text: str) -> None:
    def fail(keys, msg):
        raise ConfigError(f"{path}:{_locate(text, keys)}: {msg}")

    fam = cfg["family"]
    for where, grid in [(["family", "n_grid"], fam.get("n_grid"))] + [
        (["experiments", "n_grid"], e.get("n_grid")) for e in cfg["experiments"]
    ]:
        if grid is not None and any(b <= a for a, b in zip(grid, grid[1:])):
            fail(where, "n grid must be strictly increasing")
    if fam["name"] == "theta-sequence" and "theta_inf" not in fam:
        fail(["family"], "theta-sequence needs theta_inf")
    if fam["name"] == "custom" and "shape" not in fam:
        fail(["family"], "custom family needs a shape")
    names = [experiment_name(e, i) for i, e in enumerate(cfg["experiments"])]
    if len(set(names)) != len(names):
        fail(["experiments"], "experiment names must be unique (set 'name')")
    for e in cfg["experiments"]:
        if fam["name"] == "custom" and e["kind"] in ("converge", "dynamics", "seminorm"):
            fail(["experiments", "kind"], f"{e['kind']} needs a sequence family")
    try:
        build_family(fam, cfg.get("radius", 8))
        if fam["name"] == "custom":
            custom_config(fam, cfg.get("radius", 8))
    except (ValueError, TypeError) as exc:
        fail(["family"], f"invalid family: {exc}")


def experiment_name(exp: dict, index: int) -> str:
    return exp.get("name", exp["kind"])


def config_hash(cfg: dict) -> str:
    """SHA-256 of the semantic content (output location excluded)."""
    sem = {k: v for k, v in cfg.items() if k != "out_dir"}
    blob = json.dumps(sem, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def custom_config(fam: dict, radius: int):
    from .dirac import TripleConfig

    shape = Shape(tuple(fam["shape"]))
    d = shape.d
    theta = np.asarray(fam.get("theta", np.zeros((d, d))), dtype=float)
    if theta.shape != (d, d):
        raise ValueError("theta must be d x d")
    emb = innerify(shape, theta, beta=fam.get("beta", GOLDEN_BETA))
    return TripleConfig(emb, radius=radius)


def build_family(fam: dict, radius: int) -> SequenceSpec:
    grid = tuple(fam.get("n_grid", (8, 16, 32, 64)))
    beta = fam.get("beta", GOLDEN_BETA)
    if fam["name"] == "custom":
        return SequenceSpec("custom", grid, beta=beta, radius=radius,
                            custom=_CustomFactory(fam, radius))
    theta = None
    if fam["name"] == "theta-sequence":
        theta = np.asarray(fam["theta_inf"], dtype=float)
        if theta.ndim != 2 or theta.shape[0] != theta.shape[1] or np.abs(theta + theta.T).max() > 0:
            raise ValueError("theta_inf must be a square antisymmetric matrix")
    return SequenceSpec(fam["name"], grid, theta_inf=theta, beta=beta, radius=radius)


class _CustomFactory:
    """Picklable fixed-config factory (ignores n)."""

    def __init__(self, fam, radius):
        self.fam, self.radius = fam, radius

    def __call__(self, n):
        return custom_config(self.fam, self.radius)


def _element(spec, d: int, shape: Shape) -> AlgebraElement:
    pairs = {}
    for term in spec:
        if len(term["m"]) != d:
            raise ConfigError(f"element point {term['m']} must have {d} coordinates")
        c = term["c"]
        coeff = complex(c) if not isinstance(c, list) else complex(c[0], c[1])
        pairs[tuple(term["m"])] = pairs.get(tuple(term["m"]), 0) + coeff
    return AlgebraElement.from_dict(shape, pairs)


def _default_element(d: int, shape: Shape) -> AlgebraElement:
    a = AlgebraElement.zero(shape)
    for j in range(d):
        e = np.zeros(d, np.int64)
        e[j] = 1
        a = a + AlgebraElement.re_delta(shape, e)
    return a


# ---------------------------------------------------------------------------
# experiments


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv_bytes(header: list[str], rows: list) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue().encode()


def _json_bytes(obj) -> bytes:
    return (json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n").encode()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _series(name: str, header, rows, fmt: str) -> dict[str, bytes]:
    if fmt == "json":
        return {f"{name}.json": _json_bytes({"columns": list(header), "rows": [list(r) for r in rows]})}
    return {f"{name}.csv": _csv_bytes(list(header), rows)}


def _state(spec: str, cfg):
    from .lab import axis_state, canonical_trace_state

    if spec == "trace":
        return canonical_trace_state(cfg)
    axis = int(spec.split(":")[1])
    if axis >= cfg.d:
        raise ConfigError(f"state axis {axis} out of range")
    return axis_state(cfg, axis)


def run_experiment(task) -> dict:
    """Run one experiment; returns files, a pass flag, plot requests and a summary."""
    from . import lab
    from .dirac import assemble_dirac, spectrum

    cfg, exp, index, fmt = task
    name = experiment_name(exp, index)
    seed = int(np.random.SeedSequence([cfg["seed"], index]).generate_state(1)[0])
    tol = cfg.get("tolerances", {}).get("algebra", 1e-12)
    slack = cfg.get("tolerances", {}).get("slack", 1e-9)
    radius = cfg.get("radius", 8)
    seq = build_family(cfg["family"], radius)
    kind = exp["kind"]
    files: dict[str, bytes] = {}
    plots = []
    ok = True
    summary: dict = {"kind": kind, "seed": seed}

    def single(default_n):
        if cfg["family"]["name"] == "custom":
            return custom_config(cfg["family"], radius)
        return seq.config(exp.get("n", default_n))

    if kind == "verify":
        tc = single(5)
        rep = lab.verify_config(tc, samples=exp.get("samples", 20), seed=seed, tol=tol,
                                inequality_samples=exp.get("samples", 20))
        files[f"{name}.json"] = _json_bytes(rep.to_json())
        ok = rep.passed
        summary["failures"] = rep.failures()
    elif kind == "spectrum":
        tc = single(8)
        ev = spectrum(assemble_dirac(tc))
        sym = float(np.abs(np.sort(ev) + np.sort(ev)[::-1]).max())
        ok = sym <= 1e-9 * max(1.0, float(np.abs(ev).max()))
        summary["symmetry_violation"] = sym
        files.update(_series(name, ["index", "eigenvalue"], list(enumerate(ev.tolist())), fmt))
        plots.append((name, "index", "eigenvalue", None, False))
    elif kind == "seminorm":
        ci = seq.limit()
        inner = ci.embedding.inner_shape
        a = _element(exp["element"], ci.d, inner) if "element" in exp else _default_element(ci.d, inner)
        radii = tuple(exp.get("limit_radii", (8, 16, 24)))
        tr = lab.seminorm_trace(a, seq, exp.get("n_grid"), radii=radii)
        files.update(_series(name, ["n", "L_n", "rel_gap"], tr.csv_rows(), fmt))
        files[f"{name}_limit.json"] = _json_bytes({"limit": tr.limit, "detail": tr.limit_detail,
                                                   "final_rel_gap": tr.final_rel_gap})
        summary["final_rel_gap"] = tr.final_rel_gap
    elif kind == "converge":
        F = exp.get("F", 2)
        sc = lab.convergence_scan(seq, F, exp.get("n_grid"))
        files.update(_series(name, ["n", "j", "gap"], sc["gamma"], fmt))
        sums = {}
        for n, _, g in sc["gamma"]:
            sums[n] = sums.get(n, 0.0) + g
        tri = all(dg <= sums[n] * (1 + slack) + 1e-12 and disc <= dg * (1 + slack) + 1e-12
                  for n, dg, disc in sc["dirac"])
        finite = all(math.isfinite(g) for _, _, g in sc["gamma"])
        ok = tri and finite
        files[f"{name}_dirac.json"] = _json_bytes({
            "columns": ["n", "dirac_gap", "graph_norm_discrepancy", "sum_gamma_gaps"],
            "rows": [[n, dg, disc, sums[n]] for n, dg, disc in sc["dirac"]],
            "triangle_ok": tri,
        })
        plots.append((name, "n", "gap", "j", True))
    elif kind == "dynamics":
        rows = []
        for n in exp.get("n_grid", seq.n_grid):
            for r in lab.dynamics_gap(seq, n, exp.get("F", 2), exp.get("t", (0.1, 0.5, 1.0)), exp.get("W", 3)):
                rows.append((r.n, r.t, r.gap, r.bound))
                ok = ok and r.gap <= r.bound + 1e-9
                summary.setdefault("truncation", []).append(r.truncation)
        files.update(_series(name, ["n", "t", "gap", "bound"], rows, fmt))
        plots.append((name, "t", "gap", "n", False))
    elif kind == "mk":
        tc = single(4)
        phi = _state(exp.get("phi", "axis:1"), tc)
        psi = _state(exp.get("psi", "trace"), tc)
        res = lab.mk_lower_bound(phi, psi, tc, budget=exp.get("budget", 100), seed=seed)
        ok = res.witness_L <= 1 + 1e-8
        files.update(_series(name, ["value", "support_size"], [(res.value, res.support_size)], fmt))
        files[f"{name}_witness.json"] = _json_bytes({"witness": res.witness.to_json(),
                                                     "L": res.witness_L, "evaluations": res.evaluations})
    summary["passed"] = bool(ok)
    return {"name": name, "files": files, "passed": bool(ok), "plots": plots, "summary": summary}


def _timed(task):
    t0 = time.perf_counter()
    out = run_experiment(task)
    out["seconds"] = time.perf_counter() - t0
    return out


# ---------------------------------------------------------------------------
# plots


def _read_series(path: str | Path) -> tuple[list[str], list[list[float]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise ValueError(f"{path}: empty series")
    header, body = rows[0], rows[1:]
    data = []
    for r in body:
        try:
            data.append([float(v) for v in r])
        except ValueError:
            continue
    if not data:
        raise ValueError(f"{path}: no numeric rows")
    return header, data


def emit_plot(series, out: str | Path | None = None, x: str | None = None, y: str | None = None,
              group: str | None = None, logy: bool = False, title: str = "") -> bytes:
    """Handwritten SVG line plot of a CSV series (path) or (header, rows) pair.

    The output depends only on the input numbers, so identical input gives
    identical bytes. Nonpositive values are dropped when ``logy`` is set.
    """
    header, rows = _read_series(series) if isinstance(series, (str, Path)) else series
    rows = [list(map(float, r)) for r in rows]
    if not rows:
        raise ValueError("empty series")
    xi = header.index(x) if x else 0
    yi = header.index(y) if y else 1
    gi = header.index(group) if group else None
    groups: dict[float, list[tuple[float, float]]] = {}
    for r in rows:
        if logy and r[yi] <= 0:
            continue
        groups.setdefault(r[gi] if gi is not None else 0.0, []).append((r[xi], r[yi]))
    pts = [p for g in groups.values() for p in g]
    if not pts:
        raise ValueError("empty series")
    W, H, pad = 480, 320, 48

    def ty(v):
        return math.log10(v) if logy else v

    xs = [p[0] for p in pts]
    ys = [ty(p[1]) for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1

    def sx(v):
        return pad + (v - x0) / (x1 - x0) * (W - 2 * pad)

    def sy(v):
        return H - pad - (ty(v) - y0) / (y1 - y0) * (H - 2 * pad)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]
    out_lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{pad}" y1="{H - pad}" x2="{W - pad}" y2="{H - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{H - pad}" stroke="black"/>',
        f'<text x="{W / 2:.1f}" y="{H - 12}" text-anchor="middle" font-size="12">{header[xi]}</text>',
        f'<text x="14" y="{H / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H / 2:.1f})">{("log10 " if logy else "") + header[yi]}</text>',
        f'<text x="{pad}" y="{H - pad + 16}" font-size="10">{x0:.4g}</text>',
        f'<text x="{W - pad}" y="{H - pad + 16}" text-anchor="end" font-size="10">{x1:.4g}</text>',
        f'<text x="{pad - 4}" y="{H - pad}" text-anchor="end" font-size="10">{y0:.4g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="10">{y1:.4g}</text>',
    ]
    if title:
        out_lines.append(f'<text x="{W / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>')
    for i, key in enumerate(sorted(groups)):
        col = colors[i % len(colors)]
        seg = sorted(groups[key])
        path = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in seg)
        if len(seg) > 1:
            out_lines.append(f'<polyline fill="none" stroke="{col}" stroke-width="1.5" points="{path}"/>')
        for a, b in seg:
            out_lines.append(f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="3" fill="{col}"/>')
        if gi is not None:
            out_lines.append(f'<text x="{W - pad + 4}" y="{pad + 14 * i}" font-size="10" fill="{col}">'
                             f'{header[gi]}={key:g}</text>')
    out_lines.append("</svg>")
    data = ("\n".join(out_lines) + "\n").encode()
    if out is not None:
        atomic_write(Path(out), data)
    return data


# ---------------------------------------------------------------------------
# driver


def atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _versions() -> dict:
    out = {"ncg_lab": __version__, "python": ".".join(map(str, sys.version_info[:3]))}
    for pkg in ("numpy", "scipy", "jsonschema"):
        out[pkg] = importlib.metadata.version(pkg)
    return out


def run(config_path: str | Path, seed: int | None = None, jobs: int | None = None,
        out_dir: str | Path | None = None, fmt: str = "csv", plot: bool = False) -> int:
    try:
        cfg = load_config(config_path, seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(out_dir or cfg.get("out_dir", "ncg-lab-out"))
    jobs = default_jobs() if jobs is None else jobs
    tasks = [(cfg, e, i, fmt) for i, e in enumerate(cfg["experiments"])]
    try:
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_timed, tasks))
        else:
            results = [_timed(t) for t in tasks]
    except ConfigError as exc:
        print(f"error: {config_path}: {exc}", file=sys.stderr)
        return 2
    artifacts = {}
    for res in results:
        for fname in sorted(res["files"]):
            atomic_write(out / fname, res["files"][fname])
            artifacts[fname] = hashlib.sha256(res["files"][fname]).hexdigest()
        if plot and fmt == "csv":
            for name, x, y, group, logy in res["plots"]:
                svg = emit_plot(out / f"{name}.csv", out / f"{name}.svg", x, y, group, logy, title=name)
                artifacts[f"{name}.svg"] = hashlib.sha256(svg).hexdigest()
    manifest = {
        "config_hash": config_hash(cfg),
        "seed": cfg["seed"],
        "versions": _versions(),
        "experiments": [{"name": r["name"], **r["summary"]} for r in results],
        "artifacts": artifacts,
        "passed": all(r["passed"] for r in results),
    }
    atomic_write(out / "manifest.json", _json_bytes(manifest))
    timings = "".join(f"{r['name']}\t{r['seconds']:.3f}\n" for r in results)
    atomic_write(out / "timings.txt", timings.encode())
    for r in results:
        print(f"{r['name']}: {'PASS' if r['passed'] else 'FAIL'}")
    return 0 if manifest["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncg-lab", description="Run spectral triple experiments from a JSON config.")
    p.add_argument("config", help="path to the experiment config (JSON)")
    p.add_argument("--seed", type=int, default=None, help="override the global seed")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $NCG_LAB_JOBS or 1)")
    p.add_argument("--out-dir", default=None, help="output directory (default: config out_dir)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="series output format")
    p.add_argument("--plot", action="store_true", help="write SVG plots for spectrum/converge/dynamics")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.config, seed=args.seed, jobs=args.jobs, out_dir=args.out_dir, fmt=args.format, plot=args.plot)
