"""``hbspace`` command line.

Every command reads a JSON manifest (validated against
``schemas/manifest.schema.json`` before any computation), writes its
outputs atomically into the output directory and always leaves a
``summary.json`` there. Exit status: 0 when every check passes, 1 when a
check fails (the failing report is named on stderr), 2 on invalid input.

``reconstruct`` and ``extremal`` also accept their inputs as direct flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from . import __version__
from .errors import HBSpaceError, ManifestError
from .extremal import ExtremalProblem, Profile, parse_grid, verify_candidate
from .identities import (HilbertFormInput, check_partial_fraction, hilbert_form,
                         homogeneous_measure_identity, parseval_node_sum)
from .interp import (interpolate, interpolate_bessel_A,
                     interpolate_bessel_B)
from .nodes import NodeSet, find_nodes
from .sampling import frame_ratio, reconstruct
from .space import SpaceDescriptor
from .testgen import make_function, random_recipe, sample_on

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
REMOVABLE_STEP = 1e-6


# ---------------------------------------------------------------------------
# input handling


def _schema():
    text = resources.files("hbspace").joinpath("schemas/manifest.schema.json").read_text()
    return json.loads(text)


def validate_manifest(manifest: dict) -> None:
    """Raise :class:`ManifestError` naming the first offending field."""
    import jsonschema

    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(manifest), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ManifestError(err.message, path)


def _load_json(path: str, field: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ManifestError(f"file not found: {path}", field)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"malformed JSON in {path}: {exc}", field)


def _complex(v) -> complex:
    return complex(*v) if isinstance(v, (list, tuple)) else complex(v)


def _sympy_callable(expr: str, var: str, field: str, derivative: str | None = None):
    import sympy as sp

    sym = sp.Symbol(var)
    try:
        e = sp.sympify(expr, locals={var: sym})
        d = sp.sympify(derivative, locals={var: sym}) if derivative else sp.diff(e, sym)
    except (sp.SympifyError, TypeError, SyntaxError) as exc:
        raise ManifestError(f"cannot parse expression: {exc}", field)
    free = (e.free_symbols | d.free_symbols) - {sym}
    if free:
        raise ManifestError(f"unknown symbols {sorted(map(str, free))}", field)
    f = sp.lambdify(sym, e, "numpy")
    df = sp.lambdify(sym, d, "numpy")
    return f, df


def _finite_eval(fn, z, dtype):
    """``fn(z)`` with removable singularities filled by a symmetric average
    (error ``O(h^2)``)."""
    with np.errstate(all="ignore"):
        out = np.array(np.broadcast_to(np.asarray(fn(z), dtype=dtype), z.shape))
        bad = ~np.isfinite(out)
        if bad.any():
            zb = z[bad]
            out[bad] = 0.5 * (np.asarray(fn(zb + REMOVABLE_STEP), dtype=dtype)
                              + np.asarray(fn(zb - REMOVABLE_STEP), dtype=dtype))
    return out


class ExprFunction:
    """Function given by a sympy expression in ``z``; derivative symbolic."""

    def __init__(self, expr: str, field: str = "function"):
        self.expr = expr
        self._f, self._df = _sympy_callable(expr, "z", field)

    def value_and_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        v = _finite_eval(self._f, np.atleast_1d(z), complex)
        d = _finite_eval(self._df, np.atleast_1d(z), complex)
        if z.ndim == 0:
            return complex(v[0]), complex(d[0])
        return v, d

    def __call__(self, z):
        return self.value_and_derivative(z)[0]


def build_function(spec: dict, space: SpaceDescriptor, seed: int, field: str):
    try:
        if "recipe" in spec:
            return make_function(space, spec["recipe"], seed)
        if "random" in spec:
            r = spec["random"]
            kw = {}
            if "families" in r:
                kw["families"] = tuple(r["families"])
            if "span" in r:
                kw["span"] = tuple(r["span"])
            return random_recipe(space, r["n_terms"], r.get("seed", seed), **kw)
        return ExprFunction(spec["expr"], field)
    except HBSpaceError as exc:
        raise ManifestError(f"{exc}", field)


def _space(d: dict, field="space") -> SpaceDescriptor:
    try:
        return SpaceDescriptor.from_json(d)
    except (KeyError, ValueError) as exc:
        raise ManifestError(f"{exc}", field)


# ---------------------------------------------------------------------------
# output handling


def _fmt(x: float) -> str:
    return "%.17g" % x


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


def write_outputs(out_dir: str, files: dict) -> None:
    """Write every file to a temporary name first, then rename into place."""
    os.makedirs(out_dir, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, os.path.join(out_dir, name)))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, dst in staged:
        os.replace(tmp, dst)


# ---------------------------------------------------------------------------
# commands; each returns (files, failures, summary extras)


def _map(fn, items, threads):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_nodes(space, params, seed, threads):
    ns = find_nodes(space, params["t_min"], params["t_max"])
    rows = [[n.t, n.b1, n.b2, n.a, n.phase_slope, n.k2_diag] for n in ns]
    files = {"nodes.json": _json(ns.to_json()),
             "nodes.csv": _csv(["t", "b1", "b2", "a", "phase_slope", "k2_diag"], rows)}
    return files, [], {"node_count": len(ns)}


def _points(params):
    pts = [_complex(p) for p in params.get("points", [])]
    if "re_grid" in params:
        a, b, n = parse_grid(params["re_grid"])
        im = parse_grid(params["im_grid"]) if "im_grid" in params else (0.0, 0.0, 1)
        for y in np.linspace(*im[:2], im[2]):
            for x in np.linspace(a, b, n):
                pts.append(complex(x, y))
    if not pts:
        raise ManifestError("give 'points' or 're_grid'", "parameters/points")
    return np.array(pts)


def cmd_interp(space, params, seed, threads):
    fn = build_function(params["function"], space, seed, "parameters/function")
    form = params.get("form", "general")
    N = float(params["window"])
    z = _points(params)
    if form == "general":
        ns = find_nodes(space, -N, N)
        res = interpolate(space, sample_on(fn, ns), z)
    else:
        if not space.is_bessel:
            raise ManifestError("Bessel forms need a Bessel space",
                                "parameters/form")
        alpha = math.pi / 2 if form == "bessel_A" else 0.0
        ns = find_nodes(SpaceDescriptor.bessel(space.nu, alpha), -N, N)
        f = interpolate_bessel_A if form == "bessel_A" else interpolate_bessel_B
        res = f(space.nu, sample_on(fn, ns), z)
    exact = fn.value_and_derivative(z)[0]
    err = np.abs(res.value - exact)
    rows = [[float(p.real), float(p.imag), float(v.real), float(v.imag), float(t)]
            for p, v, t in zip(z, res.value, res.tail_estimate)]
    files = {"interp.csv": _csv(["re_z", "im_z", "re_value", "im_value", "tail_estimate"], rows)}
    extra = {"terms_used": res.terms_used, "max_abs_error": float(err.max()),
             "function": fn.to_json() if hasattr(fn, "to_json") else {"expr": fn.expr}}
    return files, [], extra


def _run_check(item):
    idx, chk, space, seed = item
    kind = chk["kind"]
    field = f"parameters/checks/{idx}"
    name = chk.get("name", f"{kind}[{idx}]")
    tol = chk.get("tolerance")
    win = float(chk.get("window", 300.0))
    if kind == "partial_fraction":
        args = [_complex(a) for a in chk["args"]]
        args = [a.real if a.imag == 0 else a for a in args]
        rep = check_partial_fraction(space, chk["which"], args, win, tol)
    elif kind == "parseval":
        fn = build_function(chk["function"], space, seed + idx, field + "/function")
        rep = parseval_node_sum(space, fn, chk.get("angle"), win, chk.get("norm", "E"),
                                1e-4 if tol is None else tol)
    elif kind == "measure":
        nu = chk.get("nu", space.nu)
        if nu is None:
            raise ManifestError("required for a Paley-Wiener space", field + "/nu")
        fn = build_function(chk["function"], SpaceDescriptor.bessel(nu), seed + idx,
                            field + "/function")
        rep = homogeneous_measure_identity(nu, fn, win, 1e-5 if tol is None else tol)
    else:
        r = hilbert_form(HilbertFormInput(tuple(chk["xi"]),
                                          tuple(_complex(a) for a in chk["a"]),
                                          chk["sigma"]))
        return {"name": name, "kind": kind, "passed": r.within, "form": r.form,
                "lower": r.lower, "upper": r.upper}
    d = rep.to_json()
    d["name"] = name
    d["kind"] = kind
    return d


def cmd_identities(space, params, seed, threads):
    items = [(i, c, space, seed) for i, c in enumerate(params["checks"])]
    reports = _map(_run_check, items, threads)
    failures = [r["name"] for r in reports if not r["passed"]]
    return {"reports.json": _json(reports)}, failures, {"checks": len(reports)}


def cmd_frame(space, params, seed, threads):
    fns = [build_function(f, space, seed + i, f"parameters/functions/{i}")
           for i, f in enumerate(params.get("functions", []))]
    r = params.get("random")
    if r:
        kw = {}
        if "families" in r:
            kw["families"] = tuple(r["families"])
        if "span" in r:
            kw["span"] = tuple(r["span"])
        fns += [random_recipe(space, r["n_terms"], seed + 1000 + i, **kw)
                for i in range(r["count"])]
    win = float(params["window"])
    reps = _map(lambda f: frame_ratio(space, f, win), fns, threads)
    ratios = np.array([x.ratio for x in reps])
    spread = float(ratios.max() / ratios.min())
    ok = bool(ratios.min() > 1e-6 and ratios.max() < 1e6
              and spread <= params.get("max_spread", 10.0))
    out = {"reports": [x.to_json() for x in reps], "r_min": float(ratios.min()),
           "r_max": float(ratios.max()), "spread": spread}
    return {"frame.json": _json(out)}, ([] if ok else ["frame_spread"]), {
        "r_min": out["r_min"], "r_max": out["r_max"]}


def _reconstruct_inputs(space, nodes, data):
    if isinstance(nodes, str):
        ns = NodeSet.from_json(_load_json(nodes, "nodes"))
    else:
        ns = find_nodes(space, nodes["t_min"], nodes["t_max"])
    if ns.space != space:
        raise ManifestError("node set belongs to a different space", "nodes")
    if isinstance(data, str):
        data = _load_json(data, "data")
    try:
        p = [_complex(v) for v in data["p"]]
        q = [_complex(v) for v in data["q"]]
    except (KeyError, TypeError) as exc:
        raise ManifestError(f"expected arrays 'p' and 'q' ({exc})", "data")
    return ns, p, q


def cmd_reconstruct(space, params, seed, threads):
    ns, p, q = _reconstruct_inputs(space, params["nodes"], params["data"])
    try:
        F = reconstruct(space, ns, p, q)
    except HBSpaceError as exc:
        raise ManifestError(f"{exc}", "data")
    a, b, n = parse_grid(params["grid"])
    x = np.linspace(a, b, n)
    v = F(x)
    rows = [[float(xi), float(vi.real), float(vi.imag)] for xi, vi in zip(x, v)]
    node_err = float(np.max(np.abs(F(ns.t) - np.array(p)))) if len(ns) else 0.0
    return ({"reconstruct.csv": _csv(["x", "re_F", "im_F"], rows)}, [],
            {"node_count": len(ns), "max_node_residual": node_err})


def _profile(spec, field):
    if isinstance(spec, str):
        spec = _load_json(spec, field)
    if "expr" not in spec:
        raise ManifestError("expected an 'expr' entry", field)
    f, df = _sympy_callable(spec["expr"], "r", field, spec.get("derivative"))

    def vec(fn):
        def call(r):
            r = np.asarray(r, dtype=float)
            out = _finite_eval(fn, np.atleast_1d(r), float)
            return out if r.ndim else float(out[0])
        return call
    return Profile(vec(f), vec(df))


def cmd_extremal(space, params, seed, threads):
    prob = params["problem"]
    if isinstance(prob, str):
        prob = _load_json(prob, "problem")
    for key in ("side", "g"):
        if key not in prob:
            raise ManifestError("required", f"problem/{key}")
    if "space" in prob:
        space = _space(prob["space"], "problem/space")
    gp = _profile({"expr": prob["g"], "derivative": prob.get("g_prime")}, "problem/g")
    problem = ExtremalProblem(int(prob.get("dimension", 1)), gp.f, gp.df, prob["side"],
                              space, float(prob.get("punctured_radius", 1e-3)))
    cand = _profile(params["candidate"], "candidate")
    tol = float(params.get("tolerance", 1e-7))
    rep = verify_candidate(problem, cand, params.get("grid", "0:50:20000"),
                           float(params.get("window", 200.0)), tol, tol)
    failures = [] if rep.passed else ["extremal_verification"]
    return {"report.json": _json(rep.to_json())}, failures, {"passed": rep.passed}


COMMANDS = {"nodes": cmd_nodes, "interp": cmd_interp, "identities": cmd_identities,
            "frame": cmd_frame, "reconstruct": cmd_reconstruct, "extremal": cmd_extremal}


# ---------------------------------------------------------------------------
# entry point


def _threads(arg):
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("HBSPACE_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _build_parser():
    p = argparse.ArgumentParser(prog="hbspace", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"hbspace {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--manifest", help="run manifest (JSON)")
        s.add_argument("--out", help="output directory (overrides output_path)")
        s.add_argument("--seed", type=int, help="seed for generated functions")
        s.add_argument("--threads", type=int, help="worker threads (default HBSPACE_THREADS or 1)")
        if name == "reconstruct":
            s.add_argument("--space", help="space descriptor: JSON text or file")
            s.add_argument("--nodes", help="NodeSet JSON file")
            s.add_argument("--data", help="JSON file with arrays p and q")
            s.add_argument("--grid", help="a:b:n evaluation grid")
        if name == "extremal":
            s.add_argument("--space", help="space descriptor: JSON text or file")
            s.add_argument("--problem", help="problem JSON file")
            s.add_argument("--candidate", help="candidate JSON file")
            s.add_argument("--window", type=float)
            s.add_argument("--grid")
    return p


def _space_arg(text):
    if text is None:
        return None
    if os.path.exists(text):
        return _load_json(text, "space")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"malformed JSON: {exc}", "space")


def _manifest_from_args(args) -> dict:
    if args.manifest:
        m = _load_json(args.manifest, "manifest")
        if not isinstance(m, dict):
            raise ManifestError("manifest must be a JSON object")
        m.setdefault("command", args.command)
        if m["command"] != args.command:
            raise ManifestError(f"manifest is for {m['command']!r}", "command")
    else:
        m = {"command": args.command, "parameters": {}}
    params = m.setdefault("parameters", {})
    if args.command in ("reconstruct", "extremal"):
        sp = _space_arg(args.space)
        if sp is not None:
            m["space"] = sp
        keys = (("nodes", "data", "grid") if args.command == "reconstruct"
                else ("problem", "candidate", "window", "grid"))
        for k in keys:
            v = getattr(args, k)
            if v is not None:
                params[k] = v
        if args.command == "extremal" and "space" not in m:
            prob = params.get("problem")
            if isinstance(prob, str):
                prob = _load_json(prob, "problem")
            if isinstance(prob, dict) and "space" in prob:
                m["space"] = prob["space"]
    if "space" not in m:
        raise ManifestError("required (manifest entry or --space)", "space")
    return m


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    out_dir = args.out or "."
    summary = {"command": args.command, "version": __version__}
    try:
        m = _manifest_from_args(args)
        out_dir = args.out or m.get("output_path", ".")
        validate_manifest(m)
        seed = args.seed if args.seed is not None else int(m.get("seed", 0))
        summary["seed"] = seed
        space = _space(m["space"])
        files, failures, extra = COMMANDS[args.command](
            space, m.get("parameters", {}), seed, _threads(args.threads))
    except ManifestError as exc:
        print(f"hbspace: invalid input: {exc}", file=sys.stderr)
        summary.update(status="invalid", field=exc.field, error=str(exc))
        _write_summary(out_dir, summary)
        return EXIT_INVALID
    except HBSpaceError as exc:
        print(f"hbspace: {type(exc).__name__}: {exc}", file=sys.stderr)
        summary.update(status="error", error=f"{type(exc).__name__}: {exc}")
        _write_summary(out_dir, summary)
        return EXIT_FAIL
    summary.update(extra)
    summary["outputs"] = sorted(files)
    summary["failures"] = failures
    summary["status"] = "failed" if failures else "ok"
    files["summary.json"] = _json(summary)
    write_outputs(out_dir, files)
    if failures:
        print("hbspace: failed: " + ", ".join(failures), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _write_summary(out_dir, summary):
    try:
        write_outputs(out_dir, {"summary.json": _json(summary)})
    except OSError as exc:
        print(f"hbspace: cannot write summary: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
