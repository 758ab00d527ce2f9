"""framelab command line.

Every subcommand produces a small table.  Each numeric column is paired
with a tolerance or tail-bound column, floats are written with 17
significant digits, and nothing time- or host-dependent enters the output,
so identical arguments give byte-identical files.

Exit codes: 0 success, 2 declared expectation not met, 1 usage error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import re
import sys

import numpy as np

from . import __version__
from .disk import FiniteBlaschke
from .errors import FramelabError
from .exponents import TAGS, make_exponent_set

PRNG_NAME = "numpy PCG64"
EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, complex):
        return f"{format(x.real, '.17g')}{format(x.imag, '+.17g')}j"
    return str(x)


class Table:
    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []
        self.meta = {}

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width mismatch")
        self.rows.append([fmt(v) for v in values])

    def render(self, form: str) -> str:
        if form == "csv":
            buf = io.StringIO()
            for k in sorted(self.meta):
                buf.write(f"# {k}={self.meta[k]}\n")
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.columns)
            w.writerows(self.rows)
            return buf.getvalue()
        obj = {"meta": dict(sorted(self.meta.items())), "columns": self.columns, "rows": self.rows}
        return json.dumps(obj, indent=2) + "\n"


# config handling ---------------------------------------------------------

COMMON = {"out", "format", "seed", "expect", "kind"}


def load_config(path: str, kind: str, allowed: set) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: top level must be an object")
    if obj.get("kind", kind) != kind:
        raise UsageError(f"{path}: field 'kind': {obj['kind']!r} does not match subcommand {kind!r}")
    out = {}
    for key, value in obj.items():
        dest = key.replace("-", "_")
        if dest not in allowed:
            line = _line_of(text, key)
            raise UsageError(f"{path}:{line}: unknown field {key!r}")
        out[dest] = value
    return out


def _line_of(text: str, key: str) -> int:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else 1


def merge_config(args, parser_defaults: dict):
    """Fill options not given on the command line from the config, then from defaults."""
    allowed = set(parser_defaults) | COMMON
    cfg = load_config(args.config, args.kind, allowed) if args.config else {}
    for key, default in parser_defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, default))
    for key in ("out", "format", "seed", "expect"):
        if getattr(args, key) is None and key in cfg:
            setattr(args, key, cfg[key])
    if args.format is None:
        args.format = "csv"
    if args.format not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {args.format!r}")
    if args.expect not in (None, "pass", "fail"):
        raise UsageError(f"expect must be pass or fail, got {args.expect!r}")
    return args


def require_seed(args) -> np.random.Generator:
    if args.seed is None:
        raise UsageError("this run draws random data; --seed is mandatory")
    return np.random.Generator(np.random.PCG64(int(args.seed)))


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


# subcommands -------------------------------------------------------------

def run_carleson(args) -> tuple[Table, bool]:
    from .orbits import OrbitFrameSystem, carleson_system, check_carleson_frame

    if args.mu is not None:
        mu = np.array(_floats(args.mu))
        b = np.array(_floats(args.b)) if args.b is not None else np.sqrt(1 - mu**2)
        sys_ = OrbitFrameSystem.from_arrays(mu, b)
    else:
        sys_ = carleson_system(int(args.count), args.weights, float(args.base))
    rep = check_carleson_frame(sys_, float(args.delta_min), float(args.eps_boundary), float(args.band_max))
    t = Table(["quantity", "value", "tolerance", "passed"])
    t.add("inside_disc", rep.max_modulus, 1.0, rep.inside_disc)
    t.add("approaches_boundary", rep.max_modulus, 1.0 - float(args.eps_boundary), rep.approaches_boundary)
    t.add("carleson_constant", rep.carleson_constant, float(args.delta_min), rep.carleson)
    t.add("weight_band_ratio", rep.ratio_high / rep.ratio_low if rep.ratio_low > 0 else float("inf"), float(args.band_max), rep.weights_in_band)
    t.meta["boundary_condition"] = rep.boundary_label
    return t, rep.passed


def shift_orbit_frame_operator(degree: int) -> np.ndarray:
    """sum_n (S^n e_0)(S^n e_0)^* over the orbit of e_0 under the shift on the degree-D section."""
    shift = np.eye(degree + 1, k=-1)
    v = np.zeros(degree + 1)
    v[0] = 1.0
    S = np.zeros((degree + 1, degree + 1))
    for _ in range(degree + 1):
        S += np.outer(v, v)
        v = shift @ v
    return S.astype(complex)


def run_frame_bounds(args) -> tuple[Table, bool]:
    from .orbits import (
        OrbitFrameSystem, carleson_system, frame_bounds, matrix_to_csv, matrix_to_json, system_frame_bounds,
    )

    if args.system == "shift":
        rep = frame_bounds(shift_orbit_frame_operator(int(args.degree)), 0.0, "partial_sum")
    else:
        ex = make_exponent_set(args.exponents, None if args.n_max is None else int(args.n_max), int(args.stride))
        if args.system == "explicit":
            if args.mu is None:
                raise UsageError("--system explicit needs --mu")
            mu = np.array(_floats(args.mu))
            b = np.array(_floats(args.b)) if args.b is not None else np.sqrt(1 - mu**2)
            base = OrbitFrameSystem.from_arrays(mu, b)
        else:
            base = carleson_system(int(args.count), args.weights, float(args.base))
        sys_ = OrbitFrameSystem(base.operator, base.generator, ex)
        rep = system_frame_bounds(sys_)
        if args.matrix_out:
            from .orbits import frame_operator_closed, frame_operator_partial
            S = frame_operator_closed(sys_) if ex.has_closed_form else frame_operator_partial(sys_)[0]
            text = matrix_to_json(S) if args.matrix_out.endswith(".json") else matrix_to_csv(S)
            with open(args.matrix_out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    t = Table(["quantity", "value", "tail_bound", "method"])
    t.add("lower", rep.lower, rep.truncation_tail, rep.method)
    t.add("upper", rep.upper, rep.truncation_tail, rep.method)
    return t, rep.lower > rep.truncation_tail


def run_muntz_sweep(args) -> tuple[Table, bool]:
    from .muntz import AtomicMeasure, frame_test_monomials, pointwise_sum, s_of_x

    t = Table(["parameter", "value", "tail_bound"])
    values = []
    if args.quantity == "lemma":
        for x in _floats(args.x):
            r = s_of_x(x)
            t.add(x, x * r.value, x * r.tail_bound)
            values.append(x * r.value)
    elif args.quantity == "pointwise":
        ex = make_exponent_set(args.exponents, None if args.n_max is None else int(args.n_max), int(args.stride))
        for x in _floats(args.x):
            r = pointwise_sum(np.sqrt(1.0 - x), ex)
            t.add(x, r.value, r.tail_bound)
            values.append(r.value)
    else:  # frame: lower frame bound of the monomials against k geometric atoms
        n_max = 200 if args.n_max is None else int(args.n_max)
        ex = make_exponent_set(args.exponents, n_max, int(args.stride))
        for k in range(1, int(args.k_max) + 1):
            rep = frame_test_monomials(AtomicMeasure.geometric(1, k), ex)
            t.add(k, rep.lower, rep.truncation_tail)
            values.append(rep.lower)
    t.meta["exponents"] = args.exponents
    t.meta["quantity"] = args.quantity
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    return t, decreasing


_WEIGHT_RE = re.compile(r"^(one|kernel:(?P<kp>.+)|bn:(?P<bp>[^,]+),(?P<bc>.+))$")


def parse_complex(text: str) -> complex:
    return complex(str(text).replace(" ", "").replace("i", "j"))


def parse_weight(text: str):
    from .hardy import RationalWeight

    m = _WEIGHT_RE.match(str(text).strip())
    if not m:
        raise UsageError(f"bad --weight-kind {text!r}; use one, kernel:p or bn:p,c")
    if m.group(1) == "one":
        return RationalWeight.one()
    if m.group("kp") is not None:
        return RationalWeight.kernel(parse_complex(m.group("kp")))
    return RationalWeight.bourdon_narayan(parse_complex(m.group("bp")), parse_complex(m.group("bc")))


def run_wco(args) -> tuple[Table, bool]:
    from . import hardy

    try:
        phi = hardy.LinearFractionalMap.parse(args.phi)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad --phi {args.phi!r}: {exc}")
    u = parse_weight(args.weight_kind)
    D = int(args.degree)
    t = Table(["quantity", "value", "tolerance", "passed"])
    t.meta.update(check=args.check, phi=args.phi, weight_kind=args.weight_kind, degree=D)
    check = args.check
    if check == "cowen":
        f = hardy.cowen_adjoint_factors(phi, D)
        ok = f.defect < 1e-8
        t.add("cowen_defect", f.defect, 1e-8, ok)
        t.add("tail_bound", f.tail_bound, 0.0, True)
        t.add("sigma_maps_disc", float(f.sigma_maps_disc), 1.0, f.sigma_maps_disc)
        return t, ok
    if check == "orbit-frame":
        r = hardy.multiplication_orbit_frame(phi, u, D)
        lower = r.bounds.lower if r.bounds else 0.0
        upper = r.bounds.upper if r.bounds else float("inf")
        t.add("lower", lower, hardy.FRAME_GATE, r.frame_proxy)
        t.add("upper", upper, 0.0, not r.unbounded_orbit)
        t.add("invertible", float(r.invertible), 1.0, r.invertible)
        t.add("agrees", float(r.agrees), 1.0, r.agrees)
        return t, r.agrees
    op = hardy.wco_matrix(phi, u, D)
    if check == "invert":
        r = hardy.invertibility_check(op)
        t.add("automorphism", float(r.automorphism), 1.0, r.automorphism)
        t.add("weight_grid_min", r.grid_min, hardy.ZERO_TOL, r.weight_bounded_below)
        t.add("weight_grid_max", r.grid_max, float("inf"), r.weight_bounded)
        t.add("invertible", float(r.invertible), 1.0, r.invertible)
        return t, r.invertible
    if check == "unitary":
        r = hardy.unitarity_check(op)
        ok = r.is_bn_form and r.truncation_defect < 1e-6
        t.add("bn_fit_residual", r.fit_residual, hardy.FIT_TOL, r.is_bn_form)
        t.add("truncation_defect", r.truncation_defect, 1e-6, r.truncation_defect < 1e-6)
        t.add("section_columns", r.n_cols, 0, True)
        return t, ok
    r = hardy.isometry_rkh_check(op)
    t.add("isometry_violation", r.max_violation, hardy.FIT_TOL, r.max_violation < hardy.FIT_TOL)
    t.add("bn_fit_residual", r.bn_fit_residual, hardy.FIT_TOL, r.is_bn_form)
    t.add("forces_unitary", float(r.forces_unitary), 1.0, r.forces_unitary)
    return t, r.max_violation < hardy.FIT_TOL


_ZERO_RE = re.compile(r"\s*([^,:]+),([^,:]+):(\d+)\s*(?:,|$)")


def parse_zeros(text: str) -> tuple:
    """'re,im:mult,re,im:mult,...' -> ((a, m), ...)."""
    text = str(text).strip()
    out, pos = [], 0
    while pos < len(text):
        m = _ZERO_RE.match(text, pos)
        if not m:
            raise UsageError(f"bad --zeros near {text[pos:]!r}; use re,im:mult,...")
        out.append((complex(float(m.group(1)), float(m.group(2))), int(m.group(3))))
        pos = m.end()
    if not out:
        raise UsageError("--zeros is empty")
    return tuple(out)


def run_model(args) -> tuple[Table, bool]:
    from . import model as M

    theta = FiniteBlaschke(parse_zeros(args.zeros))
    mod = M.model_basis(theta, None if args.cutoff is None else int(args.cutoff))
    t = Table(["quantity", "value", "tolerance", "passed"])
    t.meta.update(check=args.check, zeros=args.zeros, cutoff=mod.cutoff)
    t.add("membership_defect", mod.membership_defect, 1e-8, mod.membership_defect < 1e-8)
    ok = mod.membership_defect < 1e-8
    if args.check == "spectrum":
        ev = M.spectrum(mod)
        for i, lam in enumerate(ev):
            t.add(f"eigenvalue_{i}", complex(lam), 1e-8, True)
        d = M.livsic_moeller_defect(mod)
        t.add("zero_matching_defect", d, 1e-8, d < 1e-8)
        ok = ok and d < 1e-8
    elif args.check == "jordan":
        js = M.jordan_structure(mod)
        for a, m in theta.zeros:
            sizes = js[a]
            good = sizes == [m]
            t.add(f"blocks_at_{fmt(complex(a))}", "+".join(map(str, sizes)), str(m), good)
            ok = ok and good
    else:
        rng = require_seed(args)
        f = rng.standard_normal(mod.dimension) + 1j * rng.standard_normal(mod.dimension)
        d = M.parseval_orbit_check(mod, f)
        t.add("parseval_orbit_defect", d, 1e-8, d < 1e-8)
        fd = M.orbit_frame_defect(mod, int(args.n_max))
        t.add("frame_operator_defect", fd, 1e-6, fd < 1e-6)
        ok = ok and d < 1e-8 and fd < 1e-6
    if mod.flagged:
        t.meta["warning"] = "multiplicity or degree beyond the certified regime"
    return t, ok


def run_interp(args) -> tuple[Table, bool]:
    from .interpolation import InterpolationProblem, interpolation_residual, mcphail_check, multi_weight_interpolant

    if args.problem is None:
        raise UsageError("interp needs --problem file.json")
    try:
        with open(args.problem, encoding="utf-8") as fh:
            text = fh.read()
        problem, degree = InterpolationProblem.from_json(text)
    except OSError as exc:
        raise UsageError(f"{args.problem}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.problem}:{exc.lineno}:{exc.colno}: {exc.msg}")
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.problem}: {exc}")
    if args.degree is not None:
        degree = int(args.degree)
    coeffs = multi_weight_interpolant(problem, degree)
    res = interpolation_residual(problem, coeffs)
    t = Table(["quantity", "value", "tolerance", "passed"])
    t.add("residual", res, 1e-8, res < 1e-8)
    t.add("solution_norm", float(np.linalg.norm(coeffs)), 0.0, True)
    if problem.n_functions == 1:
        mc = mcphail_check(problem.nodes, np.abs(problem.weight_vectors[:, 0]), float(args.delta_min))
        t.add("carleson_constant", mc.carleson_constant, float(args.delta_min), mc.carleson_pass)
        t.add("weight_band_ratio", mc.ratio_high / mc.ratio_low, 4.0, mc.band_pass)
    t.meta["degree"] = degree
    return t, res < 1e-8


# parser ------------------------------------------------------------------

SUBCOMMANDS = {
    "carleson": (run_carleson, dict(count=20, base=2.0, weights="parseval", mu=None, b=None,
                                    delta_min=1e-3, eps_boundary=0.05, band_max=4.0)),
    "frame-bounds": (run_frame_bounds, dict(system="carleson", count=8, base=2.0, weights="parseval", mu=None,
                                            b=None, exponents="naturals", n_max=None, stride=1, degree=63,
                                            matrix_out=None)),
    "muntz-sweep": (run_muntz_sweep, dict(quantity="pointwise", exponents="ceil_n_log_n", n_max=None, stride=1,
                                          x="0.1,0.01,0.001", k_max=16)),
    "wco": (run_wco, dict(phi=None, weight_kind="one", degree=64, check="invert")),
    "model": (run_model, dict(zeros=None, cutoff=None, check="spectrum", n_max=200)),
    "interp": (run_interp, dict(problem=None, degree=None, delta_min=1e-3)),
}

CHOICES = {
    "weights": ("parseval", "squared"),
    "system": ("carleson", "shift", "explicit"),
    "exponents": TAGS,
    "quantity": ("pointwise", "lemma", "frame"),
}
CHECKS = {"wco": ("invert", "unitary", "cowen", "isometry", "orbit-frame"), "model": ("parseval", "jordan", "spectrum")}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="framelab", description="Orbit frames, Hardy-space operators and model spaces.")
    p.add_argument("--version", action="version", version=f"framelab {__version__}")
    sub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind, (_, defaults) in SUBCOMMANDS.items():
        sp = sub.add_parser(kind)
        sp.add_argument("--config", help="JSON file supplying any of the options below")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--seed", type=int, help="seed for randomized test data")
        sp.add_argument("--expect", choices=("pass", "fail"), help="exit 2 unless the verdict matches")
        for key in defaults:
            flag = "--" + key.replace("_", "-")
            choices = CHECKS.get(kind) if key == "check" else CHOICES.get(key)
            sp.add_argument(flag, dest=key, default=None, choices=choices)
    return p


def _apply_thread_cap():
    n = os.environ.get("FRAMELAB_THREADS")
    if not n:
        return contextlib.nullcontext()
    try:
        limit = int(n)
    except ValueError:
        raise UsageError(f"FRAMELAB_THREADS must be an integer, got {n!r}")
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # optional; single-process numpy still honours OMP vars
        return contextlib.nullcontext()
    return threadpool_limits(limits=limit)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        run, defaults = SUBCOMMANDS[args.kind]
        merge_config(args, defaults)
        for key, allowed in list(CHOICES.items()) + [("check", CHECKS.get(args.kind))]:
            if allowed and key in defaults and getattr(args, key) not in allowed:
                raise UsageError(f"{key} must be one of {', '.join(allowed)}")
        if args.kind == "wco" and args.phi is None:
            raise UsageError("wco needs --phi a,b,c,d")
        if args.kind == "model" and args.zeros is None:
            raise UsageError("model needs --zeros re,im:mult,...")
        with _apply_thread_cap():
            table, verdict = run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FramelabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    table.meta.update(kind=args.kind, prng=PRNG_NAME, seed="none" if args.seed is None else args.seed,
                      verdict="pass" if verdict else "fail", version=__version__)
    text = table.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.expect is not None and (args.expect == "pass") != verdict:
        print(f"expectation {args.expect!r} not met (verdict {'pass' if verdict else 'fail'})", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
