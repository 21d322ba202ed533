"""Command-line front end.

Four modes: `invariant` evaluates a colored diagram to a scalar,
`color-check` runs the coloring solver and reports boundary data,
`verify` runs the property suite with pass/fail counts, and `yb-fuzz`
fuzzes the set-theoretic Yang-Baxter equation in exact arithmetic.

Reports are JSON on stdout, deterministic for a fixed (config, seed);
diagnostics go to stderr.  Exit codes: 0 ok, 1 hard error (with an
error JSON), 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import braiding, coloring, diagram, evaluator, factgroup, uqalgebra
from .factgroup import Mat2
from .rational import QC, parse_scalar


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Config parsing


def _parse_scalar(text, backend):
    text = text.strip()
    if backend == "rational":
        return parse_scalar(text)
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        return complex(parse_scalar(text))


def parse_char(text, backend="float"):
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError("char needs four comma-separated values")
    return tuple(_parse_scalar(p, backend) for p in parts)


def parse_branch(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError("branch needs two comma-separated integers")
    return tuple(int(p) for p in parts)


def _mat_from_json(rows, backend):
    (a, b), (c, d) = rows
    out = []
    for v in (a, b, c, d):
        if backend == "rational":
            if isinstance(v, str):
                out.append(parse_scalar(v))
            elif isinstance(v, (list, tuple)):
                out.append(QC(Fraction(v[0]), Fraction(v[1])))
            else:
                out.append(QC(Fraction(v)))
        elif isinstance(v, str):
            out.append(complex(parse_scalar(v)))
        elif isinstance(v, (list, tuple)):
            out.append(complex(v[0], v[1]))
        else:
            out.append(complex(v))
    return Mat2(*out)


def load_diagram(path):
    if path.endswith(".tgl"):
        with open(path) as fh:
            return diagram.parse(fh.read()), None
    if path.endswith(".braid"):
        with open(path) as fh:
            obj = json.load(fh)
        d = diagram.braid_word(obj["word"], obj["strands"])
        closure = obj.get("closure", "none")
        if closure == "trace":
            d = diagram.close_braid(d)
        elif closure == "partial":
            d = diagram.close_braid_partial(d)
        elif closure != "none":
            raise ConfigError("closure must be none, trace or partial")
        return d, obj.get("coloring")
    if path.endswith(".coloring"):
        with open(path) as fh:
            obj = json.load(fh)
        if "tgl" in obj:
            d = diagram.parse(obj["tgl"])
        else:
            d = diagram.TangleDiagram.from_json(obj["diagram"])
        return d, obj
    raise ConfigError("input must be a .tgl, .braid or .coloring file")


def build_boundary(d, cdata, char_coords, backend):
    """Bottom boundary + cup seeds from the coloring data or --char."""
    if cdata and "bottom" in cdata:
        entries = tuple((e[0], _mat_from_json(e[1], backend))
                        for e in cdata["bottom"])
    elif char_coords is not None:
        g = braiding.char_to_group(
            uqalgebra.CentralCharacter(*[complex(v) for v in char_coords]))
        entries = tuple((s, g) for s in d.bottom_signs)
    else:
        entries = ()
    seeds = {}
    if cdata and "cups" in cdata:
        seeds = {int(k): _mat_from_json(v, backend)
                 for k, v in cdata["cups"].items()}
    return coloring.ColoredBoundary(entries), seeds


# ---------------------------------------------------------------------------
# Samplers


def _rational_mat(rng, span=5, maxden=4):
    def q():
        den = rng.randint(1, maxden)
        return QC(Fraction(rng.randint(-span * den, span * den), den))
    while True:
        m = Mat2(q(), q(), q(), q())
        try:
            factgroup.factorize(m)
            return m
        except factgroup.NotFactorizable:
            continue


def _generic_char(rng, rd):
    while True:
        coords = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                  for _ in range(4)]
        ch = uqalgebra.CentralCharacter(*coords)
        if uqalgebra.is_generic(ch, rd):
            return ch


# ---------------------------------------------------------------------------
# Modes


def run_invariant(args):
    d, cdata = load_diagram(args.input)
    char = parse_char(args.char, "float") if args.char else None
    bnd, seeds = build_boundary(d, cdata, char, "float")
    rd = uqalgebra.RootData(args.ell)
    ctx = evaluator.EvalContext(rd, mu_choice=args.mu, framing=args.framing,
                                tol=args.tolerance)
    col = coloring.propagate(d, bnd, cup_seeds=seeds or None,
                             tol=args.tolerance)
    branches = [parse_branch(args.branch)] * d.bottom_arity
    value, log = evaluator.invariant(d, col, ctx, bottom_branches=branches)
    if isinstance(value, evaluator.LinearBlock):
        raise ConfigError(
            "diagram boundary is not closed or (1,1); no scalar invariant")
    residuals = {k: v for k, v in log if k == "schur_off_scalar"}
    return 0, {
        "mode": "invariant",
        "ell": args.ell,
        "character": list(map(_cnum, char)) if char else None,
        "branch_policy": list(parse_branch(args.branch)),
        "normalization": braiding.NORMALIZATION_VERSION,
        "mu": args.mu,
        "framing": args.framing,
        "writhe": d.writhe(),
        "invariant": _cnum(value),
        "magnitude": abs(value),
        "phase_log": [list(map(_jsonable, entry)) for entry in log],
        "residuals": residuals,
    }


def run_color_check(args):
    backend = args.backend
    d, cdata = load_diagram(args.input)
    char = parse_char(args.char, backend) if args.char else None
    bnd, seeds = build_boundary(d, cdata, char, backend)
    report = {"mode": "color-check", "backend": backend,
              "normalization": braiding.NORMALIZATION_VERSION}
    try:
        if d.bottom_arity == 0 and d.top_arity == 0:
            col = coloring.solve_closed(d, seeds, tol=args.tolerance)
        else:
            col = coloring.propagate(d, bnd, cup_seeds=seeds or None,
                                     tol=args.tolerance)
    except (coloring.Inconsistent, coloring.CapMismatch,
            factgroup.NotFactorizable) as exc:
        report["consistent"] = False
        report["error"] = str(exc)
        return 2, report
    report["consistent"] = True
    for side in ("bottom", "top"):
        b = col.boundary(side)
        report[side] = {
            "signs": list(b.signs()),
            "colors": [x.to_json() for x in b.colors()],
            "holonomies": [coloring.holonomy_of_boundary(b, i + 1).to_json()
                           for i in range(len(b))] if len(b) else [],
        }
    return 0, report


def _yb_triple_check(mats):
    """Exact R12 R13 R23 = R23 R13 R12 on one triple."""
    def r12(t):
        u, v = factgroup.yb_map(t[0], t[1])
        return (u, v, t[2])

    def r13(t):
        u, v = factgroup.yb_map(t[0], t[2])
        return (u, t[1], v)

    def r23(t):
        u, v = factgroup.yb_map(t[1], t[2])
        return (t[0], u, v)

    t = tuple(mats)
    try:
        lhs = r12(r13(r23(t)))
        rhs = r23(r13(r12(t)))
    except factgroup.NotFactorizable:
        return None
    return all(p == q for m, n in zip(lhs, rhs)
               for p, q in zip(m.entries(), n.entries()))


def run_yb_fuzz(args):
    rng = random.Random(args.seed)
    triples = [tuple(_rational_mat(rng) for _ in range(3))
               for _ in range(args.samples)]
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(_yb_triple_check, triples))
    skipped = sum(r is None for r in results)
    failed = sum(r is False for r in results)
    report = {"mode": "yb-fuzz", "backend": "rational",
              "samples": args.samples, "seed": args.seed,
              "skipped_not_factorizable": skipped,
              "failures": failed,
              "normalization": braiding.NORMALIZATION_VERSION}
    return (2 if failed else 0), report


def _verify_factorization(rng, samples):
    bad = 0
    for _ in range(samples):
        g, h, k = (_rational_mat(rng) for _ in range(3))
        f = factgroup.factorize(g)
        if f.assemble() != g:
            bad += 1
            continue
        try:
            lhs = factgroup.star_mul(factgroup.star_mul(g, h), k)
            rhs = factgroup.star_mul(g, factgroup.star_mul(h, k))
            if lhs != rhs:
                bad += 1
                continue
            if factgroup.star_mul(g, factgroup.star_inv(g)) != \
                    factgroup.star_mul(factgroup.star_inv(g), g):
                bad += 1
        except factgroup.NotFactorizable:
            continue
    return bad


def _verify_relations(rng, samples, rd):
    bad = 0
    for _ in range(samples):
        ch = _generic_char(rng, rd)
        rep = uqalgebra.build_irrep(ch, (0, 0), rd)
        res = uqalgebra.relation_residuals(rep)
        if max(res.values()) > 1e-9:
            bad += 1
    return bad


def _verify_pullback(rng, samples, rd):
    bad = 0
    for _ in range(samples):
        x = _float_group(rng)
        y = _float_group(rng)
        try:
            dev = braiding.z0_pullback_check(x, y, rd)["max_deviation"]
        except (factgroup.NotFactorizable, uqalgebra.NonGenericCharacter):
            continue
        if dev > 1e-7:
            bad += 1
    return bad


def _float_group(rng):
    return Mat2(*(complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                  for _ in range(4)))


def _verify_moves(rng, samples):
    bad = 0
    for _ in range(samples):
        word = [rng.choice([1, -1]) for _ in range(rng.randint(1, 4))]
        d = diagram.braid_word(word, 2)
        bnd = coloring.ColoredBoundary(
            tuple((1, _rational_mat(rng)) for _ in range(2)))
        try:
            base = coloring.propagate(d, bnd).boundary("top")
        except factgroup.NotFactorizable:
            continue
        for move in ("R2", "FramedR1", "SlideCupCap"):
            for site in list(diagram.find_move_sites(d, move))[:1]:
                d2 = diagram.apply_move(d, move, site)
                try:
                    top = coloring.propagate(d2, bnd).boundary("top")
                except (factgroup.NotFactorizable, coloring.CapMismatch,
                        coloring.UnderdeterminedColoring):
                    bad += 1
                    continue
                if not top.equal(base, tol=1e-9):
                    bad += 1
    return bad


def run_verify(args):
    rng = random.Random(args.seed)
    rd = uqalgebra.RootData(args.ell)
    light = max(1, min(args.samples, 10))
    sections = {}
    sections["factorization_star_axioms"] = {
        "samples": args.samples,
        "failures": _verify_factorization(rng, args.samples)}
    yb_rng = random.Random(args.seed + 1)
    yb = [_yb_triple_check(tuple(_rational_mat(yb_rng) for _ in range(3)))
          for _ in range(args.samples)]
    sections["yang_baxter_exact"] = {
        "samples": args.samples,
        "failures": sum(r is False for r in yb)}
    np_rng = random.Random(args.seed + 2)
    sections["cyclic_rep_relations"] = {
        "samples": light, "failures": _verify_relations(np_rng, light, rd)}
    sections["z0_pullback"] = {
        "samples": light, "failures": _verify_pullback(np_rng, light, rd)}
    sections["coloring_moves"] = {
        "samples": light, "failures": _verify_moves(np_rng, light)}
    failures = sum(s["failures"] for s in sections.values())
    report = {"mode": "verify", "ell": args.ell, "seed": args.seed,
              "normalization": braiding.NORMALIZATION_VERSION,
              "sections": sections, "failures": failures,
              "ok": failures == 0}
    return (2 if failures else 0), report


# ---------------------------------------------------------------------------
# Entry point


def _cnum(z):
    z = complex(z)
    return [z.real, z.imag]


def _jsonable(v):
    if isinstance(v, complex):
        return _cnum(v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def build_parser():
    p = argparse.ArgumentParser(
        prog="tanglev",
        description="invariants of framed tangles with flat GL2 connections")
    p.add_argument("mode", choices=["invariant", "color-check", "verify",
                                    "yb-fuzz"])
    p.add_argument("input", nargs="?",
                   help=".tgl, .braid or .coloring file")
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--char", help="a,b,c,d character quadruple")
    p.add_argument("--branch", default="0,0")
    p.add_argument("--backend", choices=["rational", "float"],
                   default="float")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--mu", choices=["K", "L"], default="K")
    p.add_argument("--framing", choices=["balanced", "raw"],
                   default="balanced")
    p.add_argument("--workers", type=int, default=4)
    return p


def run(args):
    if args.ell % 2 == 0:
        raise ConfigError("ell must be odd")
    if args.ell < 3:
        raise ConfigError("ell must be at least 3")
    if args.tolerance <= 0:
        raise ConfigError("tolerance must be positive")
    if args.mode in ("invariant", "color-check") and not args.input:
        raise ConfigError("mode %s needs an input file" % args.mode)
    if args.mode == "invariant":
        return run_invariant(args)
    if args.mode == "color-check":
        return run_color_check(args)
    if args.mode == "verify":
        return run_verify(args)
    return run_yb_fuzz(args)


def main(argv=None):
    args = build_parser().parse_intermixed_args(argv)
    try:
        code, report = run(args)
    except (ConfigError, OSError, json.JSONDecodeError,
            diagram.ArityMismatch, diagram.OrientationMismatch,
            diagram.DiagramSyntaxError, coloring.ArityMismatch,
            coloring.UnderdeterminedColoring, coloring.CapMismatch,
            coloring.Inconsistent, factgroup.NotFactorizable,
            uqalgebra.NonGenericCharacter, braiding.NoIntertwiner,
            evaluator.BranchObstruction, ValueError) as exc:
        print(json.dumps({"error": str(exc) or type(exc).__name__,
                          "type": type(exc).__name__}, sort_keys=True))
        return 1
    print(json.dumps(report, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
