"""quadrex command line.

Every command reads one JSON file and writes one JSON document (or CSV) to
stdout or --out.  Exit codes: 0 ok, 2 parse error, 3 invariant violation,
4 numeric failure; ``solve`` also uses 10 (Unstable) and 11 (NotEquipoised).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .cones import constraints, destabilizer, sample, solve_ray
from .errors import ConstructionFailed, NumericFailure, ParseError, QuadrexError
from .exact import fmt
from .moments import extremal_affine
from .polytope import Kind, LabeledQuadrilateral, characteristic_pair, classify
from .rationality import is_rational_type
from .solver import KEUndefined, solve, sub_cone_flags, zeta_original

log = logging.getLogger("quadrex")

SCHEMA = 1
EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_NUMERIC = 0, 2, 3, 4
EXIT_UNSTABLE, EXIT_NOT_EQUIPOISED = 10, 11
DEFAULT_GRID = 64
DEFAULT_EPS = "1/32"
DEFAULT_SEED = 0


def jsonable(obj):
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.17g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def emit(doc: dict, out=None) -> None:
    text = json.dumps(jsonable({"schema": SCHEMA, **doc}), indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def read_quad(path: str) -> LabeledQuadrilateral:
    """A quadrilateral file, or the output of ``solve``/``analyze`` (key 'input')."""
    data = read_json(path)
    if isinstance(data, dict) and "input" in data:
        data = data["input"]
    try:
        return LabeledQuadrilateral.from_json(data)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{path}: bad number ({exc})") from exc


def _eps(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text}") from exc


# ------------------------------------------------------------------ commands

def classify_report(quad: LabeledQuadrilateral) -> dict:
    qc = classify(quad)
    out = {"kind": qc.kind.value, "parallel_pairs": qc.parallel_pairs,
           "hamiltonian_form_order": qc.hamiltonian_form_order}
    if qc.kind is Kind.GENERIC:
        pair = characteristic_pair(quad)
        out["characteristic_pair"] = [pair.alpha, pair.beta]
    out["rationality"] = is_rational_type(quad).to_json()
    za = extremal_affine(quad)
    out["zeta"] = list(za.coeffs)
    out["equipoised"] = za.equipoised
    return out


def cmd_classify(args) -> int:
    quad = read_quad(args.input)
    emit({"command": "classify", "input": quad.to_json(), **classify_report(quad)}, args.out)
    return EXIT_OK


def solve_report(quad: LabeledQuadrilateral):
    verdict = solve(quad)
    out = {"verdict": verdict.to_json()}
    if verdict.polynomials is not None:
        poly = verdict.polynomials
        out["zeta"] = list(zeta_original(poly))
        flags = sub_cone_flags(poly)
        try:
            ke = flags.ke
        except KEUndefined:
            ke = None
        out["flags"] = {"csc": flags.csc, "wbf": flags.wbf, "ke": ke}
    return verdict, out


def cmd_solve(args) -> int:
    quad = read_quad(args.input)
    verdict, out = solve_report(quad)
    emit({"command": "solve", "input": quad.to_json(), **out}, args.out)
    return {"Stable": EXIT_OK, "Unstable": EXIT_UNSTABLE}.get(verdict.status, EXIT_NOT_EQUIPOISED)


def _stable_poly(quad):
    verdict = solve(quad)
    if verdict.status != "Stable":
        raise QuadrexError(f"instance is {verdict.status}; the oracle needs a Stable solution")
    return verdict.polynomials


def _write_grid_csv(path, header, rows):
    fh = open(path, "w", newline="") if path and path != "-" else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([f"{float(v):.17g}" for v in row])
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_verify(args) -> int:
    from .verify import richardson, verify_instance

    quad = read_quad(args.input)
    poly = _stable_poly(quad)
    report, grid = verify_instance(poly, args.grid, args.eps, args.seed, energy=not args.no_energy)
    doc = {"command": "verify", "input": quad.to_json(), "kind": poly.kind, "report": report.to_json()}
    zs = float(np.max(np.abs(grid.zeta[grid.mask])))
    doc["report"]["relative_abreu_residual"] = report.max_abreu_residual / max(zs, 1e-300)
    if args.richardson:
        doc["richardson"] = richardson(poly, args.grid, args.eps)
    if args.csv:
        _write_grid_csv(args.csv, ["mu1", "mu2", "H11", "H12", "H22", "S_fd", "zeta"], grid.rows())
    emit(doc, args.out)
    return EXIT_OK


def cmd_cones(args) -> int:
    quad = read_quad(args.input)
    doc = {"command": "cones", "input": quad.to_json()}
    if args.sample is None:
        c = constraints(quad)
        doc.update({"E": c.E, "B": c.b_row, "C_extra": c.csc_row, "K_extra": c.ke_row})
        if c.D is not None:
            doc["D"] = list(c.D)
    else:
        rays = []
        for k in range(args.count):
            ray = sample(quad, args.sample, seed=args.seed + k)
            verdict = solve_ray(quad, ray.r)
            entry = ray.to_json()
            entry["status"] = verdict.status
            if verdict.polynomials is not None:
                f = sub_cone_flags(verdict.polynomials)
                entry["flags"] = {"csc": f.csc, "wbf": f.wbf}
            rays.append(entry)
        doc.update({"cone": args.sample, "seed": args.seed, "rays": rays})
    emit(doc, args.out)
    return EXIT_OK


def cmd_destabilize(args) -> int:
    quad = read_quad(args.input)
    try:
        d = destabilizer(quad, b=args.b, strict=True)
    except ConstructionFailed as exc:
        result = getattr(exc, "result", None)
        if result is not None:
            emit({"command": "destabilize", "input": quad.to_json(), "error": str(exc),
                  **result.to_json()}, args.out)
        raise
    emit({"command": "destabilize", "input": quad.to_json(), **d.to_json()}, args.out)
    return EXIT_OK


def cmd_sasaki(args) -> int:
    from .sasaki import cone_lift_check, csc_sasaki_check, load_cone, transversal

    cone, reeb = load_cone(read_json(args.input))
    tr = transversal(cone, reeb)
    check = csc_sasaki_check(cone, reeb)
    doc = {"command": "sasaki", "reeb": list(reeb.b), "good": cone.good,
           "transversal": tr.quad.to_json(), "classify": classify_report(tr.quad), **check.to_json()}
    if check.verdict.status == "Stable" and args.grid:
        doc["cone_lift"] = cone_lift_check(tr, check.verdict.polynomials, args.grid).to_json()
    emit(doc, args.out)
    return EXIT_OK


def cmd_potential(args) -> int:
    from .potential import ABPotential
    from .sasaki import h_original
    from .verify import _interior_mask

    quad = read_quad(args.input)
    poly = _stable_poly(quad)
    pot = ABPotential.from_polynomials(poly)
    n = args.grid
    xs = [float(v[0]) for v in quad.vertices]
    ys = [float(v[1]) for v in quad.vertices]
    m1, m2 = np.meshgrid(np.linspace(min(xs), max(xs), n + 1), np.linspace(min(ys), max(ys), n + 1), indexing="ij")
    mask = _interior_mask(quad, m1, m2, float(args.eps))
    p1, p2 = m1[mask], m2[mask]
    m = np.array([[float(c) for c in row] for row in poly.witness.matrix])
    t = np.array([float(c) for c in poly.witness.shift])
    c1 = m[0, 0] * p1 + m[0, 1] * p2 + t[0]
    c2 = m[1, 0] * p1 + m[1, 1] * p2 + t[1]
    g = pot.at_mu(c1, c2)
    h = h_original(poly, p1, p2)
    rows = zip(p1, p2, g, h[0, 0], h[0, 1], h[1, 1])
    header = ["mu1", "mu2", "G", "H11", "H12", "H22"]
    if args.format == "csv":
        _write_grid_csv(args.out, header, rows)
    else:
        emit({"command": "potential", "input": quad.to_json(), "columns": header,
              "rows": [list(r) for r in rows]}, args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    quad = read_quad(args.input)
    doc = {"command": "analyze", "input": quad.to_json(), "classify": classify_report(quad)}
    verdict, out = solve_report(quad)
    doc["solve"] = out
    if verdict.status == "Stable":
        from .verify import verify_instance

        report, _ = verify_instance(verdict.polynomials, args.grid, args.eps, args.seed, energy=False)
        doc["verify"] = report.to_json()
    emit(doc, args.out)
    return EXIT_OK


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadrex", description="Extremal metrics on labeled quadrilaterals.")
    p.add_argument("--version", action="version", version=f"quadrex {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input")
        sp.add_argument("--out", "-o", default=None)
        sp.set_defaults(func=fn)
        return sp

    add("classify", cmd_classify, "affine class, characteristic pair, rationality")
    add("solve", cmd_solve, "explicit extremal solution and stability verdict")
    sp = add("verify", cmd_verify, "finite-difference oracle on a Stable instance")
    sp.add_argument("--grid", type=int, default=DEFAULT_GRID)
    sp.add_argument("--eps", type=_eps, default=Fraction(DEFAULT_EPS))
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--dump", "--csv", dest="csv", default=None, help="CSV grid: mu1,mu2,H11,H12,H22,S_fd,zeta")
    sp.add_argument("--richardson", action="store_true")
    sp.add_argument("--no-energy", action="store_true")
    sp = add("cones", cmd_cones, "cone constraints or samples of B, C, K")
    sp.add_argument("--sample", choices=["B", "C", "K"], default=None)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp = add("destabilize", cmd_destabilize, "double-root construction on a generic quadrilateral")
    sp.add_argument("--b", type=_eps, default=Fraction(-1))
    sp = add("sasaki", cmd_sasaki, "transversal quadrilateral of a cone with Reeb vector")
    sp.add_argument("--grid", type=int, default=16, help="cone-lift grid (0 to skip)")
    sp = add("potential", cmd_potential, "symplectic potential and H on a grid")
    sp.add_argument("--grid", type=int, default=DEFAULT_GRID)
    sp.add_argument("--eps", type=_eps, default=Fraction(DEFAULT_EPS))
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp = add("analyze", cmd_analyze, "classify + solve + verify")
    sp.add_argument("--grid", type=int, default=DEFAULT_GRID)
    sp.add_argument("--eps", type=_eps, default=Fraction(DEFAULT_EPS))
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"quadrex: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericFailure as exc:
        print(f"quadrex: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except QuadrexError as exc:
        print(f"quadrex: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
