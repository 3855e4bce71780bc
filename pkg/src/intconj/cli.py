"""Command line interface: conjugacy tests, centralisers, certificate
verification, and a seeded instance generator.

Matrix files are plain text: the dimension n on the first line, then n rows
of n exact entries ("p" or "p/q", lowest terms, q > 0).  Certificates are
JSON documents that can be re-verified without rerunning the pipeline.

Exit codes: 0 conjugate / ok, 1 not conjugate / verification failed,
2 unknown or budget exhausted, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import conj as cj
from . import exactlin as ex
from . import polyarith as pa
from .config import default_budgets
from .errors import (EnumerationBudgetExceeded, FactorisationTooHard,
                     IntconjError, OrbitBudgetExceeded)


class ParseError(Exception):
    pass


# ---------------------------------------------------------------------------
# matrix file format

def format_entry(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_entry(tok: str):
    if "/" in tok:
        num, den = tok.split("/", 1)
        f = Fraction(int(num), int(den))
    else:
        f = Fraction(int(tok))
    return f.numerator if f.denominator == 1 else f


def emit_matrix(a) -> str:
    n = len(a)
    lines = [str(n)]
    for row in a:
        if len(row) != n:
            raise ParseError("matrix is not square")
        lines.append(" ".join(format_entry(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str):
    toks = text.split()
    if not toks:
        raise ParseError("empty matrix file")
    try:
        n = int(toks[0])
    except ValueError as exc:
        raise ParseError(f"bad dimension line: {toks[0]!r}") from exc
    if n <= 0 or len(toks) != 1 + n * n:
        raise ParseError(f"expected {n}x{n} entries, found {len(toks) - 1}")
    try:
        entries = [parse_entry(t) for t in toks[1:]]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad entry: {exc}") from exc
    return tuple(tuple(entries[i * n + j] for j in range(n)) for i in range(n))


def read_matrix(path: str):
    try:
        with open(path) as fh:
            return parse_matrix(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def write_matrix(path: str, a):
    with open(path, "w") as fh:
        fh.write(emit_matrix(a))


# ---------------------------------------------------------------------------
# commands

def _budgets_from_args(args):
    b = default_budgets()
    updates = {}
    if getattr(args, "budget_orbit", None) is not None:
        updates["orbit_max"] = args.budget_orbit
    if getattr(args, "budget_enum", None) is not None:
        updates["enum_max"] = args.budget_enum
    if getattr(args, "budget_ideal", None) is not None:
        updates["elem_search_max"] = args.budget_ideal
    if updates:
        from dataclasses import replace
        b = replace(b, **updates)
    return b


def cmd_conj(args) -> int:
    a = read_matrix(args.matrix_a)
    b = read_matrix(args.matrix_b)
    budgets = _budgets_from_args(args)
    try:
        cert = cj.gl_conjugate(a, b, budgets)
    except (OrbitBudgetExceeded, EnumerationBudgetExceeded, FactorisationTooHard) as exc:
        print(f"budget exhausted: {type(exc).__name__}: {exc}")
        if args.certificate:
            doc = {"verdict": "unknown", "reason": f"{type(exc).__name__}: {exc}",
                   "budgets": budgets.as_dict()}
            with open(args.certificate, "w") as fh:
                json.dump(doc, fh, indent=1)
        return 2
    if args.certificate:
        with open(args.certificate, "w") as fh:
            json.dump(cert.as_dict(), fh, indent=1)
    print(f"verdict: {cert.verdict} ({cert.reason})")
    if cert.verdict == "conjugate":
        return 0
    if cert.verdict == "not_conjugate":
        return 1
    return 2


def cmd_centralizer(args) -> int:
    a = read_matrix(args.matrix_a)
    budgets = _budgets_from_args(args)
    try:
        gens = cj.centralizer(a, budgets)
    except (OrbitBudgetExceeded, EnumerationBudgetExceeded, FactorisationTooHard) as exc:
        print(f"budget exhausted: {type(exc).__name__}: {exc}")
        return 2
    print(f"{len(gens.gens)} generators, complete={gens.complete}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(f"{len(gens.gens)}\n")
            for g in gens.gens:
                fh.write(emit_matrix(g))
    else:
        for g in gens.gens:
            sys.stdout.write(emit_matrix(g))
    return 0


def cmd_verify(args) -> int:
    a = read_matrix(args.matrix_a)
    b = read_matrix(args.matrix_b)
    try:
        with open(args.certificate) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read certificate: {exc}") from exc
    if doc.get("verdict") != "conjugate":
        print("certificate does not claim conjugacy")
        return 1
    try:
        witness = tuple(tuple(parse_entry(x) for x in row) for row in doc["witness"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad witness in certificate: {exc}") from exc
    if not ex.mat_is_integral(witness):
        print("FAIL: witness is not integral")
        return 1
    w = ex.mat_to_int(witness)
    if abs(ex.bareiss_det(w)) != 1:
        print("FAIL: witness determinant is not +-1")
        return 1
    if not ex.mat_eq_zero(ex.mat_sub(ex.mat_mul(w, a), ex.mat_mul(b, w))):
        print("FAIL: X·A != B·X")
        return 1
    print("certificate verified: X·A·X^{-1} = B with X in GL(n,Z)")
    return 0


_PROFILES = ("random-integral", "companion-power", "block-jc")


def _seeded_unimodular(rng: random.Random, n: int, steps: int):
    x = [list(r) for r in ex.identity(n)]
    for _ in range(steps):
        kind = rng.randrange(3)
        i = rng.randrange(n)
        j = rng.randrange(n)
        if kind == 0 and i != j:
            c = rng.choice([-2, -1, 1, 2])
            for t in range(n):
                x[i][t] += c * x[j][t]
        elif kind == 1 and i != j:
            x[i], x[j] = x[j], x[i]
        elif kind == 2:
            x[i] = [-v for v in x[i]]
    return tuple(tuple(r) for r in x)


def generate_instance(n: int, seed: int, profile: str, poly=None):
    """(t, t_hat, x) with t_hat = x·t·x^{-1}, deterministic in the seed."""
    rng = random.Random(seed)
    if profile == "random-integral":
        while True:
            t = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
            det = ex.bareiss_det(t)
            if det != 0:
                break
    elif profile == "companion-power":
        if poly is None:
            while True:
                coeffs = [rng.randint(-4, 4) for _ in range(n)] + [1]
                if coeffs[0] != 0:
                    break
            poly = tuple(coeffs)
        t = ex.mat_to_int(tuple(tuple(int(Fraction(x)) for x in row)
                                for row in pa.companion(poly)))
    elif profile == "block-jc":
        half = max(1, n // 2)
        while True:
            coeffs = [rng.randint(-3, 3) for _ in range(half)] + [1]
            if coeffs[0] != 0:
                break
        c = ex.mat_to_int(tuple(tuple(int(Fraction(x)) for x in row)
                                for row in pa.companion(tuple(coeffs))))
        m = 2 * half
        t = [[0] * m for _ in range(m)]
        for i in range(half):
            for j in range(half):
                t[i][j] = c[i][j]
                t[half + i][half + j] = c[i][j]
            t[i][half + i] = 1
        t = tuple(tuple(r) for r in t)
    else:
        raise ParseError(f"unknown profile {profile!r}; choose from {_PROFILES}")
    size = len(t)
    x = _seeded_unimodular(rng, size, 12)
    xinv = ex.mat_inverse(x)
    t_hat = ex.mat_to_int(ex.mat_mul(ex.mat_mul(x, t), xinv))
    return t, t_hat, x


def cmd_gen(args) -> int:
    poly = None
    if args.poly:
        poly = tuple(int(c) for c in args.poly.split(","))
    t, t_hat, x = generate_instance(args.n, args.seed, args.profile, poly)
    prefix = args.out_prefix
    write_matrix(f"{prefix}_a.txt", t)
    write_matrix(f"{prefix}_b.txt", t_hat)
    write_matrix(f"{prefix}_witness.txt", x)
    print(f"wrote {prefix}_a.txt {prefix}_b.txt {prefix}_witness.txt (seed {args.seed})")
    return 0


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="intconj",
                                description="conjugacy and centralisers in GL(n,Z), exactly")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("conj", help="decide conjugacy of two matrices")
    pc.add_argument("matrix_a")
    pc.add_argument("matrix_b")
    pc.add_argument("--certificate", help="write a JSON certificate here")
    pc.add_argument("--budget-orbit", type=int)
    pc.add_argument("--budget-enum", type=int)
    pc.add_argument("--budget-ideal", type=int)
    pc.set_defaults(func=cmd_conj)

    pz = sub.add_parser("centralizer", help="generators of the centraliser")
    pz.add_argument("matrix_a")
    pz.add_argument("--out", help="write generators to this file")
    pz.add_argument("--budget-orbit", type=int)
    pz.add_argument("--budget-enum", type=int)
    pz.add_argument("--budget-ideal", type=int)
    pz.set_defaults(func=cmd_centralizer)

    pv = sub.add_parser("verify", help="check a conjugacy certificate")
    pv.add_argument("certificate")
    pv.add_argument("matrix_a")
    pv.add_argument("matrix_b")
    pv.set_defaults(func=cmd_verify)

    pg = sub.add_parser("gen", help="generate a seeded conjugate pair")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--seed", type=int, required=True)
    pg.add_argument("--profile", default="random-integral", choices=_PROFILES)
    pg.add_argument("--poly", help="ascending coefficients for companion-power")
    pg.add_argument("--out-prefix", default="instance")
    pg.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except IntconjError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
