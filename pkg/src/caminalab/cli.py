"""Command-line interface.

Exit codes: 0 affirmative or success, 1 negative verdict or failed
self-test, 2 usage, parse or validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import acceptance
from . import brauer
from . import chartable as ct
from . import constructions as cons
from . import enumeration as en
from . import fpla
from . import group as gc
from .datafile import DatumParseError, dump, load, parse, serialize
from .group import GroupDatum

__all__ = ["main", "parse", "serialize"]

OK, NEGATIVE, USAGE = 0, 1, 2

# exhaustive element checks in analyze stay below this order
ANALYZE_ORACLE_LIMIT = 5**6


class UsageError(Exception):
    pass


def _out(text: str = "") -> None:
    sys.stdout.write(text + "\n")


def _load(path: str) -> GroupDatum:
    try:
        G = load(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except DatumParseError as exc:
        raise UsageError(f"{path}: {exc}") from None
    err = gc.validation_error(G)
    if err:
        raise UsageError(f"{path}: invalid datum: {err}")
    return G


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _matrix(M) -> str:
    M = np.asarray(M)
    return "; ".join(" ".join(str(int(x)) for x in row) for row in M)


def _vec(v) -> str:
    return "(" + ",".join(str(int(x)) for x in v) + ")"


# -- analyze -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    G = _load(args.file)
    p = G.p
    rep = gc.subgroup_report(G)
    camina = gc.is_camina(G)
    small = G.order <= ANALYZE_ORACLE_LIMIT
    _out(f"p = {p}")
    _out(f"r = {G.r}")
    _out(f"n = {G.n}")
    _out(f"|G| = {G.order}")
    _out("valid: yes")
    if small:
        _out(f"Camina: {_yes(camina)} (predicate), {_yes(gc.is_camina_oracle(G))} (oracle)")
    else:
        _out(f"Camina: {_yes(camina)} (predicate; oracle skipped above {ANALYZE_ORACLE_LIMIT} elements)")
    _out(f"exponent = {rep.exponent}")
    _out(f"|G'| = {p**rep.derived_dim}")
    _out(f"|Z| = {p**rep.center_dim}")
    _out(f"|℧₁| = {p**rep.mho1_dim}")
    _out(f"|Ω₁| = {p**rep.omega1_log_order}")
    _out(f"Ω₁ abelian: {_yes(rep.omega1_abelian)}")
    if camina:
        count = p**G.n + p**G.r - 1
        if small:
            _out(f"conjugacy classes = {count} (oracle {len(gc.conjugacy_classes_oracle(G))})")
        else:
            _out(f"conjugacy classes = {count}")
        _out(f"invariant triple (|G:G'|, |G'|, |℧₁|) = {brauer.invariant_triple(G)}")
    else:
        if small:
            _out(f"conjugacy classes = {len(gc.conjugacy_classes_oracle(G))} (oracle)")
        else:
            _out("conjugacy classes = n/a")
        _out("invariant triple = n/a (not Camina)")
    index = p ** (G.r + G.n - rep.omega1_log_order)
    if small:
        E, Z = gc.all_elements(G)
        PE, PZ = gc.power_arrays(G, E, Z, p)
        omega1 = int(((PE == 0).all(1) & (PZ == 0).all(1)).sum())
        mho1 = int(np.unique(gc.codes(G, PE, PZ)).size)
        holds = G.order // omega1 == mho1 == index
        _out(f"|G:Ω₁| = {G.order // omega1}, |℧₁| = {mho1} by element count: {'equal' if holds else 'DIFFERENT'}")
    else:
        _out(f"|G:Ω₁| = {index}")
    return OK


# -- compare -----------------------------------------------------------------

METHODS = ("triple", "nenciu", "direct", "direct-nopow", "iso", "all")


def _direct_report(P, Q, use_power_maps: bool) -> bool:
    TP, TQ = ct.build_table(P), ct.build_table(Q)
    w = brauer.match_tables(TP, TQ, use_power_maps)
    tag = "direct" if use_power_maps else "direct-nopow"
    if w is None:
        _out(f"[{tag}] character tables differ" + (" (with power maps)" if use_power_maps else ""))
        return False
    _out(f"[{tag}] character tables match" + (" with power maps" if use_power_maps else " (power maps ignored)"))
    _out("  classes: " + " ".join(f"{a}->{b}" for a, b in w.class_pairs(TP, TQ)))
    _out("  characters: " + " ".join(f"{a}->{b}" for a, b in w.char_pairs(TP, TQ)))
    return True


def _iso_report(P, Q) -> bool:
    w = brauer.is_isomorphic(P, Q)
    if w is None:
        _out("[iso] not isomorphic")
        return False
    _out("[iso] isomorphic")
    _out(f"  A = {_matrix(w.A)}")
    _out(f"  C = {_matrix(w.C)}")
    try:
        q = brauer.solve_coboundary(P, Q, w.A, w.C)
    except gc.OracleSizeError:
        _out("  q: not computed (above the desk-scale limit)")
    else:
        V = fpla.all_vectors(P.r, P.p)
        _out("  q: " + " ".join(f"{_vec(e)}->{_vec(v)}" for e, v in zip(V, q)))
    return True


def cmd_compare(args) -> int:
    P, Q = _load(args.file_p), _load(args.file_q)
    method = args.method
    if P.p != Q.p:
        raise UsageError(f"primes differ: {P.p} vs {Q.p}")
    same = (P.r, P.n) == (Q.r, Q.n)
    if method in ("nenciu", "direct", "direct-nopow", "iso", "all") and not same:
        raise UsageError(f"method {method} needs equal (p, r, n); got {(P.p, P.r, P.n)} and {(Q.p, Q.r, Q.n)}")
    if method != "iso":
        for name, G in (("P", P), ("Q", Q)):
            if not gc.is_camina(G):
                raise UsageError(f"{name} is not a Camina datum")

    if method == "iso":
        return OK if _iso_report(P, Q) else NEGATIVE
    if method == "direct-nopow":
        return OK if _direct_report(P, Q, False) else NEGATIVE

    tP, tQ = brauer.invariant_triple(P), brauer.invariant_triple(Q)
    _out(f"P: p={P.p} r={P.r} n={P.n} triple {tP}")
    _out(f"Q: p={Q.p} r={Q.r} n={Q.n} triple {tQ}")
    verdicts = {}
    if method in ("triple", "all"):
        verdicts["triple"] = tP == tQ
        _out(f"[triple] condition {'holds' if tP == tQ else 'fails'}")
    if method in ("nenciu", "all"):
        w = brauer.check_nenciu(P, Q)
        verdicts["nenciu"] = w is not None
        if w is None:
            _out("[nenciu] no maps exist: ranks of the p-th power maps differ")
        else:
            _out("[nenciu] maps found, phi trivial")
            _out(f"  A = {_matrix(w.A)}")
            _out(f"  C = {_matrix(w.C)}")
    if method in ("direct", "all"):
        verdicts["direct"] = _direct_report(P, Q, True)
    consistent = len(set(verdicts.values())) == 1
    condition = next(iter(verdicts.values()))
    iso = None
    if same:
        iso = _iso_report(P, Q) if method == "all" else brauer.is_isomorphic(P, Q) is not None
    if method == "all":
        nopow = _direct_report(P, Q, False)
        if not nopow or (iso and not condition):
            consistent = False
    if not consistent:
        _out("verdict: INCONSISTENT " + " ".join(f"{k}={_yes(v)}" for k, v in verdicts.items()))
        return NEGATIVE
    if not condition:
        _out("verdict: not a Brauer pair")
    elif iso:
        _out("verdict: not a Brauer pair (isomorphic; the condition holds)")
    else:
        _out("verdict: Brauer pair")
    return OK if condition else NEGATIVE


# -- construct ---------------------------------------------------------------

FAMILIES = ("extraspecial-p", "extraspecial-p2", "field")


def cmd_construct(args) -> int:
    try:
        if args.family == "field":
            G = cons.field_camina(args.p, args.m)
        else:
            G = cons.extraspecial(args.p, args.m, "expP" if args.family == "extraspecial-p" else "expP2")
        if args.mu_rank is not None:
            if not 0 <= args.mu_rank <= min(G.r, G.n):
                raise ValueError(f"mu rank must lie in [0, {min(G.r, G.n)}]")
            G = cons.with_mu(G, cons.canonical_mu(G.n, G.r, args.mu_rank))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(serialize(G))
    return OK


# -- enumerate ---------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    try:
        report = en.classify(args.p, args.r, args.n, jobs=args.jobs)
    except (en.GuardError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(en.render_tsv(report) if args.format == "tsv" else en.render_text(report))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for idx, rec in enumerate(report.records, start=1):
            dump(rec.representative, out / f"p{report.p}_r{report.r}_n{report.n}_class{idx:02d}.txt")
    return OK


# -- chartable ---------------------------------------------------------------


def render_table(T: ct.CharacterTable, fmt: str) -> str:
    cls = [str(c) for c in T.classes]
    sizes = [str(s) for s in T.class_sizes]
    rows = [[str(chi)] + [ct.format_cyclotomic(T.values[i, j]) for j in range(len(cls))]
            for i, chi in enumerate(T.chars)]
    powers = [f"pi_{k}" for k in range(len(T.power_maps))]
    pairs = [[f"{cls[j]}->{cls[m[j]]}" for j in range(len(cls))] for m in T.power_maps]
    if fmt == "tsv":
        lines = ["\t".join(["class"] + cls), "\t".join(["size"] + sizes)]
        lines += ["\t".join(row) for row in rows]
        lines += ["\t".join([name] + pr) for name, pr in zip(powers, pairs)]
        return "\n".join(lines) + "\n"
    grid = [["class"] + cls, ["size"] + sizes] + rows
    widths = [max(len(row[j]) for row in grid) for j in range(len(grid[0]))]
    lines = [f"# character table: p = {T.p}, |G| = {T.order}, {len(cls)} classes, z = exp(2 pi i/{T.p})"]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in grid]
    lines.append("# power maps")
    lines += [f"{name}: " + " ".join(pr) for name, pr in zip(powers, pairs)]
    return "\n".join(lines) + "\n"


def cmd_chartable(args) -> int:
    G = _load(args.file)
    if not gc.is_camina(G):
        raise UsageError(f"{args.file}: not a Camina datum")
    sys.stdout.write(render_table(ct.build_table(G), args.format))
    return OK


# -- selftest ----------------------------------------------------------------


def cmd_selftest(args) -> int:
    def run():
        checks = acceptance.quick_checks(args.seed) if args.level == "quick" else acceptance.acceptance_checks()
        first = None
        for res in checks:
            _out(res.line())
            sys.stdout.flush()
            if not res.passed and first is None:
                first = res
        return first

    if args.inject_fault:
        with acceptance.inject_table_fault():
            first = run()
    else:
        first = run()
    if first is not None:
        _out(f"selftest failed: {first.name}")
        return NEGATIVE
    _out(f"selftest {args.level}: all checks passed")
    return OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="caminalab", description="Camina p-groups of class 2 and Brauer pairs.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", help="invariants of a datum file")
    s.add_argument("file")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("compare", help="decide whether two data form a Brauer pair")
    s.add_argument("file_p")
    s.add_argument("file_q")
    s.add_argument("--method", choices=METHODS, default="all")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("construct", help="write a constructed datum to standard output")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--mu-rank", type=int, default=None)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("enumerate", help="classify Camina data up to isomorphism")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out-dir", default=None)
    s.add_argument("--format", choices=("text", "tsv"), default="text")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("chartable", help="print the character table of a Camina datum")
    s.add_argument("file")
    s.add_argument("--format", choices=("text", "tsv"), default="text")
    s.set_defaults(func=cmd_chartable)

    s = sub.add_parser("selftest", help="run internal consistency checks")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"caminalab {args.command}: error: {exc}\n")
        return USAGE
