"""Acceptance checks, shared by ``caminalab selftest`` and the test suite.

Each check returns a :class:`CheckResult`; none of them raise on a
mathematical failure. ``quick_checks`` is a fast subset and
``acceptance_checks`` are the eight acceptance criteria.
"""

from __future__ import annotations

import contextlib
import itertools
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import brauer
from . import chartable as ct
from . import constructions as cons
from . import enumeration as en
from . import group as gc
from .group import GroupDatum

_fault = {"table": False}


@contextlib.contextmanager
def inject_table_fault():
    """Perturb one entry of every table handed to the checks (negative control)."""
    _fault["table"] = True
    try:
        yield
    finally:
        _fault["table"] = False


def _table(G: GroupDatum) -> ct.CharacterTable:
    T = ct.build_table(G)
    if _fault["table"]:
        T = T.copy()
        T.values[-1, -1, 0] += 1
    return T


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: {self.detail} ({self.seconds:.1f} s)"


def _timed(name: str, fn) -> CheckResult:
    t0 = time.perf_counter()
    passed, detail = fn()
    return CheckResult(name, passed, detail, time.perf_counter() - t0)


# -- shared inputs -------------------------------------------------------------


@lru_cache(maxsize=None)
def classification(p: int, r: int, n: int) -> en.ClassificationReport:
    return en.classify(p, r, n)


def representatives() -> list[GroupDatum]:
    """The 6 + 2 + 2 classified representatives at p = 3."""
    out = []
    for params in ((3, 4, 2), (3, 2, 1), (3, 4, 1)):
        out.extend(rec.representative for rec in classification(*params).records)
    return out


def constructed_family() -> list[GroupDatum]:
    out = [
        cons.extraspecial(3, 1, "expP"), cons.extraspecial(3, 1, "expP2"),
        cons.extraspecial(3, 2, "expP"), cons.extraspecial(3, 2, "expP2"),
        cons.extraspecial(5, 1, "expP"), cons.extraspecial(5, 1, "expP2"),
    ]
    for p, m in ((3, 1), (3, 2), (5, 1)):
        F = cons.field_camina(p, m)
        out.extend(cons.with_mu(F, cons.canonical_mu(F.n, F.r, k)) for k in range(m + 1))
    return out


def _fail(problems: list[str], ok_detail: str) -> tuple[bool, str]:
    if problems:
        more = f" (+{len(problems) - 1} more)" if len(problems) > 1 else ""
        return False, problems[0] + more
    return True, ok_detail


# -- the eight criteria --------------------------------------------------------


def criterion_1() -> tuple[bool, str]:
    # always a fresh run, so the runtime bound is measured honestly
    t0 = time.perf_counter()
    rep = en.classify(3, 4, 2)
    elapsed = time.perf_counter() - t0
    dist = rep.mho1_distribution()
    nonab = [rec for rec in rep.records if rec.mho1 == 9 and not rec.report.omega1_abelian]
    problems = []
    if len(rep.records) != 6:
        problems.append(f"expected 6 classes, found {len(rep.records)}")
    if dist != {1: 1, 3: 1, 9: 4}:
        problems.append(f"|Mho_1| distribution {dist}")
    if len(nonab) != 1:
        problems.append(f"{len(nonab)} classes with |Mho_1| = 9 and Omega_1 nonabelian")
    if elapsed > 15 * 60:
        problems.append(f"classification took {elapsed:.0f} s")
    return _fail(problems, f"6 classes, |Mho_1| distribution {dist}, one nonabelian Omega_1")


def criterion_2() -> tuple[bool, str]:
    counts = {(r, n): len(classification(3, r, n).records) for r, n in ((2, 1), (4, 1))}
    problems = [f"(3, {r}, {n}) gave {c} classes" for (r, n), c in counts.items() if c != 2]
    return _fail(problems, "2 classes each for (3, 2, 1) and (3, 4, 1)")


def _same_parameter_pairs():
    for params in ((3, 4, 2), (3, 2, 1), (3, 4, 1)):
        recs = classification(*params).records
        for i, j in itertools.combinations(range(len(recs)), 2):
            yield params, i, j, recs[i], recs[j]


def criterion_3() -> tuple[bool, str]:
    problems = []
    found = []
    npairs = 0
    for params, i, j, a, b in _same_parameter_pairs():
        npairs += 1
        P, Q = a.representative, b.representative
        theorem = brauer.check_main_theorem(P, Q)
        direct = brauer.check_direct(P, Q, True) is not None
        nenciu = brauer.check_nenciu(P, Q) is not None
        if not theorem == direct == nenciu:
            problems.append(f"{params} classes {i + 1}-{j + 1}: theorem={theorem} direct={direct} nenciu={nenciu}")
        if theorem:
            found.append((params, i, j))
    quad = [i for i, rec in enumerate(classification(3, 4, 2).records) if rec.mho1 == 9]
    expected = [((3, 4, 2), i, j) for i, j in itertools.combinations(quad, 2)]
    if found != expected:
        problems.append(f"Brauer pairs {found}, expected {expected}")
    return _fail(problems, f"{npairs} pairs agree; Brauer pairs are the 6 pairs of the |Mho_1| = 9 quadruple")


def criterion_4() -> tuple[bool, str]:
    problems = []
    npairs = 0
    for params, i, j, a, b in _same_parameter_pairs():
        npairs += 1
        if brauer.check_direct(a.representative, b.representative, False) is None:
            problems.append(f"{params} classes {i + 1}-{j + 1}: tables differ")
    return _fail(problems, f"tables match for all {npairs} same-parameter pairs")


def criterion_5() -> tuple[bool, str]:
    problems = []
    reps = [G for G in representatives() if G.order <= 729]
    for G in reps:
        tag = f"(p={G.p}, r={G.r}, n={G.n}, mu={G.mu})"
        T = _table(G)
        fail = ct.orthogonality_failure(T)
        if fail:
            problems.append(f"orthogonality fails {fail} for {tag}")
            continue
        expected = G.p**G.n + G.p**G.r - 1
        oracle = len(gc.conjugacy_classes_oracle(G))
        if not len(T.classes) == expected == oracle:
            problems.append(f"class count {len(T.classes)} vs formula {expected} vs oracle {oracle} for {tag}")
        scale = G.p ** (G.r // 2)
        for i, chi in enumerate(T.chars):
            if chi.rank != 1:
                continue
            induced = ct.induced_from_center_oracle(G, chi.vec, T)
            row = [v * ct.Cyclotomic.integer(G.p, scale) for v in T.row(i)]
            if induced != row:
                problems.append(f"row {chi} differs from the induced character for {tag}")
    return _fail(problems, f"{len(reps)} tables certified (orthogonality, induction, class count)")


CAMINA_PARAMS = ((3, 2, 1), (3, 4, 1), (3, 4, 2), (5, 2, 1), (5, 4, 1), (5, 4, 2))


def criterion_6(seed: int = 0, data_per_params: int = 9, samples: int = 200) -> tuple[bool, str]:
    problems = []
    ndata = nsamples = 0
    for k, (p, r, n) in enumerate(CAMINA_PARAMS):
        for t in range(data_per_params):
            G = cons.random_datum(p, r, n, seed=seed * 1000 + 10 * k + t, require_camina=True)
            ndata += 1
            tag = f"(p={p}, r={r}, n={n}, seed={seed * 1000 + 10 * k + t})"
            rng = cons.SplitMix64(cons.stream_seed(seed + t, p, r, n))
            mu = G.mu_matrix
            for _ in range(samples):
                x = gc.element(G, [rng.below(p) for _ in range(r)], [rng.below(p) for _ in range(n)])
                y = gc.element(G, [rng.below(p) for _ in range(r)], [rng.below(p) for _ in range(n)])
                nsamples += 1
                want = tuple(int(v) for v in (mu @ np.array(x[0])) % p)
                if gc.power(G, x, p) != ((0,) * r, want):
                    problems.append(f"x^p != (0, mu e) for x={x} {tag}")
                nxy = gc.nu(G, gc.multiply(G, x, y))
                nsum = tuple((a + b) % p for a, b in zip(gc.nu(G, x), gc.nu(G, y)))
                if nxy != nsum:
                    problems.append(f"nu(xy) != nu(x) + nu(y) for x={x}, y={y} {tag}")
            E, Z = gc.all_elements(G)
            PE, PZ = gc.power_arrays(G, E, Z, p)
            omega1 = int(((PE == 0).all(1) & (PZ == 0).all(1)).sum())
            mho1 = np.unique(gc.codes(G, PE, PZ)).size
            if G.order // omega1 != mho1 or mho1 != p ** gc.subgroup_report(G).mho1_dim:
                problems.append(f"|G:Omega_1| = {G.order // omega1} but |Mho_1| = {mho1} {tag}")
    ok = ndata >= 50 and nsamples >= 10**4
    if not ok:
        problems.append(f"only {ndata} data and {nsamples} samples")
    return _fail(problems, f"{ndata} Camina data, {nsamples} element pairs, index identity by element count")


RANDOM_SHAPES = ((1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (2, 3), (4, 2), (3, 3), (1, 2))


def criterion_7(seed: int = 0, count: int = 500) -> tuple[bool, str]:
    problems = []
    tally = {True: 0, False: 0}
    data = []
    for t in range(count):
        r, n = RANDOM_SHAPES[t % len(RANDOM_SHAPES)]
        data.append(cons.random_datum(3, r, n, seed=seed * 100000 + t))
    # random Camina data keep the positive side populated
    for t in range(40):
        r, n = ((2, 1), (4, 1), (4, 2))[t % 3]
        data.append(cons.random_datum(3, r, n, seed=seed * 100000 + t, require_camina=True))
    data += constructed_family() + representatives()
    for G in data:
        fast = gc.is_camina(G)
        slow = gc.is_camina_oracle(G)
        tally[slow] += 1
        if fast != slow:
            problems.append(f"predicate {fast} vs oracle {slow} for p={G.p}, r={G.r}, n={G.n}, B={G.B}, mu={G.mu}")
    return _fail(problems, f"{len(data)} data agree ({tally[True]} Camina, {tally[False]} not)")


def _element_labels(G: GroupDatum, T: ct.CharacterTable) -> np.ndarray:
    E, Z = gc.all_elements(G)
    idx = np.empty(G.order, dtype=np.int64)
    for code in range(G.order):
        idx[code] = T.index(ct.class_of(G, (tuple(int(v) for v in E[code]), tuple(int(v) for v in Z[code]))))
    return idx


def criterion_8() -> tuple[bool, str]:
    problems = []
    tables = 0
    for G in constructed_family() + representatives():
        if G.order > 729:
            continue
        tables += 1
        tag = f"(p={G.p}, r={G.r}, n={G.n}, mu={G.mu})"
        T = _table(G)
        p = G.p
        label = _element_labels(G, T)
        # the table's classes must be the true conjugacy classes
        for cls in gc.conjugacy_classes_oracle(G):
            if np.unique(label[cls]).size != 1:
                problems.append(f"an oracle class splits across table classes {tag}")
                break
        pi = T.power_maps[p]
        for j, c in enumerate(T.classes):
            if c.rank == 1 and T.classes[pi[j]] != ct.IDENTITY:
                problems.append(f"pi_p({c}) = {T.classes[pi[j]]}, expected 1 {tag}")
            if c.rank == 2:
                img = tuple(int(v) for v in (G.mu_matrix @ np.array(c.vec)) % p)
                want = ct.central(img) if any(img) else ct.IDENTITY
                if T.classes[pi[j]] != want:
                    problems.append(f"pi_p({c}) = {T.classes[pi[j]]}, expected {want} {tag}")
        E, Z = gc.all_elements(G)
        for k in range(len(T.power_maps)):
            PE, PZ = gc.power_arrays(G, E, Z, k)
            if not np.array_equal(np.array(T.power_maps[k])[label], label[gc.codes(G, PE, PZ)]):
                problems.append(f"power map k={k} disagrees with elementwise powering {tag}")
    return _fail(problems, f"power maps verified elementwise on {tables} tables")


CRITERIA = {
    1: ("order 3^6 classification", criterion_1),
    2: ("extraspecial counts", criterion_2),
    3: ("Brauer pairs by theorem, Nenciu maps and tables", criterion_3),
    4: ("tables agree for equal (p, r, n)", criterion_4),
    5: ("character table certification", criterion_5),
    6: ("nu-map laws and index identity", criterion_6),
    7: ("Camina predicate vs oracle", criterion_7),
    8: ("power maps vs elementwise powering", criterion_8),
}


def run_criterion(k: int) -> CheckResult:
    title, fn = CRITERIA[k]
    return _timed(f"criterion {k} ({title})", fn)


def acceptance_checks():
    for k in CRITERIA:
        yield run_criterion(k)


# -- quick self-test -----------------------------------------------------------


def _quick_laws(seed: int) -> tuple[bool, str]:
    problems = []
    for t, (p, r, n) in enumerate(((3, 2, 1), (3, 3, 2), (3, 4, 1), (5, 2, 2), (5, 4, 1))):
        G = cons.random_datum(p, r, n, seed=seed + t)
        rng = cons.SplitMix64(cons.stream_seed(seed + t, p, r, n))

        def rand():
            return gc.element(G, [rng.below(p) for _ in range(r)], [rng.below(p) for _ in range(n)])

        one = gc.identity(G)
        for _ in range(100):
            x, y, z = rand(), rand(), rand()
            xy = gc.multiply(G, x, y)
            if gc.multiply(G, xy, z) != gc.multiply(G, x, gc.multiply(G, y, z)):
                problems.append(f"associativity fails for p={p}, r={r}, n={n}")
            if gc.multiply(G, x, gc.inverse(G, x)) != one or gc.multiply(G, one, x) != x:
                problems.append(f"identity or inverse fails for p={p}, r={r}, n={n}")
            if gc.commutator(G, x, y) != gc.commutator_closed(G, x, y):
                problems.append(f"commutator formula fails for p={p}, r={r}, n={n}")
    return _fail(problems, "associativity, identity, inverses and commutators on 500 triples")


def _quick_orthogonality(seed: int) -> tuple[bool, str]:
    data = [cons.extraspecial(3, 1, "expP"), cons.extraspecial(3, 1, "expP2"),
            cons.extraspecial(3, 2, "expP"), cons.extraspecial(3, 2, "expP2"),
            cons.extraspecial(5, 1, "expP2"), cons.field_camina(3, 1)]
    data += [cons.random_datum(3, 4, 1, seed=seed + t, require_camina=True) for t in range(4)]
    problems = []
    for G in data:
        fail = ct.orthogonality_failure(_table(G))
        if fail:
            problems.append(f"orthogonality fails {fail} for p={G.p}, r={G.r}, n={G.n}, mu={G.mu}")
    return _fail(problems, f"{len(data)} tables of order <= 3^5 pass row and column orthogonality")


def _quick_oracles(seed: int) -> tuple[bool, str]:
    problems = []
    count = 0
    for t in range(30):
        r, n = ((2, 1), (3, 1), (4, 1), (2, 2), (3, 2))[t % 5]
        G = cons.random_datum(3, r, n, seed=seed + t, require_camina=(t % 2 == 0 and r % 2 == 0 and 2 * n <= r))
        count += 1
        if gc.is_camina(G) != gc.is_camina_oracle(G):
            problems.append(f"Camina predicate disagrees with the oracle for r={r}, n={n}, seed={seed + t}")
        rep = gc.subgroup_report(G)
        if G.p ** (rep.derived_dim) != gc.derived_subgroup_oracle(G).size:
            problems.append(f"|G'| disagrees with the oracle for r={r}, n={n}, seed={seed + t}")
        if G.p**rep.mho1_dim != gc.mho1_oracle(G).size:
            problems.append(f"|Mho_1| disagrees with the oracle for r={r}, n={n}, seed={seed + t}")
    rep = en.classify(3, 2, 1)
    if len(rep.records) != 2:
        problems.append(f"(3, 2, 1) classification gave {len(rep.records)} classes")
    return _fail(problems, f"{count} random data agree with the oracles; (3, 2, 1) has 2 classes")


def quick_checks(seed: int = 0):
    yield _timed("algebraic laws", lambda: _quick_laws(seed))
    yield _timed("orthogonality", lambda: _quick_orthogonality(seed))
    yield _timed("oracle agreement", lambda: _quick_oracles(seed))
