"""Classification of Camina data up to isomorphism for small parameters.

Data (B, mu) are acted on by GL(r, p) x GL(n, p); orbits are isomorphism
classes. The work is staged: first every Camina commutator table B is
found by exhaustive scan and the scan survivors are split into orbits by
BFS; then for each orbit representative the maps mu are split into orbits
under the stabilizer of B.

B tables are encoded as integers by reading the (pairs x n) array row by
row as base-p digits, first digit most significant, so the least code is
the lexicographically least table. mu is encoded column by column in the
same way. Both orders agree with the datum file serialization.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import brauer
from . import fpla
from . import group as gc
from .constructions import SplitMix64
from .group import GroupDatum, SubgroupReport

log = logging.getLogger(__name__)

SCAN_LIMIT = 10**9
ORBIT_LIMIT = 5 * 10**6
STABILIZER_LIMIT = 3 * 10**7
CHUNK = 1 << 16


class GuardError(ValueError):
    """Parameters exceed a resource guard; the message carries the estimate."""


# -- codes -------------------------------------------------------------------


def b_code(G: GroupDatum) -> int:
    return int(fpla.encode(G.B_array.reshape(-1), G.p)) if G.B_array.size else 0


def mu_code(G: GroupDatum) -> int:
    flat = np.array(G.mu, dtype=np.int64).reshape(-1)
    return int(fpla.encode(flat, G.p)) if flat.size else 0


def datum_from_codes(p: int, r: int, n: int, bcode: int, mcode: int = 0) -> GroupDatum:
    npairs = len(gc.pairs(r))
    B = fpla.decode(bcode, npairs * n, p).reshape(npairs, n)
    cols = fpla.decode(mcode, r * n, p).reshape(r, n)
    return GroupDatum.build(p, r, n, B, cols.T)


# -- scanning ----------------------------------------------------------------


def _pfaffian_mod(M: np.ndarray, idx: list[int], p: int) -> np.ndarray:
    """Batched Pfaffian mod p of the principal submatrix on ``idx``."""
    if not idx:
        return np.ones(M.shape[0], dtype=np.int64)
    i0 = idx[0]
    total = np.zeros(M.shape[0], dtype=np.int64)
    for pos, j in enumerate(idx[1:]):
        rest = [x for x in idx[1:] if x != j]
        term = M[:, i0, j] * _pfaffian_mod(M, rest, p) % p
        total = (total - term) % p if pos % 2 else (total + term) % p
    return total


def _scan_chunk(args) -> np.ndarray:
    p, r, n, start, stop = args
    prs = gc.pairs(r)
    codes = np.arange(start, stop, dtype=np.int64)
    Bc = fpla.decode(codes, len(prs) * n, p).reshape(-1, len(prs), n)
    keep = np.ones(codes.size, dtype=bool)
    # nondegenerate lam . B for every lam != 0 forces B to span F_p^n
    for lam in fpla.projective_functionals(n, p):
        vals = (Bc @ lam) % p
        M = np.zeros((codes.size, r, r), dtype=np.int64)
        for k, (i, j) in enumerate(prs):
            M[:, i, j] = vals[:, k]
            M[:, j, i] = (-vals[:, k]) % p
        keep &= _pfaffian_mod(M, list(range(r)), p) != 0
    return codes[keep]


def scan_camina_b(p: int, r: int, n: int, jobs: int = 1) -> np.ndarray:
    """Codes of all B tables for which every lam . B is nondegenerate."""
    fpla.check_prime(p)
    total = p ** (len(gc.pairs(r)) * n)
    if total > SCAN_LIMIT:
        raise GuardError(f"scan of p^{len(gc.pairs(r)) * n} = {total} tables exceeds the limit {SCAN_LIMIT}")
    if r % 2 or n < 1 or r < 2:
        return np.array([], dtype=np.int64)
    tasks = [(p, r, n, s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_chunk, tasks))
    else:
        parts = [_scan_chunk(t) for t in tasks]
    return np.concatenate(parts)


# -- orbits of commutator tables ----------------------------------------------


def _act_on_tables(codes: np.ndarray, p: int, r: int, n: int, A: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Codes of C o B o (A^-1 x A^-1) for every table code given."""
    prs = gc.pairs(r)
    Bc = fpla.decode(codes, len(prs) * n, p).reshape(-1, len(prs), n)
    om = np.zeros((codes.size, r, r, n), dtype=np.int64)
    for k, (i, j) in enumerate(prs):
        om[:, i, j] = Bc[:, k]
        om[:, j, i] = -Bc[:, k]
    Ai = fpla.mat_inverse(A, p)
    # per coordinate k: Ai^T om_k Ai, then mix coordinates by C
    sq = (Ai.T @ om.transpose(0, 3, 1, 2) @ Ai) % p  # (N, n, r, r)
    new = np.tensordot(sq, C, axes=([1], [1])) % p  # (N, r, r, n)
    out = np.stack([new[:, i, j] for i, j in prs], axis=1).reshape(codes.size, -1)
    return fpla.encode(out, p)


def b_orbits(survivors: np.ndarray, p: int, r: int, n: int) -> list[np.ndarray]:
    """Orbits of the survivors under GL(r, p) x GL(n, p), by BFS over generators.

    Orbits come back as sorted code arrays, ordered by least member.
    """
    survivors = np.sort(np.asarray(survivors, dtype=np.int64))
    if survivors.size > ORBIT_LIMIT:
        raise GuardError(f"{survivors.size} tables exceed the orbit memory limit {ORBIT_LIMIT}")
    if survivors.size == 0:
        return []
    gens = [(A, np.eye(n, dtype=np.int64)) for A in fpla.gl_generators(r, p)]
    gens += [(np.eye(r, dtype=np.int64), C) for C in fpla.gl_generators(n, p)]
    moves = []
    for A, C in gens:
        image = _act_on_tables(survivors, p, r, n, A, C)
        pos = np.searchsorted(survivors, image)
        if (pos >= survivors.size).any() or not np.array_equal(survivors[np.minimum(pos, survivors.size - 1)], image):
            raise ArithmeticError("group action left the set of Camina tables")
        moves.append(pos)
    label = np.full(survivors.size, -1, dtype=np.int64)
    orbits = []
    for seed in range(survivors.size):
        if label[seed] >= 0:
            continue
        label[seed] = len(orbits)
        frontier = np.array([seed])
        members = [frontier]
        while frontier.size:
            nxt = np.unique(np.concatenate([m[frontier] for m in moves]))
            nxt = nxt[label[nxt] < 0]
            label[nxt] = len(orbits)
            members.append(nxt)
            frontier = nxt
        orbits.append(np.sort(survivors[np.concatenate(members)]))
    return orbits


def stabilizer(G: GroupDatum) -> list[tuple[np.ndarray, np.ndarray]]:
    """All (A, C) with omega(Ax, Ay) = C omega(x, y); mu is ignored."""
    if not gc.is_camina(G):
        raise ValueError("stabilizer expects a Camina commutator table")
    if fpla.gl_order(G.r, G.p) > STABILIZER_LIMIT:
        raise GuardError(f"|GL({G.r},{G.p})| = {fpla.gl_order(G.r, G.p)} exceeds {STABILIZER_LIMIT}")
    return brauer.equivalences(G, G, use_mu=False)


def mu_orbits(G: GroupDatum, stab: list[tuple[np.ndarray, np.ndarray]]) -> list[np.ndarray]:
    """Orbits of all mu under mu -> C mu A^-1, (A, C) in the stabilizer.

    The stabilizer is a group, so each orbit is also {C^-1 mu A}; that form
    avoids inverting every A.
    """
    p, r, n = G.p, G.r, G.n
    As = np.array([a for a, _ in stab], dtype=np.int64)
    inv = {}
    Cinv = []
    for _, c in stab:
        key = c.tobytes()
        if key not in inv:
            inv[key] = fpla.mat_inverse(c, p)
        Cinv.append(inv[key])
    Cinv = np.array(Cinv, dtype=np.int64)
    total = p ** (r * n)
    label = np.full(total, -1, dtype=np.int64)
    orbits = []
    for code in range(total):
        if label[code] >= 0:
            continue
        mu = fpla.decode(code, r * n, p).reshape(r, n).T
        images = (Cinv @ mu @ As) % p  # (S, n, r)
        icodes = np.unique(fpla.encode(images.transpose(0, 2, 1).reshape(len(stab), -1), p))
        if (label[icodes] >= 0).any():
            raise ArithmeticError("mu orbits overlap: stabilizer is not closed")
        label[icodes] = len(orbits)
        orbits.append(icodes)
    return orbits


# -- classification ----------------------------------------------------------


@dataclass
class OrbitRecord:
    representative: GroupDatum
    orbit_size: int
    b_orbit_size: int
    mu_orbit_size: int
    report: SubgroupReport
    triple: tuple[int, int, int]
    class_count: int

    @property
    def mho1(self) -> int:
        return self.triple[2]

    @property
    def omega1(self) -> int:
        return self.representative.p**self.report.omega1_log_order


@dataclass
class ClassificationReport:
    p: int
    r: int
    n: int
    survivors: int
    b_orbit_sizes: list[int]
    stabilizer_orders: list[int]
    records: list[OrbitRecord]
    brauer_pairs: list[tuple[int, int]] = field(default_factory=list)

    def mho1_distribution(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for rec in self.records:
            out[rec.mho1] = out.get(rec.mho1, 0) + 1
        return dict(sorted(out.items()))


def classify(p: int, r: int, n: int, jobs: int = 1) -> ClassificationReport:
    fpla.check_prime(p)
    survivors = scan_camina_b(p, r, n, jobs=jobs)
    log.info("scan (p=%d, r=%d, n=%d): %d Camina tables", p, r, n, survivors.size)
    orbits = b_orbits(survivors, p, r, n)
    records = []
    stab_orders = []
    for orbit in orbits:
        base = datum_from_codes(p, r, n, int(orbit[0]))
        stab = stabilizer(base)
        stab_orders.append(len(stab))
        for morbit in mu_orbits(base, stab):
            G = datum_from_codes(p, r, n, int(orbit[0]), int(morbit[0]))
            records.append(OrbitRecord(
                representative=G,
                orbit_size=int(orbit.size) * int(morbit.size),
                b_orbit_size=int(orbit.size),
                mu_orbit_size=int(morbit.size),
                report=gc.subgroup_report(G),
                triple=brauer.invariant_triple(G),
                class_count=p**n + p**r - 1,
            ))
    records.sort(key=lambda rec: (rec.mho1, rec.report.omega1_abelian, b_code(rec.representative),
                                  mu_code(rec.representative)))
    pairs = [(i, j) for i in range(len(records)) for j in range(i + 1, len(records))
             if brauer.check_main_theorem(records[i].representative, records[j].representative)]
    return ClassificationReport(p, r, n, int(survivors.size), [int(o.size) for o in orbits], stab_orders,
                                records, pairs)


def random_gl(d: int, p: int, rng: SplitMix64) -> np.ndarray:
    while True:
        M = np.array([[rng.below(p) for _ in range(d)] for _ in range(d)], dtype=np.int64)
        if fpla.is_invertible(M, p):
            return M


def cross_validate(report: ClassificationReport, per_class: int = 4, seed: int = 0,
                   with_correction: bool = True) -> list[str]:
    """Spot-check classes against :func:`brauer.is_isomorphic`.

    Each representative is moved by seeded random (A, C) and must be found
    isomorphic to the result (with the explicit correction verified when
    ``with_correction``); distinct representatives must not be isomorphic.
    Returns a list of failure descriptions.
    """
    rng = SplitMix64(seed)
    failures = []
    reps = [rec.representative for rec in report.records]
    for idx, G in enumerate(reps):
        for _ in range(per_class):
            A = random_gl(G.r, G.p, rng)
            C = random_gl(G.n, G.p, rng)
            H = brauer.transform(G, A, C)
            w = brauer.is_isomorphic(G, H, with_correction=with_correction)
            if w is None or not brauer.equivalence_holds(G, H, w.A, w.C):
                failures.append(f"class {idx}: moved copy not recognised as isomorphic")
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if brauer.is_isomorphic(reps[i], reps[j]) is not None:
                failures.append(f"classes {i} and {j} are isomorphic")
    return failures


# -- reports -------------------------------------------------------------------

TSV_HEADER = "p\tr\tn\tmho1\tomega1\tomega1_abelian\texponent\tclass_count\torbit_size"


def tsv_lines(report: ClassificationReport) -> list[str]:
    lines = []
    for rec in report.records:
        lines.append("\t".join(str(x) for x in (
            report.p, report.r, report.n, rec.mho1, rec.omega1,
            "yes" if rec.report.omega1_abelian else "no", rec.report.exponent,
            rec.class_count, rec.orbit_size)))
    return lines


def render_tsv(report: ClassificationReport) -> str:
    return "\n".join(["#" + TSV_HEADER] + tsv_lines(report)) + "\n"


def render_text(report: ClassificationReport) -> str:
    p, r, n = report.p, report.r, report.n
    out = [
        f"Camina classification p={p} r={r} n={n} (|G:G'| = {p**r}, |G'| = {p**n}, |G| = {p**(r + n)})",
        f"Camina commutator tables: {report.survivors}",
        f"commutator-table orbits: {len(report.b_orbit_sizes)} (sizes {', '.join(map(str, report.b_orbit_sizes))})",
        f"stabilizer orders: {', '.join(map(str, report.stabilizer_orders))}",
        f"isomorphism classes: {len(report.records)}",
        "|℧₁| distribution: " + ", ".join(f"{k}: {v}" for k, v in report.mho1_distribution().items()),
        "",
    ]
    for idx, rec in enumerate(report.records):
        out.append(f"class {idx + 1}: |℧₁| = {rec.mho1}, |Ω₁| = {rec.omega1}, "
                   f"Ω₁ {'abelian' if rec.report.omega1_abelian else 'nonabelian'}, "
                   f"exponent {rec.report.exponent}, {rec.class_count} conjugacy classes, "
                   f"orbit size {rec.orbit_size}")
    out.append("")
    if report.brauer_pairs:
        out.append("Brauer pairs: " + " ".join(f"{i + 1}-{j + 1}" for i, j in report.brauer_pairs))
    else:
        out.append("Brauer pairs: none")
    out.append("")
    out.append("#" + TSV_HEADER)
    out.extend(tsv_lines(report))
    return "\n".join(out) + "\n"
