"""Brauer pairs and isomorphism of Camina data.

Three independent routes decide whether two Camina class-2 groups have the
same character table and power maps:

* :func:`check_main_theorem` compares |P:P'|, |P'| and |Mho_1(P)|;
* :func:`check_nenciu` builds isomorphisms alpha: P/P' -> Q/Q' and
  beta: P' -> Q' intertwining the p-th power maps, as matrices (A, C) with
  C mu_P = mu_Q A;
* :func:`check_direct` searches for a bijection of classes and of
  characters under which the tables and all power maps coincide.

:func:`is_isomorphic` decides isomorphism of the groups themselves.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import chartable as ct
from . import fpla
from . import group as gc
from .group import GroupDatum


class ParameterMismatch(ValueError):
    pass


class CoboundaryError(ArithmeticError):
    pass


def _require_camina(*groups: GroupDatum) -> None:
    for G in groups:
        if not gc.is_camina(G):
            raise ct.NotCamina(f"datum with p={G.p}, r={G.r}, n={G.n} is not Camina")


def _require_same(P: GroupDatum, Q: GroupDatum) -> None:
    if (P.p, P.r, P.n) != (Q.p, Q.r, Q.n):
        raise ParameterMismatch(f"parameters differ: (p, r, n) = {(P.p, P.r, P.n)} vs {(Q.p, Q.r, Q.n)}")


# -- invariants --------------------------------------------------------------


def invariant_triple(G: GroupDatum) -> tuple[int, int, int]:
    """(|G:G'|, |G'|, |Mho_1(G)|)."""
    _require_camina(G)
    return G.p**G.r, G.p**G.n, G.p ** fpla.mat_rank(G.mu_matrix, G.p)


def check_main_theorem(P: GroupDatum, Q: GroupDatum) -> bool:
    """The Brauer-pair condition. Whether P and Q are isomorphic is a
    separate question, see :func:`is_isomorphic`."""
    if P.p != Q.p:
        raise ParameterMismatch(f"primes differ: {P.p} vs {Q.p}")
    return invariant_triple(P) == invariant_triple(Q)


# -- Nenciu maps ----------------------------------------------------------


@dataclass(frozen=True)
class NenciuWitness:
    A: np.ndarray  # alpha: P/P' -> Q/Q'
    C: np.ndarray  # beta: Z(P) -> Z(Q)


def phi(G: GroupDatum) -> np.ndarray:
    """Projection Z(G) -> G/G', z -> zG'. Trivial because Z(G) = G'."""
    return np.zeros((G.r, G.n), dtype=np.int64)


def nenciu_holds(P: GroupDatum, Q: GroupDatum, A, C) -> bool:
    """A and C invertible, alpha o phi_P = phi_Q o beta, nu_Q o alpha = beta o nu_P."""
    p = P.p
    A = np.asarray(A, dtype=np.int64)
    C = np.asarray(C, dtype=np.int64)
    if A.shape != (P.r, Q.r) or C.shape != (P.n, Q.n):
        return False
    if not (fpla.is_invertible(A, p) and fpla.is_invertible(C, p)):
        return False
    if not np.array_equal(fpla.mat_mul(A, phi(P), p), fpla.mat_mul(phi(Q), C, p)):
        return False
    return np.array_equal(fpla.mat_mul(C, P.mu_matrix, p), fpla.mat_mul(Q.mu_matrix, A, p))


def _extend_to_basis(vectors: list[np.ndarray], d: int, p: int) -> list[np.ndarray]:
    """Append standard basis vectors (lowest index first) until the list spans F_p^d."""
    out = [np.asarray(v, dtype=np.int64) % p for v in vectors]
    for i in range(d):
        if len(out) == d:
            break
        e = np.zeros(d, dtype=np.int64)
        e[i] = 1
        if fpla.mat_rank(np.array(out + [e]), p) > len(out):
            out.append(e)
    return out


def _complement(kernel: list[np.ndarray], d: int, p: int) -> list[np.ndarray]:
    return _extend_to_basis(kernel, d, p)[len(kernel) :]


def check_nenciu(P: GroupDatum, Q: GroupDatum) -> NenciuWitness | None:
    """Construct (A, C) with C mu_P = mu_Q A, or None when none exists.

    Write P/P' = Omega_1(P)/P' x A_P/P' with Omega_1(P)/P' = ker mu_P. The
    p-th power map carries A_P/P' isomorphically onto Mho_1(P) = im mu_P.
    Any isomorphism beta: Mho_1(P) -> Mho_1(Q) extends to C on all of
    F_p^n; alpha sends the complement of P to the one of Q compatibly with
    beta, and the kernels to each other arbitrarily.
    """
    _require_same(P, Q)
    _require_camina(P, Q)
    p, r, n = P.p, P.r, P.n
    muP, muQ = P.mu_matrix, Q.mu_matrix
    if fpla.mat_rank(muP, p) != fpla.mat_rank(muQ, p):
        return None
    kerP = fpla.kernel_basis(muP, p)
    kerQ = fpla.kernel_basis(muQ, p)
    compP = _complement(kerP, r, p)
    compQ = _complement(kerQ, r, p)
    imageP = [fpla.mat_mul(muP, a, p) for a in compP]
    imageQ = [fpla.mat_mul(muQ, b, p) for b in compQ]
    # alpha: compP[i] -> compQ[i], kerP[j] -> kerQ[j]
    srcA = np.array(compP + kerP, dtype=np.int64).reshape(r, r).T
    dstA = np.array(compQ + kerQ, dtype=np.int64).reshape(r, r).T
    A = fpla.mat_mul(dstA, fpla.mat_inverse(srcA, p), p)
    # beta: imageP[i] -> imageQ[i], then extend
    srcC = np.array(_extend_to_basis(imageP, n, p), dtype=np.int64).reshape(n, n).T
    dstC = np.array(_extend_to_basis(imageQ, n, p), dtype=np.int64).reshape(n, n).T
    C = fpla.mat_mul(dstC, fpla.mat_inverse(srcC, p), p)
    if not nenciu_holds(P, Q, A, C):
        raise ArithmeticError("constructed Nenciu maps fail their defining equation")
    return NenciuWitness(A, C)


def nenciu_exhaustive(P: GroupDatum, Q: GroupDatum) -> NenciuWitness | None:
    """Brute force over GL(r, p) x GL(n, p); small parameters only."""
    _require_same(P, Q)
    p = P.p
    muP, muQ = P.mu_matrix, Q.mu_matrix
    for A in fpla.gl_elements(P.r, p):
        rhs = fpla.mat_mul(muQ, A, p)
        for C in fpla.gl_elements(P.n, p):
            if np.array_equal(fpla.mat_mul(C, muP, p), rhs):
                return NenciuWitness(A.copy(), C.copy())
    return None


# -- isomorphism of data -----------------------------------------------------


@dataclass(frozen=True)
class IsoWitness:
    A: np.ndarray
    C: np.ndarray
    q: np.ndarray | None = None  # q[code(e)] in F_p^n


def transform(G: GroupDatum, A, C) -> GroupDatum:
    """The datum Q with omega_Q(Ax, Ay) = C omega_G(x, y) and mu_Q A = C mu_G."""
    p = G.p
    A = np.asarray(A, dtype=np.int64) % p
    C = np.asarray(C, dtype=np.int64) % p
    Ai = fpla.mat_inverse(A, p)
    om = np.einsum("ca,db,cdk,lk->abl", Ai, Ai, G.omega, C) % p
    B = np.array([om[i, j] for i, j in gc.pairs(G.r)], dtype=np.int64).reshape(-1, G.n)
    mu = fpla.mat_mul(fpla.mat_mul(C, G.mu_matrix, p), Ai, p)
    return GroupDatum.build(p, G.r, G.n, B, mu)


def equivalence_holds(P: GroupDatum, Q: GroupDatum, A, C, use_mu: bool = True) -> bool:
    p = P.p
    A = np.asarray(A, dtype=np.int64)
    C = np.asarray(C, dtype=np.int64)
    if not (fpla.is_invertible(A, p) and fpla.is_invertible(C, p)):
        return False
    lhs = np.einsum("lk,ijk->ijl", C, P.omega) % p
    rhs = np.einsum("ai,bj,abk->ijk", A, A, Q.omega) % p
    if not np.array_equal(lhs, rhs):
        return False
    return not use_mu or np.array_equal(fpla.mat_mul(C, P.mu_matrix, p), fpla.mat_mul(Q.mu_matrix, A, p))


def equivalences(P: GroupDatum, Q: GroupDatum, use_mu: bool = True, first_only: bool = False):
    """All pairs (A, C) in GL(r, p) x GL(n, p) with
    omega_Q(A x, A y) = C omega_P(x, y) and, if ``use_mu``, C mu_P = mu_Q A.

    C runs over GL(n, p); for each C the columns of A are chosen one at a
    time, each candidate filtered against every equation involving the
    columns already fixed. Returns a list of (A, C) arrays, or the first
    pair / None when ``first_only``.
    """
    _require_same(P, Q)
    p, r, n = P.p, P.r, P.n
    V = fpla.all_vectors(r, p)
    Wn = fpla.all_vectors(n, p)
    size = V.shape[0]
    omQ = fpla.encode(np.einsum("ai,bj,ijk->abk", V, V, Q.omega) % p, p)
    muQ = fpla.encode((V @ Q.mu_matrix.T) % p, p)
    basis = np.eye(r, dtype=np.int64)
    omP = fpla.encode(np.einsum("ai,bj,ijk->abk", basis, basis, P.omega) % p, p)
    muP = fpla.encode(P.mu_matrix.T % p, p)
    add = fpla.encode((V[:, None, :] + V[None, :, :]) % p, p)
    smul = fpla.encode((np.arange(p)[:, None, None] * V[None, :, :]) % p, p)

    found: list[tuple[np.ndarray, np.ndarray]] = []

    for C in fpla.gl_elements(n, p):
        perm = fpla.encode((Wn @ C.T) % p, p)
        tB = perm[omP]
        tmu = perm[muP]
        chosen: list[int] = []

        def dfs(k: int, span: np.ndarray) -> bool:
            if k == r:
                A = V[chosen].T.copy()
                found.append((A, C.copy()))
                return first_only
            mask = np.ones(size, dtype=bool)
            mask[span] = False
            if use_mu:
                mask &= muQ == tmu[k]
            for j, a in enumerate(chosen):
                mask &= omQ[:, a] == tB[k, j]
            for a in np.nonzero(mask)[0]:
                chosen.append(int(a))
                new_span = np.unique(add[span[:, None], smul[:, a][None, :]])
                if dfs(k + 1, new_span):
                    return True
                chosen.pop()
            return False

        if dfs(0, np.array([0], dtype=np.int64)) and first_only:
            return found[0]
    if first_only:
        return None
    return found


def is_isomorphic(P: GroupDatum, Q: GroupDatum, with_correction: bool = False) -> IsoWitness | None:
    """Isomorphism (e, z) -> (Ae, Cz + q(e)) between the groups, or None."""
    if (P.p, P.r, P.n) != (Q.p, Q.r, Q.n):
        return None
    p = P.p
    if fpla.mat_rank(P.mu_matrix, p) != fpla.mat_rank(Q.mu_matrix, p):
        return None
    if P.n and fpla.mat_rank(P.B_array, p) != fpla.mat_rank(Q.B_array, p):
        return None
    hit = equivalences(P, Q, use_mu=True, first_only=True)
    if hit is None:
        return None
    A, C = hit
    q = solve_coboundary(P, Q, A, C) if with_correction else None
    return IsoWitness(A, C, q)


COBOUNDARY_LIMIT = 3**12


def solve_coboundary(P: GroupDatum, Q: GroupDatum, A, C) -> np.ndarray:
    """Correction q: F_p^r -> F_p^n making (e, z) -> (Ae, Cz + q(e)) a homomorphism.

    Solves q(e + e') - q(e) - q(e') = f_Q(Ae, Ae') - C f_P(e, e') over all
    pairs, f being the full multiplication cocycle, with q(0) = 0; then checks
    the assembled map against both multiplication tables.
    """
    _require_same(P, Q)
    p, r, n = P.p, P.r, P.n
    size = p**r
    if size**3 > COBOUNDARY_LIMIT or P.order > gc.TABLE_LIMIT:
        raise gc.OracleSizeError(f"coboundary system for p={p}, r={r} exceeds the desk-scale limit")
    A = np.asarray(A, dtype=np.int64) % p
    C = np.asarray(C, dtype=np.int64) % p
    V = fpla.all_vectors(r, p)
    xi = np.repeat(np.arange(size), size)
    yi = np.tile(np.arange(size), size)
    zero = np.zeros((xi.size, n), dtype=np.int64)
    sumE, fP = gc.multiply_arrays(P, V[xi], zero, V[yi], zero)
    AV = (V @ A.T) % p
    _, fQ = gc.multiply_arrays(Q, AV[xi], zero, AV[yi], zero)
    rhs = (fQ - fP @ C.T) % p
    s = fpla.encode(sumE, p)
    M = np.zeros((xi.size, size), dtype=np.int64)
    rows = np.arange(xi.size)
    np.add.at(M, (rows, s), 1)
    np.add.at(M, (rows, xi), -1)
    np.add.at(M, (rows, yi), -1)
    M = M[:, 1:] % p  # q(0) = 0
    q = np.zeros((size, n), dtype=np.int64)
    for t in range(n):
        sol = fpla.solve(M, rhs[:, t], p)
        if sol is None:
            raise CoboundaryError("no correction exists: the linear equivalence does not lift")
        q[1:, t] = sol
    if not _is_isomorphism(P, Q, A, C, q):
        raise CoboundaryError("assembled map fails the multiplication-table check")
    return q


def iso_map(P: GroupDatum, A, C, q) -> np.ndarray:
    """Codes of the images of every element of P under (e, z) -> (Ae, Cz + q(e))."""
    p = P.p
    E, Z = gc.all_elements(P)
    eidx = fpla.encode(E, p) if P.r else np.zeros(E.shape[0], dtype=np.int64)
    E2 = (E @ np.asarray(A).T) % p
    Z2 = (Z @ np.asarray(C).T + np.asarray(q)[eidx]) % p
    return gc.codes(P, E2, Z2)


def _is_isomorphism(P: GroupDatum, Q: GroupDatum, A, C, q) -> bool:
    image = iso_map(P, A, C, q)
    if np.unique(image).size != image.size:
        return False
    TP = gc.multiplication_table(P)
    TQ = gc.multiplication_table(Q)
    return np.array_equal(image[TP], TQ[image[:, None], image[None, :]])


# -- direct table comparison -------------------------------------------------


@dataclass(frozen=True)
class DirectWitness:
    rho: tuple[int, ...]  # class index in P -> class index in Q
    tau: tuple[int, ...]  # character index in P -> character index in Q

    def class_pairs(self, TP: ct.CharacterTable, TQ: ct.CharacterTable) -> list[tuple[str, str]]:
        return [(str(TP.classes[i]), str(TQ.classes[j])) for i, j in enumerate(self.rho)]

    def char_pairs(self, TP: ct.CharacterTable, TQ: ct.CharacterTable) -> list[tuple[str, str]]:
        return [(str(TP.chars[i]), str(TQ.chars[j])) for i, j in enumerate(self.tau)]


def _value_ids(TP: ct.CharacterTable, TQ: ct.CharacterTable) -> tuple[np.ndarray, np.ndarray]:
    both = np.concatenate([TP.values.reshape(-1, TP.p - 1), TQ.values.reshape(-1, TQ.p - 1)])
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    half = TP.values.shape[0] * TP.values.shape[1]
    return inv[:half].reshape(TP.values.shape[:2]), inv[half:].reshape(TQ.values.shape[:2])


def _relabel(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense joint relabelling of two arrays of hashable rows."""
    both = np.concatenate([a, b])
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    return inv[: len(a)], inv[len(a) :]


def _class_colours(VP, VQ, TP, TQ, use_power_maps: bool):
    sizesP = np.array(TP.class_sizes, dtype=np.int64)[:, None]
    sizesQ = np.array(TQ.class_sizes, dtype=np.int64)[:, None]
    colP, colQ = _relabel(np.hstack([sizesP, np.sort(VP, axis=0).T]), np.hstack([sizesQ, np.sort(VQ, axis=0).T]))
    if not use_power_maps:
        return colP, colQ
    pmP = np.array(TP.power_maps, dtype=np.int64)
    pmQ = np.array(TQ.power_maps, dtype=np.int64)
    count = -1
    while True:
        colP, colQ = _relabel(np.column_stack([colP, colP[pmP].T]), np.column_stack([colQ, colQ[pmQ].T]))
        new = len(set(colP.tolist()) | set(colQ.tolist()))
        if new == count:
            return colP, colQ
        count = new


def _same_histogram(a: np.ndarray, b: np.ndarray) -> bool:
    return np.array_equal(np.sort(a), np.sort(b))


def match_tables(TP: ct.CharacterTable, TQ: ct.CharacterTable, use_power_maps: bool = True) -> DirectWitness | None:
    """Search for (rho, tau) with TQ[tau(chi), rho(c)] = TP[chi, c] for all
    entries and, if requested, rho o pi_k^P = pi_k^Q o rho for every stored k.

    Classes are pre-partitioned by size, column value multiset and
    power-map behaviour (refined to a fixed point). The backtracking search
    always extends the unassigned class with the fewest admissible images;
    each assignment is propagated through the power maps and checked by
    refining the character rows on the assigned columns, which must keep
    matching multisets on both sides.
    """
    if TP.p != TQ.p or TP.order != TQ.order or TP.values.shape != TQ.values.shape:
        return None
    if len(TP.chars) != len(TP.classes):
        return None
    if use_power_maps and len(TP.power_maps) != len(TQ.power_maps):
        return None
    k = len(TP.classes)
    VP, VQ = _value_ids(TP, TQ)
    if not _same_histogram(*_relabel(np.sort(VP, axis=1), np.sort(VQ, axis=1))):
        return None
    colP, colQ = _class_colours(VP, VQ, TP, TQ, use_power_maps)
    if not _same_histogram(colP, colQ):
        return None
    pmP = np.array(TP.power_maps if use_power_maps else [], dtype=np.int64).reshape(-1, k)
    pmQ = np.array(TQ.power_maps if use_power_maps else [], dtype=np.int64).reshape(-1, k)
    same_colour = colP[:, None] == colQ[None, :]
    qlabel_index = {c: j for j, c in enumerate(TQ.classes)}
    partner = np.array([qlabel_index.get(c, -1) for c in TP.classes], dtype=np.int64)

    def assign(state, a: int, b: int):
        rho, used, cellP, cellQ = (x.copy() for x in state)
        queue = deque([(a, b)])
        while queue:
            a, b = queue.popleft()
            if rho[a] == b:
                continue
            if rho[a] != -1 or used[b] or not same_colour[a, b]:
                return None
            rho[a] = b
            used[b] = True
            cellP, cellQ = _relabel(np.column_stack([cellP, VP[:, a]]), np.column_stack([cellQ, VQ[:, b]]))
            if not _same_histogram(cellP, cellQ):
                return None
            for pa, pb in zip(pmP[:, a], pmQ[:, b]):
                queue.append((int(pa), int(pb)))
        return rho, used, cellP, cellQ

    def complete(state) -> DirectWitness | None:
        rho, _, cellP, cellQ = state
        tau = np.full(len(TP.chars), -1, dtype=np.int64)
        for cell in np.unique(cellP):
            tau[np.nonzero(cellP == cell)[0]] = np.nonzero(cellQ == cell)[0]
        w = DirectWitness(tuple(int(x) for x in rho), tuple(int(x) for x in tau))
        return w if witness_holds(TP, TQ, w, use_power_maps) else None

    def dfs(state) -> DirectWitness | None:
        rho, used = state[0], state[1]
        free = np.nonzero(rho < 0)[0]
        if free.size == 0:
            return complete(state)
        ok = same_colour[free] & ~used[None, :]
        if pmP.size:
            img = rho[pmP[:, free]]  # (K, free)
            ok &= ((img[:, :, None] < 0) | (pmQ[:, None, :] == img[:, :, None])).all(axis=0)
        counts = ok.sum(axis=1)
        pick = int(np.argmin(counts))
        a = int(free[pick])
        cands = np.nonzero(ok[pick])[0].tolist()
        if partner[a] in cands:
            cands.remove(partner[a])
            cands.insert(0, int(partner[a]))
        for b in cands:
            nxt = assign(state, a, b)
            if nxt is None:
                continue
            hit = dfs(nxt)
            if hit is not None:
                return hit
        return None

    start = (np.full(k, -1, dtype=np.int64), np.zeros(k, dtype=bool),
             np.zeros(len(TP.chars), dtype=np.int64), np.zeros(len(TQ.chars), dtype=np.int64))
    return dfs(start)


def witness_holds(TP: ct.CharacterTable, TQ: ct.CharacterTable, w: DirectWitness, use_power_maps: bool = True) -> bool:
    rho = np.array(w.rho, dtype=np.int64)
    tau = np.array(w.tau, dtype=np.int64)
    k = len(TP.classes)
    if sorted(w.rho) != list(range(k)) or sorted(w.tau) != list(range(len(TP.chars))):
        return False
    if [TQ.class_sizes[j] for j in rho] != list(TP.class_sizes):
        return False
    if not np.array_equal(TQ.values[tau][:, rho], TP.values):
        return False
    if use_power_maps:
        for mP, mQ in zip(TP.power_maps, TQ.power_maps):
            if not np.array_equal(rho[np.array(mP)], np.array(mQ)[rho]):
                return False
    return True


def check_direct(P: GroupDatum, Q: GroupDatum, use_power_maps: bool = True) -> DirectWitness | None:
    _require_camina(P, Q)
    if P.p != Q.p:
        return None
    return match_tables(ct.build_table(P), ct.build_table(Q), use_power_maps)
