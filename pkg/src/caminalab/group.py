"""Class-2 p-groups given by commutator data ``B`` and p-th power data ``mu``.

A datum ``(p, r, n, B, mu)`` describes a group of order ``p**(r + n)``.
Elements are pairs ``(e, z)`` with ``e`` in F_p^r (the image in G/G') and
``z`` in F_p^n (the central part). Multiplication is

    (e, z)(e', z') = (e + e', z + z' + sum_{i>j} e_i e'_j B(i, j) + sum_i c_i mu_i)

where ``c_i`` is the carry of ``e_i + e'_i`` past ``p``. The first sum is a
bilinear 2-cocycle and each carry term is the cocycle of Z/p^2, so the
product is associative for any choice of ``B`` and ``mu``.

Generator indices are 0-based here; files and reports use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import fpla

ORACLE_LIMIT = 10**6

Vec = tuple[int, ...]
Element = tuple[Vec, Vec]


def pairs(r: int) -> list[tuple[int, int]]:
    """Index pairs (i, j) with i > j in lexicographic order."""
    return [(i, j) for i in range(r) for j in range(i)]


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class GroupDatum:
    """Immutable presentation data.

    ``B`` holds one n-vector per pair of :func:`pairs`, the commutator
    ``[g_i, g_j]``; ``mu`` holds one n-vector per generator, the central
    value of ``g_i ** p``.
    """

    p: int
    r: int
    n: int
    B: tuple[Vec, ...]
    mu: tuple[Vec, ...]

    @classmethod
    def build(cls, p: int, r: int, n: int, B=None, mu=None) -> GroupDatum:
        """Build from a dict ``{(i, j): vec}``, a (pairs x n) array, or None;
        ``mu`` from an n x r matrix (columns are mu_i) or None."""
        prs = pairs(r)
        if B is None:
            Bt = [(0,) * n for _ in prs]
        elif isinstance(B, dict):
            Bt = [tuple(int(x) % p for x in B.get((i, j), (0,) * n)) for i, j in prs]
            extra = set(B) - set(prs)
            if extra:
                raise ValueError(f"B given on pairs that are not i > j: {sorted(extra)}")
        else:
            arr = np.asarray(B, dtype=np.int64).reshape(len(prs), n)
            Bt = [tuple(int(x) % p for x in row) for row in arr]
        if mu is None:
            mut = [(0,) * n for _ in range(r)]
        else:
            M = np.asarray(mu, dtype=np.int64).reshape(n, r)
            mut = [tuple(int(x) % p for x in M[:, i]) for i in range(r)]
        return cls(p, r, n, tuple(Bt), tuple(mut))

    @property
    def order(self) -> int:
        return self.p ** (self.r + self.n)

    @property
    def log_order(self) -> int:
        return self.r + self.n

    def b(self, i: int, j: int) -> Vec:
        """Commutator value [g_i, g_j] for i > j."""
        return self.B[pairs(self.r).index((i, j))]

    @cached_property
    def B_array(self) -> np.ndarray:
        """(pairs, n) array of B values."""
        return np.array(self.B, dtype=np.int64).reshape(len(self.B), self.n)

    @cached_property
    def lower(self) -> np.ndarray:
        """One-sided r x r x n table, B(i, j) below the diagonal, zero elsewhere."""
        T = np.zeros((self.r, self.r, self.n), dtype=np.int64)
        for k, (i, j) in enumerate(pairs(self.r)):
            T[i, j] = self.B[k]
        return T

    @cached_property
    def omega(self) -> np.ndarray:
        """Alternating commutator form as an r x r x n table."""
        L = self.lower
        return (L - L.transpose(1, 0, 2)) % self.p

    @cached_property
    def mu_matrix(self) -> np.ndarray:
        return np.array(self.mu, dtype=np.int64).reshape(self.r, self.n).T.copy()


def validation_error(G: GroupDatum) -> str | None:
    """Describe the first violated condition, or None for a valid datum."""
    p = G.p
    if not isinstance(p, int) or not fpla.is_prime(p):
        return f"p: {p} is not a prime"
    if p == 2:
        return "p: 2 is excluded, p must be odd"
    if p >= fpla.MAX_PRIME:
        return f"p: {p} exceeds {fpla.MAX_PRIME}"
    if G.r < 1:
        return f"r: must be positive, got {G.r}"
    if G.n < 0:
        return f"n: must be nonnegative, got {G.n}"
    if len(G.B) != len(pairs(G.r)):
        return f"B: expected {len(pairs(G.r))} pairs, got {len(G.B)}"
    for (i, j), v in zip(pairs(G.r), G.B):
        if len(v) != G.n:
            return f"B({i + 1},{j + 1}): expected {G.n} entries, got {len(v)}"
        if any(not (0 <= x < p) for x in v):
            return f"B({i + 1},{j + 1}): entries must lie in [0, {p})"
    if len(G.mu) != G.r:
        return f"mu: expected {G.r} columns, got {len(G.mu)}"
    for i, v in enumerate(G.mu):
        if len(v) != G.n:
            return f"mu {i + 1}: expected {G.n} entries, got {len(v)}"
        if any(not (0 <= x < p) for x in v):
            return f"mu {i + 1}: entries must lie in [0, {p})"
    return None


def validate(G: GroupDatum) -> bool:
    return validation_error(G) is None


# -- element arithmetic ---------------------------------------------------


def identity(G: GroupDatum) -> Element:
    return (0,) * G.r, (0,) * G.n


def element(G: GroupDatum, e, z=None) -> Element:
    z = (0,) * G.n if z is None else z
    if len(e) != G.r or len(z) != G.n:
        raise ValueError("element dimensions do not match the datum")
    return tuple(int(x) % G.p for x in e), tuple(int(x) % G.p for x in z)


def _check(G: GroupDatum, x: Element) -> None:
    if len(x[0]) != G.r or len(x[1]) != G.n:
        raise ValueError(f"element {x} does not match datum with r={G.r}, n={G.n}")


def multiply(G: GroupDatum, x: Element, y: Element) -> Element:
    _check(G, x)
    _check(G, y)
    p = G.p
    e, z = x
    f, w = y
    out = list(a + b for a, b in zip(z, w))
    for k, (i, j) in enumerate(pairs(G.r)):
        c = e[i] * f[j]
        if c:
            for t, v in enumerate(G.B[k]):
                out[t] += c * v
    s = []
    for i in range(G.r):
        t = e[i] + f[i]
        if t >= p:
            t -= p
            for k, v in enumerate(G.mu[i]):
                out[k] += v
        s.append(t)
    return tuple(s), tuple(v % p for v in out)


def power(G: GroupDatum, x: Element, k: int) -> Element:
    """x ** k by square-and-multiply; negative k goes through the inverse."""
    if k < 0:
        return power(G, inverse(G, x), -k)
    result = identity(G)
    base = x
    while k:
        if k & 1:
            result = multiply(G, result, base)
        base = multiply(G, base, base)
        k >>= 1
    return result


def inverse(G: GroupDatum, x: Element) -> Element:
    return power(G, x, G.p * G.p - 1)


def commutator(G: GroupDatum, x: Element, y: Element) -> Element:
    """x^-1 y^-1 x y, evaluated as a word."""
    return multiply(G, multiply(G, inverse(G, x), inverse(G, y)), multiply(G, x, y))


def commutator_closed(G: GroupDatum, x: Element, y: Element) -> Element:
    e, f = np.array(x[0]), np.array(y[0])
    z = np.einsum("i,j,ijk->k", e, f, G.omega) % G.p
    return (0,) * G.r, tuple(int(v) for v in z)


def nu(G: GroupDatum, x: Element) -> Vec:
    """The p-th power map on the G/G' part: the central vector mu . e."""
    _check(G, x)
    return tuple(int(v) for v in G.mu_matrix @ np.array(x[0], dtype=np.int64) % G.p)


def element_order(G: GroupDatum, x: Element) -> int:
    e, z = x
    if not any(e):
        return 1 if not any(z) else G.p
    return G.p if not any(nu(G, x)) else G.p * G.p


# -- vectorised arithmetic over many elements --------------------------------


def all_elements(G: GroupDatum) -> tuple[np.ndarray, np.ndarray]:
    """(E, Z) arrays of every element, row index equal to its code."""
    _guard(G)
    V = fpla.all_vectors(G.r + G.n, G.p)
    return V[:, : G.r], V[:, G.r :]


def codes(G: GroupDatum, E: np.ndarray, Z: np.ndarray) -> np.ndarray:
    return fpla.encode(np.concatenate([E, Z], axis=-1), G.p)


def multiply_arrays(G: GroupDatum, E1, Z1, E2, Z2) -> tuple[np.ndarray, np.ndarray]:
    p = G.p
    S = E1 + E2
    carry = (S >= p).astype(np.int64)
    T = (E1 @ G.lower.reshape(G.r, G.r * G.n)).reshape(-1, G.r, G.n)
    W = Z1 + Z2 + (T * E2[:, :, None]).sum(axis=1) + carry @ G.mu_matrix.T
    return S % p, W % p


def power_arrays(G: GroupDatum, E, Z, k: int) -> tuple[np.ndarray, np.ndarray]:
    if k < 0:
        E, Z = power_arrays(G, E, Z, G.p * G.p - 1)
        k = -k
    RE, RZ = np.zeros_like(E), np.zeros_like(Z)
    BE, BZ = E, Z
    while k:
        if k & 1:
            RE, RZ = multiply_arrays(G, RE, RZ, BE, BZ)
        BE, BZ = multiply_arrays(G, BE, BZ, BE, BZ)
        k >>= 1
    return RE, RZ


def inverse_arrays(G: GroupDatum, E, Z) -> tuple[np.ndarray, np.ndarray]:
    return power_arrays(G, E, Z, G.p * G.p - 1)


# -- invariants --------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupReport:
    derived_dim: int
    center_dim: int
    mho1_dim: int
    omega1_log_order: int
    omega1_abelian: bool
    exponent: int


def _form_on(G: GroupDatum, basis: list[np.ndarray]) -> np.ndarray:
    if not basis:
        return np.zeros((0, 0, G.n), dtype=np.int64)
    K = np.array(basis, dtype=np.int64)
    return np.einsum("ai,bj,ijk->abk", K, K, G.omega) % G.p


def radical_basis(G: GroupDatum) -> list[np.ndarray]:
    """Basis of {e : omega(e, .) = 0}."""
    # rows indexed by (f, k): omega(e, f)_k as a linear functional in e
    M = G.omega.transpose(1, 2, 0).reshape(G.r * G.n, G.r)
    if M.shape[0] == 0:
        return [np.eye(G.r, dtype=np.int64)[i] for i in range(G.r)]
    return fpla.kernel_basis(M, G.p)


def subgroup_report(G: GroupDatum) -> SubgroupReport:
    p = G.p
    derived = fpla.mat_rank(G.B_array, p) if G.B else 0
    center = len(radical_basis(G)) + G.n
    mho = fpla.mat_rank(G.mu_matrix, p) if G.n else 0
    ker = fpla.kernel_basis(G.mu_matrix, p) if G.n else [np.eye(G.r, dtype=np.int64)[i] for i in range(G.r)]
    abelian = not _form_on(G, ker).any()
    exponent = p if not G.mu_matrix.any() else p * p
    return SubgroupReport(
        derived_dim=derived,
        center_dim=center,
        mho1_dim=mho,
        omega1_log_order=G.r - mho + G.n,
        omega1_abelian=abelian,
        exponent=exponent,
    )


def lambda_form(G: GroupDatum, lam) -> np.ndarray:
    """r x r alternating matrix (lam . omega(g_i, g_j))."""
    return np.einsum("ijk,k->ij", G.omega, np.asarray(lam, dtype=np.int64)) % G.p


def is_camina(G: GroupDatum) -> bool:
    """Camina of class 2: B spans F_p^n and every lam . B is nondegenerate."""
    if G.n < 1 or G.r % 2:
        return False
    p = G.p
    if fpla.mat_rank(G.B_array, p) != G.n:
        return False
    return all(fpla.mat_rank(lambda_form(G, lam), p) == G.r for lam in fpla.projective_functionals(G.n, p))


# -- brute-force oracles -------------------------------------------------


def _guard(G: GroupDatum) -> None:
    if G.order > ORACLE_LIMIT:
        raise OracleSizeError(f"|G| = {G.order} exceeds the oracle limit {ORACLE_LIMIT}")


TABLE_LIMIT = 3**7


@lru_cache(maxsize=4)
def multiplication_table(G: GroupDatum) -> np.ndarray:
    """N x N table of product codes (small groups only)."""
    if G.order > TABLE_LIMIT:
        raise OracleSizeError(f"|G| = {G.order} is too large for a multiplication table")
    E, Z = all_elements(G)
    N = E.shape[0]
    xi = np.repeat(np.arange(N), N)
    yi = np.tile(np.arange(N), N)
    return codes(G, *multiply_arrays(G, E[xi], Z[xi], E[yi], Z[yi])).reshape(N, N)


def conjugacy_classes_oracle(G: GroupDatum) -> list[np.ndarray]:
    """All conjugacy classes as sorted code arrays, ordered by least member."""
    E, Z = all_elements(G)
    IE, IZ = inverse_arrays(G, E, Z)
    N = E.shape[0]
    T = multiplication_table(G) if G.order <= TABLE_LIMIT else None
    inv = codes(G, IE, IZ)
    label = np.full(N, -1, dtype=np.int64)
    classes = []
    for g in range(N):
        if label[g] >= 0:
            continue
        if T is not None:
            conj = T[T[inv, g], np.arange(N)]
        else:
            gE = np.broadcast_to(E[g], E.shape)
            gZ = np.broadcast_to(Z[g], Z.shape)
            conj = codes(G, *multiply_arrays(G, *multiply_arrays(G, IE, IZ, gE, gZ), E, Z))
        members = np.unique(conj)
        label[members] = len(classes)
        classes.append(members)
    return classes


def _closure(G: GroupDatum, gens: np.ndarray) -> np.ndarray:
    """Subgroup generated by the given element codes, as a sorted code array."""
    E, Z = all_elements(G)
    have = np.zeros(E.shape[0], dtype=bool)
    have[0] = True
    have[gens] = True
    frontier = np.nonzero(have)[0]
    gens = np.unique(gens)
    while frontier.size:
        new = []
        for g in gens:
            PE, PZ = multiply_arrays(G, E[frontier], Z[frontier], np.broadcast_to(E[g], (frontier.size, G.r)),
                                     np.broadcast_to(Z[g], (frontier.size, G.n)))
            c = codes(G, PE, PZ)
            new.append(c[~have[c]])
        fresh = np.unique(np.concatenate(new)) if new else np.array([], dtype=np.int64)
        have[fresh] = True
        frontier = fresh
    return np.nonzero(have)[0]


def derived_subgroup_oracle(G: GroupDatum, chunk: int = 64) -> np.ndarray:
    """Subgroup generated by all commutators x^-1 y^-1 x y."""
    E, Z = all_elements(G)
    IE, IZ = inverse_arrays(G, E, Z)
    N = E.shape[0]
    comms = np.zeros(N, dtype=bool)
    if G.order <= TABLE_LIMIT:
        T = multiplication_table(G)
        inv = codes(G, IE, IZ)
        comms[T[T[inv[:, None], inv[None, :]], T].ravel()] = True
        return _closure(G, np.nonzero(comms)[0])
    for start in range(0, N, chunk):
        xs = np.arange(start, min(start + chunk, N))
        xi = np.repeat(xs, N)
        yi = np.tile(np.arange(N), xs.size)
        left = multiply_arrays(G, IE[xi], IZ[xi], IE[yi], IZ[yi])
        right = multiply_arrays(G, E[xi], Z[xi], E[yi], Z[yi])
        comms[codes(G, *multiply_arrays(G, *left, *right))] = True
    return _closure(G, np.nonzero(comms)[0])


def is_camina_oracle(G: GroupDatum) -> bool:
    """Camina of nilpotence class exactly 2, decided from the definition:
    every g outside G' has conjugacy class gG'."""
    E, Z = all_elements(G)
    D = derived_subgroup_oracle(G)
    if D.size == 1:
        return False
    # class exactly 2: G' is central
    if G.order <= TABLE_LIMIT:
        T = multiplication_table(G)
        if not np.array_equal(T[D, :], T[:, D].T):
            return False
    else:
        for d in D:
            dE = np.broadcast_to(E[d], E.shape)
            dZ = np.broadcast_to(Z[d], Z.shape)
            if not np.array_equal(codes(G, *multiply_arrays(G, dE, dZ, E, Z)),
                                  codes(G, *multiply_arrays(G, E, Z, dE, dZ))):
                return False
    inD = np.zeros(E.shape[0], dtype=bool)
    inD[D] = True
    DE, DZ = E[D], Z[D]
    for cls in conjugacy_classes_oracle(G):
        g = cls[0]
        if inD[g]:
            continue
        coset = np.unique(codes(G, *multiply_arrays(G, np.broadcast_to(E[g], DE.shape),
                                                       np.broadcast_to(Z[g], DZ.shape), DE, DZ)))
        if not np.array_equal(coset, cls):
            return False
    return True


def omega1_oracle(G: GroupDatum) -> np.ndarray:
    """Codes of all x with x^p = 1."""
    E, Z = all_elements(G)
    PE, PZ = power_arrays(G, E, Z, G.p)
    return np.nonzero(~PE.any(axis=1) & ~PZ.any(axis=1))[0]


def mho1_oracle(G: GroupDatum) -> np.ndarray:
    """Codes of the set of p-th powers."""
    E, Z = all_elements(G)
    return np.unique(codes(G, *power_arrays(G, E, Z, G.p)))
