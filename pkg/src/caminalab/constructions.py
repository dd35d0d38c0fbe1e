"""Standard families of Camina data, plus seeded random data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import fpla
from .group import GroupDatum, is_camina, pairs

MASK64 = (1 << 64) - 1
MAX_FIELD_DEGREE = 3


# -- prime-power fields ------------------------------------------------------


def _poly_mulmod(a: tuple[int, ...], b: tuple[int, ...], modulus: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Multiply coefficient vectors (constant term first) modulo a monic polynomial.

    ``modulus`` lists c_0..c_{m-1} of x^m + c_{m-1} x^{m-1} + ... + c_0.
    """
    m = len(modulus)
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(2 * m - 2, m - 1, -1):
        c = prod[d] % p
        if c:
            for k in range(m):
                prod[d - m + k] -= c * modulus[k]
        prod[d] = 0
    return tuple(x % p for x in prod[:m])


def _is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    # degree <= 3: irreducible iff no root
    m = len(modulus)
    if m == 1:
        return True
    if m > MAX_FIELD_DEGREE:
        raise ValueError("irreducibility test only covers degree <= 3")
    for x in range(p):
        val = pow(x, m, p) + sum(c * pow(x, k, p) for k, c in enumerate(modulus))
        if val % p == 0:
            return False
    return True


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree m.

    Polynomials are compared by their coefficient list from x^(m-1) down to
    the constant term; the result is returned constant term first.
    """
    for high_first in itertools.product(range(p), repeat=m):
        modulus = tuple(reversed(high_first))
        if _is_irreducible(modulus, p):
            return modulus
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


@dataclass(frozen=True)
class FieldTable:
    p: int
    m: int
    modulus: tuple[int, ...]
    mul: np.ndarray  # q x q table of element codes

    @property
    def size(self) -> int:
        return self.p**self.m

    def elements(self) -> np.ndarray:
        """Coefficient vectors (constant term first), row index = code."""
        return fpla.decode(np.arange(self.size), self.m, self.p)[:, ::-1]

    def code(self, coeffs) -> int:
        return fpla.encode(np.asarray(coeffs)[::-1], self.p)

    def product(self, a, b) -> np.ndarray:
        return self.elements()[self.mul[self.code(a), self.code(b)]]


@lru_cache(maxsize=None)
def field_table(p: int, m: int) -> FieldTable:
    fpla.check_prime(p)
    if not 1 <= m <= MAX_FIELD_DEGREE:
        raise ValueError(f"field degree must lie in [1, {MAX_FIELD_DEGREE}], got {m}")
    modulus = least_irreducible(p, m)
    q = p**m
    elems = [tuple(int(x) for x in v[::-1]) for v in fpla.decode(np.arange(q), m, p)]
    index = {v: i for i, v in enumerate(elems)}
    mul = np.zeros((q, q), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            if m == 1:
                mul[i, j] = index[((a[0] * b[0]) % p,)]
            else:
                mul[i, j] = index[_poly_mulmod(a, b, modulus, p)]
    mul.setflags(write=False)
    return FieldTable(p, m, modulus, mul)


# -- families ----------------------------------------------------------------


def extraspecial(p: int, m: int, variant: str = "expP") -> GroupDatum:
    """Extraspecial group of order p^(2m+1), exponent p ("expP") or p^2 ("expP2")."""
    fpla.check_prime(p)
    if m < 1:
        raise ValueError("m must be at least 1")
    if variant not in ("expP", "expP2"):
        raise ValueError(f"unknown variant {variant!r}")
    B = {(m + i, i): (1,) for i in range(m)}
    mu = np.zeros((1, 2 * m), dtype=np.int64)
    if variant == "expP2":
        mu[0, 0] = 1
    return GroupDatum.build(p, 2 * m, 1, B, mu)


def field_camina(p: int, m: int) -> GroupDatum:
    """Heisenberg group over GF(p^m), viewed as a group of order p^(3m).

    Generators a_1..a_m then b_1..b_m; [b_j, a_i] is the field product of
    basis elements x^(i-1) x^(j-1) written in coordinates.
    """
    F = field_table(p, m)
    basis = np.eye(m, dtype=np.int64)
    B = {}
    for i in range(m):
        for j in range(m):
            B[(m + j, i)] = tuple(int(x) for x in F.product(basis[i], basis[j]))
    return GroupDatum.build(p, 2 * m, m, B)


def canonical_mu(n: int, r: int, rank: int) -> np.ndarray:
    """n x r matrix sending e_i to z_i for i < rank and everything else to 0."""
    if not 0 <= rank <= min(n, r):
        raise ValueError(f"mu rank must lie in [0, {min(n, r)}], got {rank}")
    M = np.zeros((n, r), dtype=np.int64)
    for i in range(rank):
        M[i, i] = 1
    return M


def with_mu(G: GroupDatum, M) -> GroupDatum:
    M = np.asarray(M, dtype=np.int64)
    if M.shape != (G.n, G.r):
        raise ValueError(f"mu must have shape ({G.n}, {G.r}), got {M.shape}")
    return GroupDatum.build(G.p, G.r, G.n, G.B_array, M)


# -- seeded random data --------------------------------------------------


class SplitMix64:
    """The splitmix64 generator (Steele, Lea and Flood)."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        return self.next() % bound


def stream_seed(seed: int, p: int, r: int, n: int) -> int:
    """Fold (p, r, n) into the seed: one splitmix64 step per parameter."""
    s = seed & MASK64
    for v in (p, r, n):
        s = SplitMix64(s ^ v).next()
    return s


class RetryExhausted(RuntimeError):
    pass


def random_datum(p: int, r: int, n: int, seed: int, require_camina: bool = False,
                 max_tries: int = 1000) -> GroupDatum:
    """Datum with entries drawn from splitmix64.

    Draw order: B pairs in lexicographic order (each coordinate in turn),
    then mu column by column. With ``require_camina`` further data are drawn
    from the same stream until one is Camina.
    """
    fpla.check_prime(p)
    rng = SplitMix64(stream_seed(seed, p, r, n))
    npairs = len(pairs(r))
    for attempt in range(1, max_tries + 1):
        B = [[rng.below(p) for _ in range(n)] for _ in range(npairs)]
        cols = [[rng.below(p) for _ in range(n)] for _ in range(r)]
        mu = np.array(cols, dtype=np.int64).reshape(r, n).T
        G = GroupDatum.build(p, r, n, np.array(B, dtype=np.int64).reshape(npairs, n), mu)
        if not require_camina or is_camina(G):
            return G
    raise RetryExhausted(f"no Camina datum for p={p}, r={r}, n={n} after {max_tries} draws "
                         f"(seed {seed}, 0 of {max_tries} accepted)")
