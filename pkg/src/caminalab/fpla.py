"""Exact linear algebra over the prime field F_p.

Matrices are plain numpy integer arrays with entries in ``[0, p)``; the prime
is always passed explicitly. Everything here is elimination based, with the
lowest-index pivot rule so results are deterministic.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

MAX_PRIME = 1 << 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> None:
    if not (is_prime(p) and p % 2 == 1 and p < MAX_PRIME):
        raise ValueError(f"p must be an odd prime below {MAX_PRIME}, got {p}")


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least primitive root modulo the prime ``p``."""
    if p == 2:
        return 1
    phi = p - 1
    factors = {q for q in range(2, phi + 1) if phi % q == 0 and is_prime(q)}
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


def as_matrix(M, p: int) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A % p


def mat_mul(A, B, p: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` and its pivot columns."""
    R = as_matrix(M, p).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        inv = pow(int(R[row, col]), -1, p)
        R[row] = (R[row] * inv) % p
        factors = R[:, col].copy()
        factors[row] = 0
        if factors.any():
            R = (R - np.outer(factors, R[row])) % p
        pivots.append(col)
        row += 1
    return R, pivots


def mat_rank(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])


def kernel_basis(M, p: int) -> list[np.ndarray]:
    """Basis of the right null space, returned in reduced echelon form."""
    M = as_matrix(M, p)
    cols = M.shape[1]
    R, pivots = rref(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-R[i, f]) % p
        basis.append(v)
    if not basis:
        return []
    K, _ = rref(np.array(basis), p)
    return [K[i] for i in range(len(basis))]


def solve(M, b, p: int) -> np.ndarray | None:
    """One solution of ``M x = b`` with free variables set to zero, else None."""
    M = as_matrix(M, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    if b.shape[0] != M.shape[0]:
        raise ValueError(f"dimension mismatch: {M.shape[0]} rows vs rhs of length {b.shape[0]}")
    cols = M.shape[1]
    R, pivots = rref(np.hstack([M, b.reshape(-1, 1)]), p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, cols]
    return x


def mat_inverse(M, p: int) -> np.ndarray:
    M = as_matrix(M, p)
    d = M.shape[0]
    if M.shape != (d, d):
        raise ValueError("matrix is not square")
    R, pivots = rref(np.hstack([M, np.eye(d, dtype=np.int64)]), p)
    if pivots[:d] != list(range(d)):
        raise ValueError("matrix is singular")
    return R[:, d:].copy()


def is_invertible(M, p: int) -> bool:
    M = np.asarray(M)
    return M.shape[0] == M.shape[1] and mat_rank(M, p) == M.shape[0]


def gl_generators(d: int, p: int) -> list[np.ndarray]:
    """Elementary transvections E_ij(1), i != j, then diag(g, 1, ..., 1)."""
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                E = np.eye(d, dtype=np.int64)
                E[i, j] = 1
                gens.append(E)
    D = np.eye(d, dtype=np.int64)
    D[0, 0] = primitive_root(p)
    gens.append(D)
    return gens


def gl_order(d: int, p: int) -> int:
    order = 1
    for i in range(d):
        order *= p**d - p**i
    return order


@lru_cache(maxsize=None)
def _gl_elements(d: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    if p ** (d * d) > 10**6:
        raise ValueError(f"GL({d},{p}) too large to list")
    mats = all_vectors(d * d, p).reshape(-1, d, d)
    keep = np.array([mat_rank(m, p) == d for m in mats], dtype=bool)
    mats = mats[keep]
    invs = np.array([mat_inverse(m, p) for m in mats])
    mats.setflags(write=False)
    invs.setflags(write=False)
    return mats, invs


def gl_elements(d: int, p: int) -> np.ndarray:
    """Every element of GL(d, p), ordered by row-major entry tuple."""
    return _gl_elements(d, p)[0]


def gl_inverses(d: int, p: int) -> np.ndarray:
    """Inverses aligned with :func:`gl_elements`."""
    return _gl_elements(d, p)[1]


def projective_functionals(n: int, p: int) -> list[np.ndarray]:
    """One nonzero functional per scalar class, first nonzero coordinate 1."""
    out = []
    for v in itertools.product(range(p), repeat=n):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            out.append(np.array(v, dtype=np.int64))
    return out


@lru_cache(maxsize=None)
def _all_vectors(d: int, p: int) -> np.ndarray:
    codes = np.arange(p**d, dtype=np.int64)
    V = np.zeros((p**d, d), dtype=np.int64)
    for i in range(d - 1, -1, -1):
        V[:, i] = codes % p
        codes //= p
    V.setflags(write=False)
    return V


def all_vectors(d: int, p: int) -> np.ndarray:
    """All of F_p^d as rows, in lexicographic order (row index = code)."""
    return _all_vectors(d, p)


def encode(V, p: int) -> np.ndarray | int:
    """Vector(s) to integer codes, first coordinate most significant."""
    V = np.asarray(V, dtype=np.int64)
    d = V.shape[-1]
    weights = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    codes = (V % p) @ weights
    return int(codes) if V.ndim == 1 else codes


def decode(codes, d: int, p: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros(codes.shape + (d,), dtype=np.int64)
    c = codes.copy()
    for i in range(d - 1, -1, -1):
        out[..., i] = c % p
        c //= p
    return out
