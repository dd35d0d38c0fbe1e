"""Character tables of Camina class-2 groups over Z[zeta_p].

Values are exact. A cyclotomic integer is a coefficient vector on
1, zeta, ..., zeta^(p-2); zeta^(p-1) is always rewritten as
-(1 + zeta + ... + zeta^(p-2)), which makes the representation unique.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from . import group as gc
from .group import GroupDatum


class PrimeMismatch(ValueError):
    pass


def reduce_full(c: np.ndarray) -> np.ndarray:
    """Length-p coefficient vectors (last axis) to canonical length p-1."""
    c = np.asarray(c, dtype=np.int64)
    return c[..., :-1] - c[..., -1:]


def expand(c: np.ndarray) -> np.ndarray:
    """Canonical vectors to length p (zero coefficient on zeta^(p-1))."""
    c = np.asarray(c, dtype=np.int64)
    return np.concatenate([c, np.zeros(c.shape[:-1] + (1,), dtype=np.int64)], axis=-1)


@dataclass(frozen=True)
class Cyclotomic:
    p: int
    coeffs: tuple[int, ...]

    @classmethod
    def integer(cls, p: int, a: int) -> Cyclotomic:
        return cls(p, (a,) + (0,) * (p - 2))

    @classmethod
    def zeta(cls, p: int, k: int = 1, scale: int = 1) -> Cyclotomic:
        """scale * zeta^k."""
        full = np.zeros(p, dtype=np.int64)
        full[k % p] = scale
        return cls(p, tuple(int(x) for x in reduce_full(full)))

    @classmethod
    def from_full(cls, p: int, full) -> Cyclotomic:
        return cls(p, tuple(int(x) for x in reduce_full(np.asarray(full))))

    def _same(self, other: Cyclotomic) -> None:
        if not isinstance(other, Cyclotomic):
            raise TypeError(f"expected Cyclotomic, got {type(other).__name__}")
        if other.p != self.p:
            raise PrimeMismatch(f"cannot combine values for p={self.p} and p={other.p}")

    def __add__(self, other: Cyclotomic) -> Cyclotomic:
        return cyc_add(self, other)

    def __mul__(self, other: Cyclotomic) -> Cyclotomic:
        return cyc_mul(self, other)

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.p, tuple(-x for x in self.coeffs))

    def conj(self) -> Cyclotomic:
        return cyc_conj(self)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        return format_cyclotomic(self.coeffs)


def cyc_add(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
    x._same(y)
    return Cyclotomic(x.p, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))


def cyc_mul(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
    x._same(y)
    p = x.p
    full = [0] * p
    for i, a in enumerate(x.coeffs):
        if a:
            for j, b in enumerate(y.coeffs):
                full[(i + j) % p] += a * b
    return Cyclotomic.from_full(p, full)


def cyc_conj(x: Cyclotomic) -> Cyclotomic:
    p = x.p
    full = [0] * p
    for i, a in enumerate(x.coeffs):
        full[(-i) % p] += a
    return Cyclotomic.from_full(p, full)


def format_cyclotomic(coeffs) -> str:
    """c0+c1z+c2z^2+... with every term written, z standing for zeta_p."""
    out = str(int(coeffs[0]))
    for k, c in enumerate(coeffs[1:], start=1):
        c = int(c)
        sign = "-" if c < 0 else "+"
        mon = "z" if k == 1 else f"z^{k}"
        out += f"{sign}{abs(c)}{mon}"
    return out


def parse_cyclotomic(text: str, p: int) -> Cyclotomic:
    terms = re.findall(r"([+-]?\d+)(z(?:\^(\d+))?)?", text.replace(" ", ""))
    coeffs = [0] * p
    for num, mon, exp in terms:
        k = 0 if not mon else int(exp or 1)
        coeffs[k] += int(num)
    return Cyclotomic.from_full(p, coeffs)


# -- labels ------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class ClassLabel:
    rank: int  # 0 identity, 1 central, 2 noncentral
    vec: tuple[int, ...] = ()

    @property
    def kind(self) -> str:
        return ("identity", "central", "noncentral")[self.rank]

    def __str__(self) -> str:
        if self.rank == 0:
            return "1"
        tag = "Z" if self.rank == 1 else "N"
        return f"{tag}({','.join(map(str, self.vec))})"


@dataclass(frozen=True, order=True)
class CharLabel:
    rank: int  # 0 linear, 1 nonlinear
    vec: tuple[int, ...] = ()

    @property
    def kind(self) -> str:
        return ("linear", "nonlinear")[self.rank]

    def __str__(self) -> str:
        tag = "L" if self.rank == 0 else "X"
        return f"{tag}({','.join(map(str, self.vec))})"


IDENTITY = ClassLabel(0)


def central(z) -> ClassLabel:
    return ClassLabel(1, tuple(int(x) for x in z))


def noncentral(e) -> ClassLabel:
    return ClassLabel(2, tuple(int(x) for x in e))


def class_of(G: GroupDatum, x: gc.Element) -> ClassLabel:
    """Class label of an element of a Camina datum."""
    e, z = x
    if any(e):
        return noncentral(e)
    if any(z):
        return central(z)
    return IDENTITY


# -- tables ------------------------------------------------------------------


class NotCamina(ValueError):
    pass


@dataclass
class CharacterTable:
    p: int
    order: int
    classes: list[ClassLabel]
    chars: list[CharLabel]
    values: np.ndarray  # (chars, classes, p - 1) canonical coefficients
    class_sizes: list[int]
    power_maps: list[list[int]]  # power_maps[k][c] = index of the class of x^k
    _class_index: dict = field(default=None, repr=False)

    def __post_init__(self):
        self._class_index = {c: i for i, c in enumerate(self.classes)}

    def __len__(self) -> int:
        return len(self.classes)

    def index(self, label: ClassLabel) -> int:
        return self._class_index[label]

    def value(self, i: int, j: int) -> Cyclotomic:
        return Cyclotomic(self.p, tuple(int(x) for x in self.values[i, j]))

    def row(self, i: int) -> list[Cyclotomic]:
        return [self.value(i, j) for j in range(len(self.classes))]

    def degrees(self) -> list[int]:
        j = self.index(IDENTITY)
        return [int(self.values[i, j, 0]) for i in range(len(self.chars))]

    def centralizer_orders(self) -> list[int]:
        return [self.order // s for s in self.class_sizes]

    def copy(self) -> CharacterTable:
        return CharacterTable(self.p, self.order, list(self.classes), list(self.chars), self.values.copy(),
                              list(self.class_sizes), [list(m) for m in self.power_maps])


def _vectors(d: int, p: int, nonzero: bool = False) -> list[tuple[int, ...]]:
    vs = list(itertools.product(range(p), repeat=d))
    return [v for v in vs if any(v)] if nonzero else vs


def build_table(G: GroupDatum) -> CharacterTable:
    """Character table with canonical class and character orderings."""
    if not gc.is_camina(G):
        raise NotCamina("character tables are only built for Camina data")
    p, r, n = G.p, G.r, G.n
    m = r // 2
    deg = p**m
    classes = [IDENTITY] + [central(z) for z in _vectors(n, p, True)] + [noncentral(e) for e in _vectors(r, p, True)]
    chars = [CharLabel(0, s) for s in _vectors(r, p)] + [CharLabel(1, lam) for lam in _vectors(n, p, True)]
    nz = p**n - 1

    C = np.array([c.vec for c in classes[1 : 1 + nz]], dtype=np.int64).reshape(nz, n)
    N = np.array([c.vec for c in classes[1 + nz :]], dtype=np.int64).reshape(-1, r)
    S = np.array([c.vec for c in chars[: p**r]], dtype=np.int64).reshape(-1, r)
    L = np.array([c.vec for c in chars[p**r :]], dtype=np.int64).reshape(nz, n)

    k = len(classes)
    full = np.zeros((len(chars), k, p), dtype=np.int64)
    nl = p**r
    # linear characters: 1 on G', zeta^(s.e) on the coset e G'
    full[:nl, : 1 + nz, 0] = 1
    exps = (S @ N.T) % p
    rows, cols = np.indices(exps.shape)
    full[rows, cols + 1 + nz, exps] = 1
    # nonlinear characters: degree on 1, degree * zeta^(lam.z) on G', zero off G'
    full[nl:, 0, 0] = deg
    exps = (L @ C.T) % p
    rows, cols = np.indices(exps.shape)
    full[rows + nl, cols + 1, exps] = deg

    sizes = [1] * (1 + nz) + [p**n] * (len(classes) - 1 - nz)
    index = {c: i for i, c in enumerate(classes)}
    power_maps = []
    for kk in range(p * p):
        pm = []
        for c in classes:
            rep = (c.vec if c.rank == 2 else (0,) * r, c.vec if c.rank == 1 else (0,) * n)
            pm.append(index[class_of(G, gc.power(G, rep, kk))])
        power_maps.append(pm)
    return CharacterTable(p, G.order, classes, chars, reduce_full(full), sizes, power_maps)


# -- certification -------------------------------------------------------


def _products(X: np.ndarray, Y: np.ndarray, weights: np.ndarray, p: int) -> np.ndarray:
    """Gram matrix sum_c w_c X[a, c] * conj(Y[b, c]) in Z[x]/(x^p - 1)."""
    Xf = expand(X)
    Yf = expand(Y)
    Yc = Yf[..., (-np.arange(p)) % p]
    out = np.zeros((X.shape[0], Y.shape[0], p), dtype=np.int64)
    for a in range(p):
        Xa = Xf[:, :, a] * weights[None, :]
        if not Xa.any():
            continue
        for b in range(p):
            out[:, :, (a + b) % p] += Xa @ Yc[:, :, b].T
    return reduce_full(out)


def orthogonality_failure(T: CharacterTable) -> tuple[str, int, int] | None:
    """First failing (kind, i, j) for the row or column relations, else None."""
    p = T.p
    k = len(T.classes)
    if T.values.shape[:2] != (len(T.chars), k) or len(T.chars) != k:
        return ("shape", len(T.chars), k)
    sizes = np.array(T.class_sizes, dtype=np.int64)
    rows = _products(T.values, T.values, sizes, p)
    expect = np.zeros_like(rows)
    expect[np.arange(k), np.arange(k), 0] = T.order
    bad = np.argwhere((rows != expect).any(axis=2))
    if bad.size:
        return ("row", int(bad[0][0]), int(bad[0][1]))
    V = T.values.transpose(1, 0, 2)
    cols = _products(V, V, np.ones(k, dtype=np.int64), p)
    expect = np.zeros_like(cols)
    expect[np.arange(k), np.arange(k), 0] = np.array(T.centralizer_orders(), dtype=np.int64)
    bad = np.argwhere((cols != expect).any(axis=2))
    if bad.size:
        return ("column", int(bad[0][0]), int(bad[0][1]))
    return None


def check_orthogonality(T: CharacterTable) -> bool:
    return orthogonality_failure(T) is None


def inner_product_times_order(T: CharacterTable, x: np.ndarray, y: np.ndarray) -> Cyclotomic:
    """|G| <x, y> for class functions given as (classes, p-1) arrays."""
    sizes = np.array(T.class_sizes, dtype=np.int64)
    g = _products(x[None], y[None], sizes, T.p)[0, 0]
    return Cyclotomic(T.p, tuple(int(v) for v in g))


# -- brute-force induction ---------------------------------------------------


def induced_from_center_oracle(G: GroupDatum, lam, table: CharacterTable | None = None) -> list[Cyclotomic]:
    """lam induced from G' = Z(G) to G, evaluated on explicit conjugacy classes.

    Uses lam^G(g) = (1/|Z|) sum_{x in G} lam0(x^-1 g x), where lam0 is lam on Z
    and zero elsewhere; the result is listed in the table's class order.
    """
    if not gc.is_camina(G):
        raise NotCamina("induction oracle expects a Camina datum")
    lam = np.asarray(lam, dtype=np.int64)
    if lam.shape != (G.n,) or not (lam % G.p).any():
        raise ValueError("lam must be a nonzero functional on F_p^n")
    table = table or build_table(G)
    p = G.p
    E, Z = gc.all_elements(G)
    IE, IZ = gc.inverse_arrays(G, E, Z)
    center_order = p**G.n
    out: list[Cyclotomic | None] = [None] * len(table.classes)
    for cls in gc.conjugacy_classes_oracle(G):
        g = cls[0]
        gE = np.broadcast_to(E[g], E.shape)
        gZ = np.broadcast_to(Z[g], Z.shape)
        CE, CZ = gc.multiply_arrays(G, *gc.multiply_arrays(G, IE, IZ, gE, gZ), E, Z)
        inside = ~CE.any(axis=1)
        full = np.bincount((CZ[inside] @ lam) % p, minlength=p)
        canon = reduce_full(full)
        if (canon % center_order).any():
            raise ArithmeticError("induced value is not divisible by |Z|")
        label = class_of(G, (tuple(E[g]), tuple(Z[g])))
        out[table.index(label)] = Cyclotomic(p, tuple(int(v) for v in canon // center_order))
    if any(v is None for v in out):
        raise ArithmeticError("explicit classes do not match the table's class labels")
    return out
