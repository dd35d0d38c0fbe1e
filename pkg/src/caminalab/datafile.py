"""The line-oriented datum file format.

    caminalab 1
    p 3
    r 2
    n 1
    B 2 1 1        # [g_2, g_1] = z_1
    mu 1 0         # g_1^p has central part 0

Generator indices are 1-based. Missing B and mu lines mean zero; the
canonical form written by :func:`serialize` lists every pair and column.
"""

from __future__ import annotations

from pathlib import Path

from .group import GroupDatum, pairs

HEADER = "caminalab 1"


class DatumParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise DatumParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse(text: str) -> GroupDatum:
    header_seen = False
    scalars: dict[str, int] = {}
    b_lines: list[tuple[int, list[int]]] = []
    mu_lines: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            if line.split() != HEADER.split():
                raise DatumParseError(f"expected header {HEADER!r}", lineno)
            header_seen = True
            continue
        key, *rest = line.split()
        if key in ("p", "r", "n"):
            if len(rest) != 1:
                raise DatumParseError(f"'{key}' takes exactly one value", lineno)
            if key in scalars:
                raise DatumParseError(f"'{key}' given twice", lineno)
            scalars[key] = _ints(rest, lineno)[0]
        elif key == "B":
            b_lines.append((lineno, _ints(rest, lineno)))
        elif key == "mu":
            mu_lines.append((lineno, _ints(rest, lineno)))
        else:
            raise DatumParseError(f"unknown keyword {key!r}", lineno)
    if not header_seen:
        raise DatumParseError(f"missing header {HEADER!r}")
    for key in ("p", "r", "n"):
        if key not in scalars:
            raise DatumParseError(f"missing '{key}' line")
    p, r, n = scalars["p"], scalars["r"], scalars["n"]
    if p < 2 or r < 1 or n < 0:
        raise DatumParseError(f"invalid parameters p={p}, r={r}, n={n}")

    def entries(vals: list[int], lineno: int) -> tuple[int, ...]:
        if len(vals) != n:
            raise DatumParseError(f"expected {n} entries, got {len(vals)}", lineno)
        bad = [v for v in vals if not 0 <= v < p]
        if bad:
            raise DatumParseError(f"entry {bad[0]} is not reduced mod {p}", lineno)
        return tuple(vals)

    B: dict[tuple[int, int], tuple[int, ...]] = {}
    for lineno, vals in b_lines:
        if len(vals) < 2:
            raise DatumParseError("B line needs indices i j", lineno)
        i, j = vals[0], vals[1]
        if not 1 <= j < i <= r:
            raise DatumParseError(f"B indices must satisfy 1 <= j < i <= {r}, got {i} {j}", lineno)
        if (i - 1, j - 1) in B:
            raise DatumParseError(f"B {i} {j} given twice", lineno)
        B[(i - 1, j - 1)] = entries(vals[2:], lineno)
    mu: dict[int, tuple[int, ...]] = {}
    for lineno, vals in mu_lines:
        if not vals:
            raise DatumParseError("mu line needs an index", lineno)
        i = vals[0]
        if not 1 <= i <= r:
            raise DatumParseError(f"mu index must lie in [1, {r}], got {i}", lineno)
        if i - 1 in mu:
            raise DatumParseError(f"mu {i} given twice", lineno)
        mu[i - 1] = entries(vals[1:], lineno)
    Bt = tuple(B.get(pr, (0,) * n) for pr in pairs(r))
    mut = tuple(mu.get(i, (0,) * n) for i in range(r))
    return GroupDatum(p, r, n, Bt, mut)


def serialize(G: GroupDatum) -> str:
    lines = [HEADER, f"p {G.p}", f"r {G.r}", f"n {G.n}"]
    for (i, j), v in zip(pairs(G.r), G.B):
        lines.append(" ".join(["B", str(i + 1), str(j + 1), *map(str, v)]))
    for i, v in enumerate(G.mu):
        lines.append(" ".join(["mu", str(i + 1), *map(str, v)]))
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> GroupDatum:
    return parse(Path(path).read_text(encoding="utf-8"))


def dump(G: GroupDatum, path: str | Path) -> None:
    Path(path).write_text(serialize(G), encoding="utf-8")
