"""Exact integer homology: Smith normal form, chain complexes, group
homology from the normalized bar resolution, and H_*(S^n/C).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

from .groups import FiniteGroup, generating_set

DEFAULT_GENERATOR_CAP = 2_000_000
CAP_ENV_VAR = "LOOPCOPROD_GENERATOR_CAP"


class NotAComplex(ValueError):
    pass


class TooLarge(ValueError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"bar resolution needs {required} generators, cap is {cap} (set {CAP_ENV_VAR})")
        self.required = required
        self.cap = cap


def generator_cap() -> int:
    return int(os.environ.get(CAP_ENV_VAR, DEFAULT_GENERATOR_CAP))


class IntegerMatrix:
    """Sparse integer matrix stored column-wise: ``cols[j] = {i: a_ij}``."""

    __slots__ = ("rows", "cols", "_cols")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        self.rows = rows
        self.cols = cols
        self._cols: dict[int, dict[int, int]] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            if v:
                self._cols.setdefault(j, {})[i] = v

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, int]]) -> "IntegerMatrix":
        m = cls(rows, len(columns))
        for j, col in enumerate(columns):
            col = {i: v for i, v in col.items() if v}
            if col:
                m._cols[j] = col
        return m

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r) if v})

    def entries(self) -> dict[tuple[int, int], int]:
        return {(i, j): v for j, col in self._cols.items() for i, v in col.items()}

    def column(self, j: int) -> dict[int, int]:
        return dict(self._cols.get(j, {}))

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for j, col in self._cols.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols.values())

    def is_zero(self) -> bool:
        return not self._cols

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = IntegerMatrix(self.rows, other.cols)
        for j, col in other._cols.items():
            acc: dict[int, int] = {}
            for k, b in col.items():
                for i, a in self._cols.get(k, {}).items():
                    acc[i] = acc.get(i, 0) + a * b
            acc = {i: v for i, v in acc.items() if v}
            if acc:
                out._cols[j] = acc
        return out

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


# -- Smith normal form --------------------------------------------------------


def _prime_powers(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(diagonal: Iterable[int]) -> list[int]:
    """Rewrite a diagonal into divisibility-chain form (ones kept, zeros last)."""
    values = [abs(d) for d in diagonal]
    zeros = values.count(0)
    nonzero = [d for d in values if d]
    exps: dict[int, list[int]] = {}
    for d in nonzero:
        for p, e in _prime_powers(d).items():
            exps.setdefault(p, []).append(e)
    size = len(nonzero)
    factors = [1] * size
    for p, es in exps.items():
        es.sort()
        for idx, e in enumerate(es):
            factors[size - len(es) + idx] *= p**e
    return factors + [0] * zeros


def _eliminate_units(cols: dict[int, dict[int, int]], rows: dict[int, set[int]]) -> int:
    """Pivot on +-1 entries until none remain; returns the number of pivots.

    A unit pivot at (r, c) is cleared with column operations on row r,
    after which row r and column c split off as a 1x1 block.
    """
    pivots = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda j: len(cols[j])):
            col = cols.get(c)
            if col is None:
                continue
            best = None
            for r, v in col.items():
                if v == 1 or v == -1:
                    if best is None or len(rows[r]) < len(rows[best]):
                        best = r
            if best is None:
                continue
            r = best
            u = col[r]
            for c2 in list(rows[r]):
                if c2 == c:
                    continue
                other = cols[c2]
                f = other[r] * u
                for i, v in col.items():
                    nv = other.get(i, 0) - f * v
                    if nv:
                        if i not in other:
                            rows[i].add(c2)
                        other[i] = nv
                    else:
                        del other[i]
                        rows[i].discard(c2)
                if not other:
                    del cols[c2]
            for i in col:
                rows[i].discard(c)
            del cols[c]
            del rows[r]
            pivots += 1
            progress = True
    return pivots


def _dense_snf_diagonal(a: list[list[int]]) -> list[int]:
    """Diagonalize a small dense matrix in place by gcd row/column steps."""
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for i in range(t, m):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        done = False
            if done:
                break
            # a smaller remainder sits in row t or column t; make it the pivot
            best = None
            for i in range(t + 1, m):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(best[2])):
                    best = (i, t, a[i][t])
            for j in range(t + 1, n):
                if a[t][j] and (best is None or abs(a[t][j]) < abs(best[2])):
                    best = (t, j, a[t][j])
            i, j, _ = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(a[t][t])
        t += 1
    return diag


def smith_normal_form(A: IntegerMatrix) -> list[int]:
    """Invariant factors d1 | d2 | ... of ``A`` (length min(rows, cols)).

    Unit pivots are eliminated sparsely first; whatever is left is
    diagonalized densely. Transforms are not kept.
    """
    cols = {j: dict(c) for j, c in A._cols.items()}
    rows: dict[int, set[int]] = {}
    for j, c in cols.items():
        for i in c:
            rows.setdefault(i, set()).add(j)
    ones = _eliminate_units(cols, rows)
    live_rows = sorted(i for i, s in rows.items() if s)
    live_cols = sorted(cols)
    diag: list[int] = [1] * ones
    if live_cols:
        ridx = {r: k for k, r in enumerate(live_rows)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for k, j in enumerate(live_cols):
            for i, v in cols[j].items():
                dense[ridx[i]][k] = v
        diag += _dense_snf_diagonal(dense)
    size = min(A.rows, A.cols)
    diag += [0] * (size - len(diag))
    return invariant_factors(diag)


def rank(A: IntegerMatrix) -> int:
    return sum(1 for d in smith_normal_form(A) if d)


# -- graded abelian groups ----------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank + Z/t1 + ... with t1 | t2 | ... and every ti >= 2."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(invariant_factors(self.torsion))
        object.__setattr__(self, "torsion", tuple(x for x in t if x != 1))
        if any(x == 0 for x in self.torsion):
            raise ValueError("torsion coefficients must be non-zero")

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup(self.rank + other.rank, self.torsion + other.torsion)

    def primary_decomposition(self) -> list[int]:
        """Prime-power orders of the cyclic torsion summands."""
        out = []
        for t in self.torsion:
            out.extend(p**e for p, e in sorted(_prime_powers(t).items()))
        return sorted(out)

    def render(self, primary: bool = False) -> str:
        parts = ["Z"] * self.rank if self.rank <= 1 else [f"Z^{self.rank}"]
        parts += [f"Z/{t}" for t in (self.primary_decomposition() if primary else self.torsion)]
        return "+".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


Z = AbelianGroup(1)
ZERO = AbelianGroup()


def cyclic_group(order: int) -> AbelianGroup:
    return AbelianGroup(0, (order,)) if order > 1 else ZERO


@dataclass(frozen=True)
class GradedAbelianGroup:
    """Per-degree abelian groups for degrees 0..max_degree."""

    groups: tuple[AbelianGroup, ...] = field(default=())

    @property
    def max_degree(self) -> int:
        return len(self.groups) - 1

    def __getitem__(self, d: int) -> AbelianGroup:
        if 0 <= d < len(self.groups):
            return self.groups[d]
        if d < 0:
            return ZERO
        raise IndexError(f"degree {d} beyond computed range {self.max_degree}")

    def __iter__(self):
        return iter(self.groups)

    def __len__(self) -> int:
        return len(self.groups)

    def to_json(self) -> list[dict]:
        return [{"degree": d, **g.to_json()} for d, g in enumerate(self.groups)]

    def __str__(self) -> str:
        return ", ".join(str(g) for g in self.groups)


# -- chain complexes ----------------------------------------------------------


def chain_homology(boundaries: Sequence[IntegerMatrix], max_deg: int | None = None) -> GradedAbelianGroup:
    """Homology of C_0 <- C_1 <- ... where ``boundaries[d-1]`` is d_d: C_d -> C_{d-1}.

    Degrees past the last boundary are treated as having a zero incoming
    map, so H_top is the kernel of the top boundary.
    """
    if not boundaries:
        raise ValueError("need at least one boundary map")
    for d in range(1, len(boundaries)):
        lower, upper = boundaries[d - 1], boundaries[d]
        if lower.cols != upper.rows:
            raise NotAComplex(f"d_{d} has {lower.cols} columns but d_{d + 1} has {upper.rows} rows")
        if not (lower @ upper).is_zero():
            raise NotAComplex(f"d_{d} o d_{d + 1} != 0")
    top = len(boundaries)
    if max_deg is None:
        max_deg = top
    if max_deg > top:
        raise ValueError(f"max_deg {max_deg} needs boundaries up to d_{max_deg}")
    dims = [boundaries[0].rows] + [b.cols for b in boundaries]
    snfs = [smith_normal_form(b) for b in boundaries]
    ranks = [0] + [sum(1 for x in s if x) for s in snfs] + [0]
    groups = []
    for d in range(max_deg + 1):
        free = dims[d] - ranks[d] - ranks[d + 1]
        torsion = tuple(x for x in snfs[d] if x > 1) if d < top else ()
        groups.append(AbelianGroup(free, torsion))
    return GradedAbelianGroup(tuple(groups))


# -- group homology -----------------------------------------------------------


def bar_boundary(G: FiniteGroup, d: int, first_letters: Iterable[int] | None = None) -> IntegerMatrix:
    """d_d of the normalized bar complex Z (x)_G B(G), trivial coefficients.

    Degree-d generators are d-tuples of non-identity elements; row indices
    use base (|G|-1) digits with the first entry most significant. With
    ``first_letters`` only the columns whose first entry is listed are
    built, in order.
    """
    base = G.order - 1
    table = G.table
    nontrivial = range(1, G.order)
    firsts = nontrivial if first_letters is None else list(first_letters)
    rows = base ** (d - 1)
    columns = []
    for g1 in firsts:
        for rest in product(nontrivial, repeat=d - 1):
            tup = (g1,) + rest
            col: dict[int, int] = {}

            def add(face, sign):
                idx = 0
                for x in face:
                    if x == 0:
                        return
                    idx = idx * base + (x - 1)
                col[idx] = col.get(idx, 0) + sign

            add(tup[1:], 1)
            for i in range(d - 1):
                add(tup[:i] + (table[tup[i]][tup[i + 1]],) + tup[i + 2 :], -1 if i % 2 == 0 else 1)
            add(tup[:-1], -1 if d % 2 else 1)
            columns.append(col)
    return IntegerMatrix.from_columns(rows, columns)


def spanning_bar_boundary(G: FiniteGroup, d: int) -> IntegerMatrix:
    """Columns of d_d whose first entry is a generator; same image lattice.

    For a cell s and generator a, d(d(a, s)) = 0 writes column s as an
    integer combination of columns starting with a and the column of
    (a s_1, s_2, ...). Choosing a so that a s_1 is one step nearer the
    identity (left multiplication by generators) makes the rewriting
    terminate, so the generator columns span every column.
    """
    return bar_boundary(G, d, generating_set(G))


def group_homology(G: FiniteGroup, max_deg: int, cap: int | None = None, full: bool = False) -> GradedAbelianGroup:
    """H_d(G; Z) for 0 <= d <= max_deg.

    ``full=True`` builds every bar column instead of the spanning subset
    (slower; same answer).
    """
    cap = generator_cap() if cap is None else cap
    if G.order == 1:
        return GradedAbelianGroup((Z,) + (ZERO,) * max_deg)
    required = (G.order - 1) ** (max_deg + 1)
    if required > cap:
        raise TooLarge(required, cap)
    build = bar_boundary if full else spanning_bar_boundary
    boundaries = [build(G, d) for d in range(1, max_deg + 2)]
    dims = [1] + [(G.order - 1) ** d for d in range(1, max_deg + 2)]
    return _homology_from_spanning(boundaries, dims, max_deg)


def _homology_from_spanning(boundaries: Sequence[IntegerMatrix], dims: Sequence[int], max_deg: int) -> GradedAbelianGroup:
    """Like :func:`chain_homology` when each matrix may omit columns that
    lie in the span of the kept ones; ``dims`` gives the true C_d ranks.
    """
    snfs = [smith_normal_form(b) for b in boundaries]
    ranks = [0] + [sum(1 for x in s if x) for s in snfs]
    groups = []
    for d in range(max_deg + 1):
        free = dims[d] - ranks[d] - ranks[d + 1]
        groups.append(AbelianGroup(free, tuple(x for x in snfs[d] if x > 1)))
    return GradedAbelianGroup(tuple(groups))


def cyclic_periodic_homology(m: int, max_deg: int) -> GradedAbelianGroup:
    """H_*(Z/m) from the period-2 resolution: boundaries alternate g-1 and the norm.

    After tensoring with Z these become multiplication by 0 and by m.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    boundaries = [IntegerMatrix(1, 1, {(0, 0): 0 if d % 2 else m}) for d in range(1, max_deg + 2)]
    return chain_homology(boundaries, max_deg)


def quotient_space_homology(n: int, C: FiniteGroup, cap: int | None = None) -> GradedAbelianGroup:
    """H_*(S^n/C): Z, H_1(C), ..., H_{n-1}(C), Z."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if C.order > 1 and n % 2 == 0:
        raise ValueError("non-trivial group needs odd n")
    if C.is_cyclic():
        inner = cyclic_periodic_homology(C.order, n - 1)
    else:
        inner = group_homology(C, n - 1, cap)
    return GradedAbelianGroup((Z,) + tuple(inner.groups[1:n]) + (Z,))


def euler_characteristic(dims: Sequence[int]) -> int:
    return sum((-1) ** d * c for d, c in enumerate(dims))

