"""Finite groups given by multiplication tables.

Elements are plain ``int`` indices into the table; index 0 is always the
identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence


class GroupTableError(ValueError):
    """Base class for rejected multiplication tables."""


class MalformedTable(GroupTableError):
    pass


class NoIdentity(GroupTableError):
    pass


class MissingInverse(GroupTableError):
    pass


class NonAssociative(GroupTableError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A validated finite group.

    ``table[a][b]`` is the index of ``a*b``. Construct through
    :func:`from_table` or the family builders; the constructor itself
    trusts its input.
    """

    name: str
    table: tuple[tuple[int, ...], ...]
    inverses: tuple[int, ...] = field(repr=False)

    identity = 0

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conjugate(self, a: int, by: int) -> int:
        """Return ``by * a * by^-1``."""
        t = self.table
        return t[t[by][a]][self.inverses[by]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in range(a))

    def is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.order for a in self.elements)

    def check_element(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.order:
            raise ValueError(f"element {a!r} not in {self.name} (order {self.order})")
        return a

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def to_dict(self) -> dict:
        return {"name": self.name, "order": self.order, "table": [list(r) for r in self.table]}


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a group in its own right plus its embedding.

    ``embedding[i]`` is the parent index of subgroup element ``i``.
    """

    group: FiniteGroup
    embedding: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.group.order


def _validate(table: Sequence[Sequence[int]], order: int | None) -> list[list[int]]:
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0:
        raise MalformedTable("empty table")
    if order is not None and order != n:
        raise MalformedTable(f"declared order {order} but table has {n} rows")
    for a, row in enumerate(rows):
        if len(row) != n:
            raise MalformedTable(f"row {a} has length {len(row)}, expected {n}")
        for b, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise MalformedTable(f"entry ({a}, {b}) = {v!r} is not an element index")
    return rows


def _find_identity(rows: list[list[int]]) -> int:
    n = len(rows)
    for e in range(n):
        if all(rows[e][a] == a and rows[a][e] == a for a in range(n)):
            return e
    raise NoIdentity("no element is a two-sided identity")


def from_table(table: Sequence[Sequence[int]], name: str = "G", order: int | None = None) -> FiniteGroup:
    """Validate an explicit multiplication table and build a group.

    The identity is moved to index 0 by swapping labels. Validation is
    exhaustive, including the O(order^3) associativity scan.
    """
    rows = _validate(table, order)
    n = len(rows)
    e = _find_identity(rows)
    if e != 0:
        swap = list(range(n))
        swap[0], swap[e] = e, 0
        relabelled = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                relabelled[swap[a]][swap[b]] = swap[rows[a][b]]
        rows = relabelled

    inverses = []
    for a in range(n):
        for b in range(n):
            if rows[a][b] == 0 and rows[b][a] == 0:
                inverses.append(b)
                break
        else:
            raise MissingInverse(f"element {a} has no two-sided inverse")

    for a in range(n):
        if len(set(rows[a])) != n:
            raise MalformedTable(f"row {a} is not a permutation")
        if len({rows[b][a] for b in range(n)}) != n:
            raise MalformedTable(f"column {a} is not a permutation")

    for a in range(n):
        ra = rows[a]
        for b in range(n):
            ab = ra[b]
            rb = rows[b]
            rab = rows[ab]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    raise NonAssociative(f"(a*b)*c != a*(b*c) for (a, b, c) = ({a}, {b}, {c})")

    return FiniteGroup(name=name, table=tuple(tuple(r) for r in rows), inverses=tuple(inverses))


def cyclic(m: int) -> FiniteGroup:
    if m < 1:
        raise ValueError(f"cyclic group needs m >= 1, got {m}")
    table = [[(a + b) % m for b in range(m)] for a in range(m)]
    return from_table(table, name="trivial" if m == 1 else f"Z/{m}")


def trivial() -> FiniteGroup:
    return cyclic(1)


def quaternion(order: int) -> FiniteGroup:
    """Generalized quaternion (dicyclic) group Q_{4m} of the given order.

    Presentation <a, b | a^{2m} = 1, b^2 = a^m, b^-1 a b = a^-1>, with
    element ``a^i b^j`` stored at index ``i + 2m*j``.
    """
    if order % 4 or order < 8:
        raise ValueError(f"quaternion order must be a multiple of 4 and >= 8, got {order}")
    m = order // 4
    n2 = 2 * m

    def mul(x: int, y: int) -> int:
        i, j = x % n2, x // n2
        k, l = y % n2, y // n2
        if j == 0:
            return (i + k) % n2 + n2 * l
        if l == 0:
            return (i - k) % n2 + n2
        return (i - k + m) % n2

    table = [[mul(x, y) for y in range(order)] for x in range(order)]
    return from_table(table, name=f"Q{order}")


def load_group(path: str | Path) -> FiniteGroup:
    """Read a group-table document ``{name, order, table}`` (JSON)."""
    doc = json.loads(Path(path).read_text())
    try:
        return from_table(doc["table"], name=doc.get("name", "G"), order=doc.get("order"))
    except KeyError as exc:
        raise MalformedTable(f"group file missing field {exc}") from None


def build_group(spec: str) -> FiniteGroup:
    """Build a group from a descriptor.

    Accepted forms: ``trivial``, ``cyclic:<m>``, ``quaternion:<4m>`` and
    ``file:<path>``.
    """
    family, _, param = spec.partition(":")
    family = family.strip().lower()
    if family == "trivial" and not param:
        return trivial()
    if family == "file":
        return load_group(param)
    try:
        value = int(param)
    except ValueError:
        raise ValueError(f"bad group descriptor {spec!r}") from None
    if family in ("cyclic", "z"):
        return cyclic(value)
    if family in ("quaternion", "q"):
        return quaternion(value)
    raise ValueError(f"unknown group family {family!r}")


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    seen: set[int] = set()
    classes = []
    for a in G.elements:
        if a in seen:
            continue
        members = sorted({G.conjugate(a, h) for h in G.elements})
        seen.update(members)
        classes.append(ConjugacyClass(representative=members[0], members=tuple(members)))
    return classes


def class_of(G: FiniteGroup, g: int) -> ConjugacyClass:
    G.check_element(g)
    return next(c for c in conjugacy_classes(G) if g in c.members)


def subgroup(G: FiniteGroup, elements: Sequence[int], name: str | None = None) -> Subgroup:
    """Restrict ``G`` to a subset closed under products and inverses."""
    embedding = tuple(sorted(set(elements)))
    if not embedding or embedding[0] != 0:
        raise ValueError("subgroup must contain the identity")
    index = {a: i for i, a in enumerate(embedding)}
    try:
        table = [[index[G.mul(a, b)] for b in embedding] for a in embedding]
    except KeyError:
        raise ValueError("element set is not closed under multiplication") from None
    inverses = tuple(index[G.inv(a)] for a in embedding)
    H = FiniteGroup(name=name or f"subgroup of {G.name}", table=tuple(map(tuple, table)), inverses=inverses)
    return Subgroup(group=H, embedding=embedding)


def generated_subgroup(G: FiniteGroup, gens: Sequence[int]) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for a in gens:
                y = G.mul(x, a)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generating_set(G: FiniteGroup) -> list[int]:
    """A small generating set, picked greedily by decreasing element order."""
    gens: list[int] = []
    span = {0}
    for a in sorted(G.elements, key=lambda a: (-G.element_order(a), a)):
        if a not in span:
            gens.append(a)
            span = generated_subgroup(G, gens)
    return sorted(gens)


def centralizer(G: FiniteGroup, g: int) -> Subgroup:
    G.check_element(g)
    members = [h for h in G.elements if G.mul(h, g) == G.mul(g, h)]
    return subgroup(G, members, name=f"C_{G.name}(g{g})")
