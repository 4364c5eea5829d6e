"""Pontryagin ring Z[G][x] of a spherical space form, its tensor square,
and the Laurent ring Z[x, x^-1] of the circle's based loop space.

Every class is an immutable integer linear combination of monomials with
zero coefficients never stored, so equality is plain dict equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

from .groups import FiniteGroup


class SpaceMismatch(ValueError):
    pass


class ExpressionSyntaxError(ValueError):
    """Unparseable element expression; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownElement(ValueError):
    pass


@dataclass(frozen=True)
class SpaceSpec:
    """The space S^n/G. ``x`` has degree n - 1."""

    n: int
    group: FiniteGroup

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"sphere dimension must be >= 2, got {self.n}")
        if self.group.order > 1 and self.n % 2 == 0:
            raise ValueError(
                f"non-trivial group {self.group.name} cannot act freely preserving "
                f"orientation on S^{self.n} (n even)"
            )

    @property
    def x_degree(self) -> int:
        return self.n - 1

    def __str__(self) -> str:
        if self.group.order == 1:
            return f"S^{self.n}"
        return f"S^{self.n}/{self.group.name}"


class _Combination:
    """Shared machinery for integer linear combinations of hashable keys."""

    __slots__ = ("_terms", "_ctx")

    def __init__(self, terms: Mapping[Hashable, int] | Iterable[tuple[Hashable, int]] = (), ctx: Any = None):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            key = self._check_key(key, ctx)
            acc[key] = acc.get(key, 0) + int(c)
        self._terms = MappingProxyType({k: v for k, v in acc.items() if v})
        self._ctx = ctx

    # subclasses override
    def _check_key(self, key, ctx):
        return key

    @staticmethod
    def _sort_key(key):
        return key

    def _same(self, other) -> Any:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self._ctx is not other._ctx and self._ctx != other._ctx:
            if not self._terms:
                return other._ctx
            if not other._terms:
                return self._ctx
            raise SpaceMismatch(f"{self._ctx} vs {other._ctx}")
        return self._ctx

    def _new(self, terms, ctx=None):
        obj = type(self).__new__(type(self))
        obj._terms = MappingProxyType({k: v for k, v in terms.items() if v})
        obj._ctx = self._ctx if ctx is None else ctx
        return obj

    @property
    def terms(self) -> Mapping:
        return self._terms

    def items(self) -> list[tuple[Any, int]]:
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: self._sort_key(kv[0]))

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        ctx = self._same(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return self._new(acc, ctx)

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return self._new({k: c * v for k, v in self._terms.items()})

    def __rmul__(self, c):
        if isinstance(c, int):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        if self._terms != other._terms:
            return False
        return not self._terms or self._ctx is other._ctx or self._ctx == other._ctx

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


def _fmt_sum(pieces: list[tuple[int, str]]) -> str:
    if not pieces:
        return "0"
    out = []
    for i, (c, mono) in enumerate(pieces):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = mono if mag == 1 else f"{mag}*{mono}"
        if i == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def _fmt_mono(g: int, k: int) -> str:
    return f"g{g}*x^{k}"


class LoopClass(_Combination):
    """Element of H_*(Omega S^n/G) = Z[G][x]; keys are ``(g, k)`` for g*x^k."""

    __slots__ = ()

    def __init__(self, space: SpaceSpec, terms: Mapping[tuple[int, int], int] | Iterable = ()):
        super().__init__(terms, space)

    def _check_key(self, key, space):
        g, k = key
        space.group.check_element(g)
        if k < 0:
            raise ValueError(f"negative x-exponent {k}")
        return (g, k)

    @staticmethod
    def _sort_key(key):
        g, k = key
        return (k, g)

    @property
    def space(self) -> SpaceSpec:
        return self._ctx

    @classmethod
    def monomial(cls, space: SpaceSpec, g: int, k: int, coeff: int = 1) -> "LoopClass":
        return cls(space, {(g, k): coeff})

    @classmethod
    def one(cls, space: SpaceSpec) -> "LoopClass":
        return cls.monomial(space, 0, 0)

    @classmethod
    def zero(cls, space: SpaceSpec) -> "LoopClass":
        return cls(space)

    def exponents(self) -> set[int]:
        return {k for _, k in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.exponents()) <= 1

    def degree(self) -> int:
        """Homological degree of a homogeneous class (0 for the zero class)."""
        ks = self.exponents()
        if len(ks) > 1:
            raise NonHomogeneous(f"{self} mixes x-exponents {sorted(ks)}")
        return next(iter(ks), 0) * self.space.x_degree

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, LoopClass):
            return multiply(self, other)
        return NotImplemented

    def __str__(self) -> str:
        return _fmt_sum([(c, _fmt_mono(g, k)) for (g, k), c in self.items()])

    def to_json(self) -> list[dict]:
        return [{"g": g, "k": k, "coeff": c} for (g, k), c in self.items()]


class NonHomogeneous(ValueError):
    pass


class TensorClass(_Combination):
    """Element of Z[G][x] (x) Z[G][x]; keys are ``((g1, k1), (g2, k2))``.

    ``space`` may be ``None`` only for the zero tensor returned when no
    finite group model exists (infinite fundamental group).
    """

    __slots__ = ()

    def __init__(self, space: SpaceSpec | None, terms: Mapping | Iterable = ()):
        super().__init__(terms, space)
        if space is None and self._terms:
            raise ValueError("only the zero tensor may omit its space")

    def _check_key(self, key, space):
        (g1, k1), (g2, k2) = key
        if space is not None:
            space.group.check_element(g1)
            space.group.check_element(g2)
        if k1 < 0 or k2 < 0:
            raise ValueError("negative x-exponent in tensor")
        return ((g1, k1), (g2, k2))

    @staticmethod
    def _sort_key(key):
        (g1, k1), (g2, k2) = key
        return (k1, g1, k2, g2)

    @property
    def space(self) -> SpaceSpec | None:
        return self._ctx

    def swap_legs(self) -> "TensorClass":
        return self._new({(r, l): c for (l, r), c in self._terms.items()})

    def bidegrees(self) -> set[tuple[int, int]]:
        d = self.space.x_degree if self.space else 0
        return {(k1 * d, k2 * d) for (_, k1), (_, k2) in self._terms}

    def __str__(self) -> str:
        return _fmt_sum(
            [(c, f"{_fmt_mono(g1, k1)} (x) {_fmt_mono(g2, k2)}") for ((g1, k1), (g2, k2)), c in self.items()]
        )

    def to_json(self) -> list[dict]:
        return [
            {"left": {"g": g1, "k": k1}, "right": {"g": g2, "k": k2}, "coeff": c}
            for ((g1, k1), (g2, k2)), c in self.items()
        ]


def tensor(a: LoopClass, b: LoopClass) -> TensorClass:
    if a.space != b.space:
        raise SpaceMismatch(f"{a.space} vs {b.space}")
    acc: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            acc[(ka, kb)] = acc.get((ka, kb), 0) + ca * cb
    return TensorClass(a.space, acc)


class LaurentClass(_Combination):
    """Element of Z[x, x^-1] = H_*(Omega S^1); keys are integer exponents."""

    __slots__ = ()

    def __init__(self, terms: Mapping[int, int] | Iterable = ()):
        super().__init__(terms, None)

    def _check_key(self, key, ctx):
        return int(key)

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> "LaurentClass":
        return cls({k: coeff})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, LaurentClass):
            acc: dict[int, int] = {}
            for a, ca in self._terms.items():
                for b, cb in other._terms.items():
                    acc[a + b] = acc.get(a + b, 0) + ca * cb
            return LaurentClass(acc)
        return NotImplemented

    def __str__(self) -> str:
        return _fmt_sum([(c, f"x^{k}") for k, c in self.items()])

    def to_json(self) -> list[dict]:
        return [{"k": k, "coeff": c} for k, c in self.items()]


class LaurentTensor(_Combination):
    """Element of Z[x^{+-1}] (x) Z[x^{+-1}]; keys are ``(k1, k2)``."""

    __slots__ = ()

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable = ()):
        super().__init__(terms, None)

    def _check_key(self, key, ctx):
        k1, k2 = key
        return (int(k1), int(k2))

    def swap_legs(self) -> "LaurentTensor":
        return self._new({(b, a): c for (a, b), c in self._terms.items()})

    def __str__(self) -> str:
        return _fmt_sum([(c, f"x^{a} (x) x^{b}") for (a, b), c in self.items()])

    def to_json(self) -> list[dict]:
        return [{"left": {"k": a}, "right": {"k": b}, "coeff": c} for (a, b), c in self.items()]


def laurent_tensor(a: LaurentClass, b: LaurentClass) -> LaurentTensor:
    acc: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            acc[(ka, kb)] = acc.get((ka, kb), 0) + ca * cb
    return LaurentTensor(acc)


def _require_space(*classes) -> SpaceSpec:
    spaces = {id(c.space): c.space for c in classes if c.space is not None}
    first = next(iter(spaces.values()))
    for s in spaces.values():
        if s != first:
            raise SpaceMismatch(f"{first} vs {s}")
    return first


def multiply(a: LoopClass, b: LoopClass) -> LoopClass:
    """Pontryagin product: (g x^i)(h x^j) = (gh) x^(i+j); x is central."""
    space = _require_space(a, b)
    mul = space.group.mul
    acc: dict = {}
    for (g, i), ca in a.terms.items():
        for (h, j), cb in b.terms.items():
            key = (mul(g, h), i + j)
            acc[key] = acc.get(key, 0) + ca * cb
    return LoopClass(space, acc)


def act_tensor(t: TensorClass, tau: int) -> TensorClass:
    """pi_1 action (gamma, gamma') -> (gamma*tau, tau^-1*gamma')."""
    space = t.space
    if space is None:
        return t
    G = space.group
    G.check_element(tau)
    tau_inv = G.inv(tau)
    acc: dict = {}
    for ((g1, k1), (g2, k2)), c in t.terms.items():
        key = ((G.mul(g1, tau), k1), (G.mul(tau_inv, g2), k2))
        acc[key] = acc.get(key, 0) + c
    return TensorClass(space, acc)


def map_legs(
    t: TensorClass, left: Callable[[int, int], LoopClass], right: Callable[[int, int], LoopClass] | None = None
) -> TensorClass:
    """Apply monomial maps leg-wise and expand bilinearly."""
    right = right or left
    out: TensorClass | None = None
    for ((g1, k1), (g2, k2)), c in t.items():
        piece = c * tensor(left(g1, k1), right(g2, k2))
        out = piece if out is None else out + piece
    return out if out is not None else TensorClass(t.space)


def contract_right(t: TensorClass, a: LoopClass) -> TensorClass:
    """(id x mult)(t (x) a): right-multiply the second leg by ``a``."""
    space = _require_space(t, a)
    mul = space.group.mul
    acc: dict = {}
    for (left, (g2, k2)), c in t.terms.items():
        for (h, j), ca in a.terms.items():
            key = (left, (mul(g2, h), k2 + j))
            acc[key] = acc.get(key, 0) + c * ca
    return TensorClass(space, acc)


def contract_left(t: TensorClass, a: LoopClass) -> TensorClass:
    """(mult x id)(a (x) t): left-multiply the first leg by ``a``."""
    space = _require_space(t, a)
    mul = space.group.mul
    acc: dict = {}
    for ((g1, k1), right), c in t.terms.items():
        for (h, j), ca in a.terms.items():
            key = ((mul(h, g1), j + k1), right)
            acc[key] = acc.get(key, 0) + c * ca
    return TensorClass(space, acc)


# -- expression grammar -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<g>g\d+)|(?P<x>[xu])(?:\s*\^\s*(?P<exp>[+-]?\d+))?|(?P<op>[-+*]))")


def _parse_terms(text: str, allow_negative: bool, allow_group: bool) -> list[tuple[int, int, int]]:
    """Parse ``text`` into ``(coeff, g, k)`` triples."""
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        kind = "x" if m.group("x") else m.lastgroup
        tokens.append((kind, m, len(text[:start].encode())))
        pos = m.end()
    if not tokens:
        raise ExpressionSyntaxError("empty expression", 0)

    out = []
    i = 0
    expect_term = True
    sign = 1
    while i < len(tokens):
        kind, m, off = tokens[i]
        if expect_term:
            if kind == "op" and m.group("op") in "+-":
                sign = -sign if m.group("op") == "-" else sign
                i += 1
                continue
            coeff, g, k = sign, None, None
            factors = 0
            while i < len(tokens):
                kind, m, off = tokens[i]
                if kind == "int":
                    coeff *= int(m.group("int"))
                elif kind == "g":
                    if not allow_group:
                        raise ExpressionSyntaxError("group elements not allowed here", off)
                    if g is not None:
                        raise ExpressionSyntaxError("repeated group factor", off)
                    g = int(m.group("g")[1:])
                elif kind == "x":
                    if k is not None:
                        raise ExpressionSyntaxError("repeated x factor", off)
                    exp = m.group("exp")
                    k = 1 if exp is None else int(exp)
                    if k < 0 and not allow_negative:
                        raise ExpressionSyntaxError("negative exponent outside circle mode", off)
                else:
                    raise ExpressionSyntaxError(f"expected a factor, got {m.group('op')!r}", off)
                factors += 1
                i += 1
                if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1].group("op") == "*":
                    i += 1
                    if i == len(tokens):
                        raise ExpressionSyntaxError("dangling '*'", len(text.encode()))
                    continue
                break
            if not factors:
                raise ExpressionSyntaxError("expected a term", len(text.encode()))
            out.append((coeff, 0 if g is None else g, 0 if k is None else k))
            expect_term = False
            sign = 1
        else:
            if kind != "op" or m.group("op") not in "+-":
                raise ExpressionSyntaxError("expected '+' or '-'", off)
            expect_term = True
    if expect_term:
        raise ExpressionSyntaxError("expression ends with an operator", len(text.encode()))
    return out


def parse_element(text: str, space: SpaceSpec | None = None) -> LoopClass | LaurentClass:
    """Parse ``3*g2*x^4 - g0*x^0`` style text.

    With a space, returns a :class:`LoopClass`; with ``space=None``
    (circle mode) returns a :class:`LaurentClass` and allows negative
    exponents. ``g0`` is the identity; ``x^0`` and ``g0`` may be omitted.
    """
    if space is None:
        triples = _parse_terms(text, allow_negative=True, allow_group=True)
        for _, g, _ in triples:
            if g != 0:
                raise UnknownElement(f"g{g}: the circle has no finite group part")
        return LaurentClass([(k, c) for c, _, k in triples])
    triples = _parse_terms(text, allow_negative=False, allow_group=True)
    for _, g, _ in triples:
        if g >= space.group.order:
            raise UnknownElement(f"g{g} is not an element of {space.group.name} (order {space.group.order})")
    return LoopClass(space, [((g, k), c) for c, g, k in triples])


def loop_class_from_json(space: SpaceSpec, doc: list[dict]) -> LoopClass:
    return LoopClass(space, [((d["g"], d["k"]), d["coeff"]) for d in doc])


def tensor_from_json(space: SpaceSpec, doc: list[dict]) -> TensorClass:
    return TensorClass(
        space,
        [(((d["left"]["g"], d["left"]["k"]), (d["right"]["g"], d["right"]["k"])), d["coeff"]) for d in doc],
    )
