"""Pushforwards along maps of manifolds and the coproduct identities they
satisfy: the preimage-sum formula, degree-d maps of spheres and the
universal covering S^n -> S^n/G.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .algebra import LoopClass, SpaceMismatch, SpaceSpec, TensorClass, act_tensor, map_legs, multiply, tensor
from .coproduct import coproduct
from .groups import trivial

COVERING = "covering"
SPHERE_SELF_MAP = "sphere_self_map"
CUSTOM = "custom"


class UnsupportedKind(ValueError):
    pass


@dataclass(frozen=True)
class MapData:
    """A pointed map f: M -> N seen through a regular value y0.

    ``preimages`` lists ``(local_degree, tau)`` for each point of
    f^-1(y0), where ``tau`` is the class in pi_1(N) of f applied to a
    path from that point back to x0. ``images`` is only used by custom
    maps and sends a source monomial ``(g, k)`` to its image class.
    """

    kind: str
    source: SpaceSpec
    target: SpaceSpec
    preimages: tuple[tuple[int, int], ...]
    degree: int = 1
    images: Mapping[tuple[int, int], LoopClass] | None = field(default=None, compare=False)

    @property
    def checked(self) -> bool:
        """False for user-supplied maps, whose hypotheses are not verified."""
        return self.kind != CUSTOM


def covering_map(target: SpaceSpec) -> MapData:
    """Universal covering p: S^n -> S^n/G; one +1 preimage per element."""
    source = SpaceSpec(target.n, trivial())
    return MapData(
        kind=COVERING,
        source=source,
        target=target,
        preimages=tuple((1, h) for h in target.group.elements),
        degree=target.group.order,
    )


def sphere_self_map(n: int, d: int) -> MapData:
    """A degree-d map S^n -> S^n with |d| preimages of sign(d)."""
    sphere = SpaceSpec(n, trivial())
    sign = 1 if d >= 0 else -1
    return MapData(kind=SPHERE_SELF_MAP, source=sphere, target=sphere, preimages=((sign, 0),) * abs(d), degree=d)


def custom_map(
    source: SpaceSpec,
    target: SpaceSpec,
    preimages: list[tuple[int, int]],
    images: Mapping[tuple[int, int], LoopClass],
) -> MapData:
    for img in images.values():
        if img.space != target:
            raise SpaceMismatch("custom map image outside the target space")
    return MapData(
        kind=CUSTOM,
        source=source,
        target=target,
        preimages=tuple(preimages),
        degree=sum(d for d, _ in preimages),
        images=dict(images),
    )


def map_from_dict(doc: dict, target_group=None) -> MapData:
    """Build built-in maps from ``{kind, degree, source_n, target_group}``.

    ``target_group`` is an already-resolved group (the file only names it).
    """
    kind = doc["kind"]
    n = int(doc["source_n"])
    if kind == COVERING:
        if target_group is None:
            raise ValueError("covering map needs a target group")
        return covering_map(SpaceSpec(n, target_group))
    if kind == SPHERE_SELF_MAP:
        return sphere_self_map(n, int(doc["degree"]))
    raise UnsupportedKind(kind)


def _monomial_image(m: MapData) -> Callable[[int, int], LoopClass]:
    if m.kind == COVERING:
        return lambda g, k: LoopClass.monomial(m.target, 0, k)
    if m.kind == SPHERE_SELF_MAP:
        return lambda g, k: LoopClass.monomial(m.target, 0, k, m.degree**k)
    if m.kind == CUSTOM:

        def image(g: int, k: int) -> LoopClass:
            try:
                return m.images[(g, k)]
            except KeyError:
                raise ValueError(f"custom map has no image for g{g}*x^{k}") from None

        return image
    raise UnsupportedKind(m.kind)


def pushforward(m: MapData, a: LoopClass) -> LoopClass:
    """f_* on loop homology.

    Covering sends u^k to 1*x^k; a degree-d sphere map sends u^k to
    d^k u^k (loop maps are multiplicative and u goes to d*u).
    """
    if a.space != m.source:
        raise SpaceMismatch(f"{a.space} is not the source {m.source}")
    image = _monomial_image(m)
    out = LoopClass.zero(m.target)
    for (g, k), c in a.items():
        out = out + c * image(g, k)
    return out


def pushforward_tensor(m: MapData, t: TensorClass) -> TensorClass:
    if t.space != m.source:
        raise SpaceMismatch(f"{t.space} is not the source {m.source}")
    return TensorClass(m.target, map_legs(t, _monomial_image(m)).terms)


def coproduct_via_f(m: MapData, a: LoopClass) -> TensorClass:
    """sum_i deg_i * (r_tau_i x l_tau_i^-1)((f x f)_* v(a)).

    This equals v_target(f_* a) for maps satisfying the hypotheses.
    """
    if a.space != m.source:
        raise SpaceMismatch(f"{a.space} is not the source {m.source}")
    pushed = pushforward_tensor(m, coproduct(a))
    out = TensorClass(m.target)
    for local_degree, tau in m.preimages:
        out = out + local_degree * act_tensor(pushed, tau)
    return out


def sphere_coproduct_terms(k: int) -> list[tuple[int, int]]:
    """v(u^k) on Omega S^n as exponent pairs: u^(i-1) (x) u^(k-i), i = 1..k."""
    return [(i - 1, k - i) for i in range(1, k + 1)]


def coproduct_via_universal_cover(space: SpaceSpec, a: LoopClass) -> TensorClass:
    """Assemble v(a) from the sphere coproduct upstairs.

    a = sum_g g * p_*(beta_g); each term gamma (x) delta of v(beta_g)
    contributes  g p_*(gamma) h (x) h^-1 p_*(delta)  for every h in G.
    """
    if a.space != space:
        raise SpaceMismatch(f"{a.space} vs {space}")
    G = space.group
    out = TensorClass(space)
    for (g, k), c in a.items():
        g_cls = LoopClass.monomial(space, g, 0)
        for i, j in sphere_coproduct_terms(k):
            gamma = LoopClass.monomial(space, 0, i)
            delta = LoopClass.monomial(space, 0, j)
            for h in G.elements:
                h_cls = LoopClass.monomial(space, h, 0)
                h_inv = LoopClass.monomial(space, G.inv(h), 0)
                left = multiply(multiply(g_cls, gamma), h_cls)
                right = multiply(h_inv, delta)
                out = out + c * tensor(left, right)
    return out
