"""Avoiding-stick coproduct on H_*(Omega S^n/G) and on H_*(Omega S^1),
plus checkers for the identities it satisfies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .algebra import (
    LaurentClass,
    LaurentTensor,
    LoopClass,
    NonHomogeneous,
    SpaceSpec,
    TensorClass,
    act_tensor,
    contract_left,
    contract_right,
)


class TrivialGroup(ValueError):
    pass


class ZeroExponent(ValueError):
    pass


class Unsupported(ValueError):
    pass


def coproduct(a: LoopClass) -> TensorClass:
    """v(g x^k) = sum_{i+j=k-1} sum_h (g h^-1 x^i) (x) (h x^j).

    Monomials with k = 0 contribute nothing.
    """
    space = a.space
    G = space.group
    acc: dict = {}
    for (g, k), c in a.terms.items():
        for i in range(k):
            j = k - 1 - i
            for h in G.elements:
                key = ((G.mul(g, G.inv(h)), i), (h, j))
                acc[key] = acc.get(key, 0) + c
    return TensorClass(space, acc)


class CircleVariant(enum.Enum):
    """The four lifts on the circle.

    ``vee_plus``/``vee_minus`` come from the two sticks; the lambda pair
    uses different exit and entrance sticks.
    """

    VEE_PLUS = "vee_plus"
    VEE_MINUS = "vee_minus"
    LAMBDA_PLUS = "lambda_plus"
    LAMBDA_MINUS = "lambda_minus"

    @classmethod
    def parse(cls, text: str) -> "CircleVariant":
        aliases = {"vee+": "vee_plus", "vee-": "vee_minus", "lambda+": "lambda_plus", "lambda-": "lambda_minus"}
        key = aliases.get(text.strip().lower(), text.strip().lower())
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown circle variant {text!r}") from None

    @property
    def cli_name(self) -> str:
        return {"vee_plus": "vee+", "vee_minus": "vee-", "lambda_plus": "lambda+", "lambda_minus": "lambda-"}[
            self.value
        ]


def _circle_range(variant: CircleVariant, k: int) -> tuple[int, range]:
    """Sign and range of l in  sign * sum_l x^l (x) x^(k-l)."""
    if variant is CircleVariant.VEE_PLUS:
        if k > 0:
            return 1, range(1, k + 1)
        if k < 0:
            return -1, range(k + 1, 1)
        return 1, range(0)
    if variant is CircleVariant.VEE_MINUS:
        if k > 0:
            return 1, range(0, k)
        if k < 0:
            return -1, range(k, 0)
        return 1, range(0)
    if variant is CircleVariant.LAMBDA_PLUS:
        if k >= 0:
            return 1, range(0, k + 1)
        return -1, range(k + 1, 0)
    if k > 0:
        return 1, range(1, k)
    return -1, range(k, 1)


def coproduct_circle(variant: CircleVariant, a: LaurentClass) -> LaurentTensor:
    acc: dict = {}
    for k, c in a.terms.items():
        sign, ls = _circle_range(variant, k)
        for l in ls:
            acc[(l, k - l)] = acc.get((l, k - l), 0) + sign * c
    return LaurentTensor(acc)


@dataclass(frozen=True)
class SullivanReport:
    holds: bool
    defect: TensorClass | LaurentTensor
    lhs: TensorClass | LaurentTensor
    rhs: TensorClass | LaurentTensor


def sullivan_sign(n: int, degree_a: int) -> int:
    return -1 if ((n - 1) * degree_a) % 2 else 1


def check_sullivan(a: LoopClass, b: LoopClass) -> SullivanReport:
    """Compare v(ab) with (id x mult)(v a (x) b) + sign (mult x id)(a (x) v b).

    ``a`` must be homogeneous because the sign depends on its degree.
    """
    if not a.is_homogeneous() or not b.is_homogeneous():
        raise NonHomogeneous("Sullivan check needs homogeneous classes")
    sign = sullivan_sign(a.space.n, a.degree())
    lhs = coproduct(a * b)
    rhs = contract_right(coproduct(a), b) + sign * contract_left(coproduct(b), a)
    defect = lhs - rhs
    return SullivanReport(holds=defect.is_zero(), defect=defect, lhs=lhs, rhs=rhs)


def check_sullivan_circle(variant: CircleVariant, a: LaurentClass, b: LaurentClass) -> SullivanReport:
    """Circle version; x has degree 0 so every Koszul sign is +1."""
    lhs = coproduct_circle(variant, a * b)
    acc: dict = {}
    for (l, r), c in coproduct_circle(variant, a).terms.items():
        for kb, cb in b.terms.items():
            acc[(l, r + kb)] = acc.get((l, r + kb), 0) + c * cb
    for (l, r), c in coproduct_circle(variant, b).terms.items():
        for ka, ca in a.terms.items():
            acc[(ka + l, r)] = acc.get((ka + l, r), 0) + c * ca
    rhs = LaurentTensor(acc)
    defect = lhs - rhs
    return SullivanReport(holds=defect.is_zero(), defect=defect, lhs=lhs, rhs=rhs)


def fixed_by(t: TensorClass, tau: int) -> bool:
    return act_tensor(t, tau) == t


def first_unfixing_element(t: TensorClass) -> int | None:
    """Smallest tau with tau . t != t, or None if t is pi_1-invariant."""
    if t.space is None:
        return None
    for tau in t.space.group.elements:
        if not fixed_by(t, tau):
            return tau
    return None


@dataclass(frozen=True)
class Pi1Report:
    holds: bool
    failing_tau: int | None


def check_pi1_invariance(a: LoopClass) -> Pi1Report:
    tau = first_unfixing_element(coproduct(a))
    return Pi1Report(holds=tau is None, failing_tau=tau)


class WitnessOutcome(enum.Enum):
    FOUND = "found"
    EXCEPTIONAL = "exceptional"
    NONE_FOUND = "none_found"


@dataclass(frozen=True)
class WitnessReport:
    outcome: WitnessOutcome
    term: tuple[tuple[int, int], tuple[int, int]] | None = None


def coproduct_witness(space: SpaceSpec, g: int, k: int) -> WitnessReport:
    """Look for a term of v(g x^k) with neither leg equal to the unit 1 = g0 x^0.

    Such a term survives in the relative homology of the free loop space,
    which is what makes the spectral sequence degenerate. The only input
    without one is the non-identity element of Z/2 at k = 1 (projective
    spaces), reported as EXCEPTIONAL.
    """
    G = space.group
    if G.order == 1:
        raise TrivialGroup("witness search needs a non-trivial group")
    if k < 1:
        raise ZeroExponent(f"k must be >= 1, got {k}")
    G.check_element(g)
    unit = (0, 0)
    terms = [key for key, _ in coproduct(LoopClass.monomial(space, g, k)).items()]
    # prefer both exponents >= 1; otherwise fall back to non-trivial group parts
    for left, right in terms:
        if left[1] >= 1 and right[1] >= 1:
            return WitnessReport(WitnessOutcome.FOUND, (left, right))
    for left, right in terms:
        if left != unit and right != unit:
            return WitnessReport(WitnessOutcome.FOUND, (left, right))
    if G.order == 2 and g != 0 and k == 1:
        return WitnessReport(WitnessOutcome.EXCEPTIONAL)
    return WitnessReport(WitnessOutcome.NONE_FOUND)


def infinite_pi1_rule(n: int) -> TensorClass:
    """Coproduct on a manifold with infinite fundamental group: always zero.

    Only valid for n > 1; the circle has its own formulas.
    """
    if n == 1:
        raise Unsupported("n = 1: use coproduct_circle for S^1")
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    return TensorClass(None)

