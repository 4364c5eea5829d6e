"""Homology of the free loop space of S^n/G, one conjugacy class at a time.

The Serre spectral sequence of the evaluation fibration over the
component of [g] has E2 = H_p(S^n/C_G(g)) (x) H_q(Omega S^n) with
H_q(Omega S^n) = Z in degrees q = m(n-1). It collapses, so each total
degree has at most two surviving columns and a two-step filtration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebra import SpaceSpec
from .coproduct import WitnessOutcome, coproduct_witness
from .groups import ConjugacyClass, centralizer, conjugacy_classes
from .homology import Z, AbelianGroup, GradedAbelianGroup, quotient_space_homology


class UnsupportedDimension(ValueError):
    pass


ASSOCIATED_GRADED_ONLY = "associated_graded_only"

RP_NOTE = (
    "no coproduct witness at k = 1 for the non-identity class of Z/2; "
    "collapse here follows from the Chas-Sullivan product with x being an "
    "isomorphism, so the table is still valid"
)


def e_infinity_columns(n: int, d: int) -> list[int]:
    """Columns p in [0, n] with a non-zero E-infinity entry in total degree d."""
    if n < 2:
        raise UnsupportedDimension(f"need n >= 2, got {n}")
    if d < 0:
        raise UnsupportedDimension(f"negative degree {d}")
    return [p for p in range(min(n, d) + 1) if (d - p) % (n - 1) == 0]


@dataclass(frozen=True)
class DegreeEntry:
    """One total degree of one component.

    ``pieces`` lists (column, group) as sub then quotient. ``resolved`` is
    None when only the associated graded is known.
    """

    degree: int
    pieces: tuple[tuple[int, AbelianGroup], ...]
    split: bool
    resolved: AbelianGroup | None

    @property
    def associated_graded_only(self) -> bool:
        return self.resolved is None

    def to_json(self, class_rep: int) -> dict:
        return {
            "class_rep": class_rep,
            "degree": self.degree,
            "pieces": [{"column": p, **g.to_json()} for p, g in self.pieces],
            "split": self.split,
            "resolved": ASSOCIATED_GRADED_ONLY if self.resolved is None else self.resolved.to_json(),
        }

    def render(self) -> str:
        if self.resolved is not None:
            return str(self.resolved)
        sub, quo = self.pieces
        return f"ext({quo[1]} by {sub[1]})"


@dataclass(frozen=True)
class ComponentTable:
    cls: ConjugacyClass
    centralizer_order: int
    base_homology: GradedAbelianGroup
    entries: tuple[DegreeEntry, ...]
    notes: tuple[str, ...] = ()

    @property
    def representative(self) -> int:
        return self.cls.representative


def _check_space(space: SpaceSpec) -> None:
    # Trivial G with even n: E2 has a non-zero differential (already for
    # S^2), so the collapse argument does not apply.
    if space.n % 2 == 0:
        raise UnsupportedDimension(f"free loop tables need odd n, got n = {space.n}")


def _entry(n: int, d: int, base: GradedAbelianGroup) -> DegreeEntry:
    cols = e_infinity_columns(n, d)
    if len(cols) == 1:
        p = cols[0]
        return DegreeEntry(d, ((p, base[p]),), True, base[p])
    low, high = cols
    pieces = ((low, base[low]), (high, base[high]))
    split = high != n - 1
    if split or base[high].is_zero():
        return DegreeEntry(d, pieces, split, base[low] + base[high])
    return DegreeEntry(d, pieces, False, None)


def _witness_notes(space: SpaceSpec, g: int, max_deg: int) -> tuple[str, ...]:
    if space.group.order == 1:
        return ()
    top_k = max_deg // (space.n - 1) + 1
    for k in range(1, top_k + 1):
        outcome = coproduct_witness(space, g, k).outcome
        if outcome is WitnessOutcome.EXCEPTIONAL:
            return (RP_NOTE,)
        if outcome is WitnessOutcome.NONE_FOUND:
            return (f"no coproduct witness for g{g} at k = {k}; collapse not established",)
    return ()


def component_homology(space: SpaceSpec, cls: ConjugacyClass, max_deg: int, cap: int | None = None) -> ComponentTable:
    _check_space(space)
    C = centralizer(space.group, cls.representative)
    base = quotient_space_homology(space.n, C.group, cap)
    entries = tuple(_entry(space.n, d, base) for d in range(max_deg + 1))
    return ComponentTable(
        cls=cls,
        centralizer_order=C.order,
        base_homology=base,
        entries=entries,
        notes=_witness_notes(space, cls.representative, max_deg),
    )


@dataclass(frozen=True)
class LoopSpaceTable:
    space: SpaceSpec
    max_degree: int
    components: tuple[ComponentTable, ...] = field(default=())

    def total(self, d: int) -> AbelianGroup | None:
        """H_d of the whole free loop space, or None if some class is ambiguous."""
        out = AbelianGroup()
        for comp in self.components:
            r = comp.entries[d].resolved
            if r is None:
                return None
            out = out + r
        return out

    def to_json(self) -> dict:
        return {
            "space": str(self.space),
            "max_degree": self.max_degree,
            "classes": [
                {
                    "class_rep": c.representative,
                    "members": list(c.cls.members),
                    "centralizer_order": c.centralizer_order,
                    "notes": list(c.notes),
                }
                for c in self.components
            ],
            "entries": [e.to_json(c.representative) for c in self.components for e in c.entries],
            "total": [
                {"degree": d, **t.to_json()} if (t := self.total(d)) is not None
                else {"degree": d, "withheld": ASSOCIATED_GRADED_ONLY}
                for d in range(self.max_degree + 1)
            ],
        }

    def to_markdown(self) -> str:
        lines = [f"# Free loop space homology of {self.space}", ""]
        header = ["degree"] + [f"[g{c.representative}]" for c in self.components] + ["total"]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for d in range(self.max_degree + 1):
            row = [str(d)] + [c.entries[d].render() for c in self.components]
            t = self.total(d)
            row.append("withheld" if t is None else str(t))
            lines.append("| " + " | ".join(row) + " |")
        notes = [(c.representative, note) for c in self.components for note in c.notes]
        if notes:
            lines.append("")
            lines.extend(f"- [g{rep}]: {note}" for rep, note in notes)
        return "\n".join(lines) + "\n"


def full_table(space: SpaceSpec, max_deg: int, cap: int | None = None) -> LoopSpaceTable:
    _check_space(space)
    comps = tuple(component_homology(space, c, max_deg, cap) for c in conjugacy_classes(space.group))
    return LoopSpaceTable(space=space, max_degree=max_deg, components=comps)


def dumps(table: LoopSpaceTable) -> str:
    return json.dumps(table.to_json(), indent=2, sort_keys=True) + "\n"
