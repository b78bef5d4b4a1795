"""Symbolic motivic decomposition: one separable-algebra factor per orbit of
the permutation basis.

Brauer classes are opaque labels (they depend on arithmetic input the tool
does not model); base degrees are the orbit sizes, i.e. the degrees of the
etale algebras the factors live over.  The named slots of the four minimal
families:

    ruled surfaces F(2a):    k x Q x k x Q    (Q a quaternion label)
    ruled surfaces F(2a+1):  k x k x k x k    (odd twists are trivial)
    the plane:               k x A x A^{tensor 2}
    the quadric P1xP1:       k x B x A       (B over the quadratic base)
    the hexagonal dP6:       k x P x Q
"""

from __future__ import annotations

from dataclasses import dataclass

from .grothendieck import (
    GrothendieckError,
    PermutationBasis,
    verify_permutation_basis,
)
from .minimal_model import (
    ContractionTrace,
    MinimalLabel,
    MinimalModelError,
    NotMinimal,
    classify_minimal,
)
from .symmetry import SymmetryGroup

__all__ = [
    "AlgebraFactor",
    "MotivicDecomposition",
    "FamilyDescriptor",
    "UnverifiedBasis",
    "decompose",
    "annotate_family",
    "decomposition_string",
]

DP6_PAIRING_NOTE = (
    "dP6 slot bookkeeping: the factor named P sits on the size-3 orbit "
    "(cubic etale base by stabilizer index) although the classical rank-9 "
    "description of P carries the quadratic base; the orbit sizes recorded "
    "here are authoritative for the base degrees, the names follow the "
    "family convention."
)

ODD_RULING_NOTE = (
    "ruled surface with odd twist: the quaternion label is trivial, every "
    "factor splits."
)


class UnverifiedBasis(GrothendieckError):
    pass


@dataclass(frozen=True)
class AlgebraFactor:
    base_degree: int
    brauer_label: str
    source_orbit: tuple[int, ...]
    slot_roles: tuple[str, ...]


@dataclass(frozen=True)
class FamilyDescriptor:
    index: str
    slots: tuple[str, ...]
    description: str


@dataclass(frozen=True)
class MotivicDecomposition:
    factors: tuple[AlgebraFactor, ...]
    family: FamilyDescriptor | None
    notes: tuple[str, ...]

    def total_degree(self) -> int:
        return sum(f.base_degree for f in self.factors)


def annotate_family(label: MinimalLabel) -> FamilyDescriptor:
    """Named factor slots of the minimal family a classified pair belongs to."""
    if label.kind == "P2":
        return FamilyDescriptor(
            index="(ii)",
            slots=("k", "A", "A^{⊗2}"),
            description="twisted plane: k x A x A^{tensor 2}",
        )
    if label.kind == "P1xP1":
        return FamilyDescriptor(
            index="(iii)",
            slots=("k", "B", "A"),
            description=(
                "quadric surface: k x B x A with B over the quadratic "
                "discriminant base"
            ),
        )
    if label.kind == "dP6":
        return FamilyDescriptor(
            index="(iv)",
            slots=("k", "P", "Q"),
            description="hexagonal del Pezzo: k x P x Q",
        )
    if label.kind.startswith("F("):
        a = label.hirzebruch_a
        if a is not None and a % 2 == 1:
            return FamilyDescriptor(
                index="(i)",
                slots=("k", "k", "k", "k"),
                description="ruled surface with odd twist: all factors split",
            )
        return FamilyDescriptor(
            index="(i)",
            slots=("k", "Q", "k", "Q"),
            description="ruled surface over a conic: k x Q x k x Q",
        )
    raise NotMinimal(f"unrecognized minimal kind {label.kind}")


def _core_slot_label(family_index: str, role: str, odd_ruling: bool) -> str:
    if role == "one":
        return "k"
    if odd_ruling:
        return "k"
    if family_index == "(i)":
        return {"J_fiber": "Q", "J_section": "k", "J_both": "Q"}[role]
    if family_index == "(ii)":
        return {"J": "A", "J2": "A^{⊗2}"}[role]
    if family_index == "(iii)":
        return {"J_fiber": "B", "J_section": "B", "J_both": "A"}[role]
    if family_index == "(iv)":
        return {"R": "P", "Q": "Q"}[role]
    return "End(pushforward of orbit representative)"


def decompose(
    basis: PermutationBasis, source, group: SymmetryGroup
) -> MotivicDecomposition:
    """One factor per basis orbit, named after the minimal family when known.

    `source` is the MinimalLabel or ContractionTrace the basis was built
    from.  The basis is re-certified first; a failing certificate raises
    UnverifiedBasis.
    """
    try:
        cert = verify_permutation_basis(basis, basis.fan, group)
    except GrothendieckError as exc:
        raise UnverifiedBasis(str(exc)) from exc
    if not cert.ok:
        raise UnverifiedBasis("basis certificate failed")

    label: MinimalLabel | None = None
    if isinstance(source, MinimalLabel):
        label = source
    elif isinstance(source, ContractionTrace):
        try:
            label = classify_minimal(source.terminal_fan, source.terminal_group)
        except MinimalModelError:
            label = None

    family = annotate_family(label) if label is not None else None
    odd_ruling = (
        label is not None
        and label.kind.startswith("F(")
        and label.hirzebruch_a is not None
        and label.hirzebruch_a % 2 == 1
    )

    notes: list[str] = []
    if family is not None and family.index == "(iv)":
        notes.append(DP6_PAIRING_NOTE)
    if odd_ruling:
        notes.append(ODD_RULING_NOTE)

    factors = []
    for orbit in basis.orbits:
        roles = []
        kinds = set()
        for i in orbit:
            kind, payload = basis.tags[i]
            kinds.add(kind)
            roles.append(str(payload))
        if kinds == {"exc"}:
            # Blow-up orbits give etale factors: split over the degree-|orbit|
            # etale base algebra.
            brauer = "k"
        elif kinds == {"core"} and family is not None:
            slot_labels = {
                _core_slot_label(family.index, role, odd_ruling) for role in roles
            }
            if len(slot_labels) != 1:
                raise UnverifiedBasis(
                    f"orbit {orbit} mixes factor slots {sorted(slot_labels)}"
                )
            brauer = slot_labels.pop()
        else:
            brauer = "End(pushforward of orbit representative)"
        factors.append(
            AlgebraFactor(
                base_degree=len(orbit),
                brauer_label=brauer,
                source_orbit=orbit,
                slot_roles=tuple(roles),
            )
        )
    return MotivicDecomposition(
        factors=tuple(factors), family=family, notes=tuple(notes)
    )


def decomposition_string(dec: MotivicDecomposition) -> str:
    return "×".join(f.brauer_label for f in dec.factors)
