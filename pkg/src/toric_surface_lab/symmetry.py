"""Finite symmetry of a fan: the lattice automorphisms preserving the ray set,
and classification of finite subgroups of GL(2,Z) into the 13 conjugacy
classes (cyclic C1, C2, C3, C4, C6 and dihedral D2, D2', D4, D4', D6, D6',
D8, D12).

Class representatives are generated by

    A = [[1,-1],[1,0]]   (order 6),   B = [[0,-1],[1,0]]  (quarter turn),
    C = [[0,1],[1,0]]    (swap),      C' = [[1,0],[0,-1]] (axis flip),

with C1=<I>, C2=<-I>, C3=<A^2>, C4=<B>, C6=<A>, D2=<C>, D2'=<C'>,
D4=<-I,C>, D4'=<-I,C'>, D6=<A^2,C>, D6'=<A^2,-C>, D8=<B,C>, D12=<A,C>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .intlinalg import (
    IDENTITY,
    MINUS_IDENTITY,
    Mat2,
    columns_to_matrix,
    det2,
    mat_apply,
    mat_det,
    mat_inv,
    mat_mul,
    mat_transpose,
    unimodular_matrices,
)
from .lattice_fan import Fan

__all__ = [
    "SymmetryGroup",
    "SymmetryError",
    "NotFinite",
    "UnclassifiedSubgroup",
    "NotAFanSymmetry",
    "CONJUGACY_LABELS",
    "TABLE_GENERATORS",
    "compute_aut",
    "classify_subgroup",
    "enumerate_subgroups",
    "trivial_group",
]

# Largest finite subgroup of GL(2,Z) has order 12.
_MAX_FINITE_ORDER = 12

GEN_A: Mat2 = ((1, -1), (1, 0))
GEN_B: Mat2 = ((0, -1), (1, 0))
GEN_C: Mat2 = ((0, 1), (1, 0))
GEN_CP: Mat2 = ((1, 0), (0, -1))

_A2 = mat_mul(GEN_A, GEN_A)
_MC = ((0, -1), (-1, 0))  # -C

TABLE_GENERATORS: dict[str, tuple[Mat2, ...]] = {
    "C1": (IDENTITY,),
    "C2": (MINUS_IDENTITY,),
    "C3": (_A2,),
    "C4": (GEN_B,),
    "C6": (GEN_A,),
    "D2": (GEN_C,),
    "D2'": (GEN_CP,),
    "D4": (MINUS_IDENTITY, GEN_C),
    "D4'": (MINUS_IDENTITY, GEN_CP),
    "D6": (_A2, GEN_C),
    "D6'": (_A2, _MC),
    "D8": (GEN_B, GEN_C),
    "D12": (GEN_A, GEN_C),
}

CONJUGACY_LABELS = tuple(TABLE_GENERATORS)


class SymmetryError(ValueError):
    """Base class for symmetry-group failures."""


class NotFinite(SymmetryError):
    pass


class UnclassifiedSubgroup(SymmetryError):
    pass


class NotAFanSymmetry(SymmetryError):
    pass


def element_order(m: Mat2) -> int | None:
    """Order of a GL(2,Z) element, or None if infinite.

    Decided by trace and determinant: finite order forces det=1 with
    |trace|<=1 (orders 3, 4, 6), m = +-I, or det=-1 with trace 0 (order 2).
    """
    d = mat_det(m)
    t = m[0][0] + m[1][1]
    if d == 1:
        if m == IDENTITY:
            return 1
        if m == MINUS_IDENTITY:
            return 2
        return {-1: 3, 0: 4, 1: 6}.get(t)
    if d == -1:
        return 2 if t == 0 else None
    return None


def _close(generators) -> frozenset[Mat2]:
    elems = {IDENTITY}
    frontier = [tuple(map(tuple, g)) for g in generators]
    for g in frontier:
        if element_order(g) is None:
            raise NotFinite(f"generator {g} has infinite order")
    elems.update(frontier)
    while frontier:
        new = []
        for g in frontier:
            for h in list(elems):
                for p in (mat_mul(g, h), mat_mul(h, g)):
                    if p not in elems:
                        if element_order(p) is None:
                            raise NotFinite(f"element {p} has infinite order")
                        elems.add(p)
                        new.append(p)
                        if len(elems) > _MAX_FINITE_ORDER:
                            raise NotFinite(
                                "closure exceeds the maximal finite order 12"
                            )
        frontier = new
    return frozenset(elems)


@dataclass(frozen=True)
class SymmetryGroup:
    """A finite subgroup of GL(2,Z), optionally attached to a fan.

    When attached, `ray_permutations[g]` maps ray index i of the fan to the
    index of g applied to ray i.
    """

    elements: frozenset[Mat2]
    generators: tuple[Mat2, ...]
    fan: Fan | None = None
    ray_permutations: dict[Mat2, tuple[int, ...]] | None = field(
        default=None, compare=False
    )

    @classmethod
    def from_generators(cls, generators, fan: Fan | None = None) -> "SymmetryGroup":
        gens = tuple(tuple(map(tuple, g)) for g in generators)
        elems = _close(gens)
        group = cls(elements=elems, generators=gens or (IDENTITY,))
        return group.attach(fan) if fan is not None else group

    def attach(self, fan: Fan) -> "SymmetryGroup":
        """Bind the group to a fan, computing the induced ray permutations."""
        perms = {}
        for g in sorted(self.elements):
            images = [mat_apply(g, v) for v in fan.rays]
            if set(images) != set(fan.rays):
                raise NotAFanSymmetry(f"{g} does not preserve the ray set")
            perms[g] = tuple(fan.rays.index(w) for w in images)
        return SymmetryGroup(
            elements=self.elements,
            generators=self.generators,
            fan=fan,
            ray_permutations=perms,
        )

    @property
    def order(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[Mat2]:
        return sorted(self.elements)

    def ray_orbits(self) -> list[tuple[int, ...]]:
        """Orbits of ray indices, each sorted, ordered by smallest member."""
        if self.fan is None or self.ray_permutations is None:
            raise SymmetryError("group is not attached to a fan")
        n = self.fan.n
        seen = [False] * n
        orbits = []
        for i in range(n):
            if seen[i]:
                continue
            orbit = {i}
            frontier = [i]
            while frontier:
                j = frontier.pop()
                for perm in self.ray_permutations.values():
                    k = perm[j]
                    if k not in orbit:
                        orbit.add(k)
                        frontier.append(k)
            for j in orbit:
                seen[j] = True
            orbits.append(tuple(sorted(orbit)))
        return orbits

    def cone_orbits(self) -> list[tuple[int, ...]]:
        """Orbits of maximal-cone indices (cone i spans rays i, i+1)."""
        if self.fan is None or self.ray_permutations is None:
            raise SymmetryError("group is not attached to a fan")
        n = self.fan.n
        cone_of_pair = {frozenset((i, (i + 1) % n)): i for i in range(n)}
        seen = [False] * n
        orbits = []
        for i in range(n):
            if seen[i]:
                continue
            orbit = {i}
            frontier = [i]
            while frontier:
                j = frontier.pop()
                for perm in self.ray_permutations.values():
                    pair = frozenset((perm[j], perm[(j + 1) % n]))
                    k = cone_of_pair[pair]
                    if k not in orbit:
                        orbit.add(k)
                        frontier.append(k)
            for j in orbit:
                seen[j] = True
            orbits.append(tuple(sorted(orbit)))
        return orbits


def trivial_group(fan: Fan | None = None) -> SymmetryGroup:
    return SymmetryGroup.from_generators([], fan)


def compute_aut(fan: Fan) -> SymmetryGroup:
    """The full group of unimodular matrices permuting the ray set.

    Candidates are built by sending the first adjacent ray pair (a lattice
    basis) to every adjacent pair in both orientations, then filtered.
    """
    v0, v1 = fan.rays[0], fan.rays[1]
    vinv = mat_inv(columns_to_matrix(v0, v1))
    rayset = set(fan.rays)
    n = fan.n
    elems = set()
    for j in range(n):
        for w0, w1 in (
            (fan.rays[j], fan.rays[(j + 1) % n]),
            (fan.rays[j], fan.rays[(j - 1) % n]),
        ):
            m = mat_mul(columns_to_matrix(w0, w1), vinv)
            if all(mat_apply(m, v) in rayset for v in fan.rays):
                elems.add(m)
    gens = _small_generating_set(elems)
    return SymmetryGroup(elements=frozenset(elems), generators=gens).attach(fan)


def _small_generating_set(elems) -> tuple[Mat2, ...]:
    gens: list[Mat2] = []
    span = {IDENTITY}
    for g in sorted(elems, key=lambda m: (-(element_order(m) or 0), m)):
        if g in span:
            continue
        gens.append(g)
        span = set(_close(gens))
        if len(span) == len(elems):
            break
    return tuple(gens) if gens else (IDENTITY,)


def reflection_lattice_index(m: Mat2) -> int:
    """Index of (fixed line) + (antifixed line) in Z^2 for a det=-1 involution.

    1 for conjugates of the axis flip C', 2 for conjugates of the swap C.
    """
    if mat_det(m) != -1 or element_order(m) != 2:
        raise SymmetryError(f"{m} is not a det=-1 involution")
    from .intlinalg import primitive_kernel_vector

    m_minus = ((m[0][0] - 1, m[0][1]), (m[1][0], m[1][1] - 1))
    m_plus = ((m[0][0] + 1, m[0][1]), (m[1][0], m[1][1] + 1))
    fixed = primitive_kernel_vector(m_minus)
    anti = primitive_kernel_vector(m_plus)
    idx = abs(det2(fixed, anti))
    if idx not in (1, 2):
        raise SymmetryError(f"unexpected eigenlattice index {idx} for {m}")
    return idx


@lru_cache(maxsize=1)
def _table_element_sets() -> dict[str, frozenset[Mat2]]:
    return {label: _close(gens) for label, gens in TABLE_GENERATORS.items()}


@lru_cache(maxsize=2)
def _conjugator_pool(bound: int) -> tuple[Mat2, ...]:
    return tuple(unimodular_matrices(bound))


def _invariant_form_reduction(elems) -> Mat2:
    """A unimodular U such that U^{-1} g U has small entries for all g.

    U is the Lagrange-Gauss reduction of the group-invariant positive
    definite form sum_g g^T g.
    """
    f00 = f01 = f11 = 0
    for g in elems:
        gt = mat_transpose(g)
        q = mat_mul(gt, g)
        f00 += q[0][0]
        f01 += q[0][1]
        f11 += q[1][1]
    u: Mat2 = IDENTITY
    while True:
        if f00 > f11:
            u = mat_mul(u, ((0, 1), (1, 0)))
            f00, f11 = f11, f00
        # Shift e2 by -r e1 to minimize the off-diagonal entry.
        r = (2 * f01 + f00) // (2 * f00)
        if r != 0:
            u = mat_mul(u, ((1, -r), (0, 1)))
            f11 = f11 - 2 * r * f01 + r * r * f00
            f01 = f01 - r * f00
        if 2 * abs(f01) <= f00 <= f11:
            return u


def _conjugate_group(elems, u: Mat2) -> frozenset[Mat2]:
    uinv = mat_inv(u)
    return frozenset(mat_mul(uinv, mat_mul(g, u)) for g in elems)


def _candidate_labels(elems) -> list[str]:
    n = len(elems)
    if n == 1:
        return ["C1"]
    reflections = [g for g in elems if mat_det(g) == -1]
    rotations = [g for g in elems if mat_det(g) == 1]
    if n == 2:
        if not reflections:
            return ["C2"]
        return ["D2"] if reflection_lattice_index(reflections[0]) == 2 else ["D2'"]
    if n == 3:
        return ["C3"]
    if n == 4:
        if any(element_order(g) == 4 for g in rotations):
            return ["C4"]
        if len(reflections) != 2:
            return []
        idx = {reflection_lattice_index(g) for g in reflections}
        if idx == {2}:
            return ["D4"]
        if idx == {1}:
            return ["D4'"]
        return []
    if n == 6:
        if any(element_order(g) == 6 for g in rotations):
            return ["C6"]
        # Dihedral of order 6: D6 and D6' share all elementwise invariants.
        return ["D6", "D6'"]
    if n == 8:
        return ["D8"]
    if n == 12:
        return ["D12"]
    return []


def classify_subgroup(group, conjugator_bound: int = 5) -> str:
    """Conjugacy label of a finite subgroup of GL(2,Z).

    Accepts a SymmetryGroup or an iterable of generator matrices.  The group
    is first conjugated onto a reduced lattice basis (via its invariant
    quadratic form), then matched against the class representatives by an
    exhaustive conjugator search with entries bounded by `conjugator_bound`.

    Raises NotFinite for generators of infinite order and
    UnclassifiedSubgroup if no representative matches (which indicates a bug).
    """
    if isinstance(group, SymmetryGroup):
        elems = group.elements
    else:
        elems = _close(tuple(tuple(map(tuple, g)) for g in group))
    candidates = _candidate_labels(elems)
    if not candidates:
        raise UnclassifiedSubgroup(
            f"order {len(elems)} does not occur among finite subgroups of GL(2,Z)"
        )
    u = _invariant_form_reduction(elems)
    reduced = _conjugate_group(elems, u)
    tables = _table_element_sets()
    for p in _conjugator_pool(conjugator_bound):
        pinv = mat_inv(p)
        image = frozenset(mat_mul(p, mat_mul(g, pinv)) for g in reduced)
        for label in candidates:
            if image == tables[label]:
                return label
    raise UnclassifiedSubgroup(
        f"conjugator search (bound {conjugator_bound}) exhausted for {sorted(elems)}"
    )


def enumerate_subgroups(group: SymmetryGroup) -> list[SymmetryGroup]:
    """All subgroups, each with a generating set of at most two elements.

    Finite subgroups of GL(2,Z) are cyclic or dihedral, so two generators
    always suffice.
    """
    elems = group.sorted_elements()
    seen: dict[frozenset[Mat2], tuple[Mat2, ...]] = {frozenset({IDENTITY}): ()}
    for a in elems:
        sub = _close((a,))
        seen.setdefault(sub, (a,))
    for a in elems:
        for b in elems:
            if b <= a:
                continue
            sub = _close((a, b))
            seen.setdefault(sub, (a, b))
    out = []
    for sub, gens in sorted(seen.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        g = SymmetryGroup(elements=sub, generators=gens or (IDENTITY,))
        out.append(g.attach(group.fan) if group.fan is not None else g)
    return out
