"""The Grothendieck group of a smooth complete toric surface, modelled exactly.

A class is stored as (rank, first Chern class in Picard coordinates, Euler
characteristic).  This triple is a complete integral invariant on a rational
surface, and the multiplication uses the Chern-character change of
coordinates with the degree-2 component kept doubled so every intermediate
stays an integer.

The module also builds the distinguished permutation bases of line bundles on
the minimal surfaces, transports them through blow-ups (total transforms of
the old basis plus the classes O(E) of the exceptional divisors) and
certifies candidate bases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .intlinalg import bareiss_det, hermite_pivots, solve2, xgcd
from .lattice_fan import Fan
from .minimal_model import (
    ContractionTrace,
    MinimalLabel,
    MinimalModelError,
    classify_minimal,
)
from .symmetry import SymmetryGroup

__all__ = [
    "PicardLattice",
    "K0Class",
    "PermutationBasis",
    "KlyachkoCertificate",
    "BasisCertificate",
    "GrothendieckError",
    "IncompatibleFan",
    "RelationFailure",
    "NotClassified",
    "NotABasis",
    "NotInvariant",
    "picard",
    "line_bundle_class",
    "k0_multiply",
    "structure_class",
    "point_class",
    "verify_klyachko",
    "fa_recurrence_check",
    "core_basis_divisors",
    "standard_permutation_basis",
    "verify_permutation_basis",
    "search_line_bundle_basis",
    "act_on_divisor",
    "act_on_class",
]


class GrothendieckError(ValueError):
    pass


class IncompatibleFan(GrothendieckError):
    pass


class RelationFailure(GrothendieckError):
    """The presentation of K0 fails in the model; indicates a bug."""


class NotClassified(GrothendieckError):
    pass


class NotABasis(GrothendieckError):
    pass


class NotInvariant(GrothendieckError):
    pass


@dataclass(frozen=True)
class PicardLattice:
    """Divisor classes modulo linear equivalence, with intersection form.

    The chosen basis consists of the classes of the ray divisors D_2..D_{N-1}
    (all but the first two rays); the first two rays form a lattice basis, so
    a character can always be used to clear their coefficients.
    """

    fan: Fan
    relation_matrix: tuple[tuple[int, ...], tuple[int, ...]]
    ray_coords: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]
    canonical_coords: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.fan.n - 2

    def divisor_coords(self, coefficients) -> tuple[int, ...]:
        """Picard coordinates of the divisor sum(c_e D_e)."""
        c = tuple(int(x) for x in coefficients)
        if len(c) != self.fan.n:
            raise IncompatibleFan(
                f"expected {self.fan.n} coefficients, got {len(c)}"
            )
        rays = self.fan.rays
        m = solve2(rays[0], rays[1], (-c[0], -c[1]))
        return tuple(
            c[e] + m[0] * rays[e][0] + m[1] * rays[e][1]
            for e in range(2, self.fan.n)
        )

    def pair(self, d1, d2) -> int:
        return sum(
            d1[i] * d2[j] * self.gram[i][j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def chi(self, coords) -> int:
        """Euler characteristic of a line bundle with the given class."""
        num = self.pair(coords, coords) - self.pair(coords, self.canonical_coords)
        if num % 2:
            raise GrothendieckError("adjunction parity violated")
        return 1 + num // 2


@lru_cache(maxsize=None)
def picard(fan: Fan) -> PicardLattice:
    """Picard lattice with intersection form, from the imaging of characters.

    Ray self-intersections are derived from linear equivalence alone (clear
    the ray's own coefficient with a character and read off the adjacent
    contributions), independently of the wall-relation route in lattice_fan.
    """
    rays = fan.rays
    n = fan.n
    relation = (
        tuple(v[0] for v in rays),
        tuple(v[1] for v in rays),
    )
    inter = [[0] * n for _ in range(n)]
    for i in range(n):
        inter[i][(i + 1) % n] = 1
        inter[i][(i - 1) % n] = 1
    for i in range(n):
        g, s, t = xgcd(rays[i][0], rays[i][1])
        m = (-s, -t)  # <m, v_i> = -1
        before, after = rays[(i - 1) % n], rays[(i + 1) % n]
        inter[i][i] = (
            m[0] * before[0] + m[1] * before[1] + m[0] * after[0] + m[1] * after[1]
        )
    rank = n - 2
    # The basis classes are the ray divisors D_2..D_{N-1}, so the gram matrix
    # is the ray intersection table restricted to them.
    gram = tuple(tuple(inter[i + 2][j + 2] for j in range(rank)) for i in range(rank))
    partial = PicardLattice(
        fan=fan,
        relation_matrix=relation,
        ray_coords=(),
        gram=gram,
        canonical_coords=(0,) * rank,
    )
    ray_coords = tuple(
        partial.divisor_coords(tuple(1 if e == i else 0 for e in range(n)))
        for i in range(n)
    )
    k_coords = partial.divisor_coords((-1,) * n)
    det = bareiss_det([list(row) for row in gram]) if rank else 1
    if det not in (1, -1):
        raise GrothendieckError(f"intersection form has determinant {det}")
    return PicardLattice(
        fan=fan,
        relation_matrix=relation,
        ray_coords=ray_coords,
        gram=gram,
        canonical_coords=k_coords,
    )


@dataclass(frozen=True)
class K0Class:
    """An element of K0 in (rank, c1, chi) coordinates."""

    fan: Fan
    rank: int
    c1: tuple[int, ...]
    chi: int

    def model_vector(self) -> tuple[int, ...]:
        return (self.rank, *self.c1, self.chi)

    def _check(self, other: "K0Class") -> None:
        if self.fan != other.fan:
            raise IncompatibleFan("classes live on different fans")

    def __add__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        return K0Class(
            self.fan,
            self.rank + other.rank,
            tuple(a + b for a, b in zip(self.c1, other.c1)),
            self.chi + other.chi,
        )

    def __sub__(self, other: "K0Class") -> "K0Class":
        self._check(other)
        return K0Class(
            self.fan,
            self.rank - other.rank,
            tuple(a - b for a, b in zip(self.c1, other.c1)),
            self.chi - other.chi,
        )

    def __mul__(self, other: "K0Class") -> "K0Class":
        return k0_multiply(self, other)

    def power(self, k: int) -> "K0Class":
        if k < 0:
            raise GrothendieckError("negative powers only for line bundles; invert c1")
        out = structure_class(self.fan)
        for _ in range(k):
            out = k0_multiply(out, self)
        return out


def structure_class(fan: Fan) -> K0Class:
    """The unit: the class of the structure sheaf."""
    return K0Class(fan, 1, (0,) * (fan.n - 2), 1)


def point_class(fan: Fan) -> K0Class:
    return K0Class(fan, 0, (0,) * (fan.n - 2), 1)


def zero_class(fan: Fan) -> K0Class:
    return K0Class(fan, 0, (0,) * (fan.n - 2), 0)


def line_bundle_class(fan: Fan, coefficients) -> K0Class:
    """Class of O(D) for the torus-invariant divisor D = sum(c_e D_e)."""
    lat = picard(fan)
    coords = lat.divisor_coords(coefficients)
    return K0Class(fan, 1, coords, lat.chi(coords))


def _doubled_ch2(x: K0Class, lat: PicardLattice) -> int:
    # 2*ch2 = c1.K + 2 chi - 2 rank, integral for every honest class.
    return lat.pair(x.c1, lat.canonical_coords) + 2 * x.chi - 2 * x.rank


def k0_multiply(x: K0Class, y: K0Class) -> K0Class:
    """Ring multiplication via the Chern character.

    ch = (rank, c1, ch2) is multiplicative; ch2 is carried doubled so the
    computation is exact over the integers.
    """
    if x.fan != y.fan:
        raise IncompatibleFan("classes live on different fans")
    lat = picard(x.fan)
    r = x.rank * y.rank
    c1 = tuple(x.rank * b + y.rank * a for a, b in zip(x.c1, y.c1))
    t = (
        x.rank * _doubled_ch2(y, lat)
        + y.rank * _doubled_ch2(x, lat)
        + 2 * lat.pair(x.c1, y.c1)
    )
    num = t - lat.pair(c1, lat.canonical_coords)
    if num % 2:
        raise GrothendieckError("non-integral Euler characteristic in product")
    return K0Class(x.fan, r, c1, num // 2 + r)


def act_on_divisor(perm: tuple[int, ...], coefficients) -> tuple[int, ...]:
    """Push a divisor along a ray permutation: D_e goes to D_{perm[e]}."""
    out = [0] * len(perm)
    for e, c in enumerate(coefficients):
        out[perm[e]] = c
    return tuple(out)


def act_on_class(fan: Fan, perm: tuple[int, ...], x: K0Class) -> K0Class:
    """Image of a class under a fan symmetry with ray permutation `perm`."""
    lat = picard(fan)
    lift = [0] * fan.n
    for j, d in enumerate(x.c1):
        lift[j + 2] = d
    coords = lat.divisor_coords(act_on_divisor(perm, lift))
    return K0Class(fan, x.rank, coords, x.chi)


@dataclass(frozen=True)
class KlyachkoCertificate:
    fan: Fan
    rank: int
    span_index: int
    orbit_closure_pairs: int
    character_relations: int

    @property
    def ok(self) -> bool:
        return self.span_index == 1 and self.rank == self.fan.n


def verify_klyachko(fan: Fan) -> KlyachkoCertificate:
    """Certify the orbit-closure presentation of K0 against the model.

    Checks that the classes attached to all cones span with index one, that
    products of disjoint-cone classes are again cone classes (or vanish), and
    that the character relations on the ray ideal-sheaf classes hold.
    """
    n = fan.n
    one = structure_class(fan)
    j_ray = [
        line_bundle_class(fan, tuple(-1 if e == i else 0 for e in range(n)))
        for i in range(n)
    ]
    o_ray = [one - j for j in j_ray]
    cones: list[tuple[frozenset[int], K0Class]] = [(frozenset(), one)]
    cones += [(frozenset({i}), o_ray[i]) for i in range(n)]
    cone_pairs = fan.cones()
    cones += [
        (frozenset(pair), k0_multiply(o_ray[pair[0]], o_ray[pair[1]]))
        for pair in cone_pairs
    ]
    cone_sets = {rays: cls for rays, cls in cones}

    rows = [list(cls.model_vector()) for _, cls in cones]
    pivots = hermite_pivots(rows)
    rank = len(pivots)
    index = 1
    for p in pivots:
        index *= abs(p)
    if rank != n or index != 1:
        raise RelationFailure(
            f"cone classes span rank {rank} with index {index}, expected rank {n}, index 1"
        )

    zero = zero_class(fan)
    checked = 0
    for (s1, c1), (s2, c2) in itertools.combinations_with_replacement(cones, 2):
        if s1 & s2:
            continue
        union = s1 | s2
        expected = cone_sets.get(union, zero)
        got = k0_multiply(c1, c2)
        if got != expected:
            raise RelationFailure(
                f"product of cones {sorted(s1)} and {sorted(s2)} is {got}, "
                f"expected {expected}"
            )
        checked += 1

    rel2 = 0
    for m in ((1, 0), (0, 1)):
        coeffs = tuple(-(m[0] * v[0] + m[1] * v[1]) for v in fan.rays)
        if line_bundle_class(fan, coeffs) != one:
            raise RelationFailure(f"character relation fails for {m}")
        rel2 += 1

    return KlyachkoCertificate(
        fan=fan,
        rank=rank,
        span_index=index,
        orbit_closure_pairs=checked,
        character_relations=rel2,
    )


def hirzebruch_marking(fan: Fan) -> tuple[int, int]:
    """(fiber ray index, section ray index) for a 4-ray fan."""
    from .lattice_fan import self_intersections

    if fan.n != 4:
        raise GrothendieckError("not a 4-ray fan")
    a_seq = self_intersections(fan)
    a = max(a_seq)
    if a == 0:
        return 0, 1
    s = a_seq.index(-a)
    return (s - 1) % 4, s


def fa_recurrence_check(fan: Fan, m_values) -> bool:
    """Check J1^{m+1} J2 = J1^m J2 + J1 J2 - J2 in the model.

    J1 is the ideal-sheaf class of a fiber divisor and J2 of the negative
    section of a 4-ray (ruled) fan.
    """
    f, s = hirzebruch_marking(fan)
    n = fan.n
    j1 = line_bundle_class(fan, tuple(-1 if e == f else 0 for e in range(n)))
    j2 = line_bundle_class(fan, tuple(-1 if e == s else 0 for e in range(n)))
    j1j2 = k0_multiply(j1, j2)
    for m in m_values:
        lhs = k0_multiply(j1.power(m + 1), j2)
        rhs = k0_multiply(j1.power(m), j2) + j1j2 - j2
        if lhs != rhs:
            return False
    return True


@dataclass(frozen=True)
class PermutationBasis:
    """A group-closed Z-basis of K0 given by explicit divisor representatives.

    `tags` records where each element came from: ("core", slot_role) for the
    minimal-model basis, ("exc", step_index) for a class O(E) introduced by a
    blow-up step of the contraction trace.
    """

    fan: Fan
    divisors: tuple[tuple[int, ...], ...]
    elements: tuple[K0Class, ...]
    orbits: tuple[tuple[int, ...], ...]
    stabilizer_indices: tuple[int, ...]
    tags: tuple[tuple[str, object], ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def orbit_sizes(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.orbits)


@dataclass(frozen=True)
class BasisCertificate:
    determinant: int
    closed: bool
    orbit_sizes: tuple[int, ...]
    stabilizer_indices: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.determinant in (1, -1) and self.closed


CORE_SLOT_ROLES = {
    "P2": ("one", "J", "J2"),
    "F": ("one", "J_fiber", "J_section", "J_both"),
    "dP6": ("one", "R", "R", "R", "Q", "Q"),
}


def core_basis_divisors(label: MinimalLabel) -> tuple[tuple[tuple[int, ...], ...], tuple[str, ...]]:
    """Divisor representatives of the distinguished core basis, with roles.

    P2: 1, J, J^2 (J the ideal sheaf of a line); 4-ray fans: 1, J1 (fiber),
    J2 (negative section), J1 J2; hexagonal fan: 1, the three classes
    J(u_i) J(u_{i+3+...}) pairing opposite-adjacent rays, and the two classes
    of consecutive ray triples.
    """
    fan = label.fan
    n = fan.n

    def e(*idx) -> tuple[int, ...]:
        out = [0] * n
        for i in idx:
            out[i] -= 1
        return tuple(out)

    if label.kind == "P2":
        return ((0,) * n, e(0), e(0, 0)), CORE_SLOT_ROLES["P2"]
    if n == 4:
        f, s = hirzebruch_marking(fan)
        return ((0,) * n, e(f), e(s), e(f, s)), CORE_SLOT_ROLES["F"]
    if label.kind == "dP6":
        divs = (
            (0,) * n,
            e(0, 5),
            e(1, 2),
            e(3, 4),
            e(0, 1, 2),
            e(3, 4, 5),
        )
        return divs, CORE_SLOT_ROLES["dP6"]
    raise NotClassified(f"no core basis for kind {label.kind}")


def _transport_divisor(step, coefficients) -> tuple[int, ...]:
    """Total transform of a divisor through one blow-up (trace step reversed).

    Coefficients are indexed by the rays of step.after; the result is indexed
    by the rays of step.before.  An inserted ray picks up the sum of its two
    neighbours' coefficients (the support function is linear on the
    subdivided cone).
    """
    after, before = step.after, step.before
    coeff_of = {ray: c for ray, c in zip(after.rays, coefficients)}
    inserted = set(step.contracted)
    out = []
    nb = before.n
    for i, ray in enumerate(before.rays):
        if ray in inserted:
            left = before.rays[(i - 1) % nb]
            right = before.rays[(i + 1) % nb]
            out.append(coeff_of[left] + coeff_of[right])
        else:
            out.append(coeff_of[ray])
    return tuple(out)


def _orbit_partition(
    fan: Fan, group: SymmetryGroup, elements: list[K0Class], divisors: list[tuple[int, ...]]
) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Orbits of basis elements (as classes) under the attached group."""
    if group.fan != fan or group.ray_permutations is None:
        group = group.attach(fan)
    index_of = {}
    for i, cls in enumerate(elements):
        index_of.setdefault(cls, i)
    assigned = [False] * len(elements)
    orbits = []
    for i in range(len(elements)):
        if assigned[i]:
            continue
        orbit = {i}
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for perm in group.ray_permutations.values():
                image = line_bundle_class(fan, act_on_divisor(perm, divisors[j]))
                k = index_of.get(image)
                if k is None:
                    raise NotInvariant(
                        f"image of basis element {divisors[j]} leaves the set"
                    )
                if k not in orbit:
                    orbit.add(k)
                    frontier.append(k)
        for j in orbit:
            assigned[j] = True
        orbits.append(tuple(sorted(orbit)))
    stab = tuple(len(o) for o in orbits)
    return tuple(orbits), stab


def standard_permutation_basis(source, group: SymmetryGroup) -> PermutationBasis:
    """The distinguished permutation basis for a minimal pair or a trace.

    For a contraction trace the core basis of the terminal surface is pulled
    back step by step (total transforms) and the classes O(E) of each step's
    exceptional orbit are appended.
    """
    if isinstance(source, ContractionTrace):
        trace = source
        try:
            label = classify_minimal(trace.terminal_fan, trace.terminal_group)
        except MinimalModelError as exc:
            raise NotClassified(str(exc)) from exc
        divisors, roles = core_basis_divisors(label)
        divisors = list(divisors)
        tags: list[tuple[str, object]] = [("core", role) for role in roles]
        for step_index in range(len(trace.steps) - 1, -1, -1):
            step = trace.steps[step_index]
            divisors = [_transport_divisor(step, c) for c in divisors]
            for ray in step.contracted:
                i = step.before.rays.index(ray)
                exc = tuple(1 if e == i else 0 for e in range(step.before.n))
                divisors.append(exc)
                tags.append(("exc", step_index))
        fan = trace.initial_fan
    elif isinstance(source, MinimalLabel):
        divisors_t, roles = core_basis_divisors(source)
        divisors = list(divisors_t)
        tags = [("core", role) for role in roles]
        fan = source.fan
    else:
        raise NotClassified(f"cannot build a basis from {type(source).__name__}")

    elements = [line_bundle_class(fan, c) for c in divisors]
    orbits, stab = _orbit_partition(fan, group, elements, divisors)
    return PermutationBasis(
        fan=fan,
        divisors=tuple(divisors),
        elements=tuple(elements),
        orbits=orbits,
        stabilizer_indices=stab,
        tags=tuple(tags),
    )


def verify_permutation_basis(
    basis, fan: Fan, group: SymmetryGroup
) -> BasisCertificate:
    """Certify unimodularity, group closure and the orbit partition.

    `basis` may be a PermutationBasis or a list of divisor coefficient
    tuples.  Raises NotABasis or NotInvariant on failure.
    """
    if isinstance(basis, PermutationBasis):
        divisors = list(basis.divisors)
    else:
        divisors = [tuple(int(x) for x in c) for c in basis]
    elements = [line_bundle_class(fan, c) for c in divisors]
    if len(elements) != fan.n:
        raise NotABasis(
            f"{len(elements)} classes cannot form a basis of rank {fan.n}"
        )
    det = bareiss_det([list(cls.model_vector()) for cls in elements])
    if det not in (1, -1):
        raise NotABasis(f"coordinate matrix has determinant {det}")
    orbits, stab = _orbit_partition(fan, group, elements, divisors)
    return BasisCertificate(
        determinant=det,
        closed=True,
        orbit_sizes=tuple(len(o) for o in orbits),
        stabilizer_indices=stab,
    )


def search_line_bundle_basis(
    fan: Fan, group: SymmetryGroup, bound: int
) -> PermutationBasis | None:
    """Exhaustive search for a group-closed line-bundle basis.

    Candidates are the classes of divisors with coefficients in
    [-bound, bound]; group orbits of candidate classes are tried in a fixed
    canonical order (small classes first) and the first unimodular union of
    orbits of total size N is returned.  Absence only means absence within
    the bound.
    """
    if group.fan != fan or group.ray_permutations is None:
        group = group.attach(fan)
    n = fan.n

    class_rep: dict[K0Class, tuple[int, ...]] = {}
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=n):
        cls = line_bundle_class(fan, coeffs)
        old = class_rep.get(cls)
        key = (max(map(abs, coeffs), default=0), coeffs)
        if old is None or key < (max(map(abs, old), default=0), old):
            class_rep[cls] = coeffs

    # Partition candidate classes into group orbits.  The candidate set is
    # closed under the action (a permutation of bounded coefficients is again
    # bounded), so every image has a representative.
    remaining = set(class_rep)
    orbits: list[list[K0Class]] = []
    for cls in sorted(
        class_rep, key=lambda c: (max(map(abs, c.c1), default=0), c.model_vector())
    ):
        if cls not in remaining:
            continue
        orbit = {cls}
        frontier = [cls]
        while frontier:
            x = frontier.pop()
            for perm in group.ray_permutations.values():
                image = line_bundle_class(fan, act_on_divisor(perm, class_rep[x]))
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
        remaining -= orbit
        orbits.append(
            sorted(orbit, key=lambda c: (max(map(abs, c.c1), default=0), c.model_vector()))
        )

    orbits = [o for o in orbits if len(o) <= n]

    def rank_of(rows: list[list[int]]) -> int:
        return len(hermite_pivots(rows)) if rows else 0

    found: list[int] | None = None

    def dfs(start: int, picked: list[int], size: int) -> bool:
        nonlocal found
        if size == n:
            rows = [
                list(cls.model_vector()) for i in picked for cls in orbits[i]
            ]
            if bareiss_det(rows) in (1, -1):
                found = list(picked)
                return True
            return False
        for i in range(start, len(orbits)):
            if size + len(orbits[i]) > n:
                continue
            rows = [
                list(cls.model_vector()) for j in picked + [i] for cls in orbits[j]
            ]
            if rank_of(rows) < size + len(orbits[i]):
                continue
            if dfs(i + 1, picked + [i], size + len(orbits[i])):
                return True
        return False

    if not dfs(0, [], 0):
        return None
    assert found is not None
    classes = [cls for i in found for cls in orbits[i]]
    divisors = [class_rep[cls] for cls in classes]
    orbit_partition, stab = _orbit_partition(fan, group, classes, divisors)
    return PermutationBasis(
        fan=fan,
        divisors=tuple(divisors),
        elements=tuple(classes),
        orbits=orbit_partition,
        stabilizer_indices=stab,
        tags=tuple(("search", None) for _ in classes),
    )
