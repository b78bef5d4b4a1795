import random

import pytest

from toric_surface_lab.cohomology import line_bundle_cohomology
from toric_surface_lab.grothendieck import (
    NotABasis,
    act_on_class,
    act_on_divisor,
    fa_recurrence_check,
    hirzebruch_marking,
    k0_multiply,
    line_bundle_class,
    picard,
    search_line_bundle_basis,
    standard_permutation_basis,
    structure_class,
    verify_klyachko,
    verify_permutation_basis,
)
from toric_surface_lab.intlinalg import symmetric_signature
from toric_surface_lab.lattice_fan import (
    blow_up,
    hirzebruch_fan,
    p2_fan,
)
from toric_surface_lab.minimal_model import minimalize
from toric_surface_lab.symmetry import SymmetryGroup, compute_aut, trivial_group


def unit_divisor(fan, *idx, sign=-1):
    out = [0] * fan.n
    for i in idx:
        out[i] += sign
    return tuple(out)


class TestPicard:
    def test_p2_rank_and_form(self, p2):
        lat = picard(p2)
        assert lat.rank == 1
        assert lat.gram == ((1,),)

    def test_f2_rank_and_named_basis_form(self, f2):
        lat = picard(f2)
        assert lat.rank == 2
        fiber_idx, section_idx = hirzebruch_marking(f2)
        fiber = lat.ray_coords[fiber_idx]
        section = lat.ray_coords[section_idx]
        form = [
            [lat.pair(fiber, fiber), lat.pair(fiber, section)],
            [lat.pair(section, fiber), lat.pair(section, section)],
        ]
        assert form == [[0, 1], [1, -2]]

    def test_dp6_rank(self, dp6):
        assert picard(dp6).rank == 4

    def test_signature_and_unimodularity(self, small_corpus):
        seen = set()
        for entry in small_corpus:
            fan = entry.fan
            if fan in seen:
                continue
            seen.add(fan)
            lat = picard(fan)
            gram = [list(r) for r in lat.gram]
            assert all(gram[i][j] == gram[j][i] for i in range(lat.rank) for j in range(lat.rank))
            assert symmetric_signature(gram) == (1, fan.n - 3)

    def test_canonical_square_is_twelve_minus_n(self, small_corpus):
        for entry in small_corpus:
            lat = picard(entry.fan)
            k = lat.canonical_coords
            assert lat.pair(k, k) == 12 - entry.fan.n

    def test_ray_pairing_table(self, f2, dp6):
        from toric_surface_lab.lattice_fan import self_intersections

        for fan in (f2, dp6):
            lat = picard(fan)
            a = self_intersections(fan)
            n = fan.n
            for i in range(n):
                for j in range(n):
                    got = lat.pair(lat.ray_coords[i], lat.ray_coords[j])
                    if i == j:
                        assert got == a[i]
                    elif j in ((i + 1) % n, (i - 1) % n):
                        assert got == 1
                    else:
                        assert got == 0


class TestLineBundleClass:
    def test_trivial(self, p2):
        assert line_bundle_class(p2, (0, 0, 0)) == structure_class(p2)

    def test_hyperplane(self, p2):
        cls = line_bundle_class(p2, (1, 0, 0))
        assert (cls.rank, cls.c1, cls.chi) == (1, (1,), 3)

    def test_dual_hyperplane(self, p2):
        cls = line_bundle_class(p2, (-1, 0, 0))
        assert (cls.rank, cls.c1, cls.chi) == (1, (-1,), 0)

    def test_chi_matches_cohomology(self, small_corpus):
        rng = random.Random(5)
        for entry in small_corpus[:25]:
            fan = entry.fan
            for _ in range(10):
                coeffs = tuple(rng.randint(-3, 3) for _ in range(fan.n))
                cls = line_bundle_class(fan, coeffs)
                assert cls.chi == line_bundle_cohomology(fan, coeffs).euler


class TestMultiplication:
    def test_square_of_hyperplane(self, p2):
        o1 = line_bundle_class(p2, (1, 0, 0))
        sq = k0_multiply(o1, o1)
        assert sq == line_bundle_class(p2, (2, 0, 0))
        assert sq.chi == 6

    def test_unit_law(self, f2):
        one = structure_class(f2)
        x = line_bundle_class(f2, (2, -1, 3, 0))
        assert k0_multiply(x, one) == x

    def test_tensor_on_line_bundles(self, dp6):
        rng = random.Random(9)
        for _ in range(20):
            a = tuple(rng.randint(-2, 2) for _ in range(6))
            b = tuple(rng.randint(-2, 2) for _ in range(6))
            lhs = k0_multiply(line_bundle_class(dp6, a), line_bundle_class(dp6, b))
            rhs = line_bundle_class(dp6, tuple(x + y for x, y in zip(a, b)))
            assert lhs == rhs

    def test_commutative_associative(self, f2):
        rng = random.Random(1)
        classes = [
            line_bundle_class(f2, tuple(rng.randint(-2, 2) for _ in range(4)))
            for _ in range(9)
        ]
        for x, y, z in zip(classes[::3], classes[1::3], classes[2::3]):
            assert k0_multiply(x, y) == k0_multiply(y, x)
            assert k0_multiply(k0_multiply(x, y), z) == k0_multiply(x, k0_multiply(y, z))

    def test_group_action_is_ring_automorphism(self, dp6):
        g = compute_aut(dp6)
        rng = random.Random(4)
        for perm in g.ray_permutations.values():
            for _ in range(5):
                a = tuple(rng.randint(-2, 2) for _ in range(6))
                b = tuple(rng.randint(-2, 2) for _ in range(6))
                x, y = line_bundle_class(dp6, a), line_bundle_class(dp6, b)
                lhs = act_on_class(dp6, perm, k0_multiply(x, y))
                rhs = k0_multiply(act_on_class(dp6, perm, x), act_on_class(dp6, perm, y))
                assert lhs == rhs

    def test_incompatible_fans(self, p2, f2):
        from toric_surface_lab.grothendieck import IncompatibleFan

        with pytest.raises(IncompatibleFan):
            k0_multiply(structure_class(p2), structure_class(f2))


class TestKlyachko:
    def test_passes_on_standard_fans(self, p2, f2, square, dp6):
        for fan in (p2, f2, square, dp6):
            cert = verify_klyachko(fan)
            assert cert.ok
            assert cert.rank == fan.n
            assert cert.span_index == 1

    def test_p2_ray_classes_coincide(self, p2):
        j = [line_bundle_class(p2, unit_divisor(p2, i)) for i in range(3)]
        assert j[0] == j[1] == j[2]

    def test_fa_relations(self):
        for a in (2, 3, 5):
            fan = hirzebruch_fan(a)
            j = [line_bundle_class(fan, unit_divisor(fan, i)) for i in range(4)]
            f, s = hirzebruch_marking(fan)
            other_fiber = ({0, 1, 2, 3} - {f, s, (s + 2) % 4}).pop()
            assert j[other_fiber] == j[f]
            assert j[(s + 2) % 4] == k0_multiply(j[f].power(a), j[s])

    def test_dp6_cross_relations(self, dp6):
        j = [line_bundle_class(dp6, unit_divisor(dp6, i)) for i in range(6)]
        # Opposite rays pair up as (u_0,u_3), (u_2,u_5), (u_4,u_1); the ratio
        # of a class to its partner is the same for all three pairs.
        pairs = [(0, 3), (2, 5), (4, 1)]
        for a, b in pairs:
            for c, d in pairs:
                assert k0_multiply(j[a], j[d]) == k0_multiply(j[c], j[b])

    def test_corpus(self, small_corpus):
        seen = set()
        for entry in small_corpus[:40]:
            if entry.fan in seen:
                continue
            seen.add(entry.fan)
            assert verify_klyachko(entry.fan).ok


class TestRecurrence:
    @pytest.mark.parametrize("a", [2, 3, 4, 5])
    def test_holds(self, a):
        assert fa_recurrence_check(hirzebruch_fan(a), range(6))

    def test_m_zero_tautology(self):
        assert fa_recurrence_check(hirzebruch_fan(2), [0])


class TestStandardBasis:
    def test_fa_four_singletons(self):
        fan = hirzebruch_fan(3)
        g = compute_aut(fan)
        basis = standard_permutation_basis(minimalize(fan, g), g)
        assert basis.orbit_sizes() == (1, 1, 1, 1)
        cert = verify_permutation_basis(basis, fan, g)
        assert cert.ok

    def test_p2_three_singletons(self, p2, p2_aut):
        basis = standard_permutation_basis(minimalize(p2, p2_aut), p2_aut)
        assert basis.orbit_sizes() == (1, 1, 1)
        divisors = set(basis.divisors)
        assert (0, 0, 0) in divisors

    def test_square_signature(self, square, square_aut):
        basis = standard_permutation_basis(minimalize(square, square_aut), square_aut)
        assert basis.orbit_sizes() == (1, 2, 1)

    def test_dp6_signature(self, dp6, dp6_aut):
        basis = standard_permutation_basis(minimalize(dp6, dp6_aut), dp6_aut)
        assert basis.orbit_sizes() == (1, 3, 2)
        assert basis.stabilizer_indices == (1, 3, 2)

    def test_from_minimal_label_directly(self, dp6, dp6_aut):
        from toric_surface_lab.minimal_model import classify_minimal

        label = classify_minimal(dp6, dp6_aut)
        basis = standard_permutation_basis(label, dp6_aut)
        assert basis.orbit_sizes() == (1, 3, 2)
        assert verify_permutation_basis(basis, dp6, dp6_aut).ok

    def test_transport_on_corpus(self, small_corpus):
        for entry in small_corpus:
            trace = minimalize(entry.fan, entry.group)
            basis = standard_permutation_basis(trace, entry.group)
            assert basis.size == entry.fan.n
            cert = verify_permutation_basis(basis, entry.fan, entry.group)
            assert cert.ok


class TestVerifyBasis:
    def test_rejects_dependent_set(self, f2):
        g = compute_aut(f2)
        divisors = [
            (0, 0, 0, 0),
            unit_divisor(f2, 0),
            unit_divisor(f2, 1),
            unit_divisor(f2, 0, 0),
        ]
        with pytest.raises(NotABasis):
            verify_permutation_basis(divisors, f2, g)

    def test_accepts_paper_dp6_basis(self, dp6, dp6_aut):
        divisors = [
            (0,) * 6,
            unit_divisor(dp6, 0, 5),
            unit_divisor(dp6, 1, 2),
            unit_divisor(dp6, 3, 4),
            unit_divisor(dp6, 0, 1, 2),
            unit_divisor(dp6, 3, 4, 5),
        ]
        cert = verify_permutation_basis(divisors, dp6, dp6_aut)
        assert cert.ok
        assert sorted(cert.orbit_sizes) == [1, 2, 3]


class TestSearch:
    def test_p2_trivial_bound_two(self, p2):
        basis = search_line_bundle_basis(p2, trivial_group(p2), 2)
        assert basis is not None
        cert = verify_permutation_basis(basis, p2, trivial_group(p2))
        assert cert.ok

    def test_f2_order_two_bound_two(self, f2):
        g = compute_aut(f2)
        basis = search_line_bundle_basis(f2, g, 2)
        assert basis is not None
        assert verify_permutation_basis(basis, f2, g).ok

    def test_bound_zero_absent(self, p2):
        assert search_line_bundle_basis(p2, trivial_group(p2), 0) is None

    def test_deterministic(self, p2):
        g = trivial_group(p2)
        b1 = search_line_bundle_basis(p2, g, 2)
        b2 = search_line_bundle_basis(p2, g, 2)
        assert b1.divisors == b2.divisors


class TestAction:
    def test_divisor_action_permutes(self, square):
        g = compute_aut(square)
        for perm in g.ray_permutations.values():
            moved = act_on_divisor(perm, (1, 2, 3, 4))
            assert sorted(moved) == [1, 2, 3, 4]

    def test_f1_blowup_transport_matches_known_shape(self):
        f1 = blow_up(p2_fan(), [0])
        g = SymmetryGroup.from_generators([((0, 1), (1, 0))], f1)
        trace = minimalize(f1, g)
        basis = standard_permutation_basis(trace, g)
        tags = dict(zip(basis.divisors, basis.tags))
        exceptional = [d for d, t in tags.items() if t[0] == "exc"]
        assert exceptional == [(0, 1, 0, 0)]
