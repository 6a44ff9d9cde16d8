import math

import numpy as np
import pytest

from distlap.cayley import (
    AbelianGroup,
    Character,
    GroupDistanceVector,
    cayley_graph,
    cayley_spectrum,
    certified_odd_order_constant,
    characters,
    complex_character_margin,
    distance_vector_from_graph,
    odd_order_constant,
    random_connection_set,
    random_group_metric,
    real_character_margin,
    check_cayley_bounds,
)
from distlap.generators import complete_graph, cycle_graph
from distlap.graphs import bfs_apsp
from distlap.spectral import normalized_distance_laplacian, spectral_gap, symmetric_eigensystem

from helpers import cayley_eigs_direct


class TestGroup:
    def test_parse_labels(self):
        assert AbelianGroup.parse("Z4").moduli == (4,)
        assert AbelianGroup.parse("z2xZ2").moduli == (2, 2)
        assert AbelianGroup.parse("Z3xZ5").label() == "Z3xZ5"

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            AbelianGroup.parse("Q8")
        with pytest.raises(ValueError):
            AbelianGroup.parse("Zx")

    def test_modulus_floor(self):
        with pytest.raises(ValueError):
            AbelianGroup((1,))

    def test_index_element_roundtrip(self):
        g = AbelianGroup((2, 3, 4))
        for i in range(g.order):
            assert g.index(g.element(i)) == i
        assert g.order == 24

    def test_row_major_order(self):
        g = AbelianGroup((2, 3))
        assert g.elements() == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]

    def test_arithmetic(self):
        g = AbelianGroup((4,))
        assert g.add((3,), (2,)) == (1,)
        assert g.neg((1,)) == (3,)
        assert g.coerce(7) == (3,)


class TestCharacters:
    def test_count(self):
        assert len(characters(AbelianGroup((2, 3)))) == 6

    def test_z4_values(self):
        chi = Character(AbelianGroup((4,)), (1,))
        vals = [chi.value((v,)) for v in range(4)]
        assert vals[0] == pytest.approx(1.0)
        assert vals[1] == pytest.approx(1j)
        assert vals[2] == pytest.approx(-1.0)
        assert vals[3] == pytest.approx(-1j)

    def test_homomorphism(self):
        g = AbelianGroup((3, 4))
        chi = Character(g, (2, 3))
        for a in g.elements():
            for b in g.elements():
                assert chi.value(g.add(a, b)) == pytest.approx(
                    chi.value(a) * chi.value(b), abs=1e-12
                )

    def test_realness_flags(self):
        g = AbelianGroup((4,))
        assert Character(g, (0,)).is_trivial
        assert Character(g, (2,)).is_real
        assert not Character(g, (1,)).is_real

    @pytest.mark.parametrize("moduli", [(5,), (8,), (2, 4), (3, 3), (2, 2, 2), (64,), (6, 6)])
    def test_orthogonality(self, moduli):
        # (1/|G|) sum_v chi(v) conj(chi'(v)) = [chi == chi'], |G| <= 64
        g = AbelianGroup(moduli)
        mat = np.array([chi.values() for chi in characters(g)])
        gram = mat @ mat.conj().T / g.order
        assert np.max(np.abs(gram - np.eye(g.order))) < 1e-12


class TestCayleyGraph:
    def test_z4_cycle(self):
        g = cayley_graph(AbelianGroup((4,)), [1, 3])
        assert g == cycle_graph(4)

    def test_z2z2_complete(self):
        grp = AbelianGroup((2, 2))
        g = cayley_graph(grp, [(0, 1), (1, 0), (1, 1)])
        assert g == complete_graph(4)

    def test_z5_cycle(self):
        assert cayley_graph(AbelianGroup((5,)), [1, 4]) == cycle_graph(5)

    def test_identity_rejected(self):
        with pytest.raises(ValueError):
            cayley_graph(AbelianGroup((4,)), [0, 1, 3])

    def test_not_inverse_closed_rejected(self):
        with pytest.raises(ValueError):
            cayley_graph(AbelianGroup((5,)), [1])


class TestDistanceVector:
    def test_c4(self):
        grp = AbelianGroup((4,))
        dv = distance_vector_from_graph(grp, cycle_graph(4))
        assert dv.values == (0, 1, 2, 1)

    def test_c5(self):
        grp = AbelianGroup((5,))
        dv = distance_vector_from_graph(grp, cycle_graph(5))
        assert dv.values == (0, 1, 2, 2, 1)

    def test_k4_on_z2z2(self):
        grp = AbelianGroup((2, 2))
        dv = distance_vector_from_graph(grp, complete_graph(4))
        assert dv.values == (0, 1, 1, 1)

    def test_non_cayley_input_detected(self):
        from distlap.generators import path_graph

        grp = AbelianGroup((4,))
        with pytest.raises(ValueError, match="translation-invariant"):
            distance_vector_from_graph(grp, path_graph(4))

    def test_asymmetric_profile_rejected(self):
        with pytest.raises(ValueError, match="d\\(v\\) != d\\(-v\\)"):
            GroupDistanceVector(AbelianGroup((3,)), (0, 1, 2))

    def test_subadditivity_violation_rejected(self):
        with pytest.raises(ValueError, match="subadditivity"):
            GroupDistanceVector(AbelianGroup((5,)), (0, 1, 10, 10, 1))

    def test_zero_off_identity_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            GroupDistanceVector(AbelianGroup((3,)), (0, 0, 0))


class TestCayleySpectrum:
    def test_z4_cycle_metric(self):
        grp = AbelianGroup((4,))
        dv = GroupDistanceVector(grp, (0, 1, 2, 1))
        s = cayley_spectrum(grp, dv)
        assert s.eigenvalues == pytest.approx((0.0, 1.0, 1.5, 1.5), abs=1e-12)

    def test_z2_matches_k2(self):
        grp = AbelianGroup((2,))
        s = cayley_spectrum(grp, GroupDistanceVector(grp, (0, 1)))
        assert s.eigenvalues == pytest.approx((0.0, 2.0), abs=1e-12)

    def test_z5_matches_dense(self):
        grp = AbelianGroup((5,))
        dv = distance_vector_from_graph(grp, cycle_graph(5))
        closed = cayley_spectrum(grp, dv)
        dense = symmetric_eigensystem(
            normalized_distance_laplacian(bfs_apsp(cycle_graph(5)))
        )
        assert np.allclose(closed.eigenvalues, dense.eigenvalues, atol=1e-9)

    def test_matches_per_character_loop(self):
        grp = AbelianGroup((2, 3))
        rng = np.random.default_rng(3)
        dv = random_group_metric(grp, rng)
        assert np.allclose(
            cayley_spectrum(grp, dv).eigenvalues,
            cayley_eigs_direct(grp, dv),
            atol=1e-10,
        )

    def test_trivial_character_gives_zero(self):
        grp = AbelianGroup((3, 3))
        dv = random_group_metric(grp, np.random.default_rng(9))
        s = cayley_spectrum(grp, dv)
        assert abs(s.eigenvalues[0]) < 1e-12


class TestOddOrderConstant:
    def test_value_window(self):
        c = odd_order_constant()
        assert abs(c - 3.554) < 1e-3

    def test_quartic_root(self):
        c = odd_order_constant()
        p = (((4 * c - 4) * c - 31) * c - 20) * c + 4
        assert abs(p) <= 1e-10

    def test_floor_window(self):
        c = odd_order_constant()
        assert 0.718 < 1 - 1 / c < 0.719

    def test_certified_crosscheck(self):
        from distlap.certify import quadratic_form_max

        c = certified_odd_order_constant()
        assert abs(c - quadratic_form_max()) <= 1e-10


class TestCharacterMargins:
    def test_z4_real_margin(self):
        # d = (0,1,2,1) against (-1)^v: (0+1+2+1) - 3*(0-1+2-1) = 4
        grp = AbelianGroup((4,))
        dv = GroupDistanceVector(grp, (0, 1, 2, 1))
        margin, witness = real_character_margin(grp, dv, Character(grp, (2,)))
        assert margin == pytest.approx(4.0)
        assert witness.chain_holds

    def test_z2_real_margin(self):
        grp = AbelianGroup((2,))
        dv = GroupDistanceVector(grp, (0, 1))
        margin, _ = real_character_margin(grp, dv, Character(grp, (1,)))
        assert margin == pytest.approx(4.0)

    def test_z6_real_margin(self):
        grp = AbelianGroup((6,))
        dv = distance_vector_from_graph(grp, cycle_graph(6))
        assert dv.values == (0, 1, 2, 3, 2, 1)
        margin, witness = real_character_margin(grp, dv, Character(grp, (3,)))
        assert margin == pytest.approx(12.0)
        assert witness.minimizer == (1,) or witness.minimizer == (5,)

    def test_real_margin_rejects_complex(self):
        grp = AbelianGroup((4,))
        dv = GroupDistanceVector(grp, (0, 1, 2, 1))
        with pytest.raises(ValueError):
            real_character_margin(grp, dv, Character(grp, (1,)))

    def test_z3_complex_margin(self):
        # 2 - c*(2 cos(2pi/3)) = 2 + c
        grp = AbelianGroup((3,))
        dv = GroupDistanceVector(grp, (0, 1, 1))
        margin = complex_character_margin(grp, dv, Character(grp, (1,)))
        assert margin == pytest.approx(2.0 + odd_order_constant(), abs=1e-9)

    @pytest.mark.parametrize("n", [5, 7])
    def test_cycle_metric_margins_nonnegative(self, n):
        grp = AbelianGroup((n,))
        dv = distance_vector_from_graph(grp, cycle_graph(n))
        for chi in characters(grp):
            if chi.is_trivial:
                continue
            assert complex_character_margin(grp, dv, chi) >= -1e-9

    def test_complex_margin_rejects_real(self):
        grp = AbelianGroup((4,))
        dv = GroupDistanceVector(grp, (0, 1, 2, 1))
        with pytest.raises(ValueError, match="real_character_margin"):
            complex_character_margin(grp, dv, Character(grp, (2,)))
        with pytest.raises(ValueError):
            complex_character_margin(grp, dv, Character(grp, (0,)))

    def test_random_draw_margins(self):
        rng = np.random.default_rng(55)
        pool = [(4,), (5,), (6,), (2, 3), (3, 3), (2, 2, 2)]
        for i in range(60):
            grp = AbelianGroup(pool[i % len(pool)])
            dv = random_group_metric(grp, rng)
            for chi in characters(grp):
                if chi.is_trivial:
                    continue
                if chi.is_real:
                    margin, witness = real_character_margin(grp, dv, chi)
                    assert margin >= -1e-9 and witness.chain_holds
                else:
                    assert complex_character_margin(grp, dv, chi) >= -1e-9


class TestCayleyBounds:
    def test_c4(self):
        grp = AbelianGroup((4,))
        s = cayley_spectrum(grp, GroupDistanceVector(grp, (0, 1, 2, 1)))
        checks = check_cayley_bounds(s, grp)
        assert [c.name for c in checks] == ["cayley_floor"]
        assert checks[0].passed and spectral_gap(s) == pytest.approx(1.0)

    def test_c5_odd_floor(self):
        grp = AbelianGroup((5,))
        dv = distance_vector_from_graph(grp, cycle_graph(5))
        checks = {c.name: c for c in check_cayley_bounds(cayley_spectrum(grp, dv), grp)}
        assert checks["odd_order_floor"].passed
        assert checks["odd_order_floor"].value > 0.718

    def test_k2(self):
        grp = AbelianGroup((2,))
        s = cayley_spectrum(grp, GroupDistanceVector(grp, (0, 1)))
        assert all(c.passed for c in check_cayley_bounds(s, grp))


class TestRandomGroupMetric:
    def test_profile_is_valid_and_connected(self):
        rng = np.random.default_rng(77)
        for moduli in [(6,), (7,), (2, 4), (3, 3)]:
            grp = AbelianGroup(moduli)
            dv = random_group_metric(grp, rng)  # constructor validates
            assert len(dv.values) == grp.order
            assert all(x > 0 for x in dv.values[1:])

    def test_connection_set_generates(self):
        rng = np.random.default_rng(19)
        grp = AbelianGroup((8,))
        conn = random_connection_set(grp, rng)
        g = cayley_graph(grp, conn)
        assert g.is_connected()

    def test_floors_hold_on_random_invariant_metrics(self):
        rng = np.random.default_rng(23)
        for moduli in [(5,), (7,), (9,), (3, 3), (2, 4)]:
            grp = AbelianGroup(moduli)
            dv = random_group_metric(grp, rng)
            s = cayley_spectrum(grp, dv)
            assert all(c.passed for c in check_cayley_bounds(s, grp))
