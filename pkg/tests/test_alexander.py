"""The fibered acyclification pipeline over Q[t, t^-1]."""

import pytest

from twisthom.alexander import (AcyclicityCertificate, FreeRankObstruction,
                                GradingError, TorsionData, alexander_data,
                                laurent_specialize, make_acyclic_fibered,
                                select_root_of_unity, torsion_invariants,
                                uct_dims)
from twisthom.complexes import catalog_complex
from twisthom.homology import twisted_homology
from twisthom.numbers import Laurent, cyclotomic_polynomial
from twisthom.reps import character_from_grading

T = Laurent.t_power(1)
ONE = Laurent.const(1)


def test_laurent_specialize_circle():
    from twisthom.complexes import _circle_complex
    circle = _circle_complex()
    mats = laurent_specialize(circle, [1])
    # stored coordinates: the boundary is t^-1 - 1, a unit multiple of t - 1
    assert mats[0][0, 0] == Laurent({-1: 1, 0: -1})
    assert mats[0][0, 0].unit_normalize() == T - 1


def test_laurent_specialize_t3():
    t3 = catalog_complex("t3").complex
    mats = laurent_specialize(t3, [1, 0, 0])
    for a, b in zip(mats, mats[1:]):
        assert (a @ b).is_zero()


def test_laurent_specialize_trefoil_validates():
    tre = catalog_complex("trefoil_exterior").complex
    mats = laurent_specialize(tre, [1, 1])
    assert (mats[0] @ mats[1]).is_zero()
    # the Alexander column is proportional to (p, -p) with p ~ t^2 - t + 1
    p = mats[1][0, 0].unit_normalize()
    assert p == Laurent({2: 1, 1: -1, 0: 1})


def test_laurent_specialize_rejects_bad_grading():
    lens = catalog_complex("lens", [5, 1]).complex
    with pytest.raises(GradingError):
        laurent_specialize(lens, [1])


def test_torsion_invariants_s1xs2():
    s = catalog_complex("s1xs2").complex
    td = alexander_data(s, [1])
    assert td.free_ranks == (0, 0, 0, 0)
    assert td.torsion_polys == ((T - 1,), (), (T - 1,), ())


def test_torsion_invariants_trefoil():
    td = alexander_data(catalog_complex("trefoil_exterior").complex, [1, 1])
    assert td.free_ranks == (0, 0, 0)
    assert td.torsion_polys[1] == (Laurent({2: 1, 1: -1, 0: 1}),)
    assert td.in_divisibility_order()


def test_torsion_invariants_t3():
    td = alexander_data(catalog_complex("t3").complex, [1, 0, 0])
    assert td.torsion_polys[1] == (T - 1, T - 1)
    assert td.free_ranks == (0, 0, 0, 0)


def test_select_examples():
    td = TorsionData([0, 0], [[], [T - 1, Laurent({2: 1, 1: 1, 0: 1})]])
    assert select_root_of_unity(td) == (2, 1)
    td = TorsionData([0, 0], [[], [T + 1]])
    assert select_root_of_unity(td) == (3, 1)
    td = TorsionData([0, 0, 0, 0], [[T - 1], [], [T - 1], []])
    assert select_root_of_unity(td) == (2, 1)


def test_select_obstruction():
    td = TorsionData([0, 1, 0], [[T - 1], [], []])
    with pytest.raises(FreeRankObstruction) as e:
        select_root_of_unity(td)
    assert e.value.degree == 1


def test_select_avoids_divisors():
    td = alexander_data(catalog_complex("trefoil_exterior").complex, [1, 1])
    n, a = select_root_of_unity(td)
    phi_n = cyclotomic_polynomial(n)
    for degree in range(1, td.degrees()):
        for p in td.torsion_polys[degree]:
            assert not phi_n.divides(p)


def test_uct_examples():
    s = catalog_complex("s1xs2").complex
    td = alexander_data(s, [1])
    assert uct_dims(td, 2) == [0, 0, 0, 0]
    assert uct_dims(td, 1) == [1, 1, 1, 1]
    tre = alexander_data(catalog_complex("trefoil_exterior").complex, [1, 1])
    assert uct_dims(tre, 6) == [0, 1, 1]


def test_uct_matches_direct_for_all_small_orders():
    cases = [("s1xs2", [], [1]), ("t3", [], [1, 0, 0]),
             ("trefoil_exterior", [], [1, 1]),
             ("s1x_sigma", [2], [0, 0, 0, 0, 1]),
             ("torus2d", [], [1, 0])]
    for name, params, phi in cases:
        cx = catalog_complex(name, params).complex
        td = alexander_data(cx, phi)
        for n in range(1, 13):
            direct = twisted_homology(
                cx, character_from_grading(cx.group, phi, n, 1)).dims
            assert list(direct) == uct_dims(td, n), (name, n)


def test_uct_matches_direct_many_gradings():
    """Both exact routes agree for assorted surjective gradings, n = 1..12."""
    cases = []
    t3 = catalog_complex("t3").complex
    for phi in [(0, 1, 0), (1, 1, 0), (1, 1, 1), (2, 1, 0), (1, -1, 3)]:
        cases.append((t3, list(phi)))
    t2 = catalog_complex("torus2d").complex
    for phi in [(0, 1), (2, 1), (1, -1)]:
        cases.append((t2, list(phi)))
    cases.append((catalog_complex("handlebody", [1]).complex, [1]))
    for cx, phi in cases:
        td = alexander_data(cx, phi)
        for n in range(1, 13):
            direct = twisted_homology(
                cx, character_from_grading(cx.group, phi, n, 1)).dims
            assert list(direct) == uct_dims(td, n), (phi, n)


def test_make_acyclic_fibered_certificates():
    cert = make_acyclic_fibered(catalog_complex("s1xs2").complex, [1])
    assert cert.z_order == 2 and cert.report.dims == (0, 0, 0, 0)
    cert = make_acyclic_fibered(catalog_complex("t3").complex, [1, 0, 0])
    assert cert.z_order == 2
    cert = make_acyclic_fibered(catalog_complex("trefoil_exterior").complex, [1, 1])
    assert cert.z_order == 2
    sg = catalog_complex("s1x_sigma", [2]).complex
    cert = make_acyclic_fibered(sg, [0, 0, 0, 0, 1])
    assert cert.z_order <= 3 and cert.report.acyclic


def test_certificate_self_validation():
    tre = catalog_complex("trefoil_exterior").complex
    cert = make_acyclic_fibered(tre, [1, 1])
    again = twisted_homology(tre, cert.character)
    assert again.dims == cert.report.dims


def test_phi_sign_symmetry():
    tre = catalog_complex("trefoil_exterior").complex
    plus = make_acyclic_fibered(tre, [1, 1])
    minus = make_acyclic_fibered(tre, [-1, -1])
    assert plus.z_order == minus.z_order


def test_non_surjective_grading_rejected():
    s = catalog_complex("s1xs2").complex
    with pytest.raises(GradingError):
        make_acyclic_fibered(s, [2])
    with pytest.raises(GradingError):
        make_acyclic_fibered(s, [0])


def test_free_rank_obstruction_handlebody():
    h2 = catalog_complex("handlebody", [2]).complex
    with pytest.raises(FreeRankObstruction) as e:
        make_acyclic_fibered(h2, [1, 0])
    assert e.value.degree == 1 and e.value.free_rank == 1


def test_certificate_invariants_enforced():
    td = TorsionData([0, 0], [[], [T + 1]])
    s = catalog_complex("s1xs2").complex
    ch = character_from_grading(s.group, [1], 2, 1)
    report = twisted_homology(s, ch)
    with pytest.raises(ValueError):
        AcyclicityCertificate(2, 1, ch, report, td)  # Phi_2 divides t + 1
    with pytest.raises(ValueError):
        AcyclicityCertificate(1, 1, ch, report,
                              TorsionData([0, 0], [[], []]))  # z = 1


def test_torsion_invariants_rejects_mismatched_input():
    with pytest.raises(ValueError):
        torsion_invariants([], [1, 1])


def test_torus2d_is_acyclifiable():
    """T^2 along (1, 0): H_1 is (t-1)-torsion, so z = -1 certifies acyclicity.

    (A free middle rank would be an obstruction; the 2-torus does not have
    one, matching the Kunneth computation with the -1 character.)
    """
    t2 = catalog_complex("torus2d").complex
    td = alexander_data(t2, [1, 0])
    assert td.free_ranks == (0, 0, 0)
    cert = make_acyclic_fibered(t2, [1, 0])
    assert cert.z_order == 2 and cert.report.acyclic
