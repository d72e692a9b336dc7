from fractions import Fraction

import pytest

from cdga.catalog import fixture, hpn_presentation
from cdga.cohomology import ClassMap, cohomology
from cdga.core import Morphism, Poly, Presentation
from cdga.fibration import (BaseNotCertified, DegeneratePresentation,
                            EvenSphere, FibrationError, NotClosed, OddSphere,
                            ParityMismatch, ProjectiveLike, WrongDegree,
                            build_fibration_model, check_formal_map,
                            closure_correction, correction_sum, theoremC_reduce,
                            tilde_mu_E)
from conftest import random_poly


def correction_base(truncation_degree: int = 14) -> Presentation:
    """Base whose sphere bundle genuinely needs closure corrections.

    Generators y(2), u(4), b(5), c(5) with db = u*y and dc = y^3.
    """
    stub = Presentation([("y", 2), ("u", 4), ("b", 5), ("c", 5)],
                        truncation_degree=truncation_degree, check=False)
    return Presentation(
        [("y", 2), ("u", 4), ("b", 5), ("c", 5)],
        {"b": stub.mul(stub.generator("u"), stub.generator("y")),
         "c": stub.power(stub.generator("y"), 3)},
        truncation_degree=truncation_degree,
    )


# ---------------------------------------------------------------- construction


def test_build_even_sphere_bundle():
    base = hpn_presentation(1, 12)
    fm = build_fibration_model(base, EvenSphere(2), base.generator("u"))
    assert fm.primitive
    assert fm.z_name == "z" and fm.z_prime_name == "z'"
    zp = fm.total.generator("z'")
    z = fm.total.generator("z")
    assert fm.total.d(zp) == fm.total.power(z, 2) - fm.total.generator("u")
    assert fm.power == 2


def test_build_odd_sphere_bundle():
    base = hpn_presentation(1, 12)
    fm = build_fibration_model(base, OddSphere(3), base.generator("u"))
    assert fm.z_prime_name is None
    assert fm.total.d(fm.total.generator("e")) == fm.total.generator("u")


def test_build_projective_like_bundle():
    base = fixture("sphere:6").presentation
    fm = build_fibration_model(base, ProjectiveLike(2, 3), base.generator("x"))
    z = fm.total.generator("z")
    assert fm.total.d(fm.total.generator("z'")) == \
        fm.total.power(z, 3) - fm.total.generator("x")
    assert fm.power == 3


def test_build_name_clash_and_override():
    stub = Presentation([("z", 4)], truncation_degree=12, check=False)
    base = Presentation([("z", 4)], truncation_degree=12)
    fm = build_fibration_model(base, EvenSphere(2), Poly.zero())
    assert fm.z_name == "z_"  # clash with the base generator is avoided
    fm2 = build_fibration_model(base, OddSphere(3), stub.generator("z"),
                                names=("f",))
    assert fm2.z_name == "f"


def test_build_rejects_wrong_degree():
    base = hpn_presentation(1, 12)
    with pytest.raises(WrongDegree):
        build_fibration_model(base, EvenSphere(2), base.generator("w"))


def test_build_rejects_non_closed_u():
    base = correction_base()
    # b*c has degree 10 and d(b*c) = u*y*c + b*y^3 != 0
    bad = base.mul(base.generator("b"), base.generator("c"))
    assert not base.d(bad).is_zero
    with pytest.raises(NotClosed):
        build_fibration_model(base, ProjectiveLike(2, 5), bad)


def test_build_rejects_parity_mismatch():
    base = hpn_presentation(1, 12)
    with pytest.raises(ParityMismatch):
        build_fibration_model(base, EvenSphere(3), Poly.zero())
    with pytest.raises(ParityMismatch):
        build_fibration_model(base, OddSphere(4), Poly.zero())
    with pytest.raises(ParityMismatch):
        build_fibration_model(base, ProjectiveLike(3, 2), Poly.zero())


def test_primitivity_detection():
    base = hpn_presentation(1, 12)
    assert build_fibration_model(base, EvenSphere(2),
                                 base.generator("u")).primitive
    assert not build_fibration_model(
        base, EvenSphere(4), base.power(base.generator("u"), 2)).primitive


# ------------------------------------------------------------------- reduction


@pytest.mark.parametrize("n", [1, 2])
def test_reduction_of_twistor_bundle(n):
    fm = fixture(f"twistor:hpn:{n}").fibration
    red = theoremC_reduce(fm)
    degs = sorted(g.degree for g in red.VE_model.generators)
    assert degs == [2, 4 * n + 3]
    assert red.chosen_u_prime.name == "u"
    assert red.v_remainder.is_zero
    assert red.u_prime_coefficient == 1
    # phi is a quasi-isomorphism total -> VE
    table_t = cohomology(fm.total, 4 * n + 4)
    table_v = cohomology(red.VE_model, 4 * n + 4)
    for k in range(4 * n + 5):
        assert table_t.betti(k) == table_v.betti(k)


def test_reduction_section_identity(rng):
    fm = fixture("twistor:hpn:1").fibration
    red = theoremC_reduce(fm)
    for _ in range(25):
        p = random_poly(red.VE_model, rng, rng.randint(2, 8))
        assert red.phi.apply(red.psi.apply(p)) == p


def test_reduction_phi_is_chain_map_on_random_polys(rng):
    fm = fixture("twistor:hpn:1").fibration
    red = theoremC_reduce(fm)
    for _ in range(25):
        p = random_poly(fm.total, rng, rng.randint(2, 8))
        assert red.phi.apply(fm.total.d(p)) == red.VE_model.d(red.phi.apply(p))


def test_reduction_with_coefficient_and_remainder():
    base = correction_base()
    u = base.generator("u").scale(2) + base.power(base.generator("y"), 2)
    fm = build_fibration_model(base, EvenSphere(2), u)
    red = theoremC_reduce(fm)
    assert red.chosen_u_prime.name == "u"
    assert red.u_prime_coefficient == 2
    assert red.v_remainder == base.power(base.generator("y"), 2)
    VE = red.VE_model
    # phi(u) = (z^2 - y^2) / 2
    expected = (VE.power(VE.generator("z"), 2)
                - VE.power(VE.generator("y"), 2)).scale(Fraction(1, 2))
    assert red.phi.assignment["u"] == expected


def test_reduction_projective_cube():
    # CP^5-like total space: fiber Q[z]/z^3 with z in degree 2 over a
    # 6-sphere base, twisted by the fundamental class.
    base = fixture("sphere:6").presentation
    fm = build_fibration_model(base, ProjectiveLike(2, 3), base.generator("x"))
    red = theoremC_reduce(fm)
    VE = red.VE_model
    assert sorted((g.name, g.degree) for g in VE.generators) == \
        [("x'", 11), ("z", 2)]
    assert VE.d(VE.generator("x'")) == VE.power(VE.generator("z"), 6)


def test_reduction_trivial_for_nonprimitive():
    base = hpn_presentation(1, 12)
    fm = build_fibration_model(base, EvenSphere(4),
                               base.power(base.generator("u"), 2))
    red = theoremC_reduce(fm)
    assert red.chosen_u_prime is None
    assert red.VE_model is fm.total
    assert red.phi.assignment == Morphism.identity(fm.total).assignment


def test_reduction_rejects_product_and_odd_fiber():
    base = hpn_presentation(1, 12)
    with pytest.raises(DegeneratePresentation):
        theoremC_reduce(build_fibration_model(base, EvenSphere(2), Poly.zero()))
    with pytest.raises(FibrationError):
        theoremC_reduce(build_fibration_model(base, OddSphere(3),
                                              base.generator("u")))


# ----------------------------------------------------------------- corrections


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("i", [1, 2, 3])
def test_correction_sum_telescopes(d, i):
    stub = Presentation([("z", 2), ("u", 2 * d)], truncation_degree=6 * d + 6)
    z, u = stub.generator("z"), stub.generator("u")
    s = correction_sum(stub, z, u, i, d)
    lhs = stub.mul(stub.power(z, d) - u, s)
    assert lhs == stub.power(z, d * i) - stub.power(u, i)


def test_closure_correction_identity_when_already_closed():
    fm = fixture("twistor:hpn:1").fibration
    red = theoremC_reduce(fm)
    z = red.VE_model.generator("z")
    lifted = closure_correction(fm, z, red)
    assert lifted == fm.total.generator("z")


def test_closure_correction_produces_expected_term():
    base = correction_base()
    fm = build_fibration_model(base, EvenSphere(2), base.generator("u"))
    red = theoremC_reduce(fm)
    VE, total = red.VE_model, fm.total
    y, b, c, z = (VE.generator(n) for n in ("y", "b", "c", "z"))
    x = VE.mul(VE.power(y, 2), b) - VE.mul(VE.power(z, 2), c)
    assert VE.d(x).is_zero
    lifted = closure_correction(fm, x, red)
    assert total.d(lifted).is_zero
    assert red.phi.apply(lifted) == x
    ty, tb, tc, tz = (total.generator(n) for n in ("y", "b", "c", "z"))
    zp = total.generator("z'")
    expected = total.mul(total.power(ty, 2), tb) \
        + total.mul(total.power(ty, 3), zp) \
        - total.mul(tc, total.power(tz, 2))
    assert lifted == expected


def test_closure_correction_with_coefficient_and_remainder(rng):
    base = correction_base()
    u = base.generator("u").scale(2) + base.power(base.generator("y"), 2)
    fm = build_fibration_model(base, EvenSphere(2), u)
    red = theoremC_reduce(fm)
    VE, total = red.VE_model, fm.total
    table = cohomology(VE, 12)
    checked = 0
    for k in range(2, 13):
        for rep in table.degrees[k].class_reps:
            lifted = closure_correction(fm, rep, red)
            assert total.d(lifted).is_zero
            assert red.phi.apply(lifted) == rep
            checked += 1
    assert checked >= 5


def test_closure_correction_on_random_cocycles(rng):
    base = correction_base()
    fm = build_fibration_model(base, EvenSphere(2), base.generator("u"))
    red = theoremC_reduce(fm)
    VE, total = red.VE_model, fm.total
    count = 0
    for _ in range(400):
        p = random_poly(VE, rng, rng.randint(2, 10))
        if p.is_zero or not VE.d(p).is_zero:
            continue
        lifted = closure_correction(fm, p, red)
        assert total.d(lifted).is_zero
        assert red.phi.apply(lifted) == p
        count += 1
    assert count >= 50


def test_closure_correction_rejects_non_cocycle():
    base = correction_base()
    fm = build_fibration_model(base, EvenSphere(2), base.generator("u"))
    red = theoremC_reduce(fm)
    with pytest.raises(NotClosed):
        closure_correction(fm, red.VE_model.generator("b"), red)


# ---------------------------------------------------------------- certificates


def hpn_certificate(base, N):
    table = cohomology(base, N)
    assignment = {"u": table.class_vector(base.generator("u"))[1],
                  "w": [Fraction(0)] * table.betti(
                      base.by_name["w"].degree)}
    return ClassMap(base, table, assignment)


def test_tilde_mu_E_on_twistor():
    fm = fixture("twistor:hpn:1").fibration
    mu_B = hpn_certificate(fm.base_pres, fm.base_pres.truncation_degree)
    mu_E = tilde_mu_E(fm, mu_B)
    assert mu_E.is_chain_map()
    assert mu_E.is_quasi_iso(cohomology(fm.total, fm.total.truncation_degree))
    # z' dies, z survives
    assert all(v == 0 for v in mu_E.assignment["z'"])
    assert any(v != 0 for v in mu_E.assignment["z"])


def test_tilde_mu_E_rejects_bad_base_certificate():
    fm = fixture("twistor:hpn:1").fibration
    base = fm.base_pres
    table = cohomology(base, base.truncation_degree)
    bad = ClassMap(base, table,
                   {"u": [Fraction(0)] * table.betti(4),
                    "w": [Fraction(0)] * table.betti(base.by_name["w"].degree)})
    with pytest.raises(BaseNotCertified):
        tilde_mu_E(fm, bad)


def test_check_formal_map_on_twistor():
    fm = fixture("twistor:hpn:1").fibration
    mu_B = hpn_certificate(fm.base_pres, fm.base_pres.truncation_degree)
    mu_E = tilde_mu_E(fm, mu_B)
    report = check_formal_map(fm, mu_B, mu_E)
    assert report.ok
    assert report.first_failure is None
    assert all(row.equal for row in report.degrees)
