from fractions import Fraction

import pytest

from valjet.branch import (
    BranchParam,
    GenericJet,
    branch_compose,
    evaluate_at_jet,
    generic_jet,
    newton_puiseux,
    normal_form,
    normalize_coordinates,
    reconstruct_f,
    semigroup,
)
from valjet.errors import DomainError
from valjet.poly import MultiPoly, parse_poly
from valjet.series import TruncSeries

CUSP = parse_poly("x1^2 - x0^3")
QUAD46 = parse_poly("(x1^2 - x0^3)^2 - x0^6*x1")


def test_newton_puiseux_cusp():
    param = newton_puiseux(CUSP)
    assert param.n == 2
    assert param.terms == {3: Fraction(1)}
    assert param.exact


def test_newton_puiseux_4_6_15_curve():
    param = newton_puiseux(QUAD46, truncation=20)
    assert param.n == 4
    assert param.terms[6] == 1
    assert param.terms[9] == Fraction(1, 2)
    assert not param.exact
    # the parametrization annihilates f through the requested window
    assert branch_compose(QUAD46, param, 20).is_zero()


def test_newton_puiseux_reducible_tangent():
    with pytest.raises(DomainError, match="reducible input"):
        newton_puiseux(parse_poly("x1^2 - 2*x0^2"))


def test_newton_puiseux_reducible_deeper():
    # tangent cone is a pure power but two branches split later
    with pytest.raises(DomainError, match="reducible input"):
        newton_puiseux(parse_poly("x1^4 - x0^6"))
    with pytest.raises(DomainError, match="reducible input"):
        newton_puiseux(parse_poly("(x1^2 - x0^3)*(x1 - x0^2)"))


def test_newton_puiseux_irrational_coefficient():
    with pytest.raises(DomainError, match="irrational coefficient required"):
        newton_puiseux(parse_poly("x1^2 - 2*x0^4"))


def test_newton_puiseux_requires_normalized():
    with pytest.raises(DomainError, match="coordinates not normalized"):
        newton_puiseux(parse_poly("x0^2 - x1^3"))
    with pytest.raises(DomainError, match="coordinates not normalized"):
        newton_puiseux(parse_poly("(x1 - x0)^2 - x0^3"))


def test_newton_puiseux_smooth():
    param = newton_puiseux(parse_poly("x1 - x0^2"))
    assert param.n == 1
    assert param.terms == {2: Fraction(1)}
    assert param.exact


def test_normalize_identity():
    f2, change = normalize_coordinates(CUSP)
    assert f2 == CUSP
    assert change == {"kind": "identity"}


def test_normalize_swap():
    f2, change = normalize_coordinates(parse_poly("x0^2 - x1^3"))
    assert f2 == CUSP
    assert change == {"kind": "swap"}


def test_normalize_shear():
    f2, change = normalize_coordinates(parse_poly("(x1 - x0)^2 - x0^3"))
    assert f2 == CUSP
    assert change == {"kind": "shear", "lambda": Fraction(1)}


def test_normalize_reducible_and_irrational():
    with pytest.raises(DomainError, match="reducible input"):
        normalize_coordinates(parse_poly("x1^2 - x0^2"))
    with pytest.raises(DomainError, match="irrational tangent"):
        normalize_coordinates(parse_poly("x1^2 - 2*x0^2"))


def test_semigroup_cusp():
    sg = semigroup(newton_puiseux(CUSP))
    assert (sg.g, sg.beta_bar, sg.e) == (1, [2, 3], [2, 1])
    assert sg.n_seq == [2]
    assert sg.m_seq == [3]
    assert sg.conductor == 2
    assert sg.b == [[3]]


def test_semigroup_4_6_15():
    sg = semigroup(newton_puiseux(QUAD46))
    assert sg.beta_bar == [4, 6, 15]
    assert sg.e == [4, 2, 1]
    assert sg.chars == [4, 6, 9]
    assert sg.conductor == 18
    assert sg.b == [[3], [6, 1]]
    assert sg.divisorial_threshold == 30


def test_semigroup_4_7():
    param = BranchParam(n=4, terms={7: Fraction(1)}, truncation=12, exact=True)
    sg = semigroup(param)
    assert (sg.beta_bar, sg.e, sg.g) == ([4, 7], [4, 1], 1)
    assert sg.conductor == 18


def test_semigroup_genus_three():
    param = BranchParam(n=8, terms={12: Fraction(1), 20: Fraction(1, 2),
                                    26: Fraction(1), 27: Fraction(1)},
                        truncation=40, exact=False)
    sg = semigroup(param)
    assert sg.chars == [8, 12, 26, 27]
    assert sg.beta_bar == [8, 12, 38, 77]
    assert sg.e == [8, 4, 2, 1]
    assert sg.conductor == 120


def test_semigroup_truncation_too_small():
    param = BranchParam(n=4, terms={6: Fraction(1)}, truncation=8)
    with pytest.raises(DomainError, match="truncation too small"):
        semigroup(param)


def test_semigroup_nonprimitive_exact():
    param = BranchParam(n=4, terms={6: Fraction(1)}, truncation=8, exact=True)
    with pytest.raises(DomainError, match="reducible input"):
        semigroup(param)


def test_semigroup_smooth():
    sg = semigroup(newton_puiseux(parse_poly("x1 - x0^2")))
    assert (sg.g, sg.beta_bar, sg.conductor) == (0, [1], 0)


def test_normal_form():
    sg = semigroup(newton_puiseux(QUAD46))
    assert normal_form(sg, 30) == (6, 1, 0)
    assert normal_form(sg, 15) == (0, 0, 1)
    assert normal_form(sg, 11) is None
    assert normal_form(sg, 0) == (0, 0, 0)


def test_branch_param_json_round_trip():
    doc = {"n": 4, "x1": [{"k": 6, "c": "1"}, {"k": 9, "c": "1/2"}],
           "truncation": 40}
    param = BranchParam.from_json(doc)
    assert param.n == 4
    assert param.terms == {6: Fraction(1), 9: Fraction(1, 2)}
    assert param.to_json() == doc


def test_branch_param_rejects_low_exponent():
    with pytest.raises(DomainError, match="normalized position"):
        BranchParam(n=3, terms={2: Fraction(1)}, truncation=10)


def test_branch_param_ensure_extends_via_source():
    param = newton_puiseux(QUAD46, truncation=12)
    longer = param.ensure(30)
    assert longer.truncation >= 30
    assert longer.terms[9] == Fraction(1, 2)


def test_branch_param_ensure_without_source():
    param = BranchParam(n=2, terms={3: Fraction(1)}, truncation=5)
    with pytest.raises(DomainError, match="increase truncation"):
        param.ensure(10)


def test_reconstruct_cusp():
    assert reconstruct_f(newton_puiseux(CUSP)) == CUSP


def test_reconstruct_4_6_13():
    param = BranchParam(n=4, terms={6: Fraction(1), 7: Fraction(1)},
                        truncation=40, exact=True)
    f = reconstruct_f(param)
    expected = parse_poly("x1^4 - 2*x0^3*x1^2 - 4*x0^5*x1 + x0^6 - x0^7")
    assert f == expected


def test_generic_jet_cusp_level3():
    jet = generic_jet(newton_puiseux(CUSP), 3)
    u1, u2 = MultiPoly.var("u1"), MultiPoly.var("u2")
    x0 = jet.coords["x0"]
    assert x0.coeff(2) == u1 ** 2
    assert x0.coeff(3) == 2 * u1 * u2
    x1 = jet.coords["x1"]
    assert x1.coeff(3) == u1 ** 3
    assert x1.coeff(0).is_zero() and x1.coeff(2).is_zero()


def test_generic_jet_low_coefficients_vanish():
    # all coordinate coefficients below (beta0, beta1) vanish identically
    jet = generic_jet(newton_puiseux(QUAD46), 11)
    assert all(jet.coords["x0"].coeff(i).is_zero() for i in range(4))
    assert all(jet.coords["x1"].coeff(j).is_zero() for j in range(6))


def test_generic_jet_level_bound():
    param = BranchParam(n=2, terms={3: Fraction(1)}, truncation=5)
    with pytest.raises(DomainError, match="exceeds parametrization truncation"):
        generic_jet(param, 9)
    # an exact parametrization carries arbitrary levels
    assert generic_jet(newton_puiseux(CUSP), 9).level == 9


def test_evaluate_at_jet_basics():
    jet = generic_jet(newton_puiseux(CUSP), 4)
    assert evaluate_at_jet(parse_poly("x0#0"), jet).is_zero()
    p = parse_poly("x1#3^2 - x0#2^3")
    u1 = MultiPoly.var("u1")
    assert evaluate_at_jet(p, jet) == u1 ** 6 - u1 ** 6


def test_evaluate_at_jet_unknown_name():
    jet = generic_jet(newton_puiseux(CUSP), 4)
    with pytest.raises(DomainError, match="unregistered coordinate name"):
        evaluate_at_jet(parse_poly("y9#2"), jet)
    with pytest.raises(DomainError, match="unregistered coordinate name"):
        evaluate_at_jet(parse_poly("u1"), jet)


def test_evaluate_at_jet_registered_coordinate():
    jet = generic_jet(newton_puiseux(QUAD46), 15)
    jet.register("y2", parse_poly("x1^2 - x0^3"))
    val = evaluate_at_jet(parse_poly("y2#15"), jet)
    assert not val.is_zero()
    assert all(evaluate_at_jet(parse_poly(f"y2#{i}"), jet).is_zero()
               for i in range(15))


def test_reparametrization_group_law():
    # substituting t -> t + w*t^2 into the jet coordinates gives the same
    # series as reparametrizing with the composed tau coefficients
    jet = generic_jet(newton_puiseux(CUSP), 3)
    w = MultiPoly.var("w")
    trunc = jet.level + 1
    sigma = TruncSeries.from_terms({1: 1, 2: w}, trunc)
    for name in ("x0", "x1"):
        series = jet.coords[name]
        composed = TruncSeries.zero(trunc)
        spow = TruncSeries.from_terms({0: 1}, trunc)
        for i in range(trunc):
            if i:
                spow = spow * sigma
            composed = composed + spow.scale(1) * TruncSeries.from_terms(
                {0: series.coeff(i)}, trunc)
        # composed tau: u1*(t+wt^2) + u2*(t+wt^2)^2 + u3*(...)^3 has
        # coefficients u1, u1*w+u2, 2*u2*w+u3 (mod t^4)
        u = [MultiPoly.var(f"u{i}") for i in range(1, 4)]
        new_terms = {1: u[0], 2: u[0] * w + u[1], 3: 2 * u[1] * w + u[2]}
        tau2 = TruncSeries.from_terms(new_terms, trunc)
        if name == "x0":
            direct = tau2 ** 2
        else:
            direct = tau2 ** 3
        assert composed == direct


def test_ord_along_branch():
    param = newton_puiseux(QUAD46)
    assert branch_compose(parse_poly("x0"), param, 10).ord() == 4
    assert branch_compose(parse_poly("x1"), param, 10).ord() == 6
    assert branch_compose(parse_poly("x1^2 - x0^3"), param, 20).ord() == 15
