from fractions import Fraction

import numpy as np
import pytest

from valjet._kernels import (
    KERNEL_KIND,
    _numpy_mul,
    frac_mod,
    series_mul,
    series_pow,
    series_window,
)
from valjet.branch import BranchParam, newton_puiseux
from valjet.poly import MultiPoly, parse_poly
from valjet.zerotest import (
    ZeroTestPolicy,
    compose_modp,
    eval_modp,
    jet_series_modp,
    jet_vanishing_checks,
    nonzero_witness,
    probably_zero,
    witness_digest,
)

P = 67108859


def test_kernel_kind_resolved():
    assert KERNEL_KIND in ("numba", "numpy")


def test_series_mul_matches_exact_convolution():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = rng.integers(0, P, size=40).astype(np.int64)
        b = rng.integers(0, P, size=40).astype(np.int64)
        got = series_mul(a, b, P)
        want = [sum(int(a[j]) * int(b[i - j]) for j in range(i + 1)) % P
                for i in range(40)]
        assert got.tolist() == want
        # both kernel paths agree
        assert _numpy_mul(a, b, P).tolist() == want


def test_series_pow_matches_repeated_mul():
    rng = np.random.default_rng(5)
    a = rng.integers(0, P, size=24).astype(np.int64)
    acc = series_window(24)
    acc[0] = 1
    for e in range(6):
        assert series_pow(a, e, P).tolist() == acc.tolist()
        acc = series_mul(acc, a, P)


def test_frac_mod():
    assert frac_mod(Fraction(1, 2), 7) == 4
    assert frac_mod(Fraction(-3), 7) == 4
    with pytest.raises(ValueError):
        frac_mod(Fraction(1, 7), 7)


def test_eval_modp():
    # u1^2 - eps/2 at (3, 4) is exactly 7
    poly = parse_poly("u1^2 - 1/2*eps")
    assert eval_modp(poly, {"u1": 3, "eps": 4}, 11) == 7
    assert eval_modp(poly, {"u1": 3, "eps": 4}, 7) == 0


def test_probably_zero_and_witness():
    zero = MultiPoly.zero(("u1", "eps"))
    assert probably_zero(zero)
    assert probably_zero(zero, ZeroTestPolicy(exact=True))

    poly = -4 * MultiPoly.var("u1") ** 26
    w = nonzero_witness(poly)
    assert w is not None
    p, point, value = w
    assert value == eval_modp(poly, point, p) != 0
    assert nonzero_witness(poly, ZeroTestPolicy(exact=True))[0] == "exact"


def test_policy_is_deterministic():
    poly = parse_poly("u1*u2 - u3")
    a = nonzero_witness(poly, ZeroTestPolicy(seed=11))
    b = nonzero_witness(poly, ZeroTestPolicy(seed=11))
    assert a == b


def test_jet_composition_vanishing_window():
    f = parse_poly("(x1^2 - x0^3)^2 - x0^6*x1")
    param = newton_puiseux(f, 34)
    checks = jet_vanishing_checks(f, param, 30, ZeroTestPolicy(seed=2))
    assert len(checks) == 6
    # jets of the curve satisfy its equation through level m
    assert all(o is None or o > 30 for _, o in checks)

    h = parse_poly("x1^2 - x0^3")
    checks = jet_vanishing_checks(h, param, 30, ZeroTestPolicy(seed=2),
                                  trunc=31)
    # first meeting order 15 survives specialization: coefficient is u1^15
    assert all(o == 15 for _, o in checks)


def test_compose_modp_matches_exact_series():
    from valjet.branch import branch_compose

    param = BranchParam(n=2, terms={3: Fraction(1, 2)}, truncation=20,
                        exact=True)
    h = parse_poly("x1^2 + x0*x1 - 2*x0^4")
    exact = branch_compose(h, param, 12)
    series = jet_series_modp(param, 11, {"u1": 1}, P, 12)
    window = compose_modp(h, series, P)
    for i in range(12):
        assert window[i] == frac_mod(exact.coeffs[i], P)


def test_witness_digest_is_stable():
    poly = parse_poly("u1^3 + eps")
    d = witness_digest(poly)
    assert d == witness_digest(poly)
    assert len(d) == 64
    assert witness_digest("eps + u1^3") == d  # the canonical rendering
