"""Independent cross-checks used by the test suite and verifiers.

These routes deliberately avoid the jet machinery.  Intersection orders
come from resultants, and candidate generators come from approximate
roots computed by plain polynomial division, so agreement with the
composition-based values is meaningful evidence.
"""

from fractions import Fraction

from .errors import ClaimViolation, DomainError
from .poly import MultiPoly


def _to_sympy(p, symbols):
    import sympy

    x0, x1 = symbols
    expr = sympy.Integer(0)
    p = p.with_vars(("x0", "x1"))
    for (a, b), c in p.terms.items():
        expr += sympy.Rational(c.numerator, c.denominator) * x0**a * x1**b
    return expr


def intersection_order(f, h):
    """x0-order of the x1-resultant of f and h; None on a common factor.

    When f is x1-general at the origin (its x0 = 0 restriction is a unit
    times a pure x1 power), this order equals the intersection number of
    f and h there, which is the branch valuation of h when f is a single
    branch.
    """
    import sympy

    restriction = f.subs({"x0": Fraction(0)})
    low = restriction.low_degree()
    if low is None or low != f.deg_in("x1"):
        raise DomainError(
            "resultant order needs f with x1-general restriction to x0 = 0")
    x0, x1 = sympy.symbols("x0 x1")
    res = sympy.resultant(_to_sympy(f, (x0, x1)), _to_sympy(h, (x0, x1)), x1)
    res = sympy.expand(res)
    if res == 0:
        return None
    poly = sympy.Poly(res, x0)
    return min(m[0] for m in poly.monoms())


def divmod_x1(a, b):
    """Division with remainder in x1, for b monic in x1."""
    e = b.deg_in("x1")
    lead_b = _x1_coefficient(b, e)
    if not lead_b.is_constant() or lead_b.constant_value() != 1:
        raise DomainError("divisor must be monic in x1")
    x1 = MultiPoly.var("x1")
    q = MultiPoly.zero(("x0", "x1"))
    r = a.with_vars(("x0", "x1"))
    while r.deg_in("x1") >= e and not r.is_zero():
        k = r.deg_in("x1")
        c = _x1_coefficient(r, k)
        step = c * x1 ** (k - e)
        q = q + step
        r = r - step * b
    return q, r


def _x1_coefficient(p, k):
    p = p.with_vars(("x0", "x1"))
    terms = {(a, 0): c for (a, b), c in p.terms.items() if b == k}
    return MultiPoly(("x0", "x1"), terms)


def approximate_root(f, d):
    """The d-th approximate root of f, monic in x1 of degree deg(f)/d.

    This is the unique monic g whose d-th power matches f far enough that
    the g-adic expansion of f has no degree d-1 coefficient.  Computed by
    the usual averaging iteration; no branch data is consulted.
    """
    D = f.deg_in("x1")
    if d <= 0 or D % d:
        raise DomainError(f"order {d} must divide the x1-degree {D}")
    lead = _x1_coefficient(f, D)
    if not lead.is_constant() or lead.constant_value() != 1:
        raise DomainError("approximate roots need f monic in x1")
    e = D // d
    g = MultiPoly.var("x1") ** e
    for _ in range(200):
        # last remainder of d successive divisions is the coefficient of
        # g^(d-1) in the g-adic expansion of f
        rem = f
        defect = MultiPoly.zero(("x0", "x1"))
        for _i in range(d):
            rem, defect = divmod_x1(rem, g)
        if defect.is_zero():
            return g
        g = g + defect * Fraction(1, d)
    raise ClaimViolation("claim violated: approximate root iteration did "
                         "not settle")
