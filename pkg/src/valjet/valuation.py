"""Valuations attached to a branch and to its divisorial contact loci.

nu_C is computed by exact composition with the parametrization, with the
working window chosen from the level bound kappa_bound and widened at
most twice; certificates record the leading witness.  nu_E evaluates the
order along the generic point of the level p-1 contact locus, which is
where the free deformation tail sits.  newton_estimate is the fast path
for polynomials whose Newton polygon is a single binomial edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .branch import branch_compose, reconstruct_f, semigroup
from .errors import ClaimViolation, DomainError
from .jets import model_for
from .poly import MultiPoly, render_poly
from .zerotest import witness_digest


@dataclass
class ValuationResult:
    value: int | None  # None encodes infinite order
    level_used: int
    certificate: dict

    def to_json(self):
        return {
            "value": "infinite" if self.value is None else self.value,
            "level_used": self.level_used,
            "certificate": self.certificate,
        }


def kappa_bound(l, f, h):
    """Jet level at which a value of l becomes visible for h."""
    mh = h.low_degree()
    if mh is None or mh < 1:
        raise DomainError("kappa bound needs h with positive multiplicity")
    return l * f.low_degree() // mh


def _weighted_floor(h, sg):
    return h.weighted_min({"x0": sg.beta_bar[0], "x1": sg.beta_bar[1]})


def _certificate(lead, order):
    witness = lead * MultiPoly.var("u1") ** order
    return {"witness": render_poly(witness), "digest": witness_digest(witness)}


def nu_C(h, param):
    """Order of vanishing of h along the branch, with audit certificate."""
    if h.is_zero():
        raise DomainError("valuation of the zero polynomial is undefined")
    h = h.with_vars(("x0", "x1"))
    if h.low_degree() == 0:
        c0 = h.eval_rat({name: Fraction(0) for name in h.vars})
        return ValuationResult(0, 0, _certificate(c0, 0))
    if param.source is not None and h.try_div(param.source) is not None:
        # exact multiples of the curve equation never show a finite
        # order; catching them here avoids doubling the series window
        raise DomainError("h vanishes on branch")
    sg = semigroup(param)
    n = param.n
    low = _weighted_floor(h, sg)
    window = max(low * n // h.low_degree(), low) + sg.conductor + sg.beta_bar[0] + 8
    for attempt in range(2):
        comp = branch_compose(h, param.ensure(window), window)
        o = comp.ord()
        if o is not None:
            level = max(o * n // h.low_degree(), o)
            return ValuationResult(o, level, _certificate(comp.coeffs[o], o))
        window *= 2
    f = param.source
    if f is None and param.exact:
        f = reconstruct_f(param)
    if f is not None:
        if h.try_div(f) is not None:
            raise DomainError("h vanishes on branch")
        bezout = f.total_degree() * h.total_degree() + 2
        if bezout > window:
            comp = branch_compose(h, param.ensure(bezout), bezout)
            o = comp.ord()
            if o is not None:
                level = max(o * n // h.low_degree(), o)
                return ValuationResult(o, level,
                                       _certificate(comp.coeffs[o], o))
        raise ClaimViolation(
            "claim violated: h is not a multiple of the curve equation yet "
            f"vanishes to order {window}")
    raise DomainError("h vanishes on branch")


def initial_form(h, param):
    """Minimal sub-sum of terms of h carrying its initial part.

    The returned P satisfies nu_C(h - P) > nu_C(h) with as few terms as
    possible, so P represents the initial form of h for the branch
    valuation.
    """
    res = nu_C(h, param)
    value = res.value
    if value == 0:
        const = MultiPoly.const(h.constant_value(), h.vars)
        return const, 0
    sg = semigroup(param)
    h = h.with_vars(("x0", "x1"))
    window = value + 1
    param = param.ensure(window)
    weights = {"x0": sg.beta_bar[0], "x1": sg.beta_bar[1]}
    candidates = []
    for exps, coeff in h.sorted_terms():
        mono = MultiPoly(h.vars, {exps: coeff})
        if _weighted_floor(mono, sg) <= value:
            candidates.append((mono, branch_compose(mono, param, window)))

    target = branch_compose(h, param, window)

    def carries_initial(chosen):
        total = None
        for mono, comp in chosen:
            total = comp if total is None else total + comp
        return total is not None and total.coeffs == target.coeffs

    if len(candidates) <= 12:
        for size in range(1, len(candidates) + 1):
            for combo in itertools.combinations(candidates, size):
                if carries_initial(combo):
                    P = MultiPoly.zero(h.vars)
                    for mono, _ in combo:
                        P = P + mono
                    return P, value
        raise ClaimViolation("claim violated: no candidate subset carries "
                             "the initial part")
    # large candidate sets: greedy single-term removal
    chosen = list(candidates)
    for item in list(chosen):
        trial = [c for c in chosen if c is not item]
        if carries_initial(trial):
            chosen = trial
    P = MultiPoly.zero(h.vars)
    for mono, _ in chosen:
        P = P + mono
    return P, value


# -- Newton-form fast path --------------------------------------------------


@dataclass
class NewtonForm:
    n_h: int
    m_h: int
    alpha: Fraction
    delta: int
    above_terms: list
    unit: Fraction = Fraction(1)
    axis: str | None = None  # set for degenerate single-monomial forms

    @classmethod
    def from_poly(cls, h):
        h = h.with_vars(("x0", "x1"))
        if h.is_zero() or h.low_degree() == 0:
            raise DomainError("lemma inapplicable: no Newton edge at the origin")
        terms = {exps: c for exps, c in h.terms.items()}
        if len(terms) == 1:
            ((a, b), c), = terms.items()
            if a and b:
                raise DomainError("lemma inapplicable: mixed monomial")
            axis = "x0" if a else "x1"
            return cls(n_h=1, m_h=1, alpha=Fraction(0), delta=a or b,
                       above_terms=[], unit=c, axis=axis)
        x1_pow = {b: c for (a, b), c in terms.items() if a == 0}
        x0_pow = {a: c for (a, b), c in terms.items() if b == 0}
        if not x1_pow or not x0_pow:
            raise DomainError(
                "lemma inapplicable: Newton polygon is not a single edge "
                "between the axes")
        B = min(x1_pow)
        A = min(x0_pow)
        unit = x1_pow[B]
        delta = gcd(A, B)
        n_h, m_h = B // delta, A // delta
        alpha = None
        expected = {}
        for j in range(delta + 1):
            expected[(m_h * j, n_h * (delta - j))] = j
        above = []
        for (a, b), c in terms.items():
            if (a, b) in expected:
                continue
            if n_h * a + m_h * b <= n_h * m_h * delta:
                raise DomainError(
                    "lemma inapplicable: support touches the edge outside "
                    "the binomial lattice")
            above.append((a, b, c))
        # pin alpha from the j=1 lattice point, then check every edge term
        probe = terms.get((m_h, n_h * (delta - 1)))
        if delta == 1:
            alpha = -x0_pow[A] / unit
        else:
            if probe is None:
                raise DomainError(
                    "lemma inapplicable: edge coefficients do not match a "
                    "binomial power")
            alpha = -probe / (unit * delta)
        for (a, b), j in expected.items():
            want = unit * comb(delta, j) * (-alpha) ** j
            if terms.get((a, b), Fraction(0)) != want:
                raise DomainError(
                    "lemma inapplicable: edge coefficients do not match a "
                    "binomial power")
        if alpha == 0:
            raise DomainError("lemma inapplicable: degenerate edge")
        return cls(n_h=n_h, m_h=m_h, alpha=alpha, delta=delta,
                   above_terms=sorted(above), unit=unit)

    def binomial(self):
        x0 = MultiPoly.var("x0")
        x1 = MultiPoly.var("x1")
        if self.axis == "x0":
            return self.unit * x0 ** self.delta
        if self.axis == "x1":
            return self.unit * x1 ** self.delta
        return self.unit * (x1 ** self.n_h - self.alpha * x0 ** self.m_h) ** self.delta


def newton_estimate(h_form, f_form, sg):
    """Value and initial kind read off the Newton polygons alone."""
    b0, b1 = sg.beta_bar[0], sg.beta_bar[1]
    if h_form.axis == "x0":
        return {"value": b0 * h_form.delta, "initial_kind": "monomial-x0",
                "initial": h_form.binomial()}
    if h_form.axis == "x1":
        return {"value": b1 * h_form.delta, "initial_kind": "monomial-x1",
                "initial": h_form.binomial()}
    vx0 = b0 * h_form.m_h * h_form.delta
    vx1 = b1 * h_form.n_h * h_form.delta
    if (h_form.m_h, h_form.n_h) == (f_form.m_h, f_form.n_h):
        if h_form.alpha == f_form.alpha:
            raise DomainError("lemma inapplicable: leading binomials coincide")
        if vx0 != vx1:
            raise ClaimViolation("claim violated: equal edges with unequal "
                                 "weights")
        return {"value": vx0, "initial_kind": "binomial-power",
                "initial": h_form.binomial()}
    value = min(vx0, vx1)
    kind = "monomial-x0" if vx0 < vx1 else "monomial-x1"
    x = MultiPoly.var("x0") if kind == "monomial-x0" else MultiPoly.var("x1")
    exp = h_form.m_h * h_form.delta if kind == "monomial-x0" \
        else h_form.n_h * h_form.delta
    lead = h_form.unit * (-h_form.alpha) ** h_form.delta \
        if kind == "monomial-x0" else h_form.unit
    return {"value": value, "initial_kind": kind, "initial": lead * x ** exp}


# -- divisorial valuation ----------------------------------------------------


def nu_E(h, param, p):
    """Order of h along the generic point of the level p-1 contact locus."""
    sg = semigroup(param)
    threshold = sg.divisorial_threshold
    if p < threshold:
        raise DomainError(
            f"p must be at least n_g*beta_bar_g = {threshold} for a "
            "divisorial contact order")
    h = h.with_vars(("x0", "x1"))
    if h.is_zero():
        raise DomainError("valuation of the zero polynomial is undefined")
    if h.low_degree() == 0:
        return 0
    f = param.source
    if f is None and param.exact:
        f = reconstruct_f(param)
    window = sg.conductor + sg.beta_bar[0] + 8
    if f is not None:
        window = max(window, f.total_degree() * h.total_degree() + 2)
    model = model_for(param, f=f, trunc=window)
    value = model.ord_at(h, p - 1)
    if value is None:
        raise ClaimViolation("claim violated: order is infinite along a "
                             "free deformation")
    return value
