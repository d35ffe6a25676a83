"""Plane branches: parametrizations, semigroups, and generic jets.

A branch is represented by a rational parametrization x0 = tau^n,
x1 = sum of c_k tau^k with k > n.  newton_puiseux derives one from a
polynomial equation, term by term, backtracking over rational root
choices.  semigroup turns the exponent support into the numerical data
(generators, gcd ladder, conductor) every other module consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ClaimViolation, DomainError
from .poly import MultiPoly
from .series import QSeries, TruncSeries, compose_poly, series_compose

CURVE_VARS = ("x0", "x1")


def _as_curve_poly(f):
    extra = [v for v in f.vars if v not in CURVE_VARS]
    if extra:
        raise DomainError(f"curve equation may only use x0 and x1, found {extra}")
    return f.with_vars(CURVE_VARS)


# -- parametrization ----------------------------------------------------


@dataclass
class BranchParam:
    """x0 = tau^n, x1 = sum c_k tau^k, known through tau^truncation."""

    n: int
    terms: dict[int, Fraction]
    truncation: int
    exact: bool = False
    source: MultiPoly | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be a positive integer")
        clean = {}
        for k, c in self.terms.items():
            c = Fraction(c)
            if not c:
                continue
            if k <= self.n:
                raise DomainError(
                    "parametrization not in normalized position "
                    f"(x1 exponent {k} must exceed n = {self.n})")
            clean[int(k)] = c
        self.terms = clean
        if not self.exact and self.terms and max(self.terms) > self.truncation:
            raise DomainError("truncation below the largest given exponent")

    @classmethod
    def from_json(cls, doc):
        try:
            n = int(doc["n"])
            terms = {int(t["k"]): Fraction(t["c"]) for t in doc["x1"]}
            truncation = int(doc["truncation"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed parametrization document: {exc}") from exc
        return cls(n=n, terms=terms, truncation=truncation,
                   exact=bool(doc.get("exact", False)))

    def to_json(self):
        doc = {
            "n": self.n,
            "x1": [{"k": k, "c": str(self.terms[k])} for k in sorted(self.terms)],
            "truncation": self.truncation,
        }
        if self.exact:
            doc["exact"] = True
        return doc

    def support(self):
        return sorted(self.terms)

    def x0_qseries(self, trunc):
        return QSeries.from_terms({self.n: 1}, trunc)

    def x1_qseries(self, trunc):
        return QSeries.from_terms(self.terms, trunc)

    def ensure(self, trunc):
        """Return a param usable through tau^trunc, recomputing if possible."""
        if self.exact or trunc <= self.truncation:
            return self
        if self.source is not None:
            # re-deriving is expensive: keep the widest derivation around
            # and overshoot geometrically, so a chain of growing windows
            # costs O(log) recomputations rather than one each
            cached = getattr(self, "_derived", None)
            if cached is None or cached.truncation < trunc:
                floor = 2 * (cached.truncation if cached else self.truncation)
                cached = newton_puiseux(self.source,
                                        truncation=max(trunc, floor))
                self._derived = cached
            return cached
        raise DomainError(
            f"parametrization known only through tau^{self.truncation}, "
            f"need tau^{trunc}; increase truncation")


def branch_compose(h, param, trunc):
    """h(x0(tau), x1(tau)) as a QSeries, truncated at tau^trunc."""
    h = _as_curve_poly(h)
    param = param.ensure(trunc)
    return compose_poly(
        h, {"x0": param.x0_qseries(trunc), "x1": param.x1_qseries(trunc)}, trunc)


# -- semigroup data -----------------------------------------------------


def _gcd_ladder(n, exponents):
    """Characteristic exponents: the support entries where the gcd drops."""
    chars = [n]
    e = n
    for k in exponents:
        if e == 1:
            break
        g = math.gcd(e, k)
        if g < e:
            chars.append(k)
            e = g
    return chars, e


@dataclass
class SemigroupData:
    g: int
    chars: list[int]
    beta_bar: list[int]
    e: list[int]
    n_seq: list[int]
    m_seq: list[int]
    b: list[list[int]]
    conductor: int

    def to_json(self):
        return {
            "g": self.g,
            "chars": self.chars,
            "beta_bar": self.beta_bar,
            "e": self.e,
            "n_seq": self.n_seq,
            "m_seq": self.m_seq,
            "b": self.b,
            "conductor": self.conductor,
        }

    @property
    def divisorial_threshold(self):
        """n_g * beta_bar_g, the contact order of the last approximate root."""
        if self.g == 0:
            return self.beta_bar[0]
        return self.n_seq[-1] * self.beta_bar[-1]


def _semigroup_from_chars(chars):
    beta_bar = list(chars[:2]) if len(chars) > 1 else list(chars)
    e = [chars[0]]
    for c in chars[1:]:
        e.append(math.gcd(e[-1], c))
    n_seq = [e[i - 1] // e[i] for i in range(1, len(e))]
    for i in range(2, len(chars)):
        beta_bar.append(n_seq[i - 1 - 1] * beta_bar[i - 1] + chars[i] - chars[i - 1])
    g = len(chars) - 1
    conductor = sum((n_seq[i] - 1) * beta_bar[i + 1] for i in range(g)) - chars[0] + 1
    return beta_bar, e, n_seq, g, conductor


def normal_form(sg, w, upto=None):
    """Write w = sum lam_i * beta_bar_i with 0 <= lam_i < n_i for i >= 1.

    Uniqueness holds because beta_bar_i generates Z/n_i after dividing by
    e_i.  Returns the tuple (lam_0, ..., lam_upto) or None when w is not
    in the (truncated) semigroup.  upto defaults to g.
    """
    top = sg.g if upto is None else upto
    lam = [0] * (top + 1)
    rest = w
    for i in range(top, 0, -1):
        ei, ni = sg.e[i], sg.n_seq[i - 1]
        if rest % ei:
            return None
        li = (rest // ei) * pow(sg.beta_bar[i] // ei, -1, ni) % ni
        lam[i] = li
        rest -= li * sg.beta_bar[i]
        if rest < 0:
            return None
    if rest % sg.beta_bar[0]:
        return None
    lam[0] = rest // sg.beta_bar[0]
    return tuple(lam) if lam[0] >= 0 else None


def semigroup(param):
    """Numerical semigroup data of the branch from its exponent support."""
    chars, e_final = _gcd_ladder(param.n, param.support())
    if e_final != 1:
        if param.exact:
            raise DomainError(
                "reducible input: parametrization is not primitive "
                f"(all exponents share the factor {e_final})")
        raise DomainError(
            f"truncation too small: gcd of exponents is still {e_final} "
            f"at tau^{param.truncation}")
    beta_bar, e, n_seq, g, conductor = _semigroup_from_chars(chars)
    m_seq = [beta_bar[i] // e[i] for i in range(1, g + 1)]
    sg = SemigroupData(g=g, chars=chars, beta_bar=beta_bar, e=e,
                       n_seq=n_seq, m_seq=m_seq, b=[], conductor=conductor)
    for i in range(1, g + 1):
        lam = normal_form(sg, n_seq[i - 1] * beta_bar[i], upto=i - 1)
        if lam is None:
            raise ClaimViolation(
                f"claim violated: n_{i}*beta_bar_{i} has no normal form")
        sg.b.append(list(lam))
    for i in range(1, g):
        if n_seq[i - 1] * beta_bar[i] >= beta_bar[i + 1]:
            raise ClaimViolation("claim violated: n_i*beta_bar_i >= beta_bar_{i+1}")
    return sg


# -- tangent cone analysis ----------------------------------------------


def _lowest_form(f):
    d = f.low_degree()
    return MultiPoly(f.vars, {e: c for e, c in f.terms.items() if sum(e) == d}), d


def _rational_factor_shape(coeffs):
    """Factor a univariate rational polynomial given by its coefficient list.

    Returns (number of distinct irreducible factors, the single factor's
    degree and rational root when applicable).  Uses sympy's exact
    factorization over Q.
    """
    import sympy

    u = sympy.Symbol("u")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * u ** i
               for i, c in enumerate(coeffs))
    _, factors = sympy.Poly(expr, u, domain="QQ").factor_list()
    distinct = len(factors)
    root = None
    degree = None
    if distinct == 1:
        fac = factors[0][0]
        degree = fac.degree()
        if degree == 1:
            a1, a0 = (sympy.Rational(x) for x in fac.all_coeffs())
            r = -a0 / a1
            root = Fraction(int(r.p), int(r.q))
    return distinct, degree, root


def _tangent_analysis(f):
    """Classify the lowest-degree form.

    Returns one of ("identity",), ("swap",), ("shear", mu),
    ("reducible",), ("irrational",).
    """
    form, d = _lowest_form(f)
    i0, i1 = form.vars.index("x0"), form.vars.index("x1")
    a_min = min(e[i0] for e in form.terms)
    b_min = min(e[i1] for e in form.terms)
    if len(form.terms) == 1:
        if b_min == d:
            return ("identity",)
        if a_min == d:
            return ("swap",)
        return ("reducible",)
    if a_min > 0 or b_min > 0:
        return ("reducible",)
    coeffs = [Fraction(0)] * (d + 1)
    for exps, c in form.terms.items():
        coeffs[exps[i1]] = c
    distinct, degree, root = _rational_factor_shape(coeffs)
    if distinct > 1:
        return ("reducible",)
    if degree == 1:
        return ("shear", root)
    return ("irrational",)


def normalize_coordinates(f):
    """Bring the tangent cone to a pure x1 power by swap or rational shear.

    Returns (f', change) where change records the substitution applied.
    """
    f = _as_curve_poly(f)
    if f.is_zero():
        raise DomainError("zero polynomial does not define a curve")
    if f.eval_rat({"x0": 0, "x1": 0}):
        raise DomainError("curve must pass through the origin")
    shape = _tangent_analysis(f)
    if shape[0] == "identity":
        return f, {"kind": "identity"}
    if shape[0] == "swap":
        swapped = f.rename({"x0": "x1", "x1": "x0"}).with_vars(CURVE_VARS)
        return swapped, {"kind": "swap"}
    if shape[0] == "shear":
        mu = shape[1]
        x0 = MultiPoly.var("x0")
        x1 = MultiPoly.var("x1")
        sheared = f.subs({"x1": x1 + mu * x0}).with_vars(CURVE_VARS)
        check = _tangent_analysis(sheared)
        if check[0] != "identity":
            raise ClaimViolation("claim violated: shear did not normalize tangent")
        return sheared, {"kind": "shear", "lambda": mu}
    if shape[0] == "reducible":
        raise DomainError("reducible input: tangent cone has several directions")
    raise DomainError("irrational tangent")


# -- Newton-Puiseux -----------------------------------------------------


def _hasse_rows(f):
    d = f.deg_in("x1")
    return [f.hasse_diff("x1", j) for j in range(d + 1)]


def _row_init(rows, n, trunc):
    """Each row evaluated at x1 = 0, x0 = tau^n, as a dense series."""
    out = []
    for row in rows:
        terms = {}
        i0 = row.vars.index("x0") if "x0" in row.vars else None
        i1 = row.vars.index("x1") if "x1" in row.vars else None
        for exps, c in row.terms.items():
            if i1 is not None and exps[i1]:
                continue
            a = exps[i0] if i0 is not None else 0
            terms[n * a] = terms.get(n * a, Fraction(0)) + c
        out.append(QSeries.from_terms(terms, trunc))
    return out


def _taylor_shift(rows, c, k):
    """Rows after the substitution x1 <- x1 + c*tau^k."""
    d = len(rows) - 1
    cpow = [Fraction(1)]
    for _ in range(d):
        cpow.append(cpow[-1] * c)
    out = []
    for j in range(d + 1):
        acc = rows[j]
        for i in range(j + 1, d + 1):
            step = (i - j) * k
            if step >= rows[i].trunc:
                break
            coeff = math.comb(i, j) * cpow[i - j]
            acc = acc + rows[i].shift(step).scale(coeff)
        out.append(acc)
    return out


def _edge_roots(rows, o, kstar):
    """Rational roots of the edge equation at order o with step kstar."""
    coeffs = [Fraction(0)] * len(rows)
    coeffs[0] = rows[0].coeffs[o]
    for j in range(1, len(rows)):
        idx = o - j * kstar
        if 0 <= idx < rows[j].trunc and rows[j].coeffs[idx]:
            # below-ord coefficients are zero, so a hit is an edge point
            coeffs[j] = rows[j].coeffs[idx]
    import sympy

    u = sympy.Symbol("u")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * u ** i
               for i, c in enumerate(coeffs))
    _, factors = sympy.Poly(expr, u, domain="QQ").factor_list()
    roots = []
    for fac, _mult in factors:
        if fac.degree() == 1:
            a1, a0 = (sympy.Rational(x) for x in fac.all_coeffs())
            r = -a0 / a1
            frac = Fraction(int(r.p), int(r.q))
            if frac:
                roots.append(frac)
    roots.sort(key=lambda r: (abs(r), 0 if r > 0 else 1))
    return roots


def _exact_zero(f, n, terms):
    """Is f(tau^n, S) the zero polynomial, for the finite series S?"""
    maxk = max(terms) if terms else 1
    bound = 1 + max(n * e[f.vars.index("x0")] if "x0" in f.vars else 0
                    for e in f.terms) + maxk * f.deg_in("x1")
    out = compose_poly(f, {"x0": QSeries.from_terms({n: 1}, bound),
                           "x1": QSeries.from_terms(terms, bound)}, bound)
    return out.is_zero()


def newton_puiseux(f, truncation=None):
    """Rational Puiseux parametrization of an irreducible normalized branch.

    Works with x0 = tau^n fixed (n = mult f) and grows x1(tau) one term at
    a time; at each step the admissible exponent is the largest slope of
    the current Newton data and the coefficient is a rational root of the
    edge equation.  Root choices are explored depth-first in a canonical
    order, so the output is deterministic.
    """
    f = _as_curve_poly(f)
    if f.is_zero():
        raise DomainError("zero polynomial does not define a curve")
    if f.eval_rat({"x0": 0, "x1": 0}):
        raise DomainError("curve must pass through the origin")
    shape = _tangent_analysis(f)
    if shape[0] == "swap":
        raise DomainError("coordinates not normalized (swap x0 and x1 first)")
    if shape[0] == "shear":
        raise DomainError(
            f"coordinates not normalized (apply x1 <- x1 + ({shape[1]})*x0 first)")
    if shape[0] in ("reducible", "irrational"):
        # several tangent directions over the closure means several branches
        raise DomainError("reducible input: tangent cone has several directions")
    n = f.low_degree()
    d = f.deg_in("x1")
    total = f.total_degree()
    cert_bound = (total - 1) ** 2 + n + 2
    requested = truncation if truncation is not None else 0
    t_work = cert_bound + max(requested, cert_bound) + n + 8
    rows0 = _row_init(_hasse_rows(f), n, t_work)

    def finalize(terms, exact, conductor_hint):
        target = max(requested, conductor_hint + n + 2, *(list(terms) or [0]))
        return BranchParam(n=n, terms=dict(terms), truncation=target,
                           exact=exact, source=f)

    def conductor_state(terms):
        chars, e_final = _gcd_ladder(n, sorted(terms))
        if e_final != 1:
            return None
        return _semigroup_from_chars(chars)[4]

    saw_reducible = False
    saw_irrational = False
    stack = [({}, rows0, n)]
    nodes = 0
    # every accepted exponent consumes a node, so the cap has to grow with
    # the working window; the slack covers backtracking over root choices
    node_cap = 500 + 2 * t_work
    while stack:
        terms, rows, k_last = stack.pop()
        while True:
            nodes += 1
            if nodes > node_cap:
                raise ClaimViolation("claim violated: parametrization search blew up")
            o = rows[0].ord()
            if o is None:
                if _exact_zero(f, n, terms):
                    g = math.gcd(n, math.gcd(*terms) if terms else n)
                    if g != 1:
                        saw_reducible = True
                        break
                    cond = conductor_state(terms)
                    return finalize(terms, True, cond)
                # nonzero but vanishing beyond the working window: the next
                # exponent already exceeds every target we could need
                cond = conductor_state(terms)
                if cond is None:
                    saw_reducible = True
                    break
                return finalize(terms, False, cond)
            slopes = [(Fraction(o - rows[j].ord(), j), j)
                      for j in range(1, len(rows)) if rows[j].ord() is not None]
            if not slopes:
                raise ClaimViolation("claim violated: no Newton slope available")
            kstar_frac = max(s for s, _ in slopes)
            if kstar_frac.denominator != 1:
                saw_reducible = True
                break
            kstar = int(kstar_frac)
            if kstar <= k_last:
                saw_reducible = True
                break
            cond = conductor_state(terms)
            target = max(requested, (cond + n + 2) if cond is not None else cert_bound)
            if kstar > target:
                if cond is None:
                    saw_reducible = True
                    break
                return finalize(terms, False, cond)
            roots = _edge_roots(rows, o, kstar)
            if not roots:
                saw_irrational = True
                break
            for c in reversed(roots[1:]):
                branch_terms = dict(terms)
                branch_terms[kstar] = c
                stack.append((branch_terms, _taylor_shift(rows, c, kstar), kstar))
            c = roots[0]
            terms = dict(terms)
            terms[kstar] = c
            rows = _taylor_shift(rows, c, kstar)
            k_last = kstar
    if saw_reducible and not saw_irrational:
        raise DomainError("reducible input")
    raise DomainError(
        "irrational coefficient required; supply the parametrization directly")


def reconstruct_f(param):
    """Monic equation of the branch from an exact parametrization.

    Power sums of the n conjugate roots are read off the tau-series of
    x1 powers (only exponents divisible by n survive), and Newton's
    identities convert them to elementary symmetric functions.
    """
    if not param.exact:
        raise DomainError(
            "cannot reconstruct an exact equation from a truncated parametrization")
    n = param.n
    maxk = max(param.terms) if param.terms else 0
    bound = n * maxk + 1 if maxk else 2
    x1s = QSeries.from_terms(param.terms, bound)
    x0 = MultiPoly.var("x0")
    power = QSeries.from_terms({0: 1}, bound)
    psums = []
    for _r in range(1, n + 1):
        power = power * x1s
        p = MultiPoly.zero(("x0",))
        for k, c in enumerate(power.coeffs):
            # summing over the n conjugates tau -> zeta*tau kills every
            # exponent not divisible by n
            if not c or k % n:
                continue
            p = p + MultiPoly(("x0",), {(k // n,): n * c})
        psums.append(p)
    elem = [MultiPoly.const(1, ("x0",))]
    for r in range(1, n + 1):
        acc = MultiPoly.zero(("x0",))
        for i in range(1, r + 1):
            term = elem[r - i] * psums[i - 1]
            acc = acc + (term if i % 2 else -term)
        elem.append(acc * Fraction(1, r))
    x1 = MultiPoly.var("x1")
    f = MultiPoly.zero(CURVE_VARS)
    for r in range(n + 1):
        piece = elem[r] * x1 ** (n - r)
        f = f + (piece if r % 2 == 0 else -piece)
    f = f.with_vars(CURVE_VARS)
    if not _exact_zero(f, n, param.terms):
        raise ClaimViolation("claim violated: reconstructed equation misses branch")
    return f


# -- generic jets -------------------------------------------------------


class GenericJet:
    """Generic reparametrized jet of the branch, truncated at t^level.

    Coordinate series live in parameters u1..u_level with u1 invertible.
    Extra coordinates (elements of a generating sequence) can be
    registered by name and are composed on demand.
    """

    def __init__(self, source, level):
        if level < 1:
            raise DomainError("jet level must be at least 1")
        if not source.exact and level > source.truncation:
            raise DomainError("jet level exceeds parametrization truncation")
        self.source = source
        self.level = level
        self.params = tuple(f"u{i}" for i in range(1, level + 1))
        self._registry = {}
        self._coords = None

    def register(self, name, poly):
        """Track an extra coordinate given by a polynomial in x0, x1."""
        self._registry[name] = _as_curve_poly(poly)
        if self._coords is not None and name not in self._coords:
            self._coords[name] = self._compose(self._registry[name])

    def _tau(self):
        trunc = self.level + 1
        return TruncSeries.from_terms(
            {i: MultiPoly.var(f"u{i}") for i in range(1, self.level + 1)}, trunc)

    @property
    def coords(self):
        if self._coords is None:
            trunc = self.level + 1
            tau = self._tau()
            x0 = tau ** self.source.n
            x1 = TruncSeries.zero(trunc)
            taupow = {}
            for k in sorted(self.source.terms):
                if k >= trunc:
                    break
                taupow[k] = tau ** k
                x1 = x1 + taupow[k].scale(self.source.terms[k])
            self._coords = {"x0": x0, "x1": x1}
            for name, poly in self._registry.items():
                self._coords[name] = self._compose(poly)
        return self._coords

    def _compose(self, poly):
        base = self.coords
        return series_compose(poly, {"x0": base["x0"], "x1": base["x1"]})


def generic_jet(param, m):
    return GenericJet(param, m)


def split_jet_var(name):
    if "#" not in name:
        return None
    base, _, idx = name.partition("#")
    if not idx.isdigit():
        return None
    return base, int(idx)


def evaluate_at_jet(p, jet):
    """Substitute jet-coordinate coefficient polynomials into p.

    p is a polynomial in jet variables z#i; the result is an exact
    polynomial in the jet parameters u1..u_m.
    """
    mapping = {}
    for name in p.vars:
        if p.deg_in(name) == 0:
            continue
        parsed = split_jet_var(name)
        if parsed is None:
            raise DomainError(f"unregistered coordinate name: {name!r}")
        base, idx = parsed
        if base not in jet.coords:
            raise DomainError(f"unregistered coordinate name: {base!r}")
        if idx > jet.level:
            raise DomainError(
                f"jet variable {name} exceeds jet level {jet.level}")
        mapping[name] = jet.coords[base].coeff(idx)
    return p.subs(mapping)
