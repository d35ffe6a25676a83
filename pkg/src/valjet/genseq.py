"""Minimal generating sequences from jet-scheme contact data.

The engine tracks one working element at a time.  At each detected level
mu the next jet equation, evaluated at the generic point of the contact
locus, collapses to a constant times a perfect power.  The exponent l of
that power either matches the current invariant (then the root dictates a
correction term of the working element) or divides it properly (then the
working element settles as a new generator and a power of it, again
corrected, becomes the next working element).  The loop ends at l = 1;
the curve case appends the defining equation itself, while the divisorial
case keeps correcting one extra element level by level until the
requested contact order is reached.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .branch import (
    branch_compose,
    BranchParam,
    newton_puiseux,
    normal_form,
    reconstruct_f,
    semigroup,
)
from .errors import ClaimViolation, DomainError
from .jets import ContactModel
from .oracle import approximate_root
from .poly import (
    LinSystem,
    MultiPoly,
    lin_solve,
    perfect_power,
    render_poly,
)
from .valuation import nu_C, nu_E

_SOLVE_SEED = 0x5eed
_MAX_STEPS = 64


@dataclass(frozen=True)
class GenElement:
    name: str
    poly: MultiPoly
    value: int | None
    # recursion in terms of the earlier generators; drives the re-embedding
    named: MultiPoly | None = None

    def to_json(self):
        return {
            "name": self.name,
            "poly": render_poly(self.poly),
            "value": self.value,
        }


@dataclass(frozen=True)
class StepLog:
    """One detected level: mu, the power l, and the solved correction.

    constant and gamma pin the verified identity
    defect == constant * (lead_read**r + qprime_read)**l, with
    gamma the proportionality between the root and the combination.
    """

    mu: int
    l: int
    qprime: MultiPoly
    constant: Fraction
    gamma: Fraction

    def to_json(self):
        return {"mu": self.mu, "l": self.l, "Qprime": render_poly(self.qprime)}


@dataclass
class GenSeq:
    kind: str                      # "curve" | "divisorial"
    elements: list[GenElement]
    log: list[StepLog]
    sg: object
    seed: MultiPoly | None = None  # settled-power candidate for the walk
    seed_named: MultiPoly | None = None
    contact: int | None = None     # divisorial contact order p

    @property
    def values(self):
        return [el.value for el in self.elements]

    def element(self, name):
        for el in self.elements:
            if el.name == name:
                return el
        raise KeyError(name)

    def to_json(self):
        return {
            "elements": [el.to_json() for el in self.elements],
            "log": [entry.to_json() for entry in self.log],
        }


@dataclass
class GenSeqState:
    """Recursion data: settled generators, the working element, and the
    shrinking power invariant."""

    sg: object
    param: BranchParam
    model: ContactModel
    elements: list[GenElement]
    current: MultiPoly
    l_cur: int
    lower: int
    current_named: MultiPoly | None = None
    l_history: list[int] = field(default_factory=list)
    mu_history: list[int] = field(default_factory=list)
    log: list[StepLog] = field(default_factory=list)


def detect_mu(state, param, lower):
    """Smallest level >= lower with a codimension jump where every tracked
    element has the same order at the generic point of that level and the
    next one."""
    model = state.model
    tracked = [el.poly for el in state.elements] + [state.current]
    limit = model.trunc - 2
    for m in range(lower, limit):
        if not model.jump(m):
            continue
        if all(model.ord_at(z, m) == model.ord_at(z, m + 1) for z in tracked):
            return m
    raise DomainError(
        f"no stable jump level found below {limit}; increase truncation")


def extract_Ql(param, state, mu):
    """Split the jet equation at level mu+1 into a perfect power.

    Returns (q_eval, l) with defect == c * q_eval**l and l the largest
    divisor of the current invariant that works.
    """
    d = state.model.defect(mu)
    if d.is_zero():
        raise ClaimViolation(
            f"claim violated: codimension jumps at level {mu} but the jet "
            "equation vanishes at the generic point")
    candidates = [l for l in range(state.l_cur, 0, -1) if state.l_cur % l == 0]
    q, l, _c = perfect_power(d, candidates)
    return q, l


def _gen_reads(model, gens, mu):
    return [model.read(g.poly, g.value, mu) for g in gens]


def _monomial(names_or_polys, lam, coeff=Fraction(1)):
    out = MultiPoly.const(coeff)
    for base, e in zip(names_or_polys, lam):
        if e:
            out = out * base ** e
    return out


def _solve_linear(lead_combo, m_read, q_eval):
    """Solve lead_combo + c_M * m_read - gamma * q_eval == 0 exactly.

    First over a few random rational specializations, then (if that system
    is degenerate or its solution fails the symbolic check) by matching
    every coefficient.  Returns (c_M, gamma) or None.
    """
    columns = ([m_read] if m_read is not None else []) + [-q_eval]

    rng = random.Random(_SOLVE_SEED)
    rows, rhs = [], []
    for _ in range(len(columns) + 2):
        point = {
            "u1": Fraction(rng.randint(1, 64), rng.randint(1, 5)),
            "eps": Fraction(rng.randint(-32, 32), rng.randint(1, 5)),
        }
        rows.append([col.eval_rat(point) for col in columns])
        rhs.append(-lead_combo.eval_rat(point))
    res = lin_solve(LinSystem(rows, rhs))
    sol = res.solution if res.status == "unique" else None

    def check(sol):
        c_m = sol[0] if m_read is not None else Fraction(0)
        gamma = sol[-1]
        total = lead_combo - gamma * q_eval
        if m_read is not None:
            total = total + c_m * m_read
        return total.is_zero()

    if sol is None or not check(sol):
        # exact retry: one equation per monomial of the combined support
        aligned = [p.with_vars(("eps", "u1")) for p in columns]
        target = lead_combo.with_vars(("eps", "u1"))
        support = set(target.terms)
        for p in aligned:
            support.update(p.terms)
        rows = [[p.terms.get(t, Fraction(0)) for p in aligned]
                for t in sorted(support)]
        rhs = [-target.terms.get(t, Fraction(0)) for t in sorted(support)]
        res = lin_solve(LinSystem(rows, rhs))
        sol = res.solution if res.status == "unique" else None
        if sol is None or not check(sol):
            return None
    c_m = sol[0] if m_read is not None else Fraction(0)
    return c_m, sol[-1]


def solve_correction(state, q_eval, l, mu):
    """Correction matching the power congruence at the detected level.

    Returns (qprime_named, qprime_plane, constant, gamma): the correction
    in generator names, its expansion in the plane coordinates, and the
    constants of the verified identity.
    """
    model, sg = state.model, state.sg
    v = model.ord_at(state.current, mu)
    if v is None or state.l_cur * v != mu + 1:
        raise ClaimViolation(
            f"claim violated: stable order {v} at level {mu} is not "
            f"(mu+1)/{state.l_cur}")
    r = state.l_cur // l
    weight = r * v

    gens = list(state.elements)
    if r > 1:
        gens.append(GenElement(f"x{len(gens)}", state.current, v))
    lam = normal_form(sg, weight, upto=len(gens) - 1)

    lead_read = model.read(state.current, v, mu)
    lead_combo = lead_read ** r
    m_read = None
    if lam is not None:
        reads = _gen_reads(model, gens, mu)
        m_read = _monomial(reads, lam)

    solved = _solve_linear(lead_combo, m_read, q_eval)
    if solved is None:
        raise ClaimViolation(
            f"claim violated: no correction of weight {weight} matches the "
            f"jet equation at level {mu}")
    c_m, gamma = solved
    if gamma == 0:
        raise ClaimViolation(
            f"claim violated: degenerate match at level {mu}")

    defect = state.model.defect(mu)
    constant = (defect.leading_term()[1]
                / q_eval.leading_term()[1] ** l
                / gamma ** l)
    if lam is None or c_m == 0:
        zero = MultiPoly.zero(("x0", "x1"))
        return zero, zero, constant, gamma
    named = _monomial([MultiPoly.var(g.name) for g in gens], lam, c_m)
    plane = _monomial([g.poly for g in gens], lam, c_m)
    return named, plane, constant, gamma


def _x1_lead(param):
    if not param.terms:
        raise DomainError("x1 vanishes on the branch; nothing to generate")
    return param.terms[min(param.terms)]


def _prepare(source, truncation):
    if isinstance(source, BranchParam):
        param = source
        f = param.source
        if f is None:
            if not param.exact:
                raise DomainError(
                    "no curve equation available: supply f or an exact "
                    "parametrization")
            f = reconstruct_f(param)
        return param, f
    f = source.with_vars(("x0", "x1"))
    return newton_puiseux(f, truncation), f


def _trivial_genseq(param, f, sg):
    x0, x1 = MultiPoly.var("x0"), MultiPoly.var("x1")
    if sg.g >= 1:
        v1 = sg.beta_bar[1]
    else:
        v1 = min(param.terms) if param.terms else None
    elements = [
        GenElement("x0", x0, sg.beta_bar[0], named=x0),
        GenElement("x1", x1, v1, named=x1),
        GenElement("f", f, None),
    ]
    return GenSeq(kind="curve", elements=elements, log=[], sg=sg)


def run_genseq(source, *, truncation=None):
    """Minimal generating sequence of the contact-order valuation of a
    branch: x0, x1, one new element per semigroup generator, then f."""
    param, f = _prepare(source, truncation)
    sg = semigroup(param)
    if sg.g <= 1:
        return _trivial_genseq(param, f, sg)

    needed = sg.e[sg.g - 1] * sg.beta_bar[sg.g] + sg.beta_bar[0] + 8
    if truncation is not None:
        needed = max(needed, truncation)
    param = param.ensure(needed)
    model = ContactModel(f, param, needed)

    x0, x1 = MultiPoly.var("x0"), MultiPoly.var("x1")
    c = _x1_lead(param) ** sg.n_seq[0]
    first = x1 ** sg.n_seq[0] - c * x0 ** sg.m_seq[0]
    state = GenSeqState(
        sg=sg, param=param, model=model,
        elements=[GenElement("x0", x0, sg.beta_bar[0], named=x0),
                  GenElement("x1", x1, sg.beta_bar[1], named=x1)],
        current=first, current_named=first, l_cur=sg.e[1],
        lower=sg.beta_bar[0] * sg.beta_bar[1])

    seed = seed_named = None
    for _ in range(_MAX_STEPS):
        mu = detect_mu(state, param, state.lower)
        q_eval, l = extract_Ql(param, state, mu)
        named, plane, constant, gamma = solve_correction(state, q_eval, l, mu)
        state.mu_history.append(mu)
        state.l_history.append(l)
        state.log.append(StepLog(mu, l, named, constant, gamma))
        state.lower = mu + 1
        if l == state.l_cur:
            state.current = state.current + plane
            state.current_named = state.current_named + named
            continue
        i = len(state.elements)
        value = (mu + 1) // state.l_cur
        if i > sg.g or value != sg.beta_bar[i]:
            raise ClaimViolation(
                f"claim violated: element settles at value {value}, "
                f"generator {i} should be {sg.beta_bar[i] if i <= sg.g else '-'}")
        state.elements.append(
            GenElement(f"x{i}", state.current, value,
                       named=state.current_named))
        nxt = state.current ** (state.l_cur // l) + plane
        nxt_named = MultiPoly.var(f"x{i}") ** (state.l_cur // l) + named
        if l == 1:
            seed, seed_named = nxt, nxt_named
            break
        state.current, state.current_named = nxt, nxt_named
        state.l_cur = l
    else:
        raise ClaimViolation("claim violated: correction loop did not settle")

    elements = state.elements + [GenElement("f", model.f, None)]
    return GenSeq(kind="curve", elements=elements, log=state.log, sg=sg,
                  seed=seed, seed_named=seed_named)


def _walk_correction(model, sg, elements, cur, m, v):
    """Cancel the branch-leading coefficient of cur with a monomial in the
    settled generators of the same value."""
    table = model.table(cur)
    if table.nu != v:
        raise ClaimViolation(
            f"claim violated: stable order {v} at level {m} is not the "
            f"branch order {table.nu}")
    lam = normal_form(sg, v, upto=sg.g)
    if lam is None:
        raise ClaimViolation(
            f"claim violated: stable order {v} is outside the value "
            "semigroup")
    m_lead = Fraction(1)
    for el, e in zip(elements, lam):
        if e:
            m_lead *= model.table(el.poly).lead0 ** e
    cstar = -table.lead0 / m_lead
    named = _monomial([MultiPoly.var(el.name) for el in elements], lam, cstar)
    plane = _monomial([el.poly for el in elements], lam, cstar)
    return cur + plane, named, StepLog(m, 1, named, Fraction(1), Fraction(1))


def run_genseq_divisorial(param, p, *, truncation=None):
    """Minimal generating sequence of the order along the divisor with
    contact p: the curve generators plus, past the threshold, one extra
    element corrected level by level up to p-1."""
    sg = semigroup(param)
    if sg.g == 0:
        raise DomainError("use trivial case: the branch is smooth")
    threshold = sg.divisorial_threshold
    if p < threshold:
        raise DomainError(
            f"p must be at least n_g*beta_bar_g = {threshold} for a "
            "divisorial contact order")

    base = run_genseq(param, truncation=truncation)
    curve_elements = base.elements[:-1]
    if p == threshold:
        return GenSeq(kind="divisorial", elements=curve_elements,
                      log=list(base.log), sg=sg, contact=p)

    needed = p + sg.beta_bar[0] + 8
    if truncation is not None:
        needed = max(needed, truncation)
    work = param.ensure(needed)
    f = base.element("f").poly
    model = ContactModel(f, work, needed)

    log = list(base.log)
    if sg.g == 1:
        # the curve case is trivial here; derive the walk seed directly
        # from the jet equation at the threshold level
        mu_star = threshold - 1
        pseudo = GenSeqState(
            sg=sg, param=work, model=model,
            elements=[GenElement("x0", MultiPoly.var("x0"), sg.beta_bar[0])],
            current=MultiPoly.var("x1"), l_cur=sg.e[0], lower=0)
        q_eval, l = extract_Ql(work, pseudo, mu_star)
        if l != 1:
            raise ClaimViolation(
                f"claim violated: threshold jet equation has power {l}")
        named, plane, constant, gamma = solve_correction(
            pseudo, q_eval, l, mu_star)
        seed = MultiPoly.var("x1") ** sg.e[0] + plane
        seed_named = MultiPoly.var("x1") ** sg.e[0] + named
        log.append(StepLog(mu_star, 1, named, constant, gamma))
    else:
        seed = base.seed
        seed_named = base.seed_named
        if seed is None or seed_named is None:
            raise ClaimViolation("claim violated: curve run left no seed")

    cur = seed
    cur_named = seed_named
    m = threshold
    while m < p - 1:
        va = model.ord_at(cur, m)
        if va is not None and va == model.ord_at(cur, m + 1):
            cur, named, entry = _walk_correction(
                model, sg, curve_elements, cur, m, va)
            cur_named = cur_named + named
            log.append(entry)
            continue
        m += 1

    value = model.ord_at(cur, p - 1)
    if value != p:
        raise ClaimViolation(
            f"claim violated: constructed element has contact order "
            f"{value}, expected {p}")
    elements = curve_elements + [
        GenElement(f"x{sg.g + 1}", cur, p, named=cur_named)]
    return GenSeq(kind="divisorial", elements=elements, log=log, sg=sg,
                  contact=p)


def approximate_roots_oracle(f, sg=None):
    """Independent generator candidates: one Tschirnhaus root per gcd-chain
    divisor (the last divisor is 1, whose root is f itself)."""
    f = f.with_vars(("x0", "x1"))
    if sg is None:
        sg = semigroup(newton_puiseux(f))
    return [approximate_root(f, e) for e in sg.e]


def trace_report(f, claimed_mu, *, truncation=None):
    """Run the curve engine and compare its level history with a claim.

    Never raises for branch-level defects: a rejected or failing input is
    reported as a discrepancy instead, so callers can document claims
    about curves that turn out not to be branches.
    """
    report = {"claimed_mu": list(claimed_mu)}
    try:
        gs = run_genseq(f, truncation=truncation)
    except (DomainError, ClaimViolation) as exc:
        report["status"] = "rejected"
        report["detail"] = str(exc)
        report["matches_claim"] = False
        return report
    report["status"] = "ok"
    report["mu_history"] = [entry.mu for entry in gs.log]
    report["l_history"] = [entry.l for entry in gs.log]
    report["values"] = [el.value for el in gs.elements]
    report["matches_claim"] = report["mu_history"] == report["claimed_mu"]
    if not report["matches_claim"]:
        report["detail"] = (
            "engine level history differs from the claimed one; "
            "the input is not the curve the claim describes")
    return report


def _reduces_through(h, want, gens, sg, param):
    """One reduction step of the initial-form route: h must take the
    expected value, the value must admit a capped generator monomial, and
    subtracting the matched multiple of that monomial must strictly raise
    the value.  This is the generating property seen on a single sample."""
    v = nu_C(h, param).value
    if v != want:
        return False
    lam = normal_form(sg, v, upto=len(gens) - 1)
    if lam is None:
        return False
    mono = _monomial([g.poly for g in gens], lam)
    window = v + 1
    ch = branch_compose(h, param.ensure(window), window)
    cm = branch_compose(mono, param.ensure(window), window)
    if ch.ord() != v or cm.ord() != v:
        return False
    rem = h - (ch.coeffs[v] / cm.coeffs[v]) * mono
    if rem.is_zero():
        return True
    # the remainder only has to climb past v; a window of v + 1 decides
    # that, and an empty window covers the vanishing-remainder case too
    cr = branch_compose(rem, param.ensure(window), window)
    return cr.ord() is None or cr.ord() > v


@dataclass
class GenSeqReport:
    checks: list[tuple[str, bool, str]]

    @property
    def ok(self):
        return all(flag for _name, flag, _detail in self.checks)

    @property
    def failures(self):
        return [f"{name}: {detail}"
                for name, flag, detail in self.checks if not flag]

    def to_json(self):
        return {
            "ok": self.ok,
            "checks": [{"name": n, "ok": o, "detail": d}
                       for n, o, d in self.checks],
        }


def verify_genseq(gs, param):
    """Cross-check a finished sequence against independent routes: values
    by direct valuation, settling levels by the semigroup identity, the
    generating property on sample initial forms, and Tschirnhaus roots."""
    sg = semigroup(param)
    checks = []
    finite = [el for el in gs.elements if el.value is not None]

    expected = list(sg.beta_bar)
    if gs.kind == "divisorial" and gs.contact is not None \
            and len(finite) == sg.g + 2:
        expected.append(gs.contact)
    got = [el.value for el in finite]
    checks.append(("values", got == expected[:len(got)],
                   f"got {got}, expected {expected[:len(got)]}"))

    for el in finite:
        try:
            if gs.kind == "divisorial":
                seen = nu_E(el.poly, param, gs.contact or sg.divisorial_threshold)
            else:
                seen = nu_C(el.poly, param).value
        except (DomainError, ClaimViolation) as exc:
            checks.append((f"value[{el.name}]", False, str(exc)))
            continue
        checks.append((f"value[{el.name}]", seen == el.value,
                       f"direct valuation {seen}, recorded {el.value}"))

    l_run = sg.e[1] if sg.g >= 2 else (sg.e[0] if sg.g == 1 else 1)
    idx = 2
    for entry in gs.log:
        if entry.l < l_run and idx <= sg.g:
            want = sg.e[idx - 1] * sg.beta_bar[idx] - 1
            checks.append((f"mu[x{idx}]", entry.mu == want,
                           f"settled at {entry.mu}, identity gives {want}"))
            l_run = entry.l
            idx += 1

    gens = finite[:sg.g + 1]
    if sg.g >= 1 and len(gens) == sg.g + 1:
        samples = []
        for i, a in enumerate(gens):
            for b in gens[i:]:
                samples.append((a.poly * b.poly, a.value + b.value))
        top = gens[-1]
        samples.append(
            (top.poly + MultiPoly.var("x0") ** (top.value + 1), top.value))
        ok_all = True
        passed = 0
        for h, want in samples:
            if _reduces_through(h, want, gens, sg, param):
                passed += 1
            else:
                ok_all = False
        checks.append(("initial-reduction", ok_all,
                       f"{passed}/{len(samples)} samples reduce through the "
                       "generator monomials with increasing value"))

    f = None
    for el in gs.elements:
        if el.value is None:
            f = el.poly
    if f is None:
        f = param.source
        if f is None and param.exact:
            f = reconstruct_f(param)
    if f is not None:
        try:
            roots = approximate_roots_oracle(f, sg)
            for k in range(min(sg.g, len(finite) - 1)):
                want = sg.beta_bar[k + 1]
                seen = nu_C(roots[k], param).value
                checks.append((f"root[e{k}]", seen == want,
                               f"root value {seen}, generator {want}"))
        except (DomainError, ClaimViolation) as exc:
            checks.append(("roots", False, str(exc)))
    return GenSeqReport(checks)
