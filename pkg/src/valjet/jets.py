"""Jet schemes of a plane branch.

expand_jets produces the universal equations F^(i) of the jet scheme in
the variables z#i.  ContactModel is the quantitative engine: it knows, for
any polynomial z, the orders at which z meets the generic point of the
level-m contact locus, both for the plain reparametrized jet and for its
generic deformation.  The deformation enters at a single well-defined
depth e(m), which is what makes codimension jumps and congruence reads
computable in just two symbols u1 and eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .branch import branch_compose, reconstruct_f, semigroup
from .errors import ClaimViolation, DomainError
from .poly import MultiPoly, render_poly
from .series import TruncSeries, series_compose


# -- universal jet expansion ---------------------------------------------


@dataclass
class JetExpansion:
    source: MultiPoly
    level: int
    coefficients: list[MultiPoly]

    def to_json(self):
        return {
            "f": render_poly(self.source),
            "m": self.level,
            "F": [render_poly(c) for c in self.coefficients],
        }


def expand_jets(f, m):
    """Coefficients F^(0..m) of f(sum z#i t^i) for every variable z of f."""
    if m < 0:
        raise DomainError("jet level must be nonnegative")
    trunc = m + 1
    assignment = {}
    for v in f.vars:
        coeffs = {i: MultiPoly.var(f"{v}#{i}") for i in range(trunc)}
        assignment[v] = TruncSeries.from_terms(coeffs, trunc)
    out = series_compose(f, assignment, trunc)
    return JetExpansion(source=f, level=m, coefficients=list(out.coeffs))


# -- enriched contact model ----------------------------------------------


@dataclass
class ModelTable:
    """Order data of one polynomial along the branch and its deformations.

    nu is ord_tau(z(x0(tau), x1(tau))), or None when z vanishes on the
    branch identically.  rows[k] = (N_k, lead_k) with N_k the order of the
    k-th Hasse derivative of z composed with the parametrization.
    """

    nu: int | None
    lead0: Fraction | None
    rows: dict[int, tuple[int, Fraction]]


class ContactModel:
    """Order bookkeeping for generic points of the contact loci C_m.

    The generic point of C_m is a reparametrized copy of the branch with
    a free deformation added at depth e(m) = max(1, max_k ceil((m+1 -
    N_k(f)) / k)).  Orders of any z along this point, and the coefficient
    polynomials at those orders, depend only on u1 and eps.
    """

    def __init__(self, f, param, trunc):
        self.f = f.with_vars(("x0", "x1"))
        self.param = param.ensure(trunc)
        self.trunc = trunc
        self._tables = {}
        self.ftable = self.table(self.f)
        if not self.ftable.rows:
            raise ClaimViolation("claim violated: curve equation has no Hasse rows")

    def table(self, z):
        key = z
        got = self._tables.get(key)
        if got is not None:
            return got
        z = z.with_vars(("x0", "x1"))
        comp = branch_compose(z, self.param, self.trunc)
        o = comp.ord()
        if o is None:
            if z.try_div(self.f) is None:
                raise DomainError(
                    "order along the branch exceeds the working window; "
                    "increase truncation")
            nu, lead0 = None, None
        else:
            nu, lead0 = o, comp.coeffs[o]
        rows = {}
        for k in range(1, z.deg_in("x1") + 1):
            hk = z.hasse_diff("x1", k)
            if hk.is_zero():
                continue
            comp_k = branch_compose(hk, self.param, self.trunc)
            ok = comp_k.ord()
            if ok is None:
                # rows that are multiples of the curve equation vanish
                # identically and never constrain the model
                if hk.try_div(self.f) is None:
                    raise DomainError(
                        "order along the branch exceeds the working window; "
                        "increase truncation")
                continue
            rows[k] = (ok, comp_k.coeffs[ok])
        table = ModelTable(nu=nu, lead0=lead0, rows=rows)
        self._tables[key] = table
        return table

    def depth(self, m):
        """e(m): the first level at which the deformation is free."""
        best = 1
        for k, (nk, _lead) in self.ftable.rows.items():
            need = -((nk - (m + 1)) // k)
            if need > best:
                best = need
        return best

    def jump(self, m):
        e = self.depth(m)
        return any(k * e + nk == m + 1 for k, (nk, _l) in self.ftable.rows.items())

    def jump_witnesses(self, m):
        e = self.depth(m)
        return sorted(k for k, (nk, _l) in self.ftable.rows.items()
                      if k * e + nk == m + 1)

    def ord_at(self, z, m):
        """Order of z along the generic point of C_m, not capped at m.

        None encodes infinite order (z a multiple of the curve equation
        with no deformation term, which cannot happen for k-rows).
        """
        t = self.table(z)
        e = self.depth(m)
        vals = [k * e + nk for k, (nk, _l) in t.rows.items()]
        if t.nu is not None:
            vals.append(t.nu)
        return min(vals) if vals else None

    def read(self, z, s, m):
        """Coefficient of t^s in z along the generic point of C_m.

        Only valid at or below the order of z there; each contribution
        lands on a distinct monomial u1^N * eps^k, so no cancellation can
        occur and the result is exact.
        """
        o = self.ord_at(z, m)
        if o is not None and s > o:
            raise ClaimViolation(
                f"read at t^{s} above the order {o}; coefficient is not "
                "a two-parameter polynomial")
        t = self.table(z)
        e = self.depth(m)
        u1 = MultiPoly.var("u1")
        eps = MultiPoly.var("eps")
        out = MultiPoly.zero(("eps", "u1"))
        if t.nu == s:
            out = out + t.lead0 * u1 ** t.nu
        for k, (nk, lead) in t.rows.items():
            if k * e + nk == s:
                out = out + lead * u1 ** nk * eps ** k
        return out

    def defect(self, mu):
        """The jet equation F^(mu+1) at the generic point of C_mu.

        Level-(mu+1) jet variables do not appear because the gradient of
        the equation vanishes at the origin, so this is just the t^(mu+1)
        coefficient of f along the deformed point.
        """
        return self.read(self.f, mu + 1, mu)


def model_for(param, f=None, trunc=None):
    """Build a ContactModel, recovering f and a safe window if omitted."""
    if f is None:
        if param.source is not None:
            f = param.source
        elif param.exact:
            f = reconstruct_f(param)
        else:
            raise DomainError(
                "no curve equation available: supply f or an exact "
                "parametrization")
    sg = semigroup(param)
    if trunc is None:
        trunc = sg.conductor + sg.beta_bar[0] + 4
    return ContactModel(f, param, trunc)


def codim_jump(param, m):
    """Does the codimension of the contact locus rise from level m to m+1?"""
    if param.n == 1:
        raise DomainError("use trivial case: the branch is smooth")
    sg = semigroup(param)
    model = model_for(param, trunc=max(m + 2, sg.conductor + sg.beta_bar[0] + 4))
    return model.jump(m)


# -- contact vectors ------------------------------------------------------

ABOVE_LEVEL = "above-level"


@dataclass
class ContactVector:
    level: int
    entries: list[tuple[str, object]]

    def to_json(self):
        return {
            "m": self.level,
            "entries": [{"name": n, "ord": o} for n, o in self.entries],
        }


def contact_vector(jet, tracked):
    """Orders of tracked elements along the jet, capped at its level.

    tracked is a list of (name, polynomial in x0 and x1) pairs.  Elements
    vanishing on the branch, or meeting it above the jet level, get the
    above-level marker.
    """
    m = jet.level
    entries = []
    for name, poly in tracked:
        comp = branch_compose(poly, jet.source, m + 1)
        o = comp.ord()
        entries.append((name, o if o is not None and o <= m else ABOVE_LEVEL))
    return ContactVector(level=m, entries=entries)


# -- component classification ---------------------------------------------


@dataclass
class ComponentDescriptor:
    kind: str
    m: int
    kappa: int | None = None
    j: int | None = None
    contact_order: Fraction | None = None

    def to_json(self):
        doc = {"kind": self.kind, "m": self.m}
        if self.kappa is not None:
            doc["kappa"] = self.kappa
        if self.j is not None:
            doc["j"] = self.j
        if self.contact_order is not None:
            doc["contact"] = str(self.contact_order)
        return doc


def boundary_level(sg, m):
    """True at levels one below a new full-contact component's threshold."""
    if sg.g == 0:
        return False
    step = sg.beta_bar[0] * sg.beta_bar[1]
    shifted = m + 1 - sg.e[1]
    return shifted >= step and shifted % step == 0


def classify_components(sg, m):
    """Irreducible components of the jet scheme of the branch at level m.

    Pure transcription of the classification by contact order: full
    contact with x0 (C family), partial contact that has not outrun the
    j-th generator (Cj family), and the low-contact bulk component B.
    """
    if m < 1:
        raise DomainError("level must be at least 1")
    if sg.g == 0:
        return [ComponentDescriptor(kind="whole", m=m)]
    n1b1 = sg.n_seq[0] * sg.beta_bar[1]
    e1 = sg.e[1]
    if m < n1b1 + e1:
        return [ComponentDescriptor(kind="whole", m=m)]
    out = []
    step = sg.beta_bar[0] * sg.beta_bar[1]
    kappa = 1
    while kappa * step + e1 <= m:
        out.append(ComponentDescriptor(
            kind="C", m=m, kappa=kappa,
            contact_order=Fraction(kappa * sg.beta_bar[0])))
        kappa += 1
    for j in range(2, sg.g + 1):
        lead = sg.beta_bar[1]
        for i in range(1, j):
            lead *= sg.n_seq[i - 1]
        den = 1
        for i in range(j, sg.g + 1):
            den *= sg.n_seq[i - 1]
        kappa = 1
        while kappa * lead + e1 <= m:
            if kappa % sg.n_seq[j - 1] != 0 and m < kappa * sg.beta_bar[j]:
                out.append(ComponentDescriptor(
                    kind="Cj", m=m, kappa=kappa, j=j,
                    contact_order=Fraction(kappa * sg.beta_bar[0], den)))
            kappa += 1
    q = (m - e1) // n1b1
    out.append(ComponentDescriptor(
        kind="B", m=m, contact_order=Fraction(sg.n_seq[0] * q)))
    return out
