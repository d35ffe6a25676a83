"""Truncated power series in one parameter.

Two representations cover the package's needs.  QSeries is a dense list of
Fraction coefficients and is the fast path for composing a curve with its
parametrization.  TruncSeries carries MultiPoly coefficients, so a series
can depend on auxiliary symbolic parameters; jet-scheme generic points are
built this way.  Both track an explicit truncation level: index trunc and
beyond are unknown, not zero.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import MultiPoly


class QSeries:
    """Dense series sum(coeffs[i] * t^i, i < trunc) with rational coefficients."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs, trunc):
        if len(coeffs) < trunc:
            coeffs = list(coeffs) + [Fraction(0)] * (trunc - len(coeffs))
        self.coeffs = [Fraction(c) for c in coeffs[:trunc]]
        self.trunc = trunc

    @classmethod
    def zero(cls, trunc):
        return cls([], trunc)

    @classmethod
    def from_terms(cls, terms, trunc):
        coeffs = [Fraction(0)] * trunc
        for k, c in terms.items():
            if k < trunc:
                coeffs[k] = Fraction(c)
        return cls(coeffs, trunc)

    def coeff(self, i):
        if i >= self.trunc:
            raise IndexError(f"coefficient {i} beyond truncation {self.trunc}")
        return self.coeffs[i]

    def ord(self):
        """Index of first nonzero coefficient; None if zero up to trunc."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def lead(self):
        o = self.ord()
        return None if o is None else self.coeffs[o]

    def is_zero(self):
        return self.ord() is None

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[:trunc], trunc)

    def __add__(self, other):
        t = min(self.trunc, other.trunc)
        return QSeries([a + b for a, b in zip(self.coeffs[:t], other.coeffs[:t])], t)

    def __sub__(self, other):
        t = min(self.trunc, other.trunc)
        return QSeries([a - b for a, b in zip(self.coeffs[:t], other.coeffs[:t])], t)

    def __neg__(self):
        return QSeries([-a for a in self.coeffs], self.trunc)

    def scale(self, c):
        c = Fraction(c)
        return QSeries([a * c for a in self.coeffs], self.trunc)

    def shift(self, k):
        """Multiply by t^k, keeping the same truncation level."""
        return QSeries([Fraction(0)] * k + self.coeffs[: self.trunc - k], self.trunc)

    def __mul__(self, other):
        t = min(self.trunc, other.trunc)
        out = [Fraction(0)] * t
        for i, a in enumerate(self.coeffs[:t]):
            if not a:
                continue
            top = t - i
            bcoeffs = other.coeffs
            for j in range(min(top, other.trunc)):
                b = bcoeffs[j]
                if b:
                    out[i + j] += a * b
        return QSeries(out, t)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        result = QSeries.from_terms({0: 1}, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self):
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(t^{self.trunc}))"


class PowerCache:
    """Memoizes powers of a fixed series for repeated monomial evaluation."""

    def __init__(self, base):
        self.base = base
        self._powers = {0: QSeries.from_terms({0: 1}, base.trunc), 1: base}

    def get(self, e):
        cache = self._powers
        if e not in cache:
            half = cache[e // 2] if e // 2 in cache else self.get(e // 2)
            val = half * half
            if e & 1:
                val = val * self.base
            cache[e] = val
        return cache[e]


def compose_poly(p, series_by_var, trunc):
    """Evaluate a MultiPoly at QSeries arguments, truncated at trunc."""
    caches = {}
    for name in p.vars:
        if p.deg_in(name) == 0:
            continue
        if name not in series_by_var:
            raise ValueError(f"no series assigned to variable {name!r}")
        caches[name] = PowerCache(series_by_var[name].truncate(
            min(trunc, series_by_var[name].trunc)))
    total = QSeries.zero(trunc)
    for exps, coeff in p.terms.items():
        piece = QSeries.from_terms({0: coeff}, trunc)
        for v, e in zip(p.vars, exps):
            if e:
                piece = piece * caches[v].get(e)
        total = total + piece
    return total if total.trunc == trunc else QSeries(total.coeffs, total.trunc)


class TruncSeries:
    """Series in t whose coefficients are MultiPoly values in parameters."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs, trunc):
        coeffs = list(coeffs)
        if len(coeffs) < trunc:
            coeffs += [MultiPoly.zero()] * (trunc - len(coeffs))
        fixed = []
        for c in coeffs[:trunc]:
            if not isinstance(c, MultiPoly):
                c = MultiPoly.const(c)
            fixed.append(c)
        self.coeffs = fixed
        self.trunc = trunc

    @classmethod
    def zero(cls, trunc):
        return cls([], trunc)

    @classmethod
    def from_terms(cls, terms, trunc):
        coeffs = [MultiPoly.zero()] * trunc
        for k, c in terms.items():
            if k < trunc:
                coeffs[k] = c if isinstance(c, MultiPoly) else MultiPoly.const(c)
        return cls(coeffs, trunc)

    def coeff(self, i):
        if i >= self.trunc:
            raise IndexError(f"coefficient {i} beyond truncation {self.trunc}")
        return self.coeffs[i]

    def ord(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return None

    def lead(self):
        o = self.ord()
        return None if o is None else self.coeffs[o]

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return TruncSeries(self.coeffs[:trunc], trunc)

    def __add__(self, other):
        t = min(self.trunc, other.trunc)
        return TruncSeries(
            [a + b for a, b in zip(self.coeffs[:t], other.coeffs[:t])], t)

    def __sub__(self, other):
        t = min(self.trunc, other.trunc)
        return TruncSeries(
            [a - b for a, b in zip(self.coeffs[:t], other.coeffs[:t])], t)

    def scale(self, c):
        return TruncSeries([a * c for a in self.coeffs], self.trunc)

    def __mul__(self, other):
        t = min(self.trunc, other.trunc)
        out = [MultiPoly.zero() for _ in range(t)]
        for i, a in enumerate(self.coeffs[:t]):
            if a.is_zero():
                continue
            for j in range(t - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(out, t)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        result = TruncSeries.from_terms({0: 1}, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self):
        terms = [f"({c!r})*t^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        body = " + ".join(terms) if terms else "0"
        return f"TruncSeries({body} + O(t^{self.trunc}))"


def series_compose(p, series_by_var, trunc=None):
    """Evaluate a MultiPoly at TruncSeries arguments.

    Every variable that actually occurs in p must be assigned a series;
    a missing one raises ValueError naming it.  The result is truncated
    at the tightest level among trunc and the argument truncations.
    """
    levels = []
    if trunc is not None:
        levels.append(trunc)
    for name in p.vars:
        if p.deg_in(name) == 0:
            continue
        if name not in series_by_var:
            raise ValueError(f"no series assigned to variable {name!r}")
        levels.append(series_by_var[name].trunc)
    t = min(levels) if levels else (trunc if trunc is not None else 1)
    caches = {}

    def power(name, e):
        cache = caches.setdefault(name, {0: TruncSeries.from_terms({0: 1}, t),
                                         1: series_by_var[name].truncate(t)})
        if e not in cache:
            half = power(name, e // 2)
            val = half * half
            if e & 1:
                val = val * cache[1]
            cache[e] = val
        return cache[e]

    total = TruncSeries.zero(t)
    for exps, coeff in p.terms.items():
        piece = TruncSeries.from_terms({0: coeff}, t)
        for v, e in zip(p.vars, exps):
            if e:
                piece = piece * power(v, e)
        total = total + piece
    return total
