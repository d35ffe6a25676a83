"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial carries its own ordered tuple of variable names plus a map
from exponent tuples to nonzero Fraction coefficients.  Binary operations
unify variable universes by name, so values built independently combine
safely.  Term order is graded (lower total degree first) with a fixed
tie-break, which makes rendered text deterministic.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

Rat = Fraction

_CHUNK = re.compile(r"\d+|\D+")


def var_key(name):
    """Natural sort key for variable names: x0#9 sorts before x0#12."""
    parts = []
    for chunk in _CHUNK.findall(name):
        if chunk.isdigit():
            parts.append((1, int(chunk), ""))
        else:
            parts.append((0, 0, chunk))
    return tuple(parts)


def _term_key(exps):
    # graded order, ascending degree; inside a degree the lexicographically
    # largest exponent vector (on the declared variable order) comes first
    return (sum(exps), tuple(-e for e in exps))


class MultiPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms):
        self.vars = tuple(variables)
        clean = {}
        for exps, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff:
                clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables=()):
        return cls(variables, {})

    @classmethod
    def const(cls, value, variables=()):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): Fraction(value)})

    @classmethod
    def var(cls, name):
        return cls((name,), {(1,): Fraction(1)})

    # -- basic queries ------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if self.is_zero():
            return Fraction(0)
        [(exps, coeff)] = self.terms.items()
        if any(exps):
            raise ValueError("polynomial is not constant")
        return coeff

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def low_degree(self):
        """Order at the origin: minimal total degree of a term."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def deg_in(self, name):
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def weighted_min(self, weights):
        """Minimal sum(w_v * e_v) over terms, or None for the zero poly."""
        if not self.terms:
            return None
        ws = [weights.get(v, 0) for v in self.vars]
        return min(sum(w * e for w, e in zip(ws, exps)) for exps in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _term_key(kv[0]))

    def leading_term(self):
        """Highest term in the graded order; None for the zero polynomial."""
        if not self.terms:
            return None
        exps = max(self.terms, key=_term_key)
        return exps, self.terms[exps]

    # -- variable plumbing --------------------------------------------

    def _embed(self, variables):
        if variables == self.vars:
            return self.terms
        pos = {v: i for i, v in enumerate(variables)}
        idx = [pos[v] for v in self.vars]
        out = {}
        width = len(variables)
        for exps, coeff in self.terms.items():
            row = [0] * width
            for j, e in zip(idx, exps):
                row[j] = e
            key = tuple(row)
            out[key] = out.get(key, Fraction(0)) + coeff
        return out

    def _unified(self, other):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        merged = tuple(sorted(set(self.vars) | set(other.vars), key=var_key))
        return merged, self._embed(merged), other._embed(merged)

    def with_vars(self, variables):
        missing = [v for v in self.vars if v not in variables]
        if missing:
            raise ValueError(f"variables {missing} not in target universe")
        return MultiPoly(variables, self._embed(tuple(variables)))

    def rename(self, mapping):
        return MultiPoly(tuple(mapping.get(v, v) for v in self.vars), self.terms)

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        variables, a, b = self._unified(other)
        out = dict(a)
        for exps, coeff in b.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return MultiPoly(variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly.zero(self.vars)
            return MultiPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        variables, a, b = self._unified(other)
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return MultiPoly(variables, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        _, a, b = self._unified(other)
        return a == b

    def __hash__(self):
        effective = []
        for exps, coeff in self.terms.items():
            used = tuple(sorted((v, e) for v, e in zip(self.vars, exps) if e))
            effective.append((used, coeff))
        return hash(frozenset(effective))

    def __repr__(self):
        return f"MultiPoly({render_poly(self)!r})"

    # -- calculus and division ------------------------------------------

    def hasse_diff(self, name, k=1):
        """k-th Hasse derivative in one variable: x^e maps to C(e,k) x^(e-k).

        Over the rationals this equals the k-th partial derivative divided
        by k!, but the binomial form avoids building the factorial.
        """
        if k == 0 or name not in self.vars:
            return self if k == 0 else MultiPoly.zero(self.vars)
        i = self.vars.index(name)
        out = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e < k:
                continue
            binom = 1
            for j in range(k):
                binom = binom * (e - j) // (j + 1)
            key = exps[:i] + (e - k,) + exps[i + 1:]
            out[key] = out.get(key, Fraction(0)) + coeff * binom
        return MultiPoly(self.vars, out)

    def diff(self, name):
        return self.hasse_diff(name, 1)

    def try_div(self, divisor):
        """Exact quotient self / divisor, or None if it does not divide."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        variables, rem, dterms = self._unified(divisor)
        remainder = MultiPoly(variables, rem)
        div = MultiPoly(variables, dterms)
        dexps, dcoeff = div.leading_term()
        qterms = {}
        while not remainder.is_zero():
            rexps, rcoeff = remainder.leading_term()
            texps = tuple(r - d for r, d in zip(rexps, dexps))
            if any(t < 0 for t in texps):
                return None
            tcoeff = rcoeff / dcoeff
            qterms[texps] = qterms.get(texps, Fraction(0)) + tcoeff
            remainder = remainder - MultiPoly(variables, {texps: tcoeff}) * div
        return MultiPoly(variables, qterms)

    # -- evaluation ---------------------------------------------------

    def subs(self, mapping):
        """Substitute MultiPoly or rational values for named variables.

        Variables absent from the mapping stay symbolic.  Powers of each
        substituted value are cached, so repeated exponents are cheap.
        """
        values = {}
        for name, val in mapping.items():
            if not isinstance(val, MultiPoly):
                val = MultiPoly.const(val)
            values[name] = val
        powers = {name: {0: MultiPoly.const(1)} for name in values}

        def power_of(name, e):
            cache = powers[name]
            if e not in cache:
                cache[e] = power_of(name, e - 1) * values[name]
            return cache[e]

        total = MultiPoly.zero()
        for exps, coeff in self.sorted_terms():
            piece = MultiPoly.const(coeff)
            for v, e in zip(self.vars, exps):
                if not e:
                    continue
                if v in values:
                    piece = piece * power_of(v, e)
                else:
                    piece = piece * MultiPoly((v,), {(e,): Fraction(1)})
            total = total + piece
        return total

    def eval_rat(self, point):
        """Evaluate at an all-rational point given as a name -> value map."""
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            val = coeff
            for v, e in zip(self.vars, exps):
                if e:
                    val *= Fraction(point[v]) ** e
            total += val
        return total


def poly_arith(a, b, op):
    """Named arithmetic entry point: op is one of add, sub, mul, pow."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown op {op!r}")


# -- text codec --------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*(?:#\d+)?)|(?P<op>[-+*^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, universe):
        self.tokens = tokens
        self.i = 0
        self.universe = universe

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = node + rhs if val == "+" else node - rhs
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                node = node * self.factor()
            elif kind in ("name", "num") or (kind == "op" and val == "("):
                raise ParseError("missing '*' (juxtaposition not allowed)", pos)
            else:
                return node

    def factor(self):
        sign = 1
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                if val == "-":
                    sign = -sign
            else:
                break
        node = self.powered()
        return node if sign > 0 else -node

    def powered(self):
        node = self.primary()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            ekind, etext, epos = self.take()
            if ekind != "num" or "/" in etext:
                raise ParseError("exponent must be a non-negative integer", epos)
            node = node ** int(etext)
        return node

    def primary(self):
        kind, val, pos = self.take()
        if kind == "num":
            return MultiPoly.const(Fraction(val))
        if kind == "name":
            if self.universe is not None and val not in self.universe:
                raise ParseError(f"unknown variable {val!r}", pos)
            return MultiPoly.var(val)
        if kind == "op" and val == "(":
            node = self.expr()
            kind2, val2, pos2 = self.take()
            if not (kind2 == "op" and val2 == ")"):
                raise ParseError("expected ')'", pos2)
            return node
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", pos)


def parse_poly(text, universe=None):
    """Parse polynomial text in the + - * ^ grammar.

    When a universe (ordered variable list) is given, names outside it are
    rejected and the result uses exactly that variable order.
    """
    parser = _Parser(_tokenize(text), tuple(universe) if universe is not None else None)
    node = parser.expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected token {val!r}", pos)
    if universe is not None:
        return node.with_vars(tuple(universe))
    return node


def _render_monomial(variables, exps, pretty_jets):
    parts = []
    for v, e in zip(variables, exps):
        if not e:
            continue
        if pretty_jets and "#" in v:
            base, idx = v.split("#", 1)
            v = f"{base}^({idx})"
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def render_poly(p, pretty_jets=False):
    """Deterministic text form; parse_poly(render_poly(p)) == p."""
    if p.is_zero():
        return "0"
    pieces = []
    for exps, coeff in p.sorted_terms():
        mono = _render_monomial(p.vars, exps, pretty_jets)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        pieces.append((coeff < 0, body))
    first_neg, first_body = pieces[0]
    out = ("-" if first_neg else "") + first_body
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# -- perfect powers ----------------------------------------------------


def _int_nth_root(value, l):
    if value < 0:
        return None
    if value in (0, 1):
        return value
    lo, hi = 1, 1 << ((value.bit_length() + l - 1) // l + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** l < value:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** l == value else None


def _rat_nth_root(value, l):
    sign = 1
    if value < 0:
        if l % 2 == 0:
            return None
        sign = -1
        value = -value
    num = _int_nth_root(value.numerator, l)
    den = _int_nth_root(value.denominator, l)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


def _try_nth_root(p, l, max_steps=500):
    """Return (q, c) with c * q**l == p, or None.

    Works by peeling q term by term from the graded-leading end.  The
    constant c is 1 whenever the leading coefficient has an exact rational
    l-th root, otherwise q is returned monic and c carries the coefficient.
    """
    lead = p.leading_term()
    exps0, c0 = lead
    if any(e % l for e in exps0):
        return None
    root = _rat_nth_root(c0, l)
    if root is not None:
        qlead_coeff, const = root, Fraction(1)
    else:
        qlead_coeff, const = Fraction(1), c0
    qexps0 = tuple(e // l for e in exps0)
    q = MultiPoly(p.vars, {qexps0: qlead_coeff})
    for _ in range(max_steps):
        residual = p - const * q ** l
        if residual.is_zero():
            return q, const
        rexps, rcoeff = residual.leading_term()
        texps = tuple(r - (l - 1) * q0 for r, q0 in zip(rexps, qexps0))
        if any(t < 0 for t in texps):
            return None
        if _term_key(texps) >= _term_key(qexps0):
            return None
        tcoeff = rcoeff / (l * const * qlead_coeff ** (l - 1))
        q = q + MultiPoly(p.vars, {texps: tcoeff})
    return None


def perfect_power(p, candidates):
    """Largest l among candidates with p == c * q**l; returns (q, l, c).

    Candidates are tried in the given order (callers pass them sorted
    descending).  l = 1 always succeeds with q = p and c = 1.
    """
    if p.is_zero():
        raise ValueError("perfect_power of the zero polynomial")
    for l in candidates:
        if l == 1:
            break
        got = _try_nth_root(p, l)
        if got is not None:
            q, c = got
            assert c * q ** l == p
            return q, l, c
    return p, 1, Fraction(1)


# -- exact linear algebra ----------------------------------------------


class LinSystem:
    """A rectangular rational linear system A x = b."""

    def __init__(self, matrix, rhs):
        self.matrix = [[Fraction(x) for x in row] for row in matrix]
        self.rhs = [Fraction(x) for x in rhs]
        if len(self.matrix) != len(self.rhs):
            raise ValueError("matrix and rhs sizes differ")
        widths = {len(row) for row in self.matrix}
        if len(widths) > 1:
            raise ValueError("ragged matrix")


class LinResult:
    def __init__(self, status, solution=None, nullity=0):
        self.status = status      # "unique" | "none" | "underdetermined"
        self.solution = solution  # particular solution (free vars set to 0)
        self.nullity = nullity

    def __repr__(self):
        return f"LinResult({self.status}, {self.solution}, nullity={self.nullity})"


def lin_solve(system):
    """Exact Gauss-Jordan elimination with explicit solvability status."""
    rows = [row[:] + [b] for row, b in zip(system.matrix, system.rhs)]
    ncols = len(system.matrix[0]) if system.matrix else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][ncols]:
            return LinResult("none")
    solution = [Fraction(0)] * ncols
    for row_idx, col in enumerate(pivots):
        solution[col] = rows[row_idx][ncols]
    nullity = ncols - len(pivots)
    if nullity == 0:
        return LinResult("unique", solution)
    return LinResult("underdetermined", solution, nullity)
