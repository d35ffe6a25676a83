"""Randomized zero certification for coefficient claims at jet level.

Coefficients of compositions at deep t-orders are polynomials in many
jet parameters; deciding their vanishing symbolically is wasteful.  We
specialize the parameters at random points over several word-size prime
fields instead, with an exact-symbolic fallback flag.  A nonzero hit is
a certificate; an all-zero outcome is correct up to the usual
Schwartz-Zippel failure bound, which the policy quantifies via its
trial counts.
"""

import hashlib
import random
from dataclasses import dataclass

from ._kernels import frac_mod, series_mul, series_pow, series_window
from .errors import DomainError
from .poly import MultiPoly, render_poly

# the twelve largest primes below 2^26, largest first
PRIME_POOL = (
    67108859, 67108837, 67108819, 67108777, 67108763, 67108757,
    67108753, 67108747, 67108739, 67108729, 67108721, 67108709,
)


@dataclass
class ZeroTestPolicy:
    primes: int = 3
    points: int = 2
    exact: bool = False
    seed: int = 0

    def rng(self):
        return random.Random(self.seed)

    def prime_list(self):
        if self.primes > len(PRIME_POOL):
            raise DomainError(f"at most {len(PRIME_POOL)} primes available")
        return PRIME_POOL[: self.primes]


def eval_modp(poly, point, p):
    """Evaluate a rational-coefficient polynomial at integer residues."""
    total = 0
    for exps, coeff in poly.terms.items():
        term = frac_mod(coeff, p)
        for name, e in zip(poly.vars, exps):
            if e:
                term = term * pow(point[name] % p, e, p) % p
        total = (total + term) % p
    return total


def random_point(names, rng, p):
    """Random residues; u1 is kept nonzero so leading terms stay visible."""
    return {n: rng.randrange(1, p) if n == "u1" else rng.randrange(p)
            for n in names}


def probably_zero(poly, policy=None):
    """True when every specialization vanishes (or exactly, if asked)."""
    return nonzero_witness(poly, policy) is None


def nonzero_witness(poly, policy=None):
    """A (prime, point, value) certificate of nonvanishing, or None."""
    policy = policy or ZeroTestPolicy()
    if policy.exact:
        if poly.is_zero():
            return None
        exps, coeff = next(iter(poly.terms.items()))
        point = {n: None for n in poly.vars}
        return ("exact", point, coeff)
    rng = policy.rng()
    names = poly.vars
    for p in policy.prime_list():
        for _ in range(policy.points):
            point = random_point(names, rng, p)
            try:
                value = eval_modp(poly, point, p)
            except ValueError:
                break  # denominator hit this prime; its trials are void
            if value:
                return (p, point, value)
    return None


# -- numeric composition along a jet ---------------------------------------


def jet_series_modp(param, m, point, p, trunc):
    """The jet coordinates (x0(t), x1(t)) mod p at a u-specialization."""
    param = param.ensure(max(trunc - 1, 1))
    tau = series_window(trunc)
    for i in range(1, min(m, trunc - 1) + 1):
        tau[i] = point.get(f"u{i}", 0) % p
    x0 = series_pow(tau, param.n, p)
    x1 = series_window(trunc)
    for k, c in param.terms.items():
        if k < trunc:
            x1 = (x1 + frac_mod(c, p) * series_pow(tau, k, p)) % p
    return {"x0": x0, "x1": x1}


def compose_modp(h, series_by_name, p):
    """Coefficient window of h at the given mod-p series assignment."""
    first = next(iter(series_by_name.values()))
    out = series_window(first.shape[0])
    powers = {}
    for exps, coeff in h.terms.items():
        term = series_window(first.shape[0])
        term[0] = frac_mod(coeff, p)
        for name, e in zip(h.vars, exps):
            if not e:
                continue
            if name not in series_by_name:
                raise DomainError(f"no series assigned to variable {name!r}")
            key = (name, e)
            if key not in powers:
                powers[key] = series_pow(series_by_name[name], e, p)
            term = series_mul(term, powers[key], p)
        out = (out + term) % p
    return out


def jet_vanishing_checks(h, param, m, policy=None, trunc=None):
    """Sample ord_t of h along random numeric jets of level m.

    Returns a list of (prime, ord) pairs, where ord is the first index
    with a nonzero coefficient inside the window, or None if the whole
    window vanished for that trial.
    """
    policy = policy or ZeroTestPolicy()
    rng = policy.rng()
    T = trunc or m + 1
    results = []
    for p in policy.prime_list():
        for _ in range(policy.points):
            point = {f"u{i}": (rng.randrange(1, p) if i == 1 else rng.randrange(p))
                     for i in range(1, m + 1)}
            try:
                series = jet_series_modp(param, m, point, p, T)
                window = compose_modp(h, series, p)
            except ValueError:
                break
            hits = window.nonzero()[0]
            results.append((p, int(hits[0]) if hits.size else None))
    return results


def witness_digest(obj):
    """Stable content digest for audit trails."""
    if isinstance(obj, MultiPoly):
        text = render_poly(obj)
    else:
        text = str(obj)
    return hashlib.sha256(text.encode()).hexdigest()
