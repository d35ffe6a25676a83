"""Mod-p truncated power series kernels.

Dense int64 windows over a word-size prime field back the randomized
zero checks.  Primes stay below 2^26, so one full convolution of windows
up to length 2048 accumulates inside int64 with no overflow.  Numba
compiles the hot loop when it is importable; VALJET_PURE_NUMPY=1 forces
the plain numpy path.
"""

import os

import numpy as np

PRIME_LIMIT = 1 << 26
MAX_WINDOW = 2048


def _numpy_mul(a, b, p):
    return np.convolve(a, b)[: a.shape[0]] % p


def _make_numba_mul():
    from numba import njit

    @njit("int64[:](int64[:], int64[:], int64)", cache=True)
    def mul(a, b, p):
        n = a.shape[0]
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            acc = 0
            for j in range(i + 1):
                acc += a[j] * b[i - j]
            out[i] = acc % p
        return out

    return mul


KERNEL_KIND = "numpy"
_mul = _numpy_mul
if not os.environ.get("VALJET_PURE_NUMPY"):
    try:
        _mul = _make_numba_mul()
        KERNEL_KIND = "numba"
    except Exception:  # pragma: no cover - numba is optional
        _mul = _numpy_mul
        KERNEL_KIND = "numpy"


def series_window(trunc):
    if trunc > MAX_WINDOW:
        raise ValueError(f"series window {trunc} exceeds {MAX_WINDOW}")
    return np.zeros(trunc, dtype=np.int64)


def series_mul(a, b, p):
    """First len(a) coefficients of the product, coefficients mod p."""
    if a.shape != b.shape:
        raise ValueError("windows must have equal length")
    return _mul(a, b, np.int64(p))


def series_pow(a, e, p):
    if e < 0:
        raise ValueError("negative exponent")
    out = series_window(a.shape[0])
    out[0] = 1
    base = a % p
    while e:
        if e & 1:
            out = series_mul(out, base, p)
        e >>= 1
        if e:
            base = series_mul(base, base, p)
    return out


def frac_mod(fr, p):
    """Residue of a Fraction mod p; ValueError when p divides the denominator."""
    den = fr.denominator % p
    if den == 0:
        raise ValueError(f"denominator vanishes mod {p}")
    return (fr.numerator % p) * pow(den, -1, p) % p
