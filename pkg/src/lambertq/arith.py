"""Exact arithmetic-function tables and the Dirichlet-algebra transforms.

Tables are built by sieving up to N and are immutable afterwards.  Integer-
valued functions are tabulated with Python integers (arbitrary width, so the
exact range can never silently wrap); rational transforms use ``Fraction``;
real/complex-parameter functions store mpmath values at the working
precision.  Every table carries a crude but certified growth bound
``|f(n)| <= C * n**beta`` used by the series evaluators for tail estimates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from mpmath import mp, mpf, mpc

from .numerics import DomainError

__all__ = [
    "FunctionId",
    "ArithTable",
    "build_table",
    "dirichlet_convolve",
    "mobius_invert",
    "h_transform",
    "gcd_sum_transform",
    "squarefree_kernel_sum",
    "primes",
    "factorize",
    "divisors",
]

# ---------------------------------------------------------------------------
# sieve plumbing

_spf_cache: dict = {"N": 0, "spf": None}


def smallest_prime_factors(N: int) -> list:
    """Smallest-prime-factor array spf[0..N] (spf[n] = n for n prime)."""
    if _spf_cache["N"] >= N:
        return _spf_cache["spf"]
    spf = list(range(N + 1))
    for i in range(2, math.isqrt(N) + 1):
        if spf[i] == i:
            for j in range(i * i, N + 1, i):
                if spf[j] == j:
                    spf[j] = i
    _spf_cache["N"] = N
    _spf_cache["spf"] = spf
    return spf


def primes(N: int) -> list:
    """All primes <= N (bytearray sieve)."""
    if N < 2:
        return []
    mark = bytearray([1]) * (N + 1)
    mark[0] = mark[1] = 0
    for i in range(2, math.isqrt(N) + 1):
        if mark[i]:
            mark[i * i :: i] = bytearray(len(mark[i * i :: i]))
    return [i for i in range(2, N + 1) if mark[i]]


def factorize(n: int, spf=None) -> list:
    """Prime factorization [(p, a), ...] via the SPF sieve."""
    if n < 1:
        raise DomainError(f"factorize requires n >= 1, got {n}")
    if spf is None:
        spf = smallest_prime_factors(n)
    out = []
    while n > 1:
        p = spf[n]
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        out.append((p, a))
    return out


def divisors(n: int, spf=None) -> list:
    """All divisors of n, ascending."""
    divs = [1]
    for p, a in factorize(n, spf):
        divs = [d * p**k for d in divs for k in range(a + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# function identifiers

_PARAM_TAGS = {"jordan": float, "sigma": float, "ramanujan": int, "mu_k": int}

_TAGS = {
    "one",
    "mobius",
    "mobius_abs",
    "totient",
    "jordan",
    "mangoldt",
    "sigma",
    "divisor_d",
    "divisor_d_sq",
    "liouville",
    "omega",
    "two_pow_omega",
    "ramanujan",
    "r2",
    "r4",
    "r8",
    "chi1",
    "core_gamma",
    "mu_k",
    "neg_one_pow_omega",
    "phi_abs_mu",
    "custom",
}


@dataclass(frozen=True)
class FunctionId:
    """Tag plus parameters selecting one arithmetic function."""

    tag: str
    params: tuple = ()

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise DomainError(f"unknown function tag {self.tag!r}")
        if self.tag in _PARAM_TAGS:
            if len(self.params) != 1:
                raise DomainError(f"{self.tag} takes exactly one parameter")
            p = self.params[0]
            if self.tag == "ramanujan" and (int(p) != p or p < 1):
                raise DomainError("ramanujan parameter v must be a positive integer")
            if self.tag == "mu_k" and (int(p) != p or p < 1):
                raise DomainError("mu_k parameter k must be a positive integer")
        elif self.tag != "custom" and self.params:
            raise DomainError(f"{self.tag} takes no parameters")

    @classmethod
    def parse(cls, spec: str) -> "FunctionId":
        """Parse the CLI grammar ``name[:param[,param]]``."""
        name, _, rest = spec.partition(":")
        name = name.strip()
        if name not in _TAGS or name == "custom":
            raise DomainError(f"unknown function spec {spec!r}")
        if not rest:
            return cls(name)
        conv = _PARAM_TAGS.get(name)
        if conv is None:
            raise DomainError(f"{name} takes no parameters")
        params = []
        for tok in rest.split(","):
            try:
                val = conv(tok)
            except ValueError:
                raise DomainError(f"bad parameter {tok!r} in {spec!r}") from None
            if conv is float and val == int(val):
                val = int(val)
            params.append(val)
        return cls(name, tuple(params))

    def __str__(self):
        if self.params:
            return f"{self.tag}:{','.join(str(p) for p in self.params)}"
        return self.tag


@dataclass
class ArithTable:
    """Values of one arithmetic function on 1..N with a certified growth bound.

    ``values[n]`` indexes directly by n (slot 0 is unused).  ``growth`` is a
    pair (C, beta) with |f(n)| <= C * n**beta for all n >= 1, deliberately
    crude: tail-bound correctness outranks tightness.
    """

    fid: FunctionId
    N: int
    values: list
    growth: tuple
    exact: bool
    meta: dict = field(default_factory=dict)

    def __getitem__(self, n: int):
        if not 1 <= n <= self.N:
            raise IndexError(f"n={n} outside table range 1..{self.N}")
        return self.values[n]

    def growth_holds(self, n: int) -> bool:
        C, beta = self.growth
        return abs(self.values[n]) <= C * mpf(n) ** beta + mpf(2) ** (-mp.prec + 8)


# ---------------------------------------------------------------------------
# table construction

def _omega_bigomega(N: int, spf):
    omega = [0] * (N + 1)
    bigomega = [0] * (N + 1)
    for n in range(2, N + 1):
        m = n
        while m > 1:
            p = spf[m]
            omega[n] += 1
            while m % p == 0:
                m //= p
                bigomega[n] += 1
    return omega, bigomega


def build_table(fid: FunctionId, N: int) -> ArithTable:
    """Sieve the function ``fid`` on 1..N."""
    if isinstance(fid, str):
        fid = FunctionId.parse(fid)
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    spf = smallest_prime_factors(max(N, 4))
    tag = fid.tag
    vals = [0] * (N + 1)
    exact = True
    meta: dict = {}

    if tag == "one":
        vals = [1] * (N + 1)
        growth = (1, 0)
    elif tag == "mobius":
        vals[1] = 1
        for n in range(2, N + 1):
            fac = factorize(n, spf)
            vals[n] = 0 if any(a > 1 for _, a in fac) else (-1) ** len(fac)
        growth = (1, 0)
    elif tag == "mobius_abs":
        vals[1] = 1
        for n in range(2, N + 1):
            vals[n] = int(all(a == 1 for _, a in factorize(n, spf)))
        growth = (1, 0)
    elif tag == "totient":
        vals = list(range(N + 1))
        for n in range(2, N + 1):
            if spf[n] == n:  # prime
                for m in range(n, N + 1, n):
                    vals[m] -= vals[m] // n
        vals[0] = 0
        growth = (1, 1)
    elif tag == "jordan":
        alpha = fid.params[0]
        if isinstance(alpha, int) or float(alpha).is_integer():
            k = int(alpha)
            if k < 0:
                raise DomainError("jordan exponent must be >= 0")
            vals[1] = 1
            for n in range(2, N + 1):
                v = n**k
                for p, _ in factorize(n, spf):
                    v -= v // p**k
                vals[n] = v
            growth = (1, k)
        else:
            if alpha < 0:
                raise DomainError("jordan exponent must be >= 0")
            exact = False
            vals[1] = mpf(1)
            a = mpf(alpha)
            for n in range(2, N + 1):
                v = mpf(n) ** a
                for p, _ in factorize(n, spf):
                    v *= 1 - mpf(p) ** (-a)
                vals[n] = v
            growth = (1, alpha)
    elif tag == "mangoldt":
        exact = False
        base = [0] * (N + 1)
        vals = [mpf(0)] * (N + 1)
        for p in primes(N):
            lp = mp.log(p)
            pk = p
            while pk <= N:
                vals[pk] = lp
                base[pk] = p
                pk *= p
        meta["prime_base"] = base
        growth = (1, 1)
    elif tag == "sigma":
        s = fid.params[0]
        if isinstance(s, int) or float(s).is_integer():
            k = int(s)
            for d in range(1, N + 1):
                t = d ** abs(k)
                for m in range(d, N + 1, d):
                    vals[m] += t
            if k < 0:
                # sigma_{-k}(n) = sigma_k(n) / n^k
                vals = [Fraction(0)] + [
                    Fraction(vals[n], n ** abs(k)) for n in range(1, N + 1)
                ]
        else:
            exact = False
            se = mpf(s)
            vals = [mpf(0)] * (N + 1)
            for n in range(1, N + 1):
                vals[n] = sum(mpf(d) ** se for d in divisors(n, spf))
        growth = (2, max(float(s), 0.0) + 1)
    elif tag == "divisor_d":
        for n in range(1, N + 1):
            v = 1
            for _, a in factorize(n, spf):
                v *= a + 1
            vals[n] = v
        growth = (4, 1)
    elif tag == "divisor_d_sq":
        for n in range(1, N + 1):
            v = 1
            for _, a in factorize(n, spf):
                v *= 2 * a + 1
            vals[n] = v
        growth = (4, 1)
    elif tag == "liouville":
        vals[1] = 1
        for n in range(2, N + 1):
            vals[n] = (-1) ** sum(a for _, a in factorize(n, spf))
        growth = (1, 0)
    elif tag == "omega":
        for n in range(1, N + 1):
            vals[n] = len(factorize(n, spf))
        growth = (2, 0.5)  # omega(n) <= log2(n) <= 2 sqrt(n)
    elif tag in ("two_pow_omega", "neg_one_pow_omega"):
        base = 2 if tag == "two_pow_omega" else -1
        vals[1] = 1
        for n in range(2, N + 1):
            vals[n] = base ** len(factorize(n, spf))
        growth = (4, 1) if tag == "two_pow_omega" else (1, 0)
    elif tag == "ramanujan":
        v = int(fid.params[0])
        mob = build_table(FunctionId("mobius"), N)
        sigma1_v = sum(divisors(v))
        for d in divisors(v):
            for m in range(d, N + 1, d):
                vals[m] += d * mob[m // d]
        growth = (sigma1_v, 0)
    elif tag == "r2":
        chi = build_table(FunctionId("chi1"), N)
        for d in range(1, N + 1):
            c = chi[d]
            if c:
                for m in range(d, N + 1, d):
                    vals[m] += c
        for n in range(1, N + 1):
            vals[n] *= 4
        vals[0] = 0
        growth = (8, 0.5)  # r2(n) <= 4 d(n) <= 8 sqrt(n)
    elif tag == "r4":
        for d in range(1, N + 1):
            if d % 4 != 0:
                for m in range(d, N + 1, d):
                    vals[m] += d
        for n in range(1, N + 1):
            vals[n] *= 8
        growth = (48, 1.5)  # 8*sigma1(n) <= 8 n d(n) <= 16 n^1.5, with slack
    elif tag == "r8":
        # (-1)^n r8(n) = 16 * sum_{d|n} (-1)^d d^3 (the divisor form of the
        # classical eight-square formula).
        for d in range(1, N + 1):
            t = (-1) ** d * d**3
            for m in range(d, N + 1, d):
                vals[m] += t
        for n in range(1, N + 1):
            vals[n] = 16 * (-1) ** n * vals[n]
        growth = (32, 3)  # r8(n) <= 16 sigma3(n) <= 16 zeta(3) n^3
    elif tag == "chi1":
        for n in range(1, N + 1):
            m = n % 4
            vals[n] = 1 if m == 1 else (-1 if m == 3 else 0)
        growth = (1, 0)
    elif tag == "core_gamma":
        vals[1] = 1
        for n in range(2, N + 1):
            v = 1
            for p, _ in factorize(n, spf):
                v *= p
            vals[n] = v
        growth = (1, 1)
    elif tag == "mu_k":
        k = int(fid.params[0])
        if k == 1:
            # exp(pi*i*omega) = (-1)^omega: stays exact
            vals[1] = 1
            for n in range(2, N + 1):
                fac = factorize(n, spf)
                vals[n] = 0 if any(a > 1 for _, a in fac) else (-1) ** len(fac)
        else:
            exact = False
            root = mp.expjpi(mpf(1) / k)
            vals = [mpc(0)] * (N + 1)
            vals[1] = mpc(1)
            for n in range(2, N + 1):
                fac = factorize(n, spf)
                vals[n] = mpc(0) if any(a > 1 for _, a in fac) else root ** len(fac)
        growth = (1, 0)
    elif tag == "phi_abs_mu":
        tot = build_table(FunctionId("totient"), N)
        mu2 = build_table(FunctionId("mobius_abs"), N)
        for n in range(1, N + 1):
            vals[n] = tot[n] * mu2[n]
        growth = (1, 1)
    elif tag == "custom":
        raise DomainError("custom tables are built directly, not sieved")
    else:  # pragma: no cover
        raise DomainError(f"unhandled tag {tag}")

    if isinstance(vals, list) and len(vals) != N + 1:
        vals = vals[: N + 1]
    return ArithTable(fid, N, vals, growth, exact, meta)


def custom_table(label: str, values: list, growth: tuple, exact: bool = True) -> ArithTable:
    """Wrap precomputed values (index 1..N; values[0] ignored) as a table."""
    fid = FunctionId("custom", (label,))
    return ArithTable(fid, len(values) - 1, values, growth, exact)


# ---------------------------------------------------------------------------
# Dirichlet algebra

def _promote(x):
    if isinstance(x, (mpf, mpc)):
        return x
    if isinstance(x, Fraction):
        return x
    return x  # int


def dirichlet_convolve(a: ArithTable, b: ArithTable) -> ArithTable:
    """(a*b)(n) = sum over d|n of a(d) b(n/d), O(N log N)."""
    if a.N != b.N:
        raise DomainError("tables must share the same N")
    N = a.N
    inexact = not (a.exact and b.exact)
    zero = mpf(0) if inexact else 0
    out = [zero] * (N + 1)
    av, bv = a.values, b.values
    for d in range(1, N + 1):
        ad = av[d]
        if not ad:
            continue
        for m in range(1, N // d + 1):
            out[d * m] = out[d * m] + ad * bv[m]
    Ca, ba = a.growth
    Cb, bb = b.growth
    growth = (2 * Ca * Cb, max(ba, bb) + 0.5)  # d(n) <= 2 sqrt(n) absorbs the divisor count
    fid = FunctionId("custom", (f"({a.fid}*{b.fid})",))
    return ArithTable(fid, N, out, growth, a.exact and b.exact)


def mobius_invert(f: ArithTable) -> ArithTable:
    """Return g with f = 1*g (exact Mobius inversion)."""
    mob = build_table(FunctionId("mobius"), f.N)
    res = dirichlet_convolve(mob, f)
    res.fid = FunctionId("custom", (f"mobius_invert({f.fid})",))
    return res


def h_transform(f: ArithTable) -> ArithTable:
    """h(n) = sum_{d|n} (mu(d)/d) f(n/d), exact rationals when f is exact.

    Equivalently n h(n) = sum_{d|n} d f(d) mu(n/d).
    """
    N = f.N
    mob = build_table(FunctionId("mobius"), N)
    exact = f.exact
    out = [Fraction(0) if exact else mpf(0)] * (N + 1)
    for d in range(1, N + 1):
        md = mob[d]
        if not md:
            continue
        if exact:
            w = Fraction(md, d)
        else:
            w = mpf(md) / d
        for m in range(1, N // d + 1):
            out[d * m] = out[d * m] + w * f.values[m]
    Cf, bf = f.growth
    # |h(n)| <= sum_{d|n} |f(n/d)| <= Cf n^bf d(n) <= 2 Cf n^(bf+1/2)
    growth = (2 * Cf, bf + 0.5)
    fid = FunctionId("custom", (f"h_transform({f.fid})",))
    return ArithTable(fid, N, out, growth, exact)


def gcd_sum_transform(g: ArithTable, n: int):
    """Literal sum over k = 1..n of gcd(n,k) * g(gcd(n,k))."""
    if n > g.N:
        raise DomainError(f"n={n} exceeds table size {g.N}")
    total = 0
    for k in range(1, n + 1):
        d = math.gcd(n, k)
        total = total + d * g.values[d]
    return total


def squarefree_kernel_sum(fp: Callable, n: int):
    """Both sides of prod_{p|n}(1 - f(p)) = sum_{d|n} mu(d) f(d).

    ``fp`` gives the multiplicative function's values on primes; the divisor
    sum extends it multiplicatively over squarefree d.  Returns the pair
    (product, divisor_sum).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    ps = [p for p, _ in factorize(n)]
    prod = 1
    for p in ps:
        prod = prod * (1 - fp(p))
    total = 1  # d = 1 term
    for mask in range(1, 1 << len(ps)):
        fd = 1
        bits = 0
        for i, p in enumerate(ps):
            if mask >> i & 1:
                fd = fd * fp(p)
                bits += 1
        total = total + (-1) ** bits * fd
    return prod, total
