"""Exact univariate polynomial arithmetic over Z and reduced rational functions in t.

Polynomials are tuples of ints in ascending degree with no trailing zeros;
() is the zero polynomial.  All arithmetic is exact (arbitrary precision),
no floating point anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Poly = tuple[int, ...]

PZERO: Poly = ()
PONE: Poly = (1,)


def pnorm(coeffs) -> Poly:
    """Strip trailing zeros."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pdeg(a: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(a) - 1


def padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return pnorm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pneg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return PZERO
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return pnorm(out)


def pscale(a: Poly, c: int) -> Poly:
    if c == 0:
        return PZERO
    return tuple(ai * c for ai in a)


def pshift(a: Poly, k: int) -> Poly:
    """Multiply by t^k (k >= 0)."""
    if not a:
        return PZERO
    return (0,) * k + a


def pconst(c: int) -> Poly:
    return (c,) if c else PZERO


def peval(a: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pcontent(a: Poly) -> int:
    """gcd of coefficients (0 for the zero polynomial)."""
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def pprimitive(a: Poly) -> Poly:
    g = pcontent(a)
    if g <= 1:
        return a
    return tuple(c // g for c in a)


def pdiv_exact(a: Poly, b: Poly) -> Poly:
    """Exact division in Z[t]; raises if b does not divide a."""
    if not a:
        return PZERO
    q, _ = _qdivmod(a, b)
    qz = []
    for c in q:
        if c.denominator != 1:
            raise ValueError("not an exact division")
        qz.append(c.numerator)
    if pmul(pnorm(qz), b) != a:
        raise ValueError("not an exact division")
    return pnorm(qz)


def _qdivmod(a: Poly, b: Poly):
    """Full division over Q returning (quotient, remainder) as Fraction tuples."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in a]
    qlen = max(0, len(a) - len(b) + 1)
    q = [Fraction(0)] * qlen
    db, lb = pdeg(b), Fraction(b[-1])
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db or not r:
            break
        k = len(r) - 1 - db
        f = r[-1] / lb
        q[k] = f
        for i in range(len(b)):
            r[k + i] -= f * b[i]
        r.pop()
    return tuple(q), tuple(r)


def pgcd(a: Poly, b: Poly) -> Poly:
    """gcd in Z[t]: primitive gcd of the primitive parts times gcd of contents.

    Normalized with positive leading coefficient.
    """
    if not a and not b:
        return PZERO
    if not a:
        return b if b[-1] > 0 else pneg(b)
    if not b:
        return a if a[-1] > 0 else pneg(a)
    ca, cb = pcontent(a), pcontent(b)
    ra, rb = pprimitive(a), pprimitive(b)
    # Euclid over Q on the primitive parts, tracked as primitive Z-polynomials.
    while rb:
        _, rem = _qdivmod(ra, rb)
        # clear denominators and take the primitive part
        den = 1
        for c in rem:
            den = den * c.denominator // math.gcd(den, c.denominator)
        remz = pnorm([int(c * den) for c in rem])
        ra, rb = rb, pprimitive(remz)
    g = pprimitive(ra)
    if g and g[-1] < 0:
        g = pneg(g)
    return pscale(g, math.gcd(ca, cb)) if g else PZERO


def pstr(a: Poly, var: str = "t") -> str:
    if not a:
        return "0"
    parts = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


@dataclass(frozen=True)
class RationalFunction:
    """A reduced rational function in t with integer coefficients.

    Invariant: gcd(num, den) = 1 (including contents) and den has positive
    leading coefficient.  den is never the zero polynomial.
    """

    num: Poly
    den: Poly

    def __post_init__(self):
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    @staticmethod
    def make(num, den=PONE) -> "RationalFunction":
        num, den = pnorm(num), pnorm(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return RationalFunction(PZERO, PONE)
        g = pgcd(num, den)
        if pdeg(g) > 0 or (g and g[0] != 1):
            num, den = pdiv_exact(num, g), pdiv_exact(den, g)
        if den[-1] < 0:
            num, den = pneg(num), pneg(den)
        return RationalFunction(num, den)

    @staticmethod
    def const(c) -> "RationalFunction":
        f = Fraction(c)
        return RationalFunction.make(pconst(f.numerator), pconst(f.denominator))

    @staticmethod
    def t_power(k: int) -> "RationalFunction":
        """t^k for any integer k (negative powers live in the denominator)."""
        if k >= 0:
            return RationalFunction(pshift(PONE, k), PONE)
        return RationalFunction(PONE, pshift(PONE, -k))

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        """True when the reduced denominator is the constant 1."""
        return self.den == PONE

    def has_constant_denominator(self) -> bool:
        return pdeg(self.den) == 0

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(
            padd(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(pneg(self.num), self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(pmul(self.num, other.num), pmul(self.den, other.den))

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction.make(pmul(self.num, other.den), pmul(self.den, other.num))

    def evaluate(self, x: Fraction) -> Fraction:
        d = peval(self.den, Fraction(x))
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at t={x}")
        return peval(self.num, Fraction(x)) / d

    def as_coeff_map(self) -> dict[int, int]:
        """Coefficient map of a polynomial value; raises on genuine denominators."""
        if not self.is_polynomial():
            raise ValueError("rational function is not a polynomial in t")
        return {i: c for i, c in enumerate(self.num) if c}

    def __str__(self) -> str:
        if self.is_polynomial():
            return pstr(self.num)
        return f"({pstr(self.num)})/({pstr(self.den)})"


RF_ZERO = RationalFunction(PZERO, PONE)
RF_ONE = RationalFunction(PONE, PONE)
