"""The coefficient ring for motivic classes under the Hodge-Deligne realization.

Elements are finite sums of monomials u^a v^b, with min(a, b) = 0, whose
coefficients are rational functions in t subject to the relation u*v = t^m.
The index m is the Gorenstein index of the computation: t stands for
(uv)^(1/m), so L = uv = t^m and L^(1/m) = t.  Monomial keys are reduced
eagerly, zero coefficients are dropped, and all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polyring import RF_ONE, RationalFunction, pnorm


@dataclass(frozen=True)
class StringyPolynomial:
    m: int
    terms: tuple[tuple[tuple[int, int], RationalFunction], ...] = field(default=())

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("index m must be a positive integer")
        for (a, b), coeff in self.terms:
            if a < 0 or b < 0 or min(a, b) != 0:
                raise ValueError(f"monomial key {(a, b)} is not canonical")
            if coeff.is_zero():
                raise ValueError("zero coefficient stored")

    # -- construction -------------------------------------------------

    @staticmethod
    def from_dict(m: int, d: dict[tuple[int, int], RationalFunction]) -> "StringyPolynomial":
        """Build from a raw {(a, b): coeff} map, applying uv = t^m and dropping zeros."""
        acc: dict[tuple[int, int], RationalFunction] = {}
        for (a, b), coeff in d.items():
            if coeff.is_zero():
                continue
            k = min(a, b)
            key = (a - k, b - k)
            c = coeff * RationalFunction.t_power(m * k) if k else coeff
            if key in acc:
                c = acc[key] + c
            if c.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = c
        return StringyPolynomial(m, tuple(sorted(acc.items())))

    @staticmethod
    def zero(m: int) -> "StringyPolynomial":
        return StringyPolynomial(m, ())

    @staticmethod
    def one(m: int) -> "StringyPolynomial":
        return StringyPolynomial.from_dict(m, {(0, 0): RF_ONE})

    @staticmethod
    def monomial(m: int, a: int, b: int, coeff: RationalFunction = RF_ONE) -> "StringyPolynomial":
        return StringyPolynomial.from_dict(m, {(a, b): coeff})

    @staticmethod
    def t_power(m: int, k: int) -> "StringyPolynomial":
        """t^k = (uv)^(k/m) as an element; negative k allowed."""
        return StringyPolynomial.from_dict(m, {(0, 0): RationalFunction.t_power(k)})

    @staticmethod
    def uv_polynomial(m: int, coeffs: dict[int, int]) -> "StringyPolynomial":
        """Sum of c_j * (uv)^j from an integer map {j: c_j}, j >= 0."""
        return StringyPolynomial.from_dict(
            m, {(0, 0): sum_rf(RationalFunction.t_power(m * j) * RationalFunction.const(c)
                               for j, c in coeffs.items())})

    # -- ring operations ----------------------------------------------

    def _check_index(self, other: "StringyPolynomial"):
        if self.m != other.m:
            raise ValueError(
                f"mixing indices m={self.m} and m={other.m}: reindex explicitly first")

    def __add__(self, other: "StringyPolynomial") -> "StringyPolynomial":
        self._check_index(other)
        acc = dict(self.terms)
        for key, coeff in other.terms:
            c = acc.get(key)
            c = coeff if c is None else c + coeff
            if c.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = c
        return StringyPolynomial(self.m, tuple(sorted(acc.items())))

    def __neg__(self) -> "StringyPolynomial":
        return StringyPolynomial(self.m, tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "StringyPolynomial") -> "StringyPolynomial":
        return self + (-other)

    def __mul__(self, other: "StringyPolynomial") -> "StringyPolynomial":
        self._check_index(other)
        acc: dict[tuple[int, int], RationalFunction] = {}
        for (a1, b1), c1 in self.terms:
            for (a2, b2), c2 in other.terms:
                a, b = a1 + a2, b1 + b2
                k = min(a, b)
                key = (a - k, b - k)
                c = c1 * c2
                if k:
                    c = c * RationalFunction.t_power(self.m * k)
                prev = acc.get(key)
                c = c if prev is None else prev + c
                if c.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = c
        return StringyPolynomial(self.m, tuple(sorted(acc.items())))

    def scale(self, coeff: RationalFunction) -> "StringyPolynomial":
        if coeff.is_zero():
            return StringyPolynomial.zero(self.m)
        return StringyPolynomial(self.m, tuple((k, c * coeff) for k, c in self.terms))

    def __pow__(self, k: int) -> "StringyPolynomial":
        if k < 0:
            raise ValueError("negative powers of general elements are not defined")
        out = StringyPolynomial.one(self.m)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def reindex(self, new_m: int) -> "StringyPolynomial":
        """Re-express with a finer index (old m must divide new_m): t -> t^(new/old)."""
        if new_m % self.m:
            raise ValueError(f"cannot reindex m={self.m} to m={new_m}: not a multiple")
        r = new_m // self.m
        if r == 1:
            return self
        out = {}
        for key, coeff in self.terms:
            out[key] = RationalFunction.make(_stretch(coeff.num, r), _stretch(coeff.den, r))
        return StringyPolynomial(new_m, tuple(sorted(out.items())))

    # -- realizations --------------------------------------------------

    def coefficient(self, a: int, b: int) -> RationalFunction:
        k = min(a, b)
        for key, c in self.terms:
            if key == (a - k, b - k):
                return c * RationalFunction.t_power(self.m * k) if k else c
        from .polyring import RF_ZERO
        return RF_ZERO

    def specialize_count(self, q: Fraction) -> Fraction:
        """Exact evaluation at t = q of a pure-t element (all keys (0, 0)).

        This is the point-count realization used by the finite-field oracles;
        terms with u- or v-exponents are not count-specializable.
        """
        total = Fraction(0)
        for key, coeff in self.terms:
            if key != (0, 0):
                raise ValueError("mixed Hodge term not count-specializable")
            total += coeff.evaluate(Fraction(q))
        return total

    def extract_hpq(self) -> dict[tuple[Fraction, Fraction], Fraction]:
        """Sign-corrected coefficient table {(p, q): h} with p, q in (1/m)Z.

        Requires every coefficient to be a polynomial in t (rational constants
        allowed).  The correction (-1)^(p+q) applies when p+q is an integer;
        fractional total degrees are reported unsigned.
        """
        out: dict[tuple[Fraction, Fraction], Fraction] = {}
        for (a, b), coeff in self.terms:
            if not coeff.has_constant_denominator():
                raise ValueError(
                    "not a stringy polynomial; increase resolution data or "
                    "report non-polynomial E_str")
            den = coeff.den[0]
            for j, cj in enumerate(coeff.num):
                if cj == 0:
                    continue
                p = a + Fraction(j, self.m)
                q = b + Fraction(j, self.m)
                s = p + q
                sign = (-1) ** s.numerator if s.denominator == 1 else 1
                val = out.get((p, q), Fraction(0)) + sign * Fraction(cj, den)
                if val:
                    out[(p, q)] = val
                else:
                    out.pop((p, q), None)
        return out

    # -- serialization (bit-exact round trip) ---------------------------

    def to_obj(self) -> dict:
        return {
            "m": self.m,
            "terms": [
                {"u": a, "v": b, "num": list(c.num), "den": list(c.den)}
                for (a, b), c in self.terms
            ],
        }

    @staticmethod
    def from_obj(obj: dict) -> "StringyPolynomial":
        terms = {}
        for term in obj["terms"]:
            key = (int(term["u"]), int(term["v"]))
            coeff = RationalFunction.make(pnorm(term["num"]), pnorm(term["den"]))
            if key in terms:
                coeff = terms[key] + coeff
            terms[key] = coeff
        return StringyPolynomial.from_dict(int(obj["m"]), terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.terms:
            mono = "".join(s for s in (f"u^{a}" if a else "", f"v^{b}" if b else "") if s)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def sum_rf(items) -> RationalFunction:
    from .polyring import RF_ZERO
    total = RF_ZERO
    for x in items:
        total = total + x
    return total


def _stretch(p, r: int):
    """Substitute t -> t^r in an integer polynomial."""
    out = [0] * (len(p) * r)
    for i, c in enumerate(p):
        if c:
            out[i * r] = c
    return pnorm(out)


def hd_L_power(k: Fraction, m: int) -> StringyPolynomial:
    """Realization of L^k with index m: returns t^(m*k); requires m*k integral."""
    k = Fraction(k)
    mk = k * m
    if mk.denominator != 1:
        raise ValueError(f"L^{k} is not defined at index m={m}: m*k is not an integer")
    return StringyPolynomial.t_power(m, mk.numerator)


def batyrev_factor(a: Fraction, m: int) -> RationalFunction:
    """The divisor factor (t^m - 1)/(t^(m(a+1)) - 1), fully reduced.

    a is the discrepancy; log-terminality a > -1 is required, and m(a+1)
    must be an integer.
    """
    a = Fraction(a)
    if a <= -1:
        raise ValueError(f"log-terminality violated: discrepancy {a} <= -1")
    e = (a + 1) * m
    if e.denominator != 1:
        raise ValueError(f"m*(a+1) not integral for a={a}, m={m}")
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    den = [0] * (e.numerator + 1)
    den[0], den[e.numerator] = -1, 1
    return RationalFunction.make(tuple(num), tuple(den))
