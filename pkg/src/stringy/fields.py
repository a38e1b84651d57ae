"""Coefficient fields for the graded Smith engine: Q and prime fields F_p.

Both backends sit behind the same small interface; elements are plain
Fractions (over Q) or ints in [0, p) (over F_p), so matrices stay cheap.
"""

from __future__ import annotations

from fractions import Fraction


class RationalField:
    name = "Q"

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def from_int(self, n: int):
        return Fraction(n)

    def random(self, rng):
        return Fraction(rng.randint(-9, 9))

    def random_nonzero(self, rng):
        while True:
            x = self.random(rng)
            if x:
                return x

    def element_to_json(self, a):
        return int(a) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def element_from_json(self, v):
        return Fraction(v) if not isinstance(v, str) else Fraction(v)

    def to_json(self):
        return "Q"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n: int):
        return n % self.p

    def random(self, rng):
        return rng.randrange(self.p)

    def random_nonzero(self, rng):
        return rng.randrange(1, self.p)

    def element_to_json(self, a):
        return int(a)

    def element_from_json(self, v):
        return int(v) % self.p

    def to_json(self):
        return {"Fp": self.p}

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = RationalField()


def field_from_json(desc) -> RationalField | PrimeField:
    if desc == "Q":
        return QQ
    if isinstance(desc, dict) and "Fp" in desc:
        return PrimeField(int(desc["Fp"]))
    raise ValueError(f"unknown field descriptor {desc!r}")
