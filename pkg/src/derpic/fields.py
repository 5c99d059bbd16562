"""Exact scalar fields: the rationals and prime fields F_p.

Scalars are python-flint objects (``fmpq`` for Q, ``nmod`` for F_p), so the
usual arithmetic operators are exact and no rounding ever happens.
"""

from fractions import Fraction

import flint


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """A ground field, either Q (``p == 0``) or F_p."""

    def __init__(self, p=0):
        p = int(p)
        if p != 0 and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2 ** 31:
            raise ValueError("prime fields need p < 2^31")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @property
    def char(self):
        return self.p

    @classmethod
    def parse(cls, desc):
        """Build a field from a descriptor: ``"Q"`` or ``"Fp:5"`` (``"F5"`` also accepted)."""
        if isinstance(desc, Field):
            return desc
        s = str(desc).strip()
        if s in ("Q", "QQ"):
            return cls(0)
        if s.startswith("Fp:"):
            return cls(int(s[3:]))
        if s.startswith("F") and s[1:].isdigit():
            return cls(int(s[1:]))
        raise ValueError(f"unknown field descriptor {desc!r}")

    def descriptor(self):
        return "Q" if self.p == 0 else f"Fp:{self.p}"

    def __repr__(self):
        return "Q" if self.p == 0 else f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, x):
        if self.p == 0:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, flint.nmod):
                raise TypeError("cannot coerce a prime-field element into Q")
            return flint.fmpq(int(x))
        if isinstance(x, flint.nmod):
            if x.modulus() != self.p:
                raise TypeError("modulus mismatch")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, flint.fmpq):
            x = Fraction(int(x.p), int(x.q))
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return flint.nmod(x.numerator, self.p) / flint.nmod(x.denominator, self.p)
        return flint.nmod(int(x), self.p)

    def to_str(self, x):
        return str(x)

    def to_fraction(self, x):
        """Rational value of a Q scalar, or the canonical residue of an F_p scalar."""
        if self.p == 0:
            return Fraction(int(x.p), int(x.q))
        return int(x)

    def random(self, rng, bound=5, nonzero=False):
        while True:
            if self.p == 0:
                x = self(rng.randint(-bound, bound))
            else:
                x = self(rng.randrange(self.p))
            if not nonzero or x != 0:
                return x

    def elements(self):
        """All elements of a prime field (not available for Q)."""
        if self.p == 0:
            raise ValueError("Q is infinite")
        return [self(i) for i in range(self.p)]

    def nth_root(self, x, n):
        """An element y with y**n == x, or None when no such element exists."""
        x = self(x)
        if x == 0:
            return self.zero
        if self.p:
            for y in self.elements():
                if y ** n == x:
                    return y
            return None
        num, den = int(x.p), int(x.q)
        sign = 1
        if num < 0:
            if n % 2 == 0:
                return None
            sign, num = -1, -num
        a, b = _int_root(num, n), _int_root(den, n)
        if a is None or b is None:
            return None
        return self(Fraction(sign * a, b))

    def matrix(self, nrows, ncols, entries=None):
        """A flint matrix over this field; ``entries`` is row-major."""
        if entries is None:
            entries = [0] * (nrows * ncols)
        if self.p == 0:
            return flint.fmpq_mat(nrows, ncols, entries)
        return flint.nmod_mat(nrows, ncols, [int(e) for e in entries], self.p)


def _int_root(a, n):
    if a in (0, 1):
        return a
    lo, hi = 1, 1
    while hi ** n < a:
        hi *= 2
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid ** n
        if v == a:
            return mid
        if v < a:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


QQ = Field(0)
