"""Exact Laurent polynomials over Q and truncated power series.

Coefficients are kept as ``int`` whenever they are integral and as
``fractions.Fraction`` otherwise; zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

Number = Union[int, Fraction]


class InexactDivision(ArithmeticError):
    """No Laurent polynomial quotient exists."""


class ZeroPolynomial(ValueError):
    """Operation undefined on the zero polynomial."""


class ZeroConstantTerm(ZeroDivisionError):
    """Series inversion with vanishing constant term."""


def _norm(c) -> Number:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def parse_rational(s) -> Number:
    return _norm(Fraction(s))


def format_rational(c: Number) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


class LaurentPolynomial:
    """Immutable element of Q[q, 1/q] in canonical (zero-free) form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        clean: Dict[int, Number] = {}
        if terms:
            for e, c in terms.items():
                c = _norm(c)
                if c != 0:
                    clean[int(e)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1) -> "LaurentPolynomial":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: Number) -> "LaurentPolynomial":
        return cls({0: c})

    @classmethod
    def from_list(cls, lo: int, coeffs: Iterable[Number]) -> "LaurentPolynomial":
        return cls({lo + i: c for i, c in enumerate(coeffs)})

    # accessors ----------------------------------------------------------
    @property
    def terms(self) -> Dict[int, Number]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, e: int) -> Number:
        return self._terms.get(e, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degrees(self) -> Tuple[int, int]:
        if not self._terms:
            raise ZeroPolynomial("degrees of the zero polynomial")
        keys = list(self._terms)
        return keys[0], keys[-1]

    def mindeg(self) -> int:
        return self.degrees()[0]

    def maxdeg(self) -> int:
        return self.degrees()[1]

    def l1_norm(self) -> Number:
        return _norm(sum((abs(c) for c in self._terms.values()), 0))

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._terms.values())

    def is_palindromic(self) -> bool:
        return self == self.mirror()

    # arithmetic ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(x) -> "LaurentPolynomial":
        if isinstance(x, LaurentPolynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return LaurentPolynomial.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPolynomial")

    def __add__(self, other) -> "LaurentPolynomial":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPolynomial":
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial({e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        return laurent_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            if len(self._terms) != 1:
                raise InexactDivision("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return LaurentPolynomial({-e * (-k): Fraction(1, 1) / Fraction(c) ** (-k)})
        result = LaurentPolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other) -> "LaurentPolynomial":
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial({e: Fraction(c) / other for e, c in self._terms.items()})
        return laurent_exact_div(self, self._coerce(other))

    # substitutions ------------------------------------------------------
    def mirror(self) -> "LaurentPolynomial":
        """q -> 1/q."""
        return LaurentPolynomial({-e: c for e, c in self._terms.items()})

    def shift(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial({e + k: c for e, c in self._terms.items()})

    def scale_exponents(self, factor: int) -> "LaurentPolynomial":
        return LaurentPolynomial({e * factor: c for e, c in self._terms.items()})

    def divide_exponents(self, d: int) -> "LaurentPolynomial":
        if any(e % d for e in self._terms):
            raise ValueError(f"exponents not divisible by {d}")
        return LaurentPolynomial({e // d: c for e, c in self._terms.items()})

    def at_one(self) -> Number:
        return _norm(sum(self._terms.values(), 0))

    def evaluate(self, x):
        """Evaluate at a number (exact for Fraction/int, float/complex otherwise)."""
        total = 0
        for e, c in self._terms.items():
            total += c * x ** e
        return total

    # display / serialization -------------------------------------------
    def __repr__(self) -> str:
        return f"LaurentPolynomial({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                mono = "q" if e == 1 else f"q^{e}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> dict:
        return {"terms": [[e, format_rational(c)] for e, c in self._terms.items()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPolynomial":
        return cls({int(e): parse_rational(c) for e, c in obj["terms"]})


ZERO = LaurentPolynomial()
ONE = LaurentPolynomial.constant(1)
Q = LaurentPolynomial.monomial(1)


def laurent_mul(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    if a.is_zero() or b.is_zero():
        return ZERO
    ta, tb = a._terms, b._terms
    if len(ta) > len(tb):
        ta, tb = tb, ta
    out: Dict[int, Number] = {}
    get = out.get
    for ea, ca in ta.items():
        for eb, cb in tb.items():
            k = ea + eb
            out[k] = get(k, 0) + ca * cb
    return LaurentPolynomial(out)


def laurent_exact_div(a: LaurentPolynomial, b: LaurentPolynomial) -> LaurentPolynomial:
    """Return ``c`` with ``b * c == a``; raise :class:`InexactDivision` otherwise."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return ZERO
    alo, ahi = a.degrees()
    blo, bhi = b.degrees()
    if ahi - alo < bhi - blo:
        raise InexactDivision(f"({a}) / ({b}) is not a Laurent polynomial")
    # ordinary polynomial long division on the shifted coefficient lists
    rem = [Fraction(a[alo + i]) for i in range(ahi - alo + 1)]
    den = [b[blo + i] for i in range(bhi - blo + 1)]
    lead = Fraction(den[-1])
    db = len(den) - 1
    quot = [Fraction(0)] * (len(rem) - db)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + db] / lead
        quot[i] = c
        if c:
            for j, d in enumerate(den):
                if d:
                    rem[i + j] -= c * d
    if any(rem[:db]):
        raise InexactDivision(f"({a}) / ({b}) is not a Laurent polynomial")
    return LaurentPolynomial.from_list(alo - blo, quot)


def laurent_l1_norm(p: LaurentPolynomial) -> Number:
    return p.l1_norm()


def laurent_degrees(p: LaurentPolynomial) -> Tuple[int, int]:
    return p.degrees()


class TruncatedSeries:
    """Power series with exact rational coefficients, known through ``order``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence[Number], order: int | None = None):
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = [_norm(c) for c in list(coeffs)[: order + 1]]
        cs += [0] * (order + 1 - len(cs))
        self.coeffs: Tuple[Number, ...] = tuple(cs)
        self.order = order

    @classmethod
    def constant(cls, c: Number, order: int) -> "TruncatedSeries":
        return cls([c], order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    @classmethod
    def exp(cls, a: Number, order: int) -> "TruncatedSeries":
        """Series of exp(a*x)."""
        a = Fraction(a)
        return cls([a ** i / factorial(i) for i in range(order + 1)], order)

    def __getitem__(self, i: int) -> Number:
        return self.coeffs[i] if 0 <= i <= self.order else 0

    def __len__(self) -> int:
        return self.order + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(map(str, self.coeffs))}, order={self.order})"

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(order, self.order))

    def _other(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.order)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._other(other)
        m = min(self.order, other.order)
        return TruncatedSeries([self[i] + other[i] for i in range(m + 1)], m)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._other(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._other(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        m = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [0] * (m + 1)
        for i in range(m + 1):
            if a[i]:
                ai = a[i]
                for j in range(m + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return TruncatedSeries(out, m)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return series_invert(self) ** (-k)
        result = TruncatedSeries.constant(1, self.order)
        for _ in range(k):
            result = result * self
        return result

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([Fraction(c) / other for c in self.coeffs], self.order)
        return self * series_invert(other)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "TruncatedSeries":
        return cls([parse_rational(c) for c in obj["coeffs"]], int(obj["order"]))


def series_invert(s: TruncatedSeries) -> TruncatedSeries:
    a0 = s[0]
    if a0 == 0:
        raise ZeroConstantTerm("series has zero constant term")
    inv0 = Fraction(1) / Fraction(a0)
    out: List[Fraction] = [inv0]
    for m in range(1, s.order + 1):
        acc = sum((s[i] * out[m - i] for i in range(1, m + 1)), Fraction(0))
        out.append(-acc * inv0)
    return TruncatedSeries(out, s.order)


def series_of_laurent_at_exp(p: LaurentPolynomial, order: int, scale: Number = 1) -> TruncatedSeries:
    """Taylor coefficients of p(e^(scale*h)) through h^order."""
    scale = Fraction(scale)
    out = [Fraction(0)] * (order + 1)
    for e, c in p.items():
        a = e * scale
        term = Fraction(c)
        for i in range(order + 1):
            out[i] += term
            term = term * a / (i + 1)
    return TruncatedSeries(out, order)
