"""Complex numbers at a fixed binary precision with a running error radius.

The radius is a first-order bound: every operation adds the propagated
input radii plus one rounding unit of the result (times a small constant).
"""

from __future__ import annotations

from functools import lru_cache

import mpmath

from .laurent import LaurentPolynomial

DEFAULT_PRECISION = 128


class PrecisionExhausted(ArithmeticError):
    """The accumulated error radius exceeds the requested tolerance."""


@lru_cache(maxsize=None)
def context(prec: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


class PrecisionComplex:
    __slots__ = ("value", "radius", "prec")

    def __init__(self, value, radius=0, prec: int = DEFAULT_PRECISION):
        ctx = context(prec)
        self.value = ctx.mpc(value)
        self.radius = ctx.mpf(radius)
        self.prec = prec

    @property
    def ctx(self):
        return context(self.prec)

    @property
    def eps(self):
        return self.ctx.ldexp(1, 1 - self.prec)

    @classmethod
    def exact(cls, value, prec: int = DEFAULT_PRECISION) -> "PrecisionComplex":
        """Wrap a value whose only error is the initial rounding."""
        ctx = context(prec)
        v = ctx.mpc(value)
        return cls(v, abs(v) * ctx.ldexp(1, 1 - prec), prec)

    @classmethod
    def exp(cls, z, prec: int = DEFAULT_PRECISION) -> "PrecisionComplex":
        ctx = context(prec)
        v = ctx.exp(ctx.mpc(z))
        return cls(v, 2 * abs(v) * ctx.ldexp(1, 1 - prec), prec)

    def _lift(self, other) -> "PrecisionComplex":
        if isinstance(other, PrecisionComplex):
            return other
        ctx = self.ctx
        v = ctx.mpc(other)
        # integers and rationals with small denominators are exact enough
        return PrecisionComplex(v, abs(v) * self.eps if not _is_int(other) else 0, self.prec)

    def __add__(self, other) -> "PrecisionComplex":
        o = self._lift(other)
        v = self.value + o.value
        return PrecisionComplex(v, self.radius + o.radius + abs(v) * self.eps, self.prec)

    __radd__ = __add__

    def __neg__(self) -> "PrecisionComplex":
        return PrecisionComplex(-self.value, self.radius, self.prec)

    def __sub__(self, other) -> "PrecisionComplex":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "PrecisionComplex":
        return self._lift(other) - self

    def __mul__(self, other) -> "PrecisionComplex":
        o = self._lift(other)
        v = self.value * o.value
        r = (abs(self.value) * o.radius + abs(o.value) * self.radius
             + self.radius * o.radius + 2 * abs(v) * self.eps)
        return PrecisionComplex(v, r, self.prec)

    __rmul__ = __mul__

    def reciprocal(self) -> "PrecisionComplex":
        a = abs(self.value)
        if a <= self.radius:
            raise PrecisionExhausted("division by a value indistinguishable from zero")
        v = 1 / self.value
        r = self.radius / (a * (a - self.radius)) + 2 * abs(v) * self.eps
        return PrecisionComplex(v, r, self.prec)

    def __truediv__(self, other) -> "PrecisionComplex":
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other) -> "PrecisionComplex":
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k: int) -> "PrecisionComplex":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = PrecisionComplex(1, 0, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return abs(self.value)

    def __complex__(self) -> complex:
        return complex(self.value)

    def __repr__(self) -> str:
        return f"PrecisionComplex({mpmath.nstr(self.value, 20)} +/- {mpmath.nstr(self.radius, 3)})"

    def close_to(self, target, tol) -> bool:
        """True iff |self - target| <= tol; requires the radius to resolve tol."""
        if self.radius >= tol / 2:
            raise PrecisionExhausted(f"error radius {self.radius} cannot certify tolerance {tol}")
        t = target.value if isinstance(target, PrecisionComplex) else target
        extra = target.radius if isinstance(target, PrecisionComplex) else 0
        return abs(self.value - t) <= tol + extra

    def require(self, tol) -> "PrecisionComplex":
        if tol is not None and self.radius > tol:
            raise PrecisionExhausted(f"error radius {mpmath.nstr(self.radius, 5)} exceeds {tol}")
        return self


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def eval_complex(p: LaurentPolynomial, q0: PrecisionComplex, tol=None) -> PrecisionComplex:
    """Evaluate ``p`` at ``q0`` by Horner's rule on both halves of the support."""
    prec = q0.prec
    ctx = context(prec)
    result = PrecisionComplex(0, 0, prec)
    if p.is_zero():
        return result
    lo, hi = p.degrees()

    def horner(x: PrecisionComplex, top: int, bottom: int, coeff) -> PrecisionComplex:
        acc = PrecisionComplex(0, 0, prec)
        for d in range(top, bottom - 1, -1):
            acc = acc * x + _coef(ctx, coeff(d), prec)
        return acc * x ** bottom if bottom else acc

    if hi >= 0:
        result = result + horner(q0, hi, max(lo, 0), lambda d: p[d])
    if lo < 0:
        result = result + horner(q0.reciprocal(), -lo, max(1, -hi), lambda d: p[-d])
    return result.require(tol)


def _coef(ctx, c, prec) -> PrecisionComplex:
    if isinstance(c, int):
        return PrecisionComplex(c, 0, prec)
    v = ctx.mpf(c.numerator) / c.denominator
    return PrecisionComplex(v, abs(v) * ctx.ldexp(1, 1 - prec), prec)
