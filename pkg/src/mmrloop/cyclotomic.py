"""Habiro's cyclotomic expansion J_{K,n} = sum_k C_{n,k} C_{K,k}."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional

from .laurent import (
    ONE,
    InexactDivision,
    LaurentPolynomial,
    TruncatedSeries,
    laurent_exact_div,
    series_of_laurent_at_exp,
)


class InsufficientCoefficients(ValueError):
    """Forward sum requested beyond the available cyclotomic coefficients."""


@lru_cache(maxsize=None)
def cyclotomic_kernel(n: int, k: int) -> LaurentPolynomial:
    """C_{n,k}(q) = prod_{j=1..k} (q^n + q^-n - q^j - q^-j)."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k == 0:
        return ONE
    factor = LaurentPolynomial({n: 1, -n: 1}) - LaurentPolynomial({k: 1, -k: 1})
    return cyclotomic_kernel(n, k - 1) * factor


@dataclass
class CyclotomicCoefficients:
    coeffs: List[LaurentPolynomial]
    knot: Optional[str] = None
    convention: Optional[str] = None

    @property
    def k_max(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> LaurentPolynomial:
        return self.coeffs[k]

    def to_json(self) -> dict:
        return {
            "knot": self.knot,
            "convention": self.convention,
            "k_max": self.k_max,
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "CyclotomicCoefficients":
        return cls([LaurentPolynomial.from_json(c) for c in obj["coeffs"]],
                   obj.get("knot"), obj.get("convention"))


def jones_from_cyclotomic(C: CyclotomicCoefficients, n: int) -> LaurentPolynomial:
    if n < 1:
        raise ValueError("color must be >= 1")
    if n > C.k_max + 1:
        raise InsufficientCoefficients(f"color {n} needs C_K up to k={n - 1}, have {C.k_max}")
    if not cyclotomic_kernel(n, n).is_zero():
        raise ArithmeticError("kernel does not vanish at k = n")
    total = LaurentPolynomial()
    for k in range(n):
        total = total + cyclotomic_kernel(n, k) * C[k]
    return total


def cyclotomic_from_jones(jones: Mapping[int, LaurentPolynomial], k_max: int,
                          knot: Optional[str] = None,
                          convention: Optional[str] = None) -> CyclotomicCoefficients:
    """Forward substitution through the lower-triangular kernel matrix."""
    missing = [n for n in range(1, k_max + 2) if n not in jones]
    if missing:
        raise InsufficientCoefficients(f"missing colored Jones for n={missing}")
    coeffs: List[LaurentPolynomial] = []
    for k in range(k_max + 1):
        n = k + 1
        rest = jones[n]
        for l, c in enumerate(coeffs):
            rest = rest - cyclotomic_kernel(n, l) * c
        try:
            coeffs.append(laurent_exact_div(rest, cyclotomic_kernel(n, k)))
        except InexactDivision as exc:
            raise InexactDivision(f"cyclotomic inversion failed at k={k}: {exc}") from None
    return CyclotomicCoefficients(coeffs, knot, convention)


@dataclass
class IntegralityReport:
    per_k: List[bool]
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = all(self.per_k)

    @property
    def first_failure(self) -> Optional[int]:
        for k, ok in enumerate(self.per_k):
            if not ok:
                return k
        return None


def integrality_check(C: CyclotomicCoefficients) -> IntegralityReport:
    return IntegralityReport([c.is_integral() for c in C.coeffs])


def cyclotomic_taylor(C: CyclotomicCoefficients, order: int) -> Dict[int, TruncatedSeries]:
    """l -> Taylor series of C_{K,l}(e^h) through h^order."""
    return {l: series_of_laurent_at_exp(c, order) for l, c in enumerate(C.coeffs)}
