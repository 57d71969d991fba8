"""Colored Jones and Alexander polynomials of braid closures.

The colored Jones polynomial is a quantum sl2 state sum: the R-matrix on
the n-dimensional irreducible module is applied crossing by crossing and
the braid is closed either by a partial quantum trace (ordinary closure)
or by invariant cups and caps (plat closure).  Entries live in Z[v, 1/v]
with v = q^(1/4); the framing-corrected result only has powers of q.

Plat closures exist because a 4-strand ordinary closure needs a trace
over n^3 basis states while a 4-plat needs a single vector.  Every
two-bridge knot is a 4-plat.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .laurent import ONE, LaurentPolynomial, laurent_exact_div
from .precision import PrecisionComplex, context

STANDARD = "standard"
MIRRORED = "mirrored"
CONVENTIONS = (STANDARD, MIRRORED)


class NotAKnot(ValueError):
    """The closure of the braid has more than one component."""


# ---------------------------------------------------------------------------
# braid words

@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[int, ...]
    name: Optional[str] = None
    closure: str = "trace"

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strands < 2:
            raise ValueError("a braid needs at least 2 strands")
        if self.closure not in ("trace", "plat"):
            raise ValueError(f"unknown closure {self.closure!r}")
        if self.closure == "plat" and self.strands % 2:
            raise ValueError("plat closure needs an even number of strands")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"letter {x} out of range for {self.strands} strands")
        if _diagram(self).components != 1:
            raise NotAKnot(f"closure of {self.letters} has {_diagram(self).components} components")

    @property
    def writhe(self) -> int:
        return _diagram(self).writhe

    def mirror(self) -> "BraidWord":
        name = f"{self.name}*" if self.name else None
        return BraidWord(self.strands, tuple(-x for x in self.letters), name, self.closure)

    def to_json(self) -> dict:
        d = {"name": self.name, "strands": self.strands, "word": list(self.letters)}
        if self.closure != "trace":
            d["closure"] = self.closure
        return d

    @classmethod
    def from_json(cls, obj) -> "BraidWord":
        return cls(int(obj["strands"]), tuple(obj["word"]), obj.get("name"),
                   obj.get("closure", "trace"))


@dataclass
class _Diagram:
    components: int
    writhe: int
    # per crossing: (over_arc, under_in_arc, under_out_arc, sign)
    crossings: List[Tuple[int, int, int, int]] = field(default_factory=list)
    arcs: int = 0
    # twice the rotation number contributed by plat cups and caps
    turning: int = 0


@lru_cache(maxsize=None)
def _diagram(braid: BraidWord) -> _Diagram:
    """Trace the closure: components, orientation, crossing signs, Wirtinger arcs."""
    m, L = braid.strands, len(braid.letters)
    # piece (l, p): the strand segment between levels l and l+1 that starts at position p
    def piece_end(l, p):
        x = braid.letters[l]
        a = abs(x) - 1
        if p == a:
            return a + 1
        if p == a + 1:
            return a
        return p

    # node (l, p) joins the piece arriving from above (l-1, p') and the piece leaving (l, p)
    arriving = {}
    for l in range(L):
        for p in range(m):
            arriving[(l + 1, piece_end(l, p))] = (l, p)

    components = _count_components(braid)
    if components != 1:
        return _Diagram(components, 0)

    # walk the knot once; direction[piece] = +1 if traversed downward
    direction: Dict[Tuple[int, int], int] = {}
    node, down = (0, 0), True
    while True:
        l, p = node
        if down:
            if l < L:
                direction[(l, p)] = 1
                node = (l + 1, piece_end(l, p))
            elif braid.closure == "trace":
                node = (0, p)
            else:
                node, down = (L, p ^ 1), False
        else:
            if l > 0:
                piece = arriving[node]
                direction[piece] = -1
                node = piece
            else:
                node, down = (0, p ^ 1), True
        if node == (0, 0) and down:
            break

    # Wirtinger arcs via union-find. Elements: ("p", l, p) for whole pieces,
    # ("t", l, p)/("b", l, p) halves for under pieces.
    parent: Dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    under = {}
    for l, x in enumerate(braid.letters):
        a = abs(x) - 1
        # positive letter: strand moving a+1 -> a passes over
        under[l] = a if x > 0 else a + 1

    def top(l, p):
        return ("t", l, p) if under.get(l) == p else ("p", l, p)

    def bot(l, p):
        return ("b", l, p) if under.get(l) == p else ("p", l, p)

    for l in range(L):
        for p in range(m):
            find(top(l, p)), find(bot(l, p))
    # nodes at interior levels
    for (l, p), (al, ap) in arriving.items():
        if l < L:
            union(bot(al, ap), top(l, p))
    # closure joins
    for p in range(m):
        if braid.closure == "trace":
            if L:
                union(bot(*arriving[(L, p)]), top(0, p))
        else:
            if p % 2 == 0 and L:
                union(top(0, p), top(0, p + 1))
                union(bot(*arriving[(L, p)]), bot(*arriving[(L, p + 1)]))

    roots = {}
    for l in range(L):
        for p in range(m):
            for e in (top(l, p), bot(l, p)):
                r = find(e)
                roots.setdefault(r, len(roots))

    writhe = 0
    crossings = []
    for l, x in enumerate(braid.letters):
        a = abs(x) - 1
        # piece starting at a goes a -> a+1 (vector (+1,-1) when downward)
        da = direction.get((l, a), 1)
        db = direction.get((l, a + 1), 1)
        va = (da, -da)
        vb = (-db, -db)
        if x > 0:
            over, under_v, up = vb, va, a
            over_piece = (l, a + 1)
        else:
            over, under_v, up = va, vb, a + 1
            over_piece = (l, a)
        cross = over[0] * under_v[1] - over[1] * under_v[0]
        sign = 1 if cross > 0 else -1
        writhe += sign
        du = direction.get((l, up), 1)
        half_in, half_out = (("t", l, up), ("b", l, up)) if du == 1 else (("b", l, up), ("t", l, up))
        crossings.append((roots[find(("p",) + over_piece)], roots[find(half_in)],
                          roots[find(half_out)], sign))
    turning = 0
    if braid.closure == "plat":
        for p in range(0, m, 2):
            # cap on top: moving up on the left then down on the right is clockwise
            turning += 1 if direction[(0, p)] == 1 else -1
            # cup at the bottom: moving down on the left then up on the right is counterclockwise
            turning += 1 if direction[arriving[(L, p)]] == 1 else -1
    return _Diagram(components, writhe, crossings, len(roots), turning)


def _count_components(braid: BraidWord) -> int:
    m = braid.strands
    perm = list(range(m))  # perm[p] = bottom position of strand starting at top p
    for x in braid.letters:
        a = abs(x) - 1
        for s in range(m):
            if perm[s] == a:
                perm[s] = a + 1
            elif perm[s] == a + 1:
                perm[s] = a
    if braid.closure == "trace":
        seen, count = set(), 0
        for s in range(m):
            if s not in seen:
                count += 1
                while s not in seen:
                    seen.add(s)
                    s = perm[s]
        return count
    inv = {perm[s]: s for s in range(m)}
    # graph on top positions: strand s ends at perm[s]; bottom cap joins perm[s] ^ 1;
    # that strand starts at inv[...]; top cup joins it to its partner
    seen, count = set(), 0
    for s in range(m):
        if s in seen:
            continue
        count += 1
        cur = s
        while cur not in seen:
            seen.add(cur)
            seen.add(cur ^ 1)
            nxt = inv[perm[cur] ^ 1] ^ 1
            cur = nxt
    return count


# ---------------------------------------------------------------------------
# v-polynomials as (lowest exponent, numpy coefficient array)

VPoly = Tuple[int, np.ndarray]
_I64_LIMIT = 2 ** 62


def _vp(p: LaurentPolynomial) -> VPoly:
    lo, hi = p.degrees()
    arr = np.zeros(hi - lo + 1, dtype=np.int64)
    for e, c in p.items():
        arr[e - lo] = c
    return lo, arr


def _vp_to_laurent(lo: int, arr: np.ndarray) -> LaurentPolynomial:
    return LaurentPolynomial({lo + i: int(c) for i, c in enumerate(arr) if c})


def _qint(a: int) -> LaurentPolynomial:
    """[a] = (q^(a/2) - q^(-a/2)) / (q^(1/2) - q^(-1/2)) in v = q^(1/4)."""
    if a <= 0:
        return LaurentPolynomial()
    return LaurentPolynomial({2 * (a - 1) - 4 * i: 1 for i in range(a)})


@lru_cache(maxsize=None)
def _qfactorial_ratio(top: int, bottom: int) -> LaurentPolynomial:
    """[top]! / [bottom]! for top >= bottom >= 0."""
    r = ONE
    for a in range(bottom + 1, top + 1):
        r = r * _qint(a)
    return r


@lru_cache(maxsize=None)
def _qbinom(a: int, b: int) -> LaurentPolynomial:
    if b < 0 or b > a:
        return LaurentPolynomial()
    return laurent_exact_div(_qfactorial_ratio(a, a - b), _qfactorial_ratio(b, 0))


_V2_MINUS = LaurentPolynomial({2: 1, -2: -1})  # q^(1/2) - q^(-1/2)


@lru_cache(maxsize=None)
def r_matrix_entries(n: int, inverse: bool = False) -> Dict[Tuple[int, int, int], LaurentPolynomial]:
    """Nonzero entries of the braiding on V_n (x) V_n, keyed by (i, j, k).

    Forward:  e_i (x) e_j -> sum_k c * e_{j+k} (x) e_{i-k}
    Inverse:  e_i (x) e_j -> sum_k c * e_{j-k} (x) e_{i+k}
    """
    lam = [n - 1 - 2 * i for i in range(n)]
    out = {}
    for i in range(n):
        for j in range(n):
            if not inverse:
                for k in range(0, min(i, n - 1 - j) + 1):
                    c = (_qbinom(i, k) * _qfactorial_ratio(n - i - 1 + k, n - i - 1)
                         * _V2_MINUS ** k)
                    c = c.shift(lam[i - k] * lam[j + k] + k * (k - 1))
                    out[(i, j, k)] = c
            else:
                # R^{-1} = Theta^{-1} q^{-H(x)H/4}, then the flip
                for k in range(0, min(j, n - 1 - i) + 1):
                    c = (_qbinom(j, k) * _qfactorial_ratio(n - j - 1 + k, n - j - 1)
                         * _V2_MINUS ** k) * (-1) ** k
                    c = c.shift(-lam[i] * lam[j] - k * (k - 1))
                    out[(i, j, k)] = c
    return out


def _targets(n: int, i: int, j: int, inverse: bool):
    if not inverse:
        for k in range(0, min(i, n - 1 - j) + 1):
            yield k, j + k, i - k
    else:
        for k in range(0, min(j, n - 1 - i) + 1):
            yield k, j - k, i + k


def _cup(n: int) -> List[LaurentPolynomial]:
    """Coefficients c_i of the invariant vector sum_i c_i e_i (x) e_{n-1-i}."""
    cs = [ONE]
    for i in range(1, n):
        cs.append(-cs[-1].shift(2 * (n - 1 - 2 * i)))
    return cs


def _cap(n: int) -> List[LaurentPolynomial]:
    """Coefficients d_i of the invariant form e_i (x) e_{n-1-i} -> d_i."""
    ds = [ONE]
    for i in range(1, n):
        ds.append(-ds[-1].shift(2 * (2 * i - n - 1)))
    return ds


# ---------------------------------------------------------------------------
# rings the state sum can run over

class _PolyRing:
    """Exact arithmetic on (lo, int array) pairs."""

    def __init__(self, n: int):
        self.n = n
        self.dtype = np.int64
        self.fwd = {key: _vp(c) for key, c in r_matrix_entries(n).items()}
        self.inv = {key: _vp(c) for key, c in r_matrix_entries(n, True).items()}
        self.entry_l1 = max(int(np.abs(a).sum()) for _, a in list(self.fwd.values()) + list(self.inv.values()))

    def lift(self, p: LaurentPolynomial):
        lo, arr = _vp(p)
        return lo, arr.astype(self.dtype)

    def one(self):
        return 0, np.ones(1, dtype=self.dtype)

    def entry(self, key, inverse):
        lo, arr = (self.inv if inverse else self.fwd)[key]
        return lo, arr if self.dtype is np.int64 else arr.astype(object)

    def mul(self, a, b):
        return a[0] + b[0], np.convolve(a[1], b[1])

    def add(self, a, b):
        if a is None:
            return b
        lo = min(a[0], b[0])
        hi = max(a[0] + len(a[1]), b[0] + len(b[1]))
        out = np.zeros(hi - lo, dtype=a[1].dtype if a[1].dtype == b[1].dtype else object)
        out[a[0] - lo: a[0] - lo + len(a[1])] += a[1]
        out[b[0] - lo: b[0] - lo + len(b[1])] += b[1]
        return lo, out

    def guard(self, states: dict):
        if self.dtype is not np.int64:
            return states
        worst = max((int(np.abs(a).sum()) for _, a in states.values()), default=0)
        if worst * self.entry_l1 * self.n < _I64_LIMIT:
            return states
        self.dtype = object
        return {k: (lo, a.astype(object)) for k, (lo, a) in states.items()}

    def to_laurent(self, a) -> LaurentPolynomial:
        return _vp_to_laurent(*a)


class _NumericRing:
    """PrecisionComplex arithmetic at v = v0."""

    def __init__(self, n: int, v0: PrecisionComplex):
        self.n = n
        self.v0 = v0
        self.prec = v0.prec
        self._cache = {}

    def lift(self, p: LaurentPolynomial):
        from .precision import eval_complex
        return eval_complex(p, self.v0)

    def one(self):
        return PrecisionComplex(1, 0, self.prec)

    def entry(self, key, inverse):
        ck = (key, inverse)
        if ck not in self._cache:
            self._cache[ck] = self.lift(r_matrix_entries(self.n, inverse)[key])
        return self._cache[ck]

    def mul(self, a, b):
        return a * b

    def add(self, a, b):
        return b if a is None else a + b

    def guard(self, states):
        return states


def _apply_letter(ring, states: dict, letter: int, slot: int) -> dict:
    """Apply one crossing. Keys are tuples; ``slot`` is the offset of the strand indices."""
    n = ring.n
    a = slot + abs(letter) - 1
    inverse = letter < 0
    out: Dict = {}
    for key, val in states.items():
        i, j = key[a], key[a + 1]
        for k, ni, nj in _targets(n, i, j, inverse):
            nk = key[:a] + (ni, nj) + key[a + 2:]
            out[nk] = ring.add(out.get(nk), ring.mul(ring.entry((i, j, k), inverse), val))
    return ring.guard(out)


def _raw_trace(ring, braid: BraidWord):
    """Partial quantum trace over strands 2..m with strand 1 held at e_0."""
    n, m = ring.n, braid.strands
    lam = [n - 1 - 2 * i for i in range(n)]
    import itertools
    starts = [(0,) + rest for rest in itertools.product(range(n), repeat=m - 1)]
    states = {s + s: ring.one() for s in starts}
    for x in braid.letters:
        states = _apply_letter(ring, states, x, m)
    total = None
    for s in starts:
        val = states.get(s + s)
        if val is None:
            continue
        mu = LaurentPolynomial.monomial(sum(2 * lam[i] for i in s[1:]))
        total = ring.add(total, ring.mul(ring.lift(mu), val))
    return total


def _raw_plat(ring, braid: BraidWord):
    n, m = ring.n, braid.strands
    import itertools
    cup = [ring.lift(c) for c in _cup(n)]
    cap = [ring.lift(d) for d in _cap(n)]
    states = {}
    for idx in itertools.product(range(n), repeat=m // 2):
        key = tuple(v for i in idx for v in (i, n - 1 - i))
        val = ring.one()
        for i in idx:
            val = ring.mul(cup[i], val)
        states[key] = val
    for x in braid.letters:
        states = _apply_letter(ring, states, x, 0)
    total = None
    for key, val in states.items():
        if all(key[2 * t] + key[2 * t + 1] == n - 1 for t in range(m // 2)):
            for t in range(m // 2):
                val = ring.mul(cap[key[2 * t]], val)
            total = ring.add(total, val)
    return total


def _raw(ring, braid: BraidWord):
    return _raw_plat(ring, braid) if braid.closure == "plat" else _raw_trace(ring, braid)


_KINK = BraidWord(2, (1,), "kink")
_PLAT_KINK = BraidWord(4, (2,), "plat-kink", "plat")


@lru_cache(maxsize=None)
def _framing(n: int, closure: str) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    """(unknot value, twist factor) for the given closure type, as v-polynomials."""
    ring = _PolyRing(n)
    if closure == "trace":
        circle = ONE
        kink = ring.to_laurent(_raw(ring, _KINK))
    else:
        ref = _PLAT_KINK
        kink_total = ring.to_laurent(_raw(ring, ref))
        inv = ring.to_laurent(_raw(_PolyRing(n), ref.mirror()))
        # kink_total = circle * theta^w, inv = circle * theta^-w
        theta2 = laurent_exact_div(kink_total, inv)
        if len(theta2) != 1:
            raise ArithmeticError("twist factor is not a monomial")
        (e, c), = theta2.items()
        if c != 1 or e % 2:
            raise ArithmeticError("unexpected twist factor")
        theta_w = LaurentPolynomial.monomial(e // 2)
        circle = laurent_exact_div(kink_total, theta_w)
        kink = theta_w if ref.writhe == 1 else theta_w ** -1
    if len(kink) != 1:
        raise ArithmeticError(f"framing factor {kink} is not a monomial")
    return circle, kink


_TREFOIL_ANCHOR = LaurentPolynomial({-4: -1, -3: 1, -1: 1})


@lru_cache(maxsize=None)
def _native_is_standard() -> bool:
    """Whether the raw state sum already gives the anchor value on sigma_1^3."""
    trefoil = _colored_jones_native(BraidWord(2, (1, 1, 1)), 2)
    if trefoil not in (_TREFOIL_ANCHOR, _TREFOIL_ANCHOR.mirror()):
        raise ArithmeticError(f"trefoil anchor failed: {trefoil}")
    return trefoil == _TREFOIL_ANCHOR


def _colored_jones_native(braid: BraidWord, n: int) -> LaurentPolynomial:
    if n == 1:
        return ONE
    ring = _PolyRing(n)
    raw = ring.to_laurent(_raw(ring, braid))
    circle, kink = _framing(n, braid.closure)
    w = braid.writhe
    val = laurent_exact_div(raw, circle * kink ** w) * _turning_sign(braid, n)
    return val.divide_exponents(4)


def _turning_sign(braid: BraidWord, n: int) -> int:
    """Frobenius-Schur sign: even-dimensional modules pick up (-1)^rotation in a plat."""
    if braid.closure != "plat" or n % 2:
        return 1
    return -1 if (_diagram(braid).turning // 2) % 2 else 1


def colored_jones(braid: BraidWord, n: int, convention: str = STANDARD) -> LaurentPolynomial:
    """Normalized colored Jones polynomial J_{K,n}(q) of the closure (unknot -> 1)."""
    if n < 1:
        raise ValueError("color must be >= 1")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    j = _colored_jones_native(braid, n)
    flip = _native_is_standard() != (convention == STANDARD)
    return j.mirror() if flip else j


def colored_jones_numeric(braid: BraidWord, n: int, q0: PrecisionComplex,
                          convention: str = STANDARD, tol=None) -> PrecisionComplex:
    """The same state sum evaluated numerically at q = q0."""
    if n < 1:
        raise ValueError("color must be >= 1")
    if n == 1:
        return PrecisionComplex(1, 0, q0.prec)
    flip = _native_is_standard() != (convention == STANDARD)
    if flip:
        q0 = q0.reciprocal()
    ctx = context(q0.prec)
    v = ctx.exp(ctx.log(q0.value) / 4)
    # |dv| <= |v| |dq| / (4 |q|) to first order
    v0 = PrecisionComplex(v, abs(v) * q0.radius / (4 * abs(q0.value)) + 2 * abs(v) * q0.eps, q0.prec)
    ring = _NumericRing(n, v0)
    raw = _raw(ring, braid)
    circle, kink = _framing(n, braid.closure)
    (ke, kc), = kink.items()
    norm = ring.lift(circle) * (v0 ** (ke * braid.writhe)) * (kc ** braid.writhe * _turning_sign(braid, n))
    return (raw / norm).require(tol)


# ---------------------------------------------------------------------------
# Alexander polynomial

def _det(mat: List[List[LaurentPolynomial]]) -> LaurentPolynomial:
    size = len(mat)
    if size == 0:
        return ONE
    if size == 1:
        return mat[0][0]
    # fraction-free Bareiss elimination; divisions are exact
    a = [row[:] for row in mat]
    sign = 1
    prev = ONE
    for k in range(size - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, size):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return LaurentPolynomial()
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = laurent_exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    return a[-1][-1] * sign


def normalize_alexander(d: LaurentPolynomial) -> LaurentPolynomial:
    """Shift to a symmetric support and fix the sign so that D(1) = 1."""
    lo, hi = d.degrees()
    if (lo + hi) % 2:
        raise ArithmeticError(f"{d} cannot be symmetrized")
    d = d.shift(-(lo + hi) // 2)
    if d.at_one() < 0:
        d = -d
    if d.at_one() != 1 or d != d.mirror():
        raise ArithmeticError(f"{d} is not a knot Alexander polynomial")
    return d


def _burau_reduced(m: int, letter: int) -> List[List[LaurentPolynomial]]:
    t, ti = LaurentPolynomial.monomial(1), LaurentPolynomial.monomial(-1)
    size = m - 1
    M = [[ONE if r == c else LaurentPolynomial() for c in range(size)] for r in range(size)]
    i = abs(letter)  # 1-based
    r = i - 1
    if letter > 0:
        M[r][r] = -t
        if r - 1 >= 0:
            M[r][r - 1] = t
        if r + 1 < size:
            M[r][r + 1] = ONE
    else:
        M[r][r] = -ti
        if r - 1 >= 0:
            M[r][r - 1] = ONE
        if r + 1 < size:
            M[r][r + 1] = ti
    return M


def _matmul(A, B):
    size = len(A)
    return [[sum((A[r][k] * B[k][c] for k in range(size)), LaurentPolynomial())
             for c in range(size)] for r in range(size)]


def alexander_burau(braid: BraidWord) -> LaurentPolynomial:
    """Delta from det(I - reduced Burau) / (1 + t + ... + t^(m-1))."""
    if braid.closure != "trace":
        raise ValueError("the Burau route needs an ordinary closure")
    m = braid.strands
    size = m - 1
    M = [[ONE if r == c else LaurentPolynomial() for c in range(size)] for r in range(size)]
    for x in braid.letters:
        M = _matmul(M, _burau_reduced(m, x))
    I_minus = [[(ONE if r == c else LaurentPolynomial()) - M[r][c] for c in range(size)]
               for r in range(size)]
    d = laurent_exact_div(_det(I_minus), LaurentPolynomial({e: 1 for e in range(m)}))
    return normalize_alexander(d)


def alexander_wirtinger(braid: BraidWord) -> LaurentPolynomial:
    """Delta from the Fox-calculus Alexander matrix of the Wirtinger presentation."""
    dg = _diagram(braid)
    c = len(dg.crossings)
    if c == 0:
        return ONE
    t = LaurentPolynomial.monomial(1)
    rows = []
    for over, a, b, sign in dg.crossings:
        row = [LaurentPolynomial() for _ in range(dg.arcs)]
        if sign > 0:
            contrib = [(over, ONE - t), (a, t), (b, -ONE)]
        else:
            contrib = [(over, t - ONE), (a, ONE), (b, -t)]
        for col, val in contrib:
            row[col] = row[col] + val
        rows.append(row)
    minor = [row[1:] for row in rows[1:]]
    d = _det(minor)
    if d.is_zero():
        raise ArithmeticError("degenerate Alexander matrix")
    return normalize_alexander(d)


def alexander(braid: BraidWord) -> LaurentPolynomial:
    """Symmetrized, normalized Alexander polynomial (variable t stored as q)."""
    if braid.closure == "trace":
        return alexander_burau(braid)
    return alexander_wirtinger(braid)


# ---------------------------------------------------------------------------
# knot records and catalogs

@dataclass
class KnotRecord:
    braid: BraidWord
    convention: str = STANDARD
    jones: Dict[int, LaurentPolynomial] = field(default_factory=dict)
    _alexander: Optional[LaurentPolynomial] = None

    @property
    def name(self) -> str:
        return self.braid.name or "knot"

    @property
    def alexander(self) -> LaurentPolynomial:
        if self._alexander is None:
            self._alexander = alexander(self.braid)
        return self._alexander

    def jones_upto(self, nmax: int) -> Dict[int, LaurentPolynomial]:
        for n in range(1, nmax + 1):
            if n not in self.jones:
                self.jones[n] = colored_jones(self.braid, n, self.convention)
        return {n: self.jones[n] for n in range(1, nmax + 1)}


DEFAULT_CATALOG = Path(__file__).with_name("data") / "catalog.jsonl"


def load_catalog(path: Optional[Path] = None) -> Dict[str, BraidWord]:
    path = Path(path) if path else DEFAULT_CATALOG
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            b = BraidWord.from_json(json.loads(line))
            out[b.name] = b
    return out
