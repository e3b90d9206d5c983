"""Temperley-Lieb algebra over Laurent polynomials and rational functions in ``A``.

This is the decategorified oracle: Kauffman brackets of sliced tangles,
Jones-Wenzl idempotents, through-degree idempotents cut out by the full twist,
and the bridge ``q -> -A^-2`` comparing graded Euler characteristics of
complexes with bracket values.

Products follow the braid convention: ``x * y`` puts ``y`` on top of ``x``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

from flint import fmpz_poly

from . import cob
from .cob import FlatTangle

# --------------------------------------------------------------------------
# coefficients


def _strip(poly: fmpz_poly, low: int) -> tuple[fmpz_poly, int]:
    """Move powers of A out of ``poly`` into ``low``."""
    if poly == 0:
        return fmpz_poly(0), 0
    cs = poly.coeffs()
    k = 0
    while cs[k] == 0:
        k += 1
    if k:
        poly = fmpz_poly(cs[k:])
    return poly, low + k


class LaurentA:
    """``A^low * poly(A)`` with ``poly(0) != 0`` (or the zero element)."""

    __slots__ = ("poly", "low")

    def __init__(self, poly: fmpz_poly | None = None, low: int = 0):
        self.poly, self.low = _strip(poly if poly is not None else fmpz_poly(0), low)

    @classmethod
    def from_dict(cls, d: dict) -> "LaurentA":
        d = {e: c for e, c in d.items() if c}
        if not d:
            return cls()
        lo = min(d)
        cs = [0] * (max(d) - lo + 1)
        for e, c in d.items():
            cs[e - lo] = c
        return cls(fmpz_poly(cs), lo)

    @classmethod
    def monomial(cls, c: int, e: int) -> "LaurentA":
        return cls(fmpz_poly([c]), e)

    @classmethod
    def coerce(cls, x) -> "LaurentA":
        if isinstance(x, LaurentA):
            return x
        if isinstance(x, int):
            return cls.monomial(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentA")

    def to_dict(self) -> dict:
        return {self.low + k: int(c) for k, c in enumerate(self.poly.coeffs()) if c}

    def is_zero(self) -> bool:
        return self.poly == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentA.monomial(other, 0)
        if isinstance(other, RatFunc):
            return RatFunc.coerce(self) == other
        return isinstance(other, LaurentA) and self.low == other.low and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.low, tuple(int(c) for c in self.poly.coeffs())))

    def _aligned(self, other: "LaurentA"):
        lo = min(self.low, other.low)
        a = self.poly * fmpz_poly([0] * (self.low - lo) + [1]) if self.low > lo else self.poly
        b = other.poly * fmpz_poly([0] * (other.low - lo) + [1]) if other.low > lo else other.poly
        return a, b, lo

    def __add__(self, other) -> "LaurentA":
        if isinstance(other, RatFunc):
            return NotImplemented
        other = LaurentA.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b, lo = self._aligned(other)
        return LaurentA(a + b, lo)

    __radd__ = __add__

    def __neg__(self) -> "LaurentA":
        return LaurentA(-self.poly, self.low)

    def __sub__(self, other) -> "LaurentA":
        if isinstance(other, RatFunc):
            return NotImplemented
        return self + (-LaurentA.coerce(other))

    def __rsub__(self, other) -> "LaurentA":
        return LaurentA.coerce(other) - self

    def __mul__(self, other) -> "LaurentA":
        if isinstance(other, RatFunc):
            return NotImplemented
        other = LaurentA.coerce(other)
        return LaurentA(self.poly * other.poly, self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentA":
        if k < 0:
            m = self.as_monomial()
            if m is None or m[0] not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentA.monomial(m[0] ** (-k), m[1] * k)
        return LaurentA(self.poly ** k, self.low * k)

    def as_monomial(self) -> tuple[int, int] | None:
        """``(c, e)`` when this is ``c * A^e``."""
        if self.poly.degree() != 0:
            return None
        return int(self.poly[0]), self.low

    def substitute_power(self, k: int) -> "LaurentA":
        """``f(A) -> f(A^k)`` for ``k = +-1, +-2, ...``."""
        return LaurentA.from_dict({e * k: c for e, c in self.to_dict().items()})

    def __str__(self) -> str:
        d = self.to_dict()
        if not d:
            return "0"
        return " + ".join(f"{c}*A^{e}" for e, c in sorted(d.items(), reverse=True))

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "LaurentA":
        """Read ``"A^2 - 3*A^-1 + 2"`` as well as the ``str`` form."""
        text = text.replace(" ", "").replace("+-", "-")
        if not text:
            raise ValueError("empty polynomial")
        term = re.compile(r"([+-]?)(?:(\d+)(?:\*(?=A))?)?(A(?:\^(-?\d+))?)?")
        d: dict = {}
        pos = 0
        while pos < len(text):
            m = term.match(text, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"cannot parse {text!r} at position {pos}")
            c = int(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
            e = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
            d[e] = d.get(e, 0) + c
            pos = m.end()
        return cls.from_dict(d)


def _normal_den(num: fmpz_poly, den: fmpz_poly) -> tuple[fmpz_poly, fmpz_poly]:
    g = num.gcd(den)
    if g != 1:
        num, den = num // g, den // g
    # content and sign: keep den primitive with positive leading coefficient
    cs = [int(c) for c in den.coeffs()]
    from math import gcd
    content = 0
    for c in cs:
        content = gcd(content, c)
    ncs = [int(c) for c in num.coeffs()]
    ncontent = 0
    for c in ncs:
        ncontent = gcd(ncontent, c)
    common = gcd(content, ncontent) if ncontent else content
    if cs[-1] < 0:
        common = -common
    if common not in (0, 1):
        num = fmpz_poly([c // common for c in ncs]) if ncs else num
        den = fmpz_poly([c // common for c in cs])
    return num, den


class RatFunc:
    """``A^shift * num / den`` with coprime integer polynomials, both nonvanishing at 0."""

    __slots__ = ("num", "den", "shift")

    def __init__(self, num: fmpz_poly, den: fmpz_poly | None = None, shift: int = 0):
        den = fmpz_poly([1]) if den is None else den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        num, s1 = _strip(num, 0)
        den, s2 = _strip(den, 0)
        if num == 0:
            self.num, self.den, self.shift = fmpz_poly(0), fmpz_poly([1]), 0
            return
        self.num, self.den = _normal_den(num, den)
        self.shift = shift + s1 - s2

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        x = LaurentA.coerce(x)
        return cls(x.poly, None, x.low)

    def is_zero(self) -> bool:
        return self.num == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, LaurentA)):
            other = RatFunc.coerce(other)
        return (isinstance(other, RatFunc) and self.shift == other.shift
                and self.num == other.num and self.den == other.den)

    def __hash__(self) -> int:
        return hash((self.shift, str(self.num), str(self.den)))

    def __add__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.shift, other.shift)
        a = self.num * fmpz_poly([0] * (self.shift - lo) + [1])
        b = other.num * fmpz_poly([0] * (other.shift - lo) + [1])
        return RatFunc(a * other.den + b * self.den, self.den * other.den, lo)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        out = object.__new__(RatFunc)
        out.num, out.den, out.shift = -self.num, self.den, self.shift
        return out

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den, self.shift + other.shift)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num, -self.shift)

    def __truediv__(self, other) -> "RatFunc":
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def to_laurent(self) -> LaurentA | None:
        if self.den.degree() == 0 and self.den[0] == 1:
            return LaurentA(self.num, self.shift)
        return None

    def __str__(self) -> str:
        num = LaurentA(self.num, self.shift)
        if self.den == 1:
            return str(num)
        return f"({num})/({LaurentA(self.den, 0)})"

    __repr__ = __str__


DELTA = LaurentA.from_dict({2: -1, -2: -1})


def coefficient_string(x) -> str:
    return str(x)


# --------------------------------------------------------------------------
# TL elements


class TLElement:
    """A linear combination of flat tangles with LaurentA or RatFunc coefficients."""

    __slots__ = ("bottom", "top", "terms")

    def __init__(self, bottom: int, top: int, terms: dict | None = None):
        self.bottom = bottom
        self.top = top
        self.terms = {t: c for t, c in (terms or {}).items() if c}
        for t in self.terms:
            if t.bottom != bottom or t.top != top:
                raise ValueError("diagram boundary mismatch")

    @property
    def n(self) -> int:
        return self.bottom

    @classmethod
    def identity(cls, n: int) -> "TLElement":
        return cls(n, n, {cob.identity(n): LaurentA.monomial(1, 0)})

    @classmethod
    def diagram(cls, t: FlatTangle, coeff=None) -> "TLElement":
        return cls(t.bottom, t.top, {t: LaurentA.monomial(1, 0) if coeff is None else coeff})

    @classmethod
    def generator(cls, n: int, i: int) -> "TLElement":
        return cls.diagram(cob.tl_generator(n, i))

    def coeff(self, t: FlatTangle):
        return self.terms.get(t, LaurentA())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TLElement) or (self.bottom, self.top) != (other.bottom, other.top):
            return False
        keys = set(self.terms) | set(other.terms)
        return all(_eq(self.terms.get(k), other.terms.get(k)) for k in keys)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TLElement") -> "TLElement":
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out[t] + c if t in out else c
        return TLElement(self.bottom, self.top, out)

    def __neg__(self) -> "TLElement":
        return TLElement(self.bottom, self.top, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "TLElement") -> "TLElement":
        return self + (-other)

    def scale(self, c) -> "TLElement":
        return TLElement(self.bottom, self.top, {t: x * c for t, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TLElement):
            return tl_multiply(self, other)
        return self.scale(other)

    def rational(self) -> "TLElement":
        return TLElement(self.bottom, self.top, {t: RatFunc.coerce(c) for t, c in self.terms.items()})

    def through_degree(self) -> int:
        return max((t.through_degree for t in self.terms), default=-1)

    def to_json(self) -> dict:
        out = {}
        for t in sorted(self.terms, key=FlatTangle.sort_key):
            key = json.dumps([list(p) for p in t.pairs], separators=(",", ":"))
            out[key] = str(self.terms[t])
        return out

    def __repr__(self) -> str:
        return f"TLElement({self.bottom}->{self.top}, {len(self.terms)} terms)"


def _eq(a, b) -> bool:
    if a is None:
        return b is None or not b
    if b is None:
        return not a
    return a == b


def _delta_power(k: int, like) -> object:
    d = DELTA ** k
    return RatFunc.coerce(d) if isinstance(like, RatFunc) else d


def tl_multiply(x: TLElement, y: TLElement) -> TLElement:
    """``x * y``: ``y`` stacked on top of ``x``; each closed circle contributes ``delta``."""
    if x.top != y.bottom:
        raise ValueError("boundary mismatch")
    buckets: dict = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            t, k = cob.glue_flat(a, b)
            key = (t, k)
            v = ca * cb
            buckets[key] = buckets[key] + v if key in buckets else v
    out: dict = {}
    for (t, k), v in buckets.items():
        if k:
            v = v * _delta_power(k, v)
        out[t] = out[t] + v if t in out else v
    return TLElement(x.bottom, y.top, out)


def tl_hstack(x: TLElement, y: TLElement) -> TLElement:
    out: dict = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            t = cob.hstack_flat(a, b)
            v = ca * cb
            out[t] = out[t] + v if t in out else v
    return TLElement(x.bottom + y.bottom, x.top + y.top, out)


def basis(n: int) -> list[FlatTangle]:
    """The Catalan-many crossingless (n, n) matchings."""
    return cob.matchings(n, n)


# --------------------------------------------------------------------------
# Kauffman bracket


def _slice_element(n: int, kind: str, i: int) -> TLElement:
    if kind in ("X+", "X-"):
        a = LaurentA.monomial(1, 1 if kind == "X+" else -1)
        b = LaurentA.monomial(1, -1 if kind == "X+" else 1)
        return TLElement(n, n, {cob.identity(n): a, cob.tl_generator(n, i): b})
    if kind == "cup":
        return TLElement.diagram(cob.cup(n, i))
    if kind == "cap":
        return TLElement.diagram(cob.cap(n, i))
    return TLElement.identity(n)


def kauffman_bracket(t) -> TLElement:
    """State sum by multiplying slice elements; each crossing is ``A*I + A^-1*H``."""
    from .braids import as_sliced
    st = as_sliced(t)
    n = st.start
    acc = TLElement.identity(n)
    for kind, i in st.slices:
        acc = acc * _slice_element(n, kind, i)
        n = acc.top
    return acc


def kauffman_bracket_bruteforce(t) -> TLElement:
    """Sum over all ``2^c`` resolutions, gluing flat slices one by one."""
    from .braids import as_sliced
    st = as_sliced(t)
    crossings = [k for k, (kind, _) in enumerate(st.slices) if kind in ("X+", "X-")]
    out: dict = {}
    for choice in iproduct((0, 1), repeat=len(crossings)):
        pick = dict(zip(crossings, choice))
        n = st.start
        cur = cob.identity(n)
        circles = 0
        expo = 0
        for k, (kind, i) in enumerate(st.slices):
            if kind in ("X+", "X-"):
                smooth_h = pick[k]
                sgn = 1 if kind == "X+" else -1
                expo += -sgn if smooth_h else sgn
                flat = cob.tl_generator(n, i) if smooth_h else cob.identity(n)
            elif kind == "cup":
                flat = cob.cup(n, i)
            elif kind == "cap":
                flat = cob.cap(n, i)
            else:
                flat = cob.identity(n)
            cur, c = cob.glue_flat(cur, flat)
            circles += c
            n = cur.top
        v = LaurentA.monomial(1, expo) * DELTA ** circles
        out[cur] = out[cur] + v if cur in out else v
    return TLElement(st.start, st.end, out)


# --------------------------------------------------------------------------
# Jones-Wenzl idempotents


@lru_cache(maxsize=None)
def quantum_delta(k: int) -> LaurentA:
    """``Delta_0 = 1, Delta_1 = delta, Delta_{k+1} = delta Delta_k - Delta_{k-1}``."""
    if k == 0:
        return LaurentA.monomial(1, 0)
    if k == 1:
        return DELTA
    return DELTA * quantum_delta(k - 1) - quantum_delta(k - 2)


def _extend(x: dict, n: int) -> dict:
    one = cob.identity(1)
    return {cob.hstack_flat(t, one): c for t, c in x.items()}


@lru_cache(maxsize=None)
def jones_wenzl_fraction(n: int) -> tuple[dict, LaurentA]:
    """``p_n = N / D`` with Laurent numerators over one common denominator."""
    if n < 1:
        raise ValueError("n >= 1")
    if n == 1:
        return {cob.identity(1): LaurentA.monomial(1, 0)}, LaurentA.monomial(1, 0)
    N, D = jones_wenzl_fraction(n - 1)
    k = n - 1
    P = _extend(N, n)
    E = {cob.tl_generator(n, k): LaurentA.monomial(1, 0)}
    X = _mul_fast(_mul_fast(P, E), P)
    dk, dk1 = quantum_delta(k), quantum_delta(k - 1)
    scale = D * dk
    new: dict = {t: c * scale for t, c in P.items()}
    for t, c in X.items():
        v = -(c * dk1)
        new[t] = new[t] + v if t in new else v
    new = {t: c for t, c in new.items() if c}
    den = D * D * dk
    g = den.poly
    for c in new.values():
        if g == 1:
            break
        g = g.gcd(c.poly)
    if g != 1:
        new = {t: LaurentA(c.poly // g, c.low) for t, c in new.items()}
        den = LaurentA(den.poly // g, den.low)
    return new, den


@lru_cache(maxsize=None)
def jones_wenzl(n: int) -> TLElement:
    N, D = jones_wenzl_fraction(n)
    inv = RatFunc.coerce(D).inverse()
    return TLElement(n, n, {t: RatFunc.coerce(c) * inv for t, c in N.items()})


def turnback_position(t: FlatTangle) -> int | None:
    """Some ``i`` with an arc joining bottom points ``i, i+1`` (1-indexed)."""
    for p, q in t.pairs:
        if q == p + 1 and q < t.bottom:
            return p + 1
    return None


def check_jones_wenzl(n: int, full_square: bool = True) -> dict:
    """Exact axiom check for ``p_n``.

    ``e_i p = p e_i = 0`` is computed directly.  Idempotence is computed as
    ``N*N == D*N`` when ``full_square``; otherwise it is derived from
    ``p e_i = 0`` and ``e_i b = delta b`` for every diagram ``b`` whose bottom
    has a turnback at ``i`` (both checked here), since then
    ``p (p - 1) = sum_b c_b p b = sum_b c_b delta^-1 (p e_i) b = 0``.
    """
    N, D = jones_wenzl_fraction(n)
    one = cob.identity(n)
    annihilates = True
    for i in range(1, n):
        e = {cob.tl_generator(n, i): LaurentA.monomial(1, 0)}
        if _mul_fast(e, N) or _mul_fast(N, e):
            annihilates = False
    unit_coeff = N.get(one) == D
    if full_square:
        sq = _square_fast(N)
        rhs = {t: c * D for t, c in N.items()}
        idem = set(sq) == set(rhs) and all(sq[t] == rhs[t] for t in sq)
        method = "direct"
    else:
        idem = annihilates and unit_coeff
        for b in N:
            if b is one:
                continue
            i = turnback_position(b)
            t, k = cob.glue_flat(cob.tl_generator(n, i), b)
            if t is not b or k != 1:
                idem = False
        method = "annihilation certificate"
    return {"n": n, "annihilates": annihilates, "unit_coefficient": unit_coeff,
            "idempotent": idem, "idempotent_method": method, "terms": len(N)}


def _aligned_polys(x: dict) -> tuple[list, int]:
    off = -min(c.low for c in x.values())
    return [(t, c.poly * fmpz_poly([0] * (c.low + off) + [1])) for t, c in x.items()], off


@lru_cache(maxsize=None)
def _generator_tables(n: int):
    """Right action of every ``e_i`` on the ``(n, n)`` diagrams, plus a word in
    the generators for each diagram whose partial products close no loops."""
    basis = cob.matchings(n, n)
    index = {t: k for k, t in enumerate(basis)}
    act = []
    for i in range(1, n):
        e = cob.tl_generator(n, i)
        glued = [cob.glue_flat(t, e) for t in basis]
        act.append(([index[r] for r, _ in glued], [k for _, k in glued]))
    start = index[cob.identity(n)]
    words = {start: ()}
    frontier = [start]
    while frontier:
        nxt = []
        for k in frontier:
            for i, (targets, loops) in enumerate(act):
                t = targets[k]
                if loops[k] == 0 and t not in words:
                    words[t] = words[k] + (i,)
                    nxt.append(t)
        frontier = nxt
    return basis, index, act, [words.get(k) for k in range(len(basis))]


def _glue_columns(xs: list, ys: list):
    """``(diagram, loops)`` of ``a * b`` for all pairs, packed as ``index + M * loops``
    in one column per ``b``; ``None`` if the table route does not apply."""
    n = xs[0].bottom
    if any(t.bottom != n or t.top != n for t in xs + ys):
        return None
    basis, index, act, words = _generator_tables(n)
    M = len(basis)
    start = [index[a] for a in xs]
    cols = []
    for b in ys:
        word = words[index[b]]
        if word is None:
            return None
        cur, loops = start, [0] * len(start)
        for i in word:
            targets, closed = act[i]
            loops = [k + closed[c] for k, c in zip(loops, cur)]
            cur = [targets[c] for c in cur]
        cols.append([c + M * k for c, k in zip(cur, loops)])
    return basis, M, cols


def _mul_fast(x: dict, y: dict) -> dict:
    """Product of Laurent-coefficient term dicts, bucketed by (diagram, circles)."""
    if not x or not y:
        return {}
    px, offx = _aligned_polys(x)
    py, offy = _aligned_polys(y)
    table = None
    if len(px) * len(py) > 4096:
        table = _glue_columns([a for a, _ in px], [b for b, _ in py])
    buckets: dict = {}
    if table is not None:
        basis, M, cols = table
        for ai, (_, pa) in enumerate(px):
            row: dict = {}
            for col, (_, pb) in zip(cols, py):
                key = col[ai]
                prev = row.get(key)
                row[key] = pb if prev is None else prev + pb
            for key, s in row.items():
                v = pa * s
                k2 = (basis[key % M], key // M)
                prev = buckets.get(k2)
                buckets[k2] = v if prev is None else prev + v
    else:
        glue = cob.glue_raw
        for a, pa in px:
            row = {}
            for b, pb in py:
                r, circles = glue(a, b)
                key = (r, len(circles))
                prev = row.get(key)
                row[key] = pb if prev is None else prev + pb
            for key, s in row.items():
                v = pa * s
                prev = buckets.get(key)
                buckets[key] = v if prev is None else prev + v
    out: dict = {}
    for (t, k), poly in buckets.items():
        v = LaurentA(poly, -offx - offy)
        if k:
            v = v * DELTA ** k
        out[t] = out[t] + v if t in out else v
    return {t: c for t, c in out.items() if c}


def _square_fast(N: dict) -> dict:
    return _mul_fast(N, N)


# --------------------------------------------------------------------------
# full twist and through-degree idempotents


def standard_diagram(n: int, k: int) -> FlatTangle:
    """Identity on ``k`` strands next to ``(n-k)/2`` stacked turnbacks."""
    if (n - k) % 2 or not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n with n - k even")
    t = cob.identity(k) if k else None
    for _ in range((n - k) // 2):
        e = cob.tl_generator(2, 1)
        t = e if t is None else cob.hstack_flat(t, e)
    return t if t is not None else cob.empty()


@lru_cache(maxsize=None)
def full_twist_bracket(n: int) -> TLElement:
    from .braids import full_twist
    return kauffman_bracket(full_twist(n))


def eigenvalue_on(x: TLElement, k: int) -> LaurentA:
    """The scalar by which a central element ``x`` acts on through-degree ``k``:
    the coefficient of a standard through-degree-``k`` diagram ``D`` in ``x D``."""
    D = standard_diagram(x.n, k)
    v = (x * TLElement.diagram(D)).coeff(D)
    if v.as_monomial() is None:
        raise ArithmeticError(f"eigenvalue on through-degree {k} is not a monomial: {v}")
    return v


def full_twist_eigenvalue(n: int, k: int) -> LaurentA:
    return eigenvalue_on(full_twist_bracket(n), k)


def through_degrees(n: int) -> list[int]:
    return list(range(n % 2, n + 1, 2))


@lru_cache(maxsize=None)
def through_projector_fractions(n: int) -> dict[int, tuple[dict, LaurentA]]:
    """``pi_{n,k}`` as (Laurent numerator terms, scalar denominator) from
    ``prod_{j != k} (T - lambda_j) / (lambda_k - lambda_j)``."""
    T = full_twist_bracket(n).terms
    ks = through_degrees(n)
    lam = {k: full_twist_eigenvalue(n, k) for k in ks}
    if len(set(lam.values())) != len(lam):
        raise ArithmeticError("full-twist eigenvalues collide")
    ident = cob.identity(n)
    out = {}
    for k in ks:
        num = {ident: LaurentA.monomial(1, 0)}
        den = LaurentA.monomial(1, 0)
        for j in ks:
            if j == k:
                continue
            factor = dict(T)
            factor[ident] = factor.get(ident, LaurentA()) - lam[j]
            num = _mul_fast(num, {t: c for t, c in factor.items() if c})
            den = den * (lam[k] - lam[j])
        out[k] = (num, den)
    return out


@lru_cache(maxsize=None)
def through_projectors(n: int) -> dict[int, TLElement]:
    out = {}
    for k, (num, den) in through_projector_fractions(n).items():
        inv = RatFunc.coerce(den).inverse()
        out[k] = TLElement(n, n, {t: RatFunc.coerce(c) * inv for t, c in num.items()})
    return out


def check_through_projectors(n: int) -> dict:
    pis = through_projectors(n)
    ks = sorted(pis)
    one = TLElement.identity(n).rational()
    total = TLElement(n, n, {})
    for k in ks:
        total = total + pis[k]
    partition = total == one
    idem = all(pis[k] * pis[k] == pis[k] for k in ks)
    orth = all((pis[a] * pis[b]).is_zero() for a in ks for b in ks if a != b)
    T = full_twist_bracket(n).rational()
    eig = {}
    for k in ks:
        lam = full_twist_eigenvalue(n, k)
        eig[k] = {"lambda": str(lam), "monomial": lam.as_monomial() is not None,
                  "acts": T * pis[k] == pis[k].scale(RatFunc.coerce(lam))}
    top = jones_wenzl(n) * pis[n] == jones_wenzl(n)
    return {"n": n, "partition_of_unity": partition, "idempotent": idem, "orthogonal": orth,
            "eigen": eig, "top_matches_jones_wenzl": top,
            "ok": partition and idem and orth and top and all(v["monomial"] and v["acts"] for v in eig.values())}


# --------------------------------------------------------------------------
# Euler-characteristic bridge


def bridge_laurent(poly_q: dict) -> LaurentA:
    """Substitute ``q -> -A^-2`` into ``{q_exp: coeff}``."""
    return LaurentA.from_dict({-2 * e: c * (-1) ** (e % 2) for e, c in poly_q.items()})


def bridge_compare(chi_by_tangle: dict, target: TLElement) -> dict:
    """Compare bridged Euler characteristics with a TL element up to one monomial."""
    bridged = {t: bridge_laurent(p) for t, p in chi_by_tangle.items()}
    bridged = {t: v for t, v in bridged.items() if v}
    keys = set(bridged) | set(t for t, c in target.terms.items() if c)
    monomial = None
    ok = True
    for t in sorted(keys, key=FlatTangle.sort_key):
        a = bridged.get(t)
        b = target.terms.get(t)
        if a is None or b is None:
            ok = False
            break
        b = b if isinstance(b, LaurentA) else RatFunc.coerce(b).to_laurent()
        if b is None:
            ok = False
            break
        if monomial is None:
            ma, mb = a.to_dict(), b.to_dict()
            ea, eb = max(ma), max(mb)
            if ma[ea] not in (mb[eb], -mb[eb]):
                ok = False
                break
            monomial = LaurentA.monomial(ma[ea] // mb[eb], ea - eb)
        if a != b * monomial:
            ok = False
            break
    ok = ok and monomial is not None
    return {"match": ok, "monomial": str(monomial) if ok else None, "value": monomial if ok else None}


def q_series(f, order: int) -> dict:
    """Expand a coefficient even in ``A`` as a power series in ``q`` with ``A^2 = -q^-1``.

    Returns ``{q_exp: Fraction}`` for exponents below ``order``.
    """
    r = RatFunc.coerce(f)
    num = LaurentA(r.num, r.shift).to_dict()
    den = LaurentA(r.den, 0).to_dict()
    if any(e % 2 for e in num) or any(e % 2 for e in den):
        raise ValueError("coefficient is not a function of A^2")

    def to_q(d):
        # A^(2j) = (-1)^j q^-j
        return {-(e // 2): c * (-1) ** ((e // 2) % 2) for e, c in d.items()}

    nq, dq = to_q(num), to_q(den)
    nlow, dlow = min(nq), min(dq)
    ncs = [Fraction(nq.get(nlow + i, 0)) for i in range(max(nq) - nlow + 1)]
    dcs = [Fraction(dq.get(dlow + i, 0)) for i in range(max(dq) - dlow + 1)]
    start = nlow - dlow
    length = max(0, order - start)
    out: list[Fraction] = []
    for i in range(length):
        v = ncs[i] if i < len(ncs) else Fraction(0)
        for j in range(1, min(i, len(dcs) - 1) + 1):
            v -= dcs[j] * out[i - j]
        out.append(v / dcs[0])
    return {start + i: v for i, v in enumerate(out) if v}


def bridge_series_compare(chi_by_tangle: dict, target: TLElement, order: int) -> dict:
    """Compare Euler characteristics with TL coefficients as q-series below ``order``."""
    keys = set(chi_by_tangle) | set(target.terms)
    mismatches = []
    for t in sorted(keys, key=FlatTangle.sort_key):
        got = {e: c for e, c in chi_by_tangle.get(t, {}).items() if e < order and c}
        want = q_series(target.terms[t], order) if t in target.terms else {}
        if {e: Fraction(c) for e, c in got.items()} != want:
            mismatches.append(t)
    return {"match": not mismatches, "order": order, "mismatches": [repr(t) for t in mismatches]}
