"""Flat tangles and dotted cobordisms between them.

A flat tangle is a crossingless matching of boundary points on the bottom and
top edges of a rectangle.  Points are numbered bottom left-to-right, then top
left-to-right.  Morphisms are linear combinations of dotted cobordisms in
normal form: for source ``a`` and target ``b`` the closed 1-manifold ``W(a, b)``
(``a`` glued to the mirror of ``b`` along the boundary) bounds one disk per
circle, and a basis element chooses which of those disks carry a dot.  Neck
cutting (Frobenius algebra ``R[X]/X^2`` with ``eps(1)=0, eps(X)=1``) brings
every glued surface back to this form.

Objects may additionally carry free circles (``src_circles``/``tgt_circles``
on a morphism).  These only live between a tensor product and the following
deloop; each free circle is a separate circle of ``W`` and gets its own disk.
Bit layout of a basis mask: ``[W(a,b) circles][source free][target free]``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

from .rings import ZZ, Ring


class FlatTangle:
    """An interned crossingless matching with ``bottom`` and ``top`` endpoints.

    Instances are hash-consed, so equality is identity and hashing is cheap.
    """

    __slots__ = ("bottom", "top", "pairs", "partner", "__weakref__")
    _table: dict = {}

    def __new__(cls, bottom: int, top: int, pairs: Iterable[Iterable[int]]):
        norm = tuple(sorted(tuple(sorted(p)) for p in pairs))
        key = (bottom, top, norm)
        hit = cls._table.get(key)
        if hit is not None:
            return hit
        npts = bottom + top
        partner = [-1] * npts
        for p, q in norm:
            if not (0 <= p < npts and 0 <= q < npts) or p == q:
                raise ValueError(f"bad pair {(p, q)} for {bottom}+{top} points")
            if partner[p] != -1 or partner[q] != -1:
                raise ValueError(f"point reused in {norm}")
            partner[p], partner[q] = q, p
        if -1 in partner:
            raise ValueError(f"matching {norm} is not perfect")
        if not _is_planar(bottom, top, partner):
            raise ValueError(f"matching {norm} is not planar")
        self = object.__new__(cls)
        self.bottom = bottom
        self.top = top
        self.pairs = norm
        self.partner = tuple(partner)
        cls._table[key] = self
        return self

    def __reduce__(self):
        return (FlatTangle, (self.bottom, self.top, self.pairs))

    def __repr__(self) -> str:
        return f"FlatTangle({self.bottom}, {self.top}, {list(map(list, self.pairs))})"

    def __lt__(self, other: "FlatTangle") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (self.bottom, self.top, self.pairs)

    @property
    def n(self) -> int:
        if self.bottom != self.top:
            raise ValueError("strand count is only defined for (n, n) tangles")
        return self.bottom

    @property
    def npoints(self) -> int:
        return self.bottom + self.top

    @property
    def through_degree(self) -> int:
        return sum(1 for p, q in self.pairs if p < self.bottom <= q)

    @property
    def is_identity(self) -> bool:
        return self.bottom == self.top and all(q == p + self.bottom for p, q in self.pairs)

    def to_json(self) -> dict:
        return {"n": self.bottom, "top": self.top, "pairs": [list(p) for p in self.pairs]} \
            if self.bottom != self.top else {"n": self.bottom, "pairs": [list(p) for p in self.pairs]}

    @classmethod
    def from_json(cls, data: dict) -> "FlatTangle":
        return cls(data["n"], data.get("top", data["n"]), data["pairs"])


def _is_planar(bottom: int, top: int, partner) -> bool:
    # walk the rectangle boundary: bottom left->right, then top right->left
    order = list(range(bottom)) + [bottom + j for j in reversed(range(top))]
    pos = {p: i for i, p in enumerate(order)}
    stack = []
    for p in order:
        q = partner[p]
        if pos[q] < pos[p]:
            if not stack or stack[-1] != q:
                return False
            stack.pop()
        else:
            stack.append(p)
    return not stack


def identity(n: int) -> FlatTangle:
    return FlatTangle(n, n, [(i, n + i) for i in range(n)])


def empty() -> FlatTangle:
    return FlatTangle(0, 0, [])


def tl_generator(n: int, i: int) -> FlatTangle:
    """The turnback ``e_i`` on ``n`` strands, joining strands ``i`` and ``i+1`` (1-indexed)."""
    if not 1 <= i < n:
        raise ValueError(f"e_{i} needs 1 <= i < {n}")
    pairs = [(i - 1, i), (n + i - 1, n + i)]
    pairs += [(j, n + j) for j in range(n) if j not in (i - 1, i)]
    return FlatTangle(n, n, pairs)


def cap(n: int, i: int) -> FlatTangle:
    """An ``(n, n-2)`` tangle closing bottom positions ``i, i+1`` (1-indexed) with an arc."""
    if not 1 <= i < n:
        raise ValueError(f"cap_{i} needs 1 <= i < {n}")
    pairs = [(i - 1, i)]
    for j in range(n):
        if j < i - 1:
            pairs.append((j, n + j))
        elif j > i:
            pairs.append((j, n + j - 2))
    return FlatTangle(n, n - 2, pairs)


def cup(n: int, i: int) -> FlatTangle:
    """An ``(n, n+2)`` tangle creating an arc at top positions ``i, i+1`` (1-indexed)."""
    if not 1 <= i <= n + 1:
        raise ValueError(f"cup_{i} needs 1 <= i <= {n + 1}")
    pairs = [(n + i - 1, n + i)]
    for j in range(n):
        pairs.append((j, n + j) if j < i - 1 else (j, n + j + 2))
    return FlatTangle(n, n + 2, pairs)


def matchings(bottom: int, top: int) -> list[FlatTangle]:
    """All planar matchings on ``bottom + top`` points, in canonical order."""
    total = bottom + top
    if total % 2:
        return []
    order = list(range(bottom)) + [bottom + j for j in reversed(range(top))]

    def rec(seq):
        if not seq:
            yield []
            return
        first = seq[0]
        for k in range(1, len(seq), 2):
            for inner in rec(seq[1:k]):
                for outer in rec(seq[k + 1:]):
                    yield [(first, seq[k])] + inner + outer

    return sorted((FlatTangle(bottom, top, m) for m in rec(order)), key=FlatTangle.sort_key)


# --------------------------------------------------------------------------
# object-level gluing


def glue_raw(a: FlatTangle, b: FlatTangle) -> tuple[FlatTangle, tuple[tuple[int, ...], ...]]:
    """Uncached vertical gluing; returns the result and its closed circles.

    Each circle is the sorted tuple of middle points it passes through.
    """
    if a.top != b.bottom:
        raise ValueError(f"cannot glue: {a.top} top points vs {b.bottom} bottom points")
    ab, bb, m = a.bottom, b.bottom, a.top
    pa, pb = a.partner, b.partner
    total = ab + b.top
    res = [-1] * total
    seen = bytearray(m)
    for start in range(total):
        if res[start] != -1:
            continue
        if start < ab:
            in_a, p = True, start
        else:
            in_a, p = False, bb + start - ab
        while True:
            if in_a:
                q = pa[p]
                if q < ab:
                    end = q
                    break
                q -= ab
                seen[q] = 1
                in_a, p = False, q
            else:
                q = pb[p]
                if q >= bb:
                    end = ab + q - bb
                    break
                seen[q] = 1
                in_a, p = True, ab + q
        res[start] = end
        res[end] = start
    circles = []
    for j in range(m):
        if seen[j]:
            continue
        circ = []
        k = j
        while True:
            seen[k] = 1
            k2 = pb[k]
            seen[k2] = 1
            circ.append(k)
            circ.append(k2)
            k = pa[ab + k2] - ab
            if k == j:
                break
        circles.append(tuple(sorted(circ)))
    circles.sort()
    pairs = tuple((i, r) for i, r in enumerate(res) if i < r)
    hit = FlatTangle._table.get((ab, b.top, pairs))
    if hit is None:
        hit = FlatTangle(ab, b.top, pairs)
    return hit, tuple(circles)


_glue = lru_cache(maxsize=None)(glue_raw)


def glue_flat(a: FlatTangle, b: FlatTangle) -> tuple[FlatTangle, int]:
    """Stack ``b`` on top of ``a``; return the flat part and the number of closed circles."""
    result, circles = _glue(a, b)
    return result, len(circles)


@lru_cache(maxsize=None)
def hstack_flat(a: FlatTangle, b: FlatTangle) -> FlatTangle:
    """Place ``b`` to the right of ``a``."""
    pa, pb = _hstack_point_maps(a, b)
    pairs = [(pa[p], pa[q]) for p, q in a.pairs] + [(pb[p], pb[q]) for p, q in b.pairs]
    return FlatTangle(a.bottom + b.bottom, a.top + b.top, pairs)


def _hstack_point_maps(a: FlatTangle, b: FlatTangle) -> tuple[list[int], list[int]]:
    nb = a.bottom + b.bottom
    pa = [p if p < a.bottom else nb + (p - a.bottom) for p in range(a.npoints)]
    pb = [a.bottom + p if p < b.bottom else nb + a.top + (p - b.bottom) for p in range(b.npoints)]
    return pa, pb


@lru_cache(maxsize=None)
def _wmap(a: FlatTangle, b: FlatTangle) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Circles of W(a, b): count, circle index per point, and minimal point per circle."""
    if a.bottom != b.bottom or a.top != b.top:
        raise ValueError("morphisms need matching boundaries")
    npts = a.npoints
    circle_of = [-1] * npts
    reps = []
    for p in range(npts):
        if circle_of[p] != -1:
            continue
        idx = len(reps)
        reps.append(p)
        q = p
        while True:
            circle_of[q] = idx
            r = a.partner[q]
            circle_of[r] = idx
            q = b.partner[r]
            if q == p:
                break
    return len(reps), tuple(circle_of), tuple(reps)


def hom_circles(a: FlatTangle, b: FlatTangle) -> list[tuple[int, ...]]:
    """The circles of ``W(a, b)`` as sorted point tuples, ordered by minimal point."""
    c, circle_of, _ = _wmap(a, b)
    out: list[list[int]] = [[] for _ in range(c)]
    for p, i in enumerate(circle_of):
        out[i].append(p)
    return [tuple(x) for x in out]


def hom_rank(a: FlatTangle, b: FlatTangle) -> int:
    return 2 ** _wmap(a, b)[0]


# --------------------------------------------------------------------------
# surface evaluation


def _evaluate(ndisks: int, dots, glues, boundary) -> tuple[tuple[int, int], ...]:
    """Neck-cut a union of dotted disks glued along intervals.

    ``boundary[i]`` names a disk on the component carrying boundary circle ``i``.
    Returns ``(dot mask over boundary circles, coefficient)`` pairs.
    """
    parent = list(range(ndisks))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in glues:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    nd: dict[int, int] = {}
    ds: dict[int, int] = {}
    for k in range(ndisks):
        r = find(k)
        nd[r] = nd.get(r, 0) + 1
        ds[r] = ds.get(r, 0) + dots[k]
    na: dict[int, int] = {}
    for i, _ in glues:
        r = find(i)
        na[r] = na.get(r, 0) + 1
    bl: dict[int, list[int]] = {}
    for idx, disk in enumerate(boundary):
        bl.setdefault(find(disk), []).append(idx)

    coeff = 1
    base = 0
    choices = []
    for r, count in nd.items():
        chi = count - na.get(r, 0)
        bs = bl.get(r, ())
        genus2 = 2 - len(bs) - chi
        g = genus2 // 2
        d = ds[r]
        if not bs:
            # closed: dotted sphere = 1, torus = 2, everything else vanishes
            if g + d != 1:
                return ()
            coeff *= 2 ** g
        else:
            if g + d >= 2:
                return ()
            full = 0
            for i in bs:
                full |= 1 << i
            if g + d == 1:
                coeff *= 2 ** g
                base |= full
            else:
                choices.append([full & ~(1 << i) for i in bs])
    masks = [base]
    for ch in choices:
        masks = [m | x for m in masks for x in ch]
    return tuple((m, coeff) for m in masks)


def _bits(mask: int, offset: int, count: int) -> int:
    return (mask >> offset) & ((1 << count) - 1)


@lru_cache(maxsize=None)
def _compose_basis(a, ka, b, kb, c, kc, m1, m2):
    cab, circ_ab, _ = _wmap(a, b)
    cbc, circ_bc, _ = _wmap(b, c)
    cac, _, reps_ac = _wmap(a, c)
    # middle free circles close up into spheres with the dots of both halves
    off1 = cab + ka
    for j in range(kb):
        if ((m1 >> (off1 + j)) & 1) + ((m2 >> (cbc + j)) & 1) != 1:
            return ()
    dots = [(m1 >> i) & 1 for i in range(cab)] + [(m2 >> i) & 1 for i in range(cbc)]
    glues = [(circ_ab[p], cab + circ_bc[p]) for p, _ in b.pairs]
    boundary = [circ_ab[p] for p in reps_ac]
    flat = _evaluate(cab + cbc, dots, glues, boundary)
    extra = (_bits(m1, cab, ka) << cac) | (_bits(m2, cbc + kb, kc) << (cac + ka))
    return tuple((m | extra, k) for m, k in flat)


@lru_cache(maxsize=None)
def _tensor_basis(a, ka, a2, ka2, b, kb, b2, kb2, m1, m2):
    ab, src_new = _glue(a, b)
    a2b2, tgt_new = _glue(a2, b2)
    c1, circ1, _ = _wmap(a, a2)
    c2, circ2, _ = _wmap(b, b2)
    c, _, reps = _wmap(ab, a2b2)
    dots = [(m1 >> i) & 1 for i in range(c1)] + [(m2 >> i) & 1 for i in range(c2)]
    glues = [(circ1[a.bottom + j], c1 + circ2[j]) for j in range(a.top)]
    boundary = [circ1[p] if p < ab.bottom else c1 + circ2[b.bottom + p - ab.bottom] for p in reps]
    boundary += [circ1[a.bottom + circ[0]] for circ in src_new]
    boundary += [circ1[a.bottom + circ[0]] for circ in tgt_new]
    flat = _evaluate(c1 + c2, dots, glues, boundary)
    ns, nt = len(src_new), len(tgt_new)
    s_off = c
    t_off = c + ka + kb + ns
    carried = (
        (_bits(m1, c1, ka) << s_off)
        | (_bits(m2, c2, kb) << (s_off + ka))
        | (_bits(m1, c1 + ka, ka2) << t_off)
        | (_bits(m2, c2 + kb, kb2) << (t_off + ka2))
    )
    out = []
    for m, k in flat:
        mm = _bits(m, 0, c) | (_bits(m, c, ns) << (s_off + ka + kb)) \
            | (_bits(m, c + ns, nt) << (t_off + ka2 + kb2))
        out.append((mm | carried, k))
    return tuple(out)


@lru_cache(maxsize=None)
def _hstack_maps(a, a2, b, b2):
    ab = hstack_flat(a, b)
    a2b2 = hstack_flat(a2, b2)
    c, circ, _ = _wmap(ab, a2b2)
    _, _, reps1 = _wmap(a, a2)
    _, _, reps2 = _wmap(b, b2)
    pa, pb = _hstack_point_maps(a, b)
    return c, tuple(circ[pa[p]] for p in reps1), tuple(circ[pb[p]] for p in reps2)


@lru_cache(maxsize=None)
def _hstack_basis(a, ka, a2, ka2, b, kb, b2, kb2, m1, m2):
    c, map1, map2 = _hstack_maps(a, a2, b, b2)
    c1, c2 = len(map1), len(map2)
    m = 0
    for i, j in enumerate(map1):
        if (m1 >> i) & 1:
            m |= 1 << j
    for i, j in enumerate(map2):
        if (m2 >> i) & 1:
            m |= 1 << j
    s_off, t_off = c, c + ka + kb
    m |= (_bits(m1, c1, ka) << s_off) | (_bits(m2, c2, kb) << (s_off + ka))
    m |= (_bits(m1, c1 + ka, ka2) << t_off) | (_bits(m2, c2 + kb, kb2) << (t_off + ka2))
    return m


# --------------------------------------------------------------------------
# term-level helpers used by the complex engine (dicts mask -> coeff)


def compose_terms(a, ka, b, kb, c, kc, t1: dict, t2: dict, ring: Ring, acc: dict | None = None,
                  scale=1) -> dict:
    """Accumulate ``scale * (t2 o t1)`` into ``acc``; ``t1: a -> b``, ``t2: b -> c``."""
    out = {} if acc is None else acc
    for m1, x1 in t1.items():
        for m2, x2 in t2.items():
            basis = _compose_basis(a, ka, b, kb, c, kc, m1, m2)
            if not basis:
                continue
            x = x1 * x2 * scale
            for m, k in basis:
                out[m] = out.get(m, 0) + x * k
    return _clean(out, ring)


def _clean(terms: dict, ring: Ring) -> dict:
    if ring.name == "F2":
        for m in [m for m, x in terms.items() if x % 2 == 0]:
            del terms[m]
        for m in terms:
            terms[m] = 1
    else:
        for m in [m for m, x in terms.items() if x == 0]:
            del terms[m]
    return terms


def basis_degree(a: FlatTangle, b: FlatTangle, mask: int, ka: int = 0, kb: int = 0) -> int:
    c = _wmap(a, b)[0] + ka + kb
    twice_n = a.npoints
    return 2 * (c - 2 * bin(mask).count("1")) - twice_n


def degree_masks(a: FlatTangle, b: FlatTangle, deg: int, ka: int = 0, kb: int = 0) -> list[int]:
    """All basis masks of ``Hom((a,ka), (b,kb))`` with topological degree ``deg``."""
    c = _wmap(a, b)[0] + ka + kb
    twice = 2 * c - a.npoints - 2 * deg
    if twice < 0 or twice % 4:
        return []
    ndots = twice // 4
    if ndots > c:
        return []
    from itertools import combinations
    return [sum(1 << i for i in combo) for combo in combinations(range(c), ndots)]


# --------------------------------------------------------------------------
# morphisms


class Morphism:
    """A homogeneous linear combination of dotted cobordisms ``source -> target``."""

    __slots__ = ("source", "target", "terms", "src_circles", "tgt_circles", "ring")

    def __init__(self, source: FlatTangle, target: FlatTangle, terms: dict | None = None,
                 src_circles: int = 0, tgt_circles: int = 0, ring: Ring = ZZ):
        if source.bottom != target.bottom or source.top != target.top:
            raise ValueError("source and target must have the same boundary")
        self.source = source
        self.target = target
        self.src_circles = src_circles
        self.tgt_circles = tgt_circles
        self.ring = ring
        clean = {}
        for m, x in (terms or {}).items():
            x = ring.normalize(x)
            if x != 0:
                clean[m] = x
        self.terms = clean

    def __repr__(self) -> str:
        return f"Morphism({self.source!r} -> {self.target!r}, {self.terms})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and self.source is other.source
            and self.target is other.target
            and self.src_circles == other.src_circles
            and self.tgt_circles == other.tgt_circles
            and self.terms == other.terms
        )

    __hash__ = None

    def _like(self, terms: dict) -> "Morphism":
        return Morphism(self.source, self.target, terms, self.src_circles, self.tgt_circles, self.ring)

    def __add__(self, other: "Morphism") -> "Morphism":
        out = dict(self.terms)
        for m, x in other.terms.items():
            out[m] = out.get(m, 0) + x
        return self._like(out)

    def __neg__(self) -> "Morphism":
        return self._like({m: -x for m, x in self.terms.items()})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, c) -> "Morphism":
        return self._like({m: c * x for m, x in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def ncircles(self) -> int:
        return _wmap(self.source, self.target)[0]

    def basis(self) -> Iterator[tuple[int, object]]:
        return iter(sorted(self.terms.items()))

    def dots(self, mask: int) -> list[int]:
        return [i for i in range(self.ncircles + self.src_circles + self.tgt_circles) if (mask >> i) & 1]

    def to_json(self) -> list[dict]:
        c, _, reps = _wmap(self.source, self.target)
        out = []
        for m, x in sorted(self.terms.items()):
            dots: list = []
            for i in range(c + self.src_circles + self.tgt_circles):
                if not (m >> i) & 1:
                    continue
                if i < c:
                    dots.append(reps[i])
                elif i < c + self.src_circles:
                    dots.append(f"s{i - c}")
                else:
                    dots.append(f"t{i - c - self.src_circles}")
            out.append({"source": self.source.to_json(), "target": self.target.to_json(),
                        "dots": dots, "coeff": self.ring.to_json(x)})
        return out

    @classmethod
    def from_json(cls, data: list[dict], source: FlatTangle, target: FlatTangle,
                  ring: Ring = ZZ, src_circles: int = 0, tgt_circles: int = 0) -> "Morphism":
        c, circle_of, _ = _wmap(source, target)
        terms: dict = {}
        for term in data:
            m = 0
            for d in term["dots"]:
                if isinstance(d, str):
                    k = int(d[1:])
                    m |= 1 << (c + k if d[0] == "s" else c + src_circles + k)
                else:
                    m |= 1 << circle_of[d]
            terms[m] = terms.get(m, 0) + ring.from_json(term["coeff"])
        return cls(source, target, terms, src_circles, tgt_circles, ring)


def identity_morphism(a: FlatTangle, ring: Ring = ZZ, circles: int = 0) -> Morphism:
    if circles:
        # neck-cut each free circle's cylinder: sum over which side carries the dot
        c = _wmap(a, a)[0]
        terms = {}
        for bits in product((0, 1), repeat=circles):
            m = 0
            for i, b in enumerate(bits):
                m |= (b << (c + i)) | ((1 - b) << (c + circles + i))
            terms[m] = 1
        return Morphism(a, a, terms, circles, circles, ring)
    return Morphism(a, a, {0: 1}, ring=ring)


def basis_morphism(a: FlatTangle, b: FlatTangle, dots: Iterable[int] = (), coeff=1,
                   ring: Ring = ZZ) -> Morphism:
    """The disk cobordism ``a -> b`` with dots on the listed circle indices of ``W(a, b)``."""
    m = 0
    for i in dots:
        m |= 1 << i
    return Morphism(a, b, {m: coeff}, ring=ring)


def saddle(a: FlatTangle, b: FlatTangle, ring: Ring = ZZ) -> Morphism:
    """The undotted cobordism between matchings differing by one arc surgery."""
    f = Morphism(a, b, {0: 1}, ring=ring)
    if internal_degree(f) != -1:
        raise ValueError("tangles are not related by a single saddle")
    return f


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``g o f``: first ``f``, then ``g``."""
    if f.target is not g.source or f.tgt_circles != g.src_circles:
        raise ValueError("morphisms are not composable")
    ring = f.ring
    terms = compose_terms(f.source, f.src_circles, f.target, f.tgt_circles, g.target,
                          g.tgt_circles, f.terms, g.terms, ring)
    return Morphism(f.source, g.target, terms, f.src_circles, g.tgt_circles, ring)


def internal_degree(f: Morphism) -> int | None:
    """Topological degree ``chi - n`` of a homogeneous morphism (``None`` for zero)."""
    degs = {basis_degree(f.source, f.target, m, f.src_circles, f.tgt_circles) for m in f.terms}
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError("morphism is not homogeneous")
    twice = degs.pop()
    if twice % 2:
        raise ValueError("odd number of boundary points")
    return twice // 2


def tensor_morphism(f: Morphism, g: Morphism) -> Morphism:
    """Vertical gluing: ``g`` stacked above ``f``.

    Circles closed up by the gluing appear as free circles of the result.
    """
    a, a2, b, b2 = f.source, f.target, g.source, g.target
    if a.top != b.bottom:
        raise ValueError("boundary mismatch for vertical gluing")
    ab, src_new = _glue(a, b)
    a2b2, tgt_new = _glue(a2, b2)
    terms: dict = {}
    for m1, x1 in f.terms.items():
        for m2, x2 in g.terms.items():
            for m, k in _tensor_basis(a, f.src_circles, a2, f.tgt_circles,
                                      b, g.src_circles, b2, g.tgt_circles, m1, m2):
                terms[m] = terms.get(m, 0) + x1 * x2 * k
    return Morphism(ab, a2b2, _clean(terms, f.ring), f.src_circles + g.src_circles + len(src_new),
                    f.tgt_circles + g.tgt_circles + len(tgt_new), f.ring)


def hstack_morphism(f: Morphism, g: Morphism) -> Morphism:
    """Horizontal juxtaposition: ``g`` to the right of ``f``."""
    terms: dict = {}
    for m1, x1 in f.terms.items():
        for m2, x2 in g.terms.items():
            m = _hstack_basis(f.source, f.src_circles, f.target, f.tgt_circles,
                              g.source, g.src_circles, g.target, g.tgt_circles, m1, m2)
            terms[m] = terms.get(m, 0) + x1 * x2
    return Morphism(hstack_flat(f.source, g.source), hstack_flat(f.target, g.target),
                    _clean(terms, f.ring), f.src_circles + g.src_circles,
                    f.tgt_circles + g.tgt_circles, f.ring)


def circle_count(a: FlatTangle, b: FlatTangle) -> int:
    """Number of circles of ``W(a, b)``."""
    return _wmap(a, b)[0]


def identity_terms(a: FlatTangle, circles: int = 0) -> dict:
    return dict(identity_morphism(a, ZZ, circles).terms)


def tensor_terms(a, ka, a2, ka2, b, kb, b2, kb2, t1: dict, t2: dict, ring: Ring, scale=1) -> dict:
    """Terms of the vertical gluing of ``t1: (a,ka) -> (a2,ka2)`` below ``t2: (b,kb) -> (b2,kb2)``."""
    out: dict = {}
    for m1, x1 in t1.items():
        for m2, x2 in t2.items():
            x = x1 * x2 * scale
            for m, k in _tensor_basis(a, ka, a2, ka2, b, kb, b2, kb2, m1, m2):
                out[m] = out.get(m, 0) + x * k
    return _clean(out, ring)


def hstack_terms(a, ka, a2, ka2, b, kb, b2, kb2, t1: dict, t2: dict, ring: Ring, scale=1) -> dict:
    out: dict = {}
    for m1, x1 in t1.items():
        for m2, x2 in t2.items():
            m = _hstack_basis(a, ka, a2, ka2, b, kb, b2, kb2, m1, m2)
            out[m] = out.get(m, 0) + x1 * x2 * scale
    return _clean(out, ring)
