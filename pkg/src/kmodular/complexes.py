"""Half-graded chain complexes over the dotted cobordism category.

Conventions used throughout:

* ``t`` is stored doubled (``t2``) so half-integer homological degrees are ints.
* The differential raises ``t`` by one (``t2`` by two).
* A differential entry ``x -> y`` has internal degree zero:
  ``deg_chi(entry) + q_y - q_x == 0``.
* ``window`` is the largest ``t2`` at which the stored objects are known to
  agree with the untruncated complex (after any amount of reduction).  ``None``
  means the complex is exact.

Differential entries are stored as raw term dicts ``{mask: coeff}`` keyed by
``(i, j)``; see :mod:`kmodular.cob` for the mask layout.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from . import cob
from .cob import FlatTangle, Morphism, circle_count, compose_terms, degree_masks
from .linalg import LinearSystem, determinant
from .rings import F2, QQ, ZZ, Ring, get_ring


@dataclass(frozen=True, order=True)
class Degree:
    """A bigrading ``(t, q)`` with ``t`` stored in half steps."""

    t2: int = 0
    q: int = 0

    def __add__(self, other: "Degree") -> "Degree":
        return Degree(self.t2 + other.t2, self.q + other.q)

    def __sub__(self, other: "Degree") -> "Degree":
        return Degree(self.t2 - other.t2, self.q - other.q)

    def __neg__(self) -> "Degree":
        return Degree(-self.t2, -self.q)

    def __mul__(self, k: int) -> "Degree":
        return Degree(self.t2 * k, self.q * k)

    __rmul__ = __mul__

    @property
    def t(self) -> Fraction:
        return Fraction(self.t2, 2)

    def is_zero(self) -> bool:
        return self.t2 == 0 and self.q == 0

    def __str__(self) -> str:
        return f"(t={self.t}, q={self.q})"

    def to_json(self) -> dict:
        return {"t": self.t2, "q": self.q}

    @classmethod
    def from_json(cls, data: dict) -> "Degree":
        return cls(data["t"], data["q"])


class GradedObject(NamedTuple):
    t2: int
    q: int
    tangle: FlatTangle
    circles: int = 0

    @property
    def degree(self) -> Degree:
        return Degree(self.t2, self.q)

    def key(self) -> tuple:
        return (self.t2, self.q, self.tangle.sort_key(), self.circles)

    def shifted(self, d: Degree) -> "GradedObject":
        return GradedObject(self.t2 + d.t2, self.q + d.q, self.tangle, self.circles)


class Complex:
    """An immutable finite (possibly truncated) complex."""

    __slots__ = ("objects", "diff", "window", "ring", "bottom", "top", "_out", "_inc")

    def __init__(self, objects: Iterable[GradedObject], diff: dict, window: int | None = None,
                 ring: Ring = ZZ, bottom: int | None = None, top: int | None = None):
        self.objects = tuple(objects)
        self.diff = {k: v for k, v in diff.items() if v}
        self.window = window
        self.ring = ring
        if self.objects:
            bottom = self.objects[0].tangle.bottom
            top = self.objects[0].tangle.top
        if bottom is None:
            raise ValueError("an empty complex needs explicit boundary sizes")
        self.bottom = bottom
        self.top = bottom if top is None else top
        self._out = None
        self._inc = None

    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self) -> str:
        return f"<Complex {self.bottom}->{self.top} objects={len(self.objects)} " \
               f"entries={len(self.diff)} window={self.window} ring={self.ring.name}>"

    @property
    def n(self) -> int:
        return self.bottom

    def is_empty(self) -> bool:
        return not self.objects

    def out_edges(self, i: int) -> dict:
        if self._out is None:
            self._build_index()
        return self._out[i]

    def in_edges(self, j: int) -> dict:
        if self._inc is None:
            self._build_index()
        return self._inc[j]

    def _build_index(self) -> None:
        out = [dict() for _ in self.objects]
        inc = [dict() for _ in self.objects]
        for (i, j), terms in self.diff.items():
            out[i][j] = terms
            inc[j][i] = terms
        self._out, self._inc = out, inc

    def morphism(self, i: int, j: int) -> Morphism:
        x, y = self.objects[i], self.objects[j]
        return Morphism(x.tangle, y.tangle, self.diff.get((i, j), {}), x.circles, y.circles, self.ring)

    def t_range(self) -> tuple[int, int] | None:
        if not self.objects:
            return None
        ts = [o.t2 for o in self.objects]
        return min(ts), max(ts)

    def lowest(self) -> int | None:
        r = self.t_range()
        return None if r is None else r[0]

    def has_circles(self) -> bool:
        return any(o.circles for o in self.objects)

    def object_multiset(self, upto: int | None = None) -> dict:
        out: dict = {}
        for o in self.objects:
            if upto is None or o.t2 <= upto:
                k = (o.t2, o.q, o.tangle)
                out[k] = out.get(k, 0) + 1
        return out

    def to_json(self) -> dict:
        lo = self.lowest()
        return {
            "n": self.bottom,
            **({"top": self.top} if self.top != self.bottom else {}),
            "objects": [
                {"t": o.t2, "q": o.q, "tangle": o.tangle.to_json(),
                 **({"circles": o.circles} if o.circles else {})}
                for o in self.objects
            ],
            "diff": [
                {"from": i, "to": j, "morphism": self.morphism(i, j).to_json()}
                for (i, j) in sorted(self.diff)
            ],
            "window": None if self.window is None else [lo if lo is not None else self.window, self.window],
            "ring": self.ring.name,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Complex":
        ring = get_ring(data.get("ring", "Z"))
        objects = [GradedObject(o["t"], o["q"], FlatTangle.from_json(o["tangle"]), o.get("circles", 0))
                   for o in data["objects"]]
        diff = {}
        for e in data["diff"]:
            i, j = e["from"], e["to"]
            x, y = objects[i], objects[j]
            m = Morphism.from_json(e["morphism"], x.tangle, y.tangle, ring, x.circles, y.circles)
            diff[(i, j)] = m.terms
        w = data.get("window")
        return cls(objects, diff, None if w is None else w[1], ring,
                   data.get("n"), data.get("top", data.get("n")))


@dataclass
class ChainMap:
    """Components ``(i, j) -> terms`` from source object ``i`` to target object ``j``.

    ``t2`` is the map's t-degree in half steps (always even).
    """

    source: Complex
    target: Complex
    components: dict
    t2: int = 0

    def morphism(self, i: int, j: int) -> Morphism:
        x, y = self.source.objects[i], self.target.objects[j]
        return Morphism(x.tangle, y.tangle, self.components.get((i, j), {}), x.circles, y.circles,
                        self.source.ring)


# --------------------------------------------------------------------------
# constructors


def empty_complex(bottom: int, top: int | None = None, ring: Ring = ZZ) -> Complex:
    return Complex([], {}, None, ring, bottom, bottom if top is None else top)


def flat_complex(tangle: FlatTangle, degree: Degree = Degree(), ring: Ring = ZZ, circles: int = 0) -> Complex:
    return Complex([GradedObject(degree.t2, degree.q, tangle, circles)], {}, None, ring)


def identity_complex(n: int, ring: Ring = ZZ) -> Complex:
    return flat_complex(cob.identity(n), Degree(), ring)


def with_ring(C: Complex, ring: Ring) -> Complex:
    """Change coefficients along the canonical map from Z."""
    if C.ring == ring:
        return C
    if C.ring != ZZ and ring == ZZ:
        raise ValueError("cannot lift coefficients back to Z")
    diff = {}
    for k, terms in C.diff.items():
        t = {m: ring.normalize(x) for m, x in terms.items()}
        t = {m: x for m, x in t.items() if x}
        if t:
            diff[k] = t
    return Complex(C.objects, diff, C.window, ring, C.bottom, C.top)


# --------------------------------------------------------------------------
# validation


@dataclass
class ComplexReport:
    ok: bool
    violations: list = field(default_factory=list)


def check_complex(C: Complex) -> ComplexReport:
    """Check t-steps, internal degree zero of every entry, and ``d o d = 0``."""
    bad = []
    for (i, j), terms in C.diff.items():
        x, y = C.objects[i], C.objects[j]
        if y.t2 != x.t2 + 2:
            bad.append(("t-step", i, j))
            continue
        for m in terms:
            twice = cob.basis_degree(x.tangle, y.tangle, m, x.circles, y.circles)
            if twice + 2 * (y.q - x.q) != 0:
                bad.append(("internal-degree", i, j))
                break
    sq: dict = {}
    for (i, j), t1 in C.diff.items():
        x, y = C.objects[i], C.objects[j]
        for k, t2 in C.out_edges(j).items():
            z = C.objects[k]
            acc = sq.setdefault((i, k), {})
            compose_terms(x.tangle, x.circles, y.tangle, y.circles, z.tangle, z.circles, t1, t2, C.ring, acc)
    for (i, k), acc in sq.items():
        if acc:
            bad.append(("d-squared", i, k))
    return ComplexReport(not bad, bad)


def is_chain_map(f: ChainMap) -> bool:
    """``d_D f == f d_C`` (with the sign ``(-1)^t`` for odd-degree maps)."""
    return not _chain_defect(f)


def _chain_defect(f: ChainMap) -> dict:
    C, D, ring = f.source, f.target, f.source.ring
    sign = -1 if (f.t2 // 2) % 2 else 1
    acc: dict = {}
    for (i, j), t in f.components.items():
        x, y = C.objects[i], D.objects[j]
        for k, d in D.out_edges(j).items():
            z = D.objects[k]
            compose_terms(x.tangle, x.circles, y.tangle, y.circles, z.tangle, z.circles, t, d, ring,
                          acc.setdefault((i, k), {}))
    for (i, w), d in C.diff.items():
        x, y = C.objects[i], C.objects[w]
        for k, t in _map_out(f, w).items():
            z = D.objects[k]
            compose_terms(x.tangle, x.circles, y.tangle, y.circles, z.tangle, z.circles, d, t, ring,
                          acc.setdefault((i, k), {}), scale=-sign)
    return {k: v for k, v in acc.items() if v}


def _map_out(f: ChainMap, i: int) -> dict:
    cache = getattr(f, "_out_cache", None)
    if cache is None:
        cache = {}
        for (a, b), t in f.components.items():
            cache.setdefault(a, {})[b] = t
        f._out_cache = cache
    return cache.get(i, {})


def compose_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """``g o f``."""
    if f.target is not g.source:
        raise ValueError("chain maps are not composable")
    ring = f.source.ring
    comps: dict = {}
    for (i, j), t1 in f.components.items():
        x, y = f.source.objects[i], f.target.objects[j]
        for k, t2 in _map_out(g, j).items():
            z = g.target.objects[k]
            compose_terms(x.tangle, x.circles, y.tangle, y.circles, z.tangle, z.circles, t1, t2, ring,
                          comps.setdefault((i, k), {}))
    return ChainMap(f.source, g.target, {k: v for k, v in comps.items() if v}, f.t2 + g.t2)


def identity_map(C: Complex) -> ChainMap:
    return ChainMap(C, C, {(i, i): cob.identity_terms(o.tangle, o.circles) for i, o in enumerate(C.objects)})


def subtract_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    comps = {k: dict(v) for k, v in f.components.items()}
    ring = f.source.ring
    for k, t in g.components.items():
        acc = comps.setdefault(k, {})
        for m, x in t.items():
            acc[m] = acc.get(m, 0) - x
        cob._clean(acc, ring)
    return ChainMap(f.source, f.target, {k: v for k, v in comps.items() if v}, f.t2)


# --------------------------------------------------------------------------
# grading operations


def shift(C: Complex, d: Degree) -> Complex:
    return Complex([o.shifted(d) for o in C.objects], C.diff,
                   None if C.window is None else C.window + d.t2, C.ring, C.bottom, C.top)


def truncate(C: Complex, hi: int) -> Complex:
    """Keep objects with ``t2 <= hi`` (a quotient complex)."""
    keep = [i for i, o in enumerate(C.objects) if o.t2 <= hi]
    window = hi if C.window is None else min(hi, C.window)
    if len(keep) == len(C.objects):
        return Complex(C.objects, C.diff, window, C.ring, C.bottom, C.top)
    return _restrict(C, keep, window)


def _restrict(C: Complex, keep: list[int], window) -> Complex:
    pos = {i: k for k, i in enumerate(keep)}
    diff = {(pos[i], pos[j]): t for (i, j), t in C.diff.items() if i in pos and j in pos}
    return Complex([C.objects[i] for i in keep], diff, window, C.ring, C.bottom, C.top)


def canonical(C: Complex) -> Complex:
    """Reorder objects by (t, q, tangle); ties keep their relative order."""
    order = sorted(range(len(C.objects)), key=lambda i: C.objects[i].key())
    if order == list(range(len(C.objects))):
        return C
    return _restrict(C, order, C.window)


def direct_sum(C: Complex, D: Complex) -> Complex:
    off = len(C.objects)
    diff = dict(C.diff)
    diff.update({(i + off, j + off): t for (i, j), t in D.diff.items()})
    return Complex(C.objects + D.objects, diff, _min_window(C.window, D.window), C.ring, C.bottom, C.top)


def _min_window(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def cone(f: ChainMap, check: bool = True) -> Complex:
    """Mapping cone: the source sits one step below (``t -> t-1``), then the target.

    Differential ``[[-d_C, 0], [f, d_D]]``.
    """
    if f.t2 != 0:
        raise ValueError("cone needs a map of t-degree 0")
    if check and not is_chain_map(f):
        raise ValueError("cone of a map that is not a chain map")
    C, D = f.source, f.target
    Cs = shift(C, Degree(-2, 0))
    off = len(C.objects)
    ring = C.ring
    diff = {k: {m: -x for m, x in t.items()} for k, t in C.diff.items()}
    diff.update({(i + off, j + off): t for (i, j), t in D.diff.items()})
    diff.update({(i, j + off): t for (i, j), t in f.components.items()})
    window = _min_window(Cs.window, D.window)
    objects = Cs.objects + D.objects
    out = Complex(objects, {k: cob._clean(dict(v), ring) for k, v in diff.items()}, window, ring,
                  C.bottom, C.top)
    if window is not None:
        out = truncate(out, window)
    return out


# --------------------------------------------------------------------------
# tensor and juxtaposition


def _koszul(t2: int) -> int:
    return -1 if (t2 >> 1) & 1 else 1


def _product_window(C: Complex, D: Complex) -> int | None:
    lc, ld = C.lowest(), D.lowest()
    cands = []
    if C.window is not None and ld is not None:
        cands.append(C.window + ld)
    if D.window is not None and lc is not None:
        cands.append(D.window + lc)
    if not cands:
        if C.window is not None and D.window is not None:
            # one side is empty: the product is exactly empty
            return None
        return None
    return min(cands)


def tensor(C: Complex, D: Complex, reduce: bool = False) -> Complex:
    """Vertical composition: ``D`` stacked on top of ``C``, circles delooped.

    With ``reduce`` the result is also Gaussian-eliminated.
    """
    if C.top != D.bottom:
        raise ValueError(f"cannot stack: {C.top} top points vs {D.bottom} bottom points")
    if C.ring != D.ring:
        raise ValueError("ring mismatch")
    ring = C.ring
    window = _product_window(C, D)
    objects: list[GradedObject] = []
    index: dict = {}
    for i, x in enumerate(C.objects):
        for j, y in enumerate(D.objects):
            t2 = x.t2 + y.t2
            if window is not None and t2 > window:
                continue
            tangle, k = cob.glue_flat(x.tangle, y.tangle)
            index[(i, j)] = len(objects)
            objects.append(GradedObject(t2, x.q + y.q, tangle, x.circles + y.circles + k))
    diff: dict = {}
    id_c = [cob.identity_terms(x.tangle, x.circles) for x in C.objects]
    id_d = [cob.identity_terms(y.tangle, y.circles) for y in D.objects]
    for (i, i2), terms in C.diff.items():
        x, x2 = C.objects[i], C.objects[i2]
        for j, y in enumerate(D.objects):
            a, b = index.get((i, j)), index.get((i2, j))
            if a is None or b is None:
                continue
            diff[(a, b)] = cob.tensor_terms(x.tangle, x.circles, x2.tangle, x2.circles,
                                            y.tangle, y.circles, y.tangle, y.circles,
                                            terms, id_d[j], ring)
    for (j, j2), terms in D.diff.items():
        y, y2 = D.objects[j], D.objects[j2]
        for i, x in enumerate(C.objects):
            a, b = index.get((i, j)), index.get((i, j2))
            if a is None or b is None:
                continue
            diff[(a, b)] = cob.tensor_terms(x.tangle, x.circles, x.tangle, x.circles,
                                            y.tangle, y.circles, y2.tangle, y2.circles,
                                            id_c[i], terms, ring, scale=_koszul(x.t2))
    out = Complex(objects, diff, window, ring, C.bottom, D.top)
    out = deloop(out)
    return gaussian_eliminate(out).complex if reduce else out


def hstack(C: Complex, D: Complex) -> Complex:
    """Horizontal juxtaposition: ``D`` to the right of ``C``."""
    if C.ring != D.ring:
        raise ValueError("ring mismatch")
    ring = C.ring
    window = _product_window(C, D)
    objects: list[GradedObject] = []
    index: dict = {}
    for i, x in enumerate(C.objects):
        for j, y in enumerate(D.objects):
            t2 = x.t2 + y.t2
            if window is not None and t2 > window:
                continue
            index[(i, j)] = len(objects)
            objects.append(GradedObject(t2, x.q + y.q, cob.hstack_flat(x.tangle, y.tangle),
                                        x.circles + y.circles))
    diff: dict = {}
    for (i, i2), terms in C.diff.items():
        x, x2 = C.objects[i], C.objects[i2]
        for j, y in enumerate(D.objects):
            a, b = index.get((i, j)), index.get((i2, j))
            if a is None or b is None:
                continue
            diff[(a, b)] = cob.hstack_terms(x.tangle, x.circles, x2.tangle, x2.circles,
                                            y.tangle, y.circles, y.tangle, y.circles,
                                            terms, cob.identity_terms(y.tangle, y.circles), ring)
    for (j, j2), terms in D.diff.items():
        y, y2 = D.objects[j], D.objects[j2]
        for i, x in enumerate(C.objects):
            a, b = index.get((i, j)), index.get((i, j2))
            if a is None or b is None:
                continue
            diff[(a, b)] = cob.hstack_terms(x.tangle, x.circles, x.tangle, x.circles,
                                            y.tangle, y.circles, y2.tangle, y2.circles,
                                            cob.identity_terms(x.tangle, x.circles), terms, ring,
                                            scale=_koszul(x.t2))
    return Complex(objects, diff, window, ring, C.bottom + D.bottom, C.top + D.top)


# --------------------------------------------------------------------------
# delooping


@dataclass
class Delooped:
    complex: Complex
    projection: ChainMap | None = None   # original -> delooped
    inclusion: ChainMap | None = None    # delooped -> original


def deloop(C: Complex, witnesses: bool = False):
    """Replace every object carrying free circles by its ``2^k`` delooped summands.

    A circle label ``0`` stands for the summand ``q^{+1}`` (reached by an
    undotted cup), label ``1`` for ``q^{-1}`` (dotted cup).  Returns the complex,
    or a :class:`Delooped` record with both witness maps when asked.
    """
    if not C.has_circles():
        if witnesses:
            ident = identity_map(C)
            return Delooped(C, ident, ident)
        return C
    ring = C.ring
    objects: list[GradedObject] = []
    slot: list[int] = []       # first new index of each old object
    for o in C.objects:
        slot.append(len(objects))
        for labels in range(1 << o.circles):
            ones = bin(labels).count("1")
            objects.append(GradedObject(o.t2, o.q + o.circles - 2 * ones, o.tangle, 0))
    diff: dict = {}
    for (i, j), terms in C.diff.items():
        x, y = C.objects[i], C.objects[j]
        c = circle_count(x.tangle, y.tangle)
        flat_mask = (1 << c) - 1
        ki, kj = x.circles, y.circles
        src_all = (1 << ki) - 1
        for m, v in terms.items():
            s = (m >> c) & src_all
            u = (m >> (c + ki)) & ((1 << kj) - 1)
            key = (slot[i] + (src_all & ~s), slot[j] + u)
            acc = diff.setdefault(key, {})
            fm = m & flat_mask
            acc[fm] = acc.get(fm, 0) + v
    diff = {k: cob._clean(v, ring) for k, v in diff.items()}
    D = Complex(objects, diff, C.window, ring, C.bottom, C.top)
    if not witnesses:
        return D
    proj: dict = {}
    incl: dict = {}
    for i, o in enumerate(C.objects):
        c = circle_count(o.tangle, o.tangle)
        for labels in range(1 << o.circles):
            new = slot[i] + labels
            # projection: dotted cap for label 0, plain cap for label 1
            pm = (((1 << o.circles) - 1) & ~labels) << c
            proj[(i, new)] = {pm: 1}
            incl[(new, i)] = {labels << c: 1}
    return Delooped(D, ChainMap(C, D, proj), ChainMap(D, C, incl))


# --------------------------------------------------------------------------
# Gaussian elimination


@dataclass
class Reduction:
    complex: Complex
    forward: ChainMap | None = None    # original -> reduced
    backward: ChainMap | None = None   # reduced -> original
    eliminated: int = 0
    reduced_over_z: bool = False


PIVOT_ORDERS = ("markowitz", "forward", "reverse", "random")


def _is_pivot(objs, ring, i, j, terms) -> bool:
    x, y = objs[i], objs[j]
    return (x.tangle is y.tangle and x.q == y.q and len(terms) == 1 and 0 in terms
            and ring.is_unit(terms[0]))


def gaussian_eliminate(C: Complex, order: str = "markowitz", seed: int = 0,
                       witnesses: bool = False) -> Reduction:
    """Cancel unit multiples of identity entries until none remain.

    ``order`` picks the pivot sequence; all orders give homotopy equivalent
    results.  With ``witnesses`` the returned record carries chain maps in
    both directions whose composite on the reduced side is the identity.
    """
    if order not in PIVOT_ORDERS:
        raise ValueError(f"unknown pivot order {order!r}")
    if C.has_circles():
        dl = deloop(C, witnesses=witnesses)
        if witnesses:
            red = gaussian_eliminate(dl.complex, order, seed, True)
            return Reduction(red.complex, compose_maps(dl.projection, red.forward),
                             compose_maps(red.backward, dl.inclusion), red.eliminated, red.reduced_over_z)
        C = dl
    ring = C.ring
    objs = C.objects
    n = len(objs)
    out: list[dict] = [dict() for _ in range(n)]
    inc: list[dict] = [dict() for _ in range(n)]
    for (i, j), terms in C.diff.items():
        t = dict(terms)
        out[i][j] = t
        inc[j][i] = t
    alive = [True] * n
    rng = random.Random(seed)

    def key(i, j):
        if order == "markowitz":
            return ((len(inc[j]) - 1) * (len(out[i]) - 1), objs[i].t2, i, j)
        if order == "forward":
            return (objs[i].t2, i, j)
        if order == "reverse":
            return (-objs[i].t2, -i, -j)
        return (rng.random(), i, j)

    heap = [(key(i, j), i, j) for (i, j), t in C.diff.items() if _is_pivot(objs, ring, i, j, t)]
    heapq.heapify(heap)

    fmap = gmap = frev = None
    if witnesses:
        fmap = {o: {o: cob.identity_terms(objs[o].tangle)} for o in range(n)}   # orig -> cur
        frev = {o: {o} for o in range(n)}                                           # cur -> origs
        gmap = {o: {o: cob.identity_terms(objs[o].tangle)} for o in range(n)}   # cur -> orig

    eliminated = 0
    while heap:
        k, i, j = heapq.heappop(heap)
        if not (alive[i] and alive[j]):
            continue
        terms = out[i].get(j)
        if terms is None or not _is_pivot(objs, ring, i, j, terms):
            continue
        if order == "markowitz":
            k2 = key(i, j)
            if k2 > k:
                heapq.heappush(heap, (k2, i, j))
                continue
        a = objs[i].tangle
        scale = -ring.inv(terms[0])
        xs = [(x, g) for x, g in inc[j].items() if x != i]
        ys = [(y, d) for y, d in out[i].items() if y != j]
        for x, gamma in xs:
            xt = objs[x].tangle
            ox = out[x]
            for y, delta in ys:
                acc = ox.get(y)
                fresh = acc is None
                if fresh:
                    acc = {}
                compose_terms(xt, 0, a, 0, objs[y].tangle, 0, gamma, delta, ring, acc, scale)
                if acc:
                    if fresh:
                        ox[y] = acc
                        inc[y][x] = acc
                    if _is_pivot(objs, ring, x, y, acc):
                        heapq.heappush(heap, (key(x, y), x, y))
                elif not fresh:
                    del ox[y]
                    del inc[y][x]
        if witnesses:
            for o in list(frev.get(j, ())):
                t = fmap[o].get(j)
                if t:
                    for y, delta in ys:
                        acc = fmap[o].setdefault(y, {})
                        compose_terms(objs[o].tangle, 0, a, 0, objs[y].tangle, 0, t, delta, ring, acc, scale)
                        if acc:
                            frev.setdefault(y, set()).add(o)
                        else:
                            del fmap[o][y]
            for b in (i, j):
                for o in frev.pop(b, ()):
                    fmap[o].pop(b, None)
            src = gmap.get(i, {})
            for x, gamma in xs:
                gx = gmap.setdefault(x, {})
                for o, t in src.items():
                    acc = gx.setdefault(o, {})
                    compose_terms(objs[x].tangle, 0, a, 0, objs[o].tangle, 0, gamma, t, ring, acc, scale)
                    if not acc:
                        del gx[o]
            gmap.pop(i, None)
            gmap.pop(j, None)
        for b in (i, j):
            alive[b] = False
            for y in out[b]:
                inc[y].pop(b, None)
            for x in inc[b]:
                out[x].pop(b, None)
            out[b] = {}
            inc[b] = {}
        eliminated += 1

    keep = [i for i in range(n) if alive[i]]
    pos = {i: k for k, i in enumerate(keep)}
    diff = {(pos[i], pos[j]): t for i in keep for j, t in out[i].items() if t}
    R = Complex([objs[i] for i in keep], diff, C.window, ring, C.bottom, C.top)
    red_z = ring == ZZ and any(
        objs[i].tangle is objs[j].tangle and objs[i].q == objs[j].q and 0 in t
        for i in keep for j, t in out[i].items())
    rec = Reduction(R, eliminated=eliminated, reduced_over_z=red_z)
    if witnesses:
        fc = {(o, pos[c]): t for o, m in fmap.items() for c, t in m.items() if t and c in pos}
        gc = {(pos[c], o): t for c, m in gmap.items() if c in pos for o, t in m.items() if t}
        rec.forward = ChainMap(C, R, fc)
        rec.backward = ChainMap(R, C, gc)
    return rec


def simplify(C: Complex, order: str = "markowitz", seed: int = 0) -> Complex:
    """Deloop, eliminate every unit pivot and sort objects canonically."""
    return canonical(gaussian_eliminate(deloop(C), order, seed).complex)


# --------------------------------------------------------------------------
# homotopy and equivalence


def _unknowns(C: Complex, D: Complex, dt2: int, upto: int | None):
    """Basis unknowns for maps ``C -> D`` of t-degree ``dt2`` and internal degree 0."""
    byt: dict = {}
    for j, y in enumerate(D.objects):
        byt.setdefault(y.t2, []).append(j)
    out = []
    for i, x in enumerate(C.objects):
        if upto is not None and x.t2 > upto:
            continue
        for j in byt.get(x.t2 + dt2, ()):
            y = D.objects[j]
            for m in degree_masks(x.tangle, y.tangle, x.q - y.q, x.circles, y.circles):
                out.append((i, j, m))
    return out


def _map_equations(C: Complex, D: Complex, unknowns, sign_hd: int, upto: int | None, ring: Ring):
    """Equations of ``d_D h + sign_hd * h d_C`` in terms of the unknowns.

    Returns ``{(i, k, mask): {var: coeff}}``.
    """
    eqs: dict = {}
    for var in unknowns:
        i, j, m = var
        x, y = C.objects[i], D.objects[j]
        unit = {m: 1}
        for k, d in D.out_edges(j).items():
            z = D.objects[k]
            if upto is not None and x.t2 > upto:
                continue
            res = compose_terms(x.tangle, x.circles, y.tangle, y.circles, z.tangle, z.circles,
                                unit, d, ring)
            for mm, v in res.items():
                row = eqs.setdefault((i, k, mm), {})
                row[var] = row.get(var, 0) + v
        for w, d in C.in_edges(i).items():
            xw = C.objects[w]
            if upto is not None and xw.t2 > upto:
                continue
            res = compose_terms(xw.tangle, xw.circles, x.tangle, x.circles, y.tangle, y.circles,
                                d, unit, ring, scale=sign_hd)
            for mm, v in res.items():
                row = eqs.setdefault((w, j, mm), {})
                row[var] = row.get(var, 0) + v
    return eqs


def hom_solve(f: ChainMap, upto: int | None = None, ring: Ring | None = None) -> ChainMap | None:
    """Find ``h`` with ``d h + h d = f`` (``f`` of t-degree 0), or ``None``.

    Equations are imposed for source objects with ``t2 <= upto``.  Over a
    field ``None`` is definitive; over Z the rational solution must be
    integral, so ``None`` may also mean an obstruction we cannot see.
    """
    C, D = f.source, f.target
    base = f.source.ring
    solve_ring = ring or (QQ if base == ZZ else base)
    # Hom differential: d h - (-1)^|h| h d
    sign_hd = 1 if ((f.t2 - 2) // 2) % 2 else -1
    unknowns = _unknowns(C, D, f.t2 - 2, upto)
    eqs = _map_equations(C, D, unknowns, sign_hd, upto, solve_ring)
    rhs: dict = {}
    for (i, j), t in f.components.items():
        if upto is not None and C.objects[i].t2 > upto:
            continue
        for m, v in t.items():
            rhs[(i, j, m)] = v
    system = LinearSystem(solve_ring)
    for var in unknowns:
        system.var(var)
    for key in set(eqs) | set(rhs):
        system.add_equation(eqs.get(key, {}), rhs.get(key, 0))
    sol = system.solve()
    if sol is None:
        return None
    comps: dict = {}
    for (i, j, m), v in sol.items():
        if v:
            if base == ZZ:
                if Fraction(v).denominator != 1:
                    return None
                v = int(v)
            comps.setdefault((i, j), {})[m] = v
    return ChainMap(C, D, comps, f.t2 - 2)


def is_contractible(C: Complex, upto: int | None = None) -> bool:
    """Contractibility via a nullhomotopy of the identity."""
    return hom_solve(identity_map(C), upto) is not None


@dataclass
class Equivalence:
    status: str                 # "yes" | "no" | "inconclusive"
    reason: str = ""
    witness: ChainMap | None = None
    upto: int | None = None     # certified for t2 <= upto

    def __bool__(self) -> bool:
        return self.status == "yes"


def certified_limit(C: Complex) -> int | None:
    """Largest ``t2`` at which a reduced truncation agrees with the minimal complex."""
    return None if C.window is None else C.window - 2


def equivalent(C: Complex, D: Complex, upto: int | None = None, tries: int = 8,
               seed: int = 0, reduced: bool = False) -> Equivalence:
    """Decide ``C ~ D`` for ``t2 <= upto`` (and inside both certified windows).

    Both sides are simplified; over a field reduced complexes are minimal, so
    the question is whether a degree-0 chain isomorphism exists.  Over Z the
    answer may be ``inconclusive``.
    """
    if C.bottom != D.bottom or C.top != D.top:
        raise ValueError("boundary mismatch")
    ring = C.ring
    Cs = C if reduced else simplify(C)
    Ds = D if reduced else simplify(D)
    limit = _min_window(_min_window(certified_limit(Cs), certified_limit(Ds)), upto)
    if limit is not None:
        Cs, Ds = truncate(Cs, limit), truncate(Ds, limit)
    if Cs.object_multiset() != Ds.object_multiset():
        if ring.is_field:
            return Equivalence("no", "graded object multisets differ", upto=limit)
        cq = simplify(with_ring(Cs, QQ)).object_multiset()
        dq = simplify(with_ring(Ds, QQ)).object_multiset()
        if cq != dq:
            return Equivalence("no", "graded object multisets differ over Q", upto=limit)
        return Equivalence("inconclusive", "reduced forms over Z differ", upto=limit)
    if not Cs.objects:
        return Equivalence("yes", "both empty", ChainMap(Cs, Ds, {}), upto=limit)
    if Cs.objects == Ds.objects and Cs.diff == Ds.diff:
        return Equivalence("yes", "identical reduced complexes", identity_map(Cs), upto=limit)
    solve_ring = QQ if ring == ZZ else ring
    unknowns = _unknowns(Cs, Ds, 0, None)
    eqs = _map_equations(Cs, Ds, unknowns, -1, None, solve_ring)
    system = LinearSystem(solve_ring)
    for var in unknowns:
        system.var(var)
    for row in eqs.values():
        system.add_equation(row, 0)
    groups: dict = {}
    for i, o in enumerate(Cs.objects):
        groups.setdefault((o.t2, o.q, o.tangle), [[], []])[0].append(i)
    for j, o in enumerate(Ds.objects):
        groups[(o.t2, o.q, o.tangle)][1].append(j)
    rng = random.Random(seed)
    # random square matrices over F2 are singular more often than not
    if ring == F2:
        tries *= 8
    for attempt in range(tries):
        if ring == ZZ:
            free = {k: rng.choice((-1, 0, 1)) for k in system.keys}
            sol = system.solve(free_values=free)
        else:
            sol = system.solve(rng=rng)
        if sol is None:
            break
        ok = True
        for src, tgt in groups.values():
            mat = [[sol.get((i, j, 0), 0) for j in tgt] for i in src]
            det = determinant(mat, solve_ring)
            if ring == ZZ:
                if det not in (1, -1) or any(Fraction(v).denominator != 1 for v in sol.values()):
                    ok = False
                    break
            elif det == 0:
                ok = False
                break
        if ok:
            comps: dict = {}
            for (i, j, m), v in sol.items():
                if v:
                    comps.setdefault((i, j), {})[m] = int(v) if ring == ZZ else v
            return Equivalence("yes", f"chain isomorphism found (attempt {attempt + 1})",
                               ChainMap(Cs, Ds, comps), upto=limit)
    if ring.is_field and system.rank == system.nvars:
        return Equivalence("no", "no nonzero degree-0 chain maps", upto=limit)
    return Equivalence("inconclusive", "no invertible chain map found by sampling", upto=limit)


# --------------------------------------------------------------------------
# Euler characteristic


@dataclass(frozen=True)
class EulerChar:
    """``sum (-1)^floor(t) q^deg_q`` together with the parity of ``2t``."""

    coeffs: tuple   # sorted ((q, coeff), ...)
    parity: int

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*q^{e}" for e, c in self.coeffs)


def euler_char(C: Complex) -> EulerChar:
    """Graded Euler characteristic over flat tangles is returned per tangle by
    :func:`euler_char_by_tangle`; this sums the q-polynomials of all objects."""
    parities = {o.t2 % 2 for o in C.objects}
    if len(parities) > 1:
        raise ValueError("complex is not t-coherent")
    acc: dict = {}
    for o in C.objects:
        s = -1 if (o.t2 >> 1) & 1 else 1
        for qq, c in _circle_poly(o.circles):
            acc[o.q + qq] = acc.get(o.q + qq, 0) + s * c
    return EulerChar(tuple(sorted((e, c) for e, c in acc.items() if c)), parities.pop() if parities else 0)


def euler_char_by_tangle(C: Complex) -> tuple[dict, int]:
    """``{tangle: {q: coeff}}`` and the t-parity."""
    parities = {o.t2 % 2 for o in C.objects}
    if len(parities) > 1:
        raise ValueError("complex is not t-coherent")
    out: dict = {}
    for o in C.objects:
        s = -1 if (o.t2 >> 1) & 1 else 1
        poly = out.setdefault(o.tangle, {})
        for qq, c in _circle_poly(o.circles):
            poly[o.q + qq] = poly.get(o.q + qq, 0) + s * c
    out = {t: {e: c for e, c in p.items() if c} for t, p in out.items()}
    return {t: p for t, p in out.items() if p}, parities.pop() if parities else 0


def _circle_poly(k: int) -> list[tuple[int, int]]:
    # (q + q^-1)^k
    poly = {0: 1}
    for _ in range(k):
        nxt: dict = {}
        for e, c in poly.items():
            nxt[e + 1] = nxt.get(e + 1, 0) + c
            nxt[e - 1] = nxt.get(e - 1, 0) + c
        poly = nxt
    return sorted(poly.items())
