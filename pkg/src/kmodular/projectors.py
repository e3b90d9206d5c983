"""Truncated categorified projectors and their axiom checks.

The top projector ``P_n`` is the limit of normalized full-twist powers: the
complex of ``T_n^m`` shifted up by its crossing count stabilizes in each fixed
t-range as ``m`` grows.  Complementary projectors for ``n <= 3`` come from the
two-term decomposition of the identity, realized here as the cone of the
projection ``P_n -> 1_n`` onto the degree-zero identity object.

All windows are in half steps (``t2``).  A projector built for ``t <= t_hi``
carries ``base.window = 2 * t_hi + 2`` so that its certified range, one step
below the window, is exactly ``[0, t_hi]``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import cob
from .braids import STANDARD, BraidWord, Convention, full_twist, kh_bracket, ribbon_flipper
from .cob import FlatTangle
from .complexes import (
    ChainMap,
    Complex,
    Degree,
    Equivalence,
    certified_limit,
    cone,
    equivalent,
    flat_complex,
    hstack,
    identity_complex,
    is_chain_map,
    shift,
    simplify,
    tensor,
    truncate,
)
from .report import FAIL, INCONCLUSIVE, PASS, VACUOUS, CheckResult
from .rings import ZZ, Ring

MAX_TWIST_POWER = 64


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ProjectorComplex:
    base: Complex
    n: int
    k: int
    t_hi: int | None                 # None: exact, no truncation
    provenance: dict = field(default_factory=dict)

    @property
    def window(self) -> tuple[int, int | None]:
        return (0, self.t_hi)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "tHi": self.t_hi, "provenance": self.provenance,
                "complex": self.base.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "ProjectorComplex":
        return cls(Complex.from_json(data["complex"]), data["n"], data["k"], data["tHi"], data["provenance"])


@dataclass(frozen=True)
class ShiftSpec:
    degree: Degree
    n: int
    k: int
    sign: int
    status: str = PASS
    upto: int | None = None

    def __neg__(self) -> "ShiftSpec":
        return ShiftSpec(-self.degree, self.n, self.k, -self.sign, self.status, self.upto)

    def to_json(self) -> dict:
        return {"degree": self.degree.to_json(), "n": self.n, "k": self.k, "sign": self.sign,
                "status": self.status}


def through_degree(C: Complex | FlatTangle) -> int | None:
    """Largest through-strand count among the objects (``None`` if there are none)."""
    if isinstance(C, FlatTangle):
        return C.through_degree
    return max((o.tangle.through_degree for o in C.objects), default=None)


# --------------------------------------------------------------------------
# cache


_memory: dict = {}


def cache_key(n: int, k: int, t_hi: int | None, ring: Ring, convention: Convention) -> str:
    return f"P{n}-{k}-t{t_hi}-{ring.name}-{convention.digest()}"


def cache_dir(explicit: str | os.PathLike | None = None) -> Path | None:
    d = explicit or os.environ.get("KMODULAR_CACHE_DIR")
    return Path(d) if d else None


def _load(key: str, directory: Path | None) -> ProjectorComplex | None:
    if key in _memory:
        P = _memory[key]
        if directory is not None and not (directory / f"{key}.json").exists():
            _store(key, P, directory)
        return P
    if directory is not None:
        path = directory / f"{key}.json"
        if path.exists():
            P = ProjectorComplex.from_json(json.loads(path.read_text()))
            _memory[key] = P
            return P
    return None


def _store(key: str, P: ProjectorComplex, directory: Path | None) -> None:
    _memory[key] = P
    if directory is not None:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{key}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(P.to_json(), sort_keys=True, indent=1) + "\n")
        tmp.replace(path)


def clear_memory_cache() -> None:
    _memory.clear()


# --------------------------------------------------------------------------
# construction


def _twist_power_limit(S: Complex, budget_states: int | None) -> None:
    if budget_states is not None and len(S.objects) > budget_states:
        raise BudgetExceeded(f"{len(S.objects)} objects exceed the budget of {budget_states}")


def universal_projector(n: int, t_hi: int, ring: Ring = ZZ, convention: Convention = STANDARD,
                        budget_states: int | None = None, cache: str | os.PathLike | None = None) -> ProjectorComplex:
    """``P_n`` truncated to ``t <= t_hi`` by full-twist stabilization."""
    if n < 1 or t_hi < 0:
        raise ValueError("need n >= 1 and t_hi >= 0")
    directory = cache_dir(cache)
    key = cache_key(n, n, t_hi, ring, convention)
    hit = _load(key, directory)
    if hit is not None:
        return hit
    if n == 1:
        P = ProjectorComplex(identity_complex(1, ring), 1, 1, None, {"recipe": "one strand"})
        _store(key, P, directory)
        return P
    limit = 2 * t_hi
    window = limit + 2
    T = full_twist(n)
    crossings = len(T)
    step = shift(kh_bracket(T, ring, convention, window=window - crossings), Degree(crossings, 0))
    S = simplify(step)
    prev = None
    for m in range(1, MAX_TWIST_POWER + 1):
        if m > 1:
            S = simplify(tensor(S, step))
        _twist_power_limit(S, budget_states)
        if prev is not None and equivalent(prev, S, upto=limit, reduced=True):
            P = ProjectorComplex(S, n, n, t_hi, {"recipe": "full-twist stabilization", "power": m,
                                                 "convention": convention.name})
            _store(key, P, directory)
            return P
        prev = S
    raise BudgetExceeded(f"P_{n} did not stabilize on t <= {t_hi} within {MAX_TWIST_POWER} twists")


def projection_to_identity(P: Complex) -> ChainMap:
    """The chain map ``P_n -> 1_n`` that is the identity on the degree-zero ``1_n``."""
    n = P.top
    target = identity_complex(n, P.ring)
    comps = {(i, 0): cob.identity_terms(o.tangle) for i, o in enumerate(P.objects)
             if o.t2 == 0 and o.q == 0 and o.tangle.is_identity and not o.circles}
    if len(comps) != 1:
        raise ValueError("projector is not normalized: need exactly one identity object at degree 0")
    return ChainMap(P, target, comps)


SUPPORTED = {(1, 1), (2, 2), (2, 0), (3, 3), (3, 1)}


def higher_projector(n: int, k: int, t_hi: int, ring: Ring = ZZ, convention: Convention = STANDARD,
                     budget_states: int | None = None, cache: str | os.PathLike | None = None) -> ProjectorComplex:
    """``P_{n,k}`` truncated to ``t <= t_hi``; ``k = n`` is the top projector."""
    if k == n:
        return universal_projector(n, t_hi, ring, convention, budget_states, cache)
    if (n, k) not in SUPPORTED:
        raise ValueError(f"P_({n},{k}) is not supported; choose from {sorted(SUPPORTED)}")
    directory = cache_dir(cache)
    key = cache_key(n, k, t_hi, ring, convention)
    hit = _load(key, directory)
    if hit is not None:
        return hit
    # the cone eats one step of window, so build the top projector one step deeper
    top = universal_projector(n, t_hi + 1, ring, convention, budget_states, cache)
    f = projection_to_identity(top.base)
    if not is_chain_map(f):
        raise ArithmeticError("projection onto the identity object is not a chain map")
    base = simplify(cone(f))
    P = ProjectorComplex(base, n, k, t_hi, {"recipe": "cone of P_n -> 1_n", "from": top.provenance})
    _store(key, P, directory)
    return P


def check_normalization(P: ProjectorComplex) -> CheckResult:
    """Positive grading, and for the top projector a single ``1_n`` at (0, 0)."""
    objs = P.base.objects
    positive = all(o.t2 >= 0 for o in objs)
    ids = [(o.t2, o.q) for o in objs if o.tangle.is_identity]
    detail = {"positive": positive, "identityObjects": [list(x) for x in ids]}
    ok = positive and (ids == [(0, 0)] if P.k == P.n else not ids)
    return CheckResult("normalization", PASS if ok else FAIL, detail)


# --------------------------------------------------------------------------
# axiom checks


def _empty_within(X: Complex, name: str, detail: dict) -> CheckResult:
    X = simplify(X)
    limit = certified_limit(X)
    if limit is not None and limit < 0:
        return CheckResult(name, INCONCLUSIVE, {**detail, "reason": "window exhausted"}, limit)
    left = truncate(X, limit) if limit is not None else X
    status = PASS if not left.objects else FAIL
    return CheckResult(name, status, {**detail, "survivors": len(left.objects)}, limit)


def check_kill(P: ProjectorComplex, a: FlatTangle) -> CheckResult:
    """``a (x) P`` and ``P (x) a`` contract within the certified window."""
    if a.bottom != P.n or a.top != P.n:
        raise ValueError("diagram does not match the projector")
    if P.k == P.n and a.is_identity:
        raise ValueError("the identity diagram is not killed")
    if P.k < P.n and a.through_degree >= P.k:
        raise ValueError("diagram through-degree must be below the projector's")
    A = flat_complex(a, ring=P.base.ring)
    below = _empty_within(tensor(A, P.base), "below", {})
    above = _empty_within(tensor(P.base, A), "above", {})
    sides = [below, above]
    if any(s.status == FAIL for s in sides):
        status = FAIL
    elif any(s.status == INCONCLUSIVE for s in sides):
        status = INCONCLUSIVE
    else:
        status = PASS
    uptos = [s.upto for s in sides if s.upto is not None]
    return CheckResult(f"kill {a.pairs}", status,
                       {"diagram": a.to_json(), "sides": {s.name: s.status for s in sides}},
                       min(uptos) if uptos else None)


def killed_diagrams(n: int, k: int) -> list[FlatTangle]:
    """Diagrams the projector ``P_{n,k}`` must annihilate."""
    out = []
    for a in cob.matchings(n, n):
        if (k == n and not a.is_identity) or (k < n and a.through_degree < k):
            out.append(a)
    return out


def check_kills_all(P: ProjectorComplex) -> list[CheckResult]:
    diagrams = killed_diagrams(P.n, P.k)
    if not diagrams:
        return [CheckResult(f"kill P_({P.n},{P.k})", VACUOUS, {"reason": "no diagrams of smaller through-degree"})]
    return [check_kill(P, a) for a in diagrams]


def check_idempotent(P: ProjectorComplex, Q: ProjectorComplex) -> CheckResult:
    """``P (x) Q`` is ``Q`` when the labels agree and contracts otherwise."""
    if P.n != Q.n:
        raise ValueError("projectors on different strand counts")
    name = f"P_({P.n},{P.k}) (x) P_({Q.n},{Q.k})"
    X = simplify(tensor(P.base, Q.base))
    if P.k != Q.k:
        return _empty_within(X, name, {"expected": "contractible"})
    eq = equivalent(X, Q.base, reduced=False)
    return CheckResult(name, {"yes": PASS, "no": FAIL}.get(eq.status, INCONCLUSIVE),
                       {"expected": f"P_({Q.n},{Q.k})", "reason": eq.reason}, eq.upto)


def check_through_degree(P: ProjectorComplex) -> CheckResult:
    tau = through_degree(P.base)
    return CheckResult(f"through-degree P_({P.n},{P.k})", PASS if tau == P.k else FAIL, {"through": tau})


# --------------------------------------------------------------------------
# twists and drag-through


def lowest_degree(C: Complex) -> Degree | None:
    if not C.objects:
        return None
    t2 = min(o.t2 for o in C.objects)
    return Degree(t2, min(o.q for o in C.objects if o.t2 == t2))


def match_shift(X: Complex, P: Complex) -> tuple[Degree | None, object]:
    """The shift ``s`` with ``X ~ P[s]`` read off the lowest objects, and its certificate.

    A certificate whose window ends below the lowest object compared nothing
    and is downgraded to inconclusive.
    """
    lx, lp = lowest_degree(X), lowest_degree(P)
    if lx is None or lp is None:
        return None, None
    s = lx - lp
    eq = equivalent(X, shift(P, s), reduced=True)
    if eq and eq.upto is not None and eq.upto < lx.t2:
        eq = Equivalence("inconclusive", "window ends below the lowest object", upto=eq.upto)
    return s, eq


def twist_on_projector(P: ProjectorComplex, twist, convention: Convention = STANDARD) -> Complex:
    """``twist`` stacked on top of the projector, reduced."""
    return simplify(kh_bracket(twist, P.base.ring, convention, start=P.base))


def derive_twist_shift(n: int, k: int, sign: int, t_hi: int = 2, ring: Ring = ZZ,
                       convention: Convention = STANDARD, cache=None) -> ShiftSpec:
    """The shift by which the framed full twist on ``n`` strands acts on ``P_{n,k}``.

    For one strand the framed twist is a single curl, so this is the R1 shift.
    The projector is built deeper by the twist's crossing count, which is the
    most the twist can move the certified range, so the match is certified on
    at least ``t_hi`` steps of the projector.
    """
    twist = ribbon_flipper(n, sign)
    depth = t_hi + sum(twist.crossings())
    P = higher_projector(n, k, depth, ring, convention, cache=cache)
    X = twist_on_projector(P, twist, convention)
    s, eq = match_shift(X, P.base)
    if s is None or not eq:
        raise ArithmeticError(f"no shift equivalence for the framed twist on P_({n},{k}): "
                              f"{'empty' if eq is None else eq.reason}")
    return ShiftSpec(s, n, k, sign, PASS, eq.upto)


def placed(P: Complex, at: int, strands: int) -> Complex:
    """``P`` on positions ``at .. at+n-1`` of ``strands``, identity elsewhere."""
    n = P.top
    left, right = at - 1, strands - at - n + 1
    if left < 0 or right < 0:
        raise ValueError("placement out of range")
    out = P
    if left:
        out = hstack(identity_complex(left, P.ring), out)
    if right:
        out = hstack(out, identity_complex(right, P.ring))
    return out


def cable_destination(w: BraidWord, at: int, width: int) -> int:
    """Where a bundle of ``width`` strands starting at ``at`` ends up, as a bundle."""
    perm = w.permutation()
    ends = [perm[at - 1 + r] for r in range(width)]
    if ends != list(range(ends[0], ends[0] + width)):
        raise ValueError("the braid does not carry the strands as a parallel cable")
    return ends[0] + 1


def check_drag_through(P: ProjectorComplex | Complex, w: BraidWord, at: int = 1,
                       above: Complex | None = None, convention: Convention = STANDARD) -> CheckResult:
    """Projector below the braid versus projector above it.

    ``above`` overrides the complex placed on top (used for negative controls).
    """
    base = P.base if isinstance(P, ProjectorComplex) else P
    n = base.top
    if n == 1 and above is None:
        return CheckResult(f"drag through {w}", VACUOUS, {"reason": "a single strand drags trivially"})
    dest = cable_destination(w, at, n)
    lower = kh_bracket(w, base.ring, convention, start=placed(base, at, w.strands))
    top = placed(above if above is not None else base, dest, w.strands)
    upper = tensor(kh_bracket(w, base.ring, convention), top)
    eq = equivalent(lower, upper)
    status = {"yes": PASS, "no": FAIL}.get(eq.status, INCONCLUSIVE)
    if status == PASS and eq.upto is not None and eq.upto < 0:
        status = INCONCLUSIVE
    return CheckResult(f"drag through {w}", status, {"from": at, "to": dest, "reason": eq.reason}, eq.upto)
