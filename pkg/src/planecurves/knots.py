"""Over/under resolutions of plane curves and the invariants built on them.

The second Conway coefficient is computed by the descending-diagram skein
recursion ``a2(K+) - a2(K-) = lk(L0)``.  A Gauss-diagram arrow count serves as
an independent cross-check.  All averages are exact ``Fraction`` values.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping

import numpy as np

from .curves import PlaneCurve

DEFAULT_MAX_CROSSINGS = 20
_CHUNK = 1 << 15

FIRST, SECOND = 0, 1


class ResolutionCapExceeded(RuntimeError):
    """Raised instead of sampling when 2^c resolutions exceed the cap."""

    def __init__(self, crossings: int, cap: int, where: str = ""):
        self.crossings, self.cap, self.where = crossings, cap, where
        msg = f"{crossings} crossings exceed the resolution cap of {cap}"
        super().__init__(f"{msg} ({where})" if where else msg)


@dataclass(frozen=True)
class KnotDiagram:
    """A plane curve with a choice of over-strand at every crossing.

    ``over[x]`` is FIRST (0) when the first occurrence of ``x`` along the based
    curve is the over-passage and SECOND (1) otherwise.
    """

    curve: PlaneCurve
    over: Mapping[Hashable, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "over", dict(self.over))
        missing = set(self.curve.handedness) - set(self.over)
        if missing:
            raise ValueError(f"no over/under choice for crossings {sorted(map(str, missing))}")

    def switched(self, x) -> KnotDiagram:
        over = dict(self.over)
        over[x] = 1 - over[x]
        return KnotDiagram(self.curve, over)

    def mirror(self) -> KnotDiagram:
        """Mirror image: every crossing switched."""
        return KnotDiagram(self.curve, {x: 1 - o for x, o in self.over.items()})

    def rebased(self, k: int) -> KnotDiagram:
        n = len(self.curve.sequence)
        over = dict(self.over)
        if n:
            k %= n
            for x, (p, q) in self.curve.positions().items():
                if p < k <= q:
                    over[x] = 1 - over[x]
        return KnotDiagram(self.curve.rebased(k), over)

    def to_json(self) -> dict:
        data = self.curve.to_json()
        data["over"] = {str(x): ("first" if o == FIRST else "second") for x, o in self.over.items()}
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> KnotDiagram:
        curve = PlaneCurve.from_json(data)
        try:
            raw = data["over"]
            over = {str(x): {"first": FIRST, "second": SECOND}[str(v).lower()] for x, v in raw.items()}
        except (KeyError, AttributeError) as exc:
            raise ValueError(f"malformed knot record: {exc}") from None
        return cls(curve, over)


def resolutions(f: PlaneCurve):
    """All 2^c knot diagrams over ``f``; bit i of the index picks crossing i."""
    labels = f.labels()
    for mask in range(1 << len(labels)):
        yield KnotDiagram(f, {x: (mask >> i) & 1 for i, x in enumerate(labels)})


def crossing_sign(k: KnotDiagram, x) -> int:
    """+1 when (over direction, under direction) is a counterclockwise frame."""
    try:
        h = k.curve.handedness[x]
    except KeyError:
        raise KeyError(f"unknown crossing {x!r}") from None
    return h if k.over[x] == FIRST else -h


def writhe(k: KnotDiagram) -> int:
    return sum(crossing_sign(k, x) for x in k.curve.handedness)


def _lk(pos: Mapping, signs: Mapping, x) -> int:
    p, q = pos[x]
    total = 0
    for y, (a, b) in pos.items():
        if y != x and (p < a < q) != (p < b < q):
            total += signs[y]
    if total % 2:
        raise ArithmeticError("odd inter-component crossing sum: curve is not planar")
    return total // 2


def linking_number(k: KnotDiagram, x) -> int:
    """Linking number of the two-component link from smoothing ``k`` at ``x``."""
    pos = k.curve.positions()
    if x not in pos:
        raise KeyError(f"unknown crossing {x!r}")
    signs = {y: crossing_sign(k, y) for y in pos}
    return _lk(pos, signs, x)


def a2(k: KnotDiagram) -> int:
    """Second Conway coefficient via switching to the descending diagram."""
    pos = k.curve.positions()
    signs = {y: crossing_sign(k, y) for y in pos}
    total = 0
    for x in k.curve.labels():
        if k.over[x] == FIRST:
            continue
        # first visit is an under-passage: a(K) = a(K switched) + sign * lk
        total += signs[x] * _lk(pos, signs, x)
        signs[x] = -signs[x]
    return total


def a2_crosscheck(k: KnotDiagram) -> int:
    """Based Gauss-diagram count: pairs met in the order under(x), over(y),
    over(x), under(y), weighted by the product of their signs."""
    pos = k.curve.positions()
    over_at, under_at = {}, {}
    for x, (p, q) in pos.items():
        if k.over[x] == FIRST:
            over_at[x], under_at[x] = p, q
        else:
            over_at[x], under_at[x] = q, p
    total = 0
    for x, y in itertools.permutations(pos, 2):
        if under_at[x] < over_at[y] < over_at[x] < under_at[y]:
            total += crossing_sign(k, x) * crossing_sign(k, y)
    return total


def _a2_table(f: PlaneCurve, masks: np.ndarray, structure) -> np.ndarray:
    hand, inter, inter_before = structure
    c = len(hand)
    bits = ((masks[:, None] >> np.arange(c)) & 1).astype(np.float32)
    eps = hand[None, :] * (1 - 2 * bits)
    switched = bits * eps
    # twice the linking number seen by each violator at the time it is switched;
    # every entry is a small integer, so float32 products are exact
    twice_lk = eps @ inter - 2 * (switched @ inter_before)
    return np.rint((switched * twice_lk).sum(axis=1)).astype(np.int64) // 2


def _structure(f: PlaneCurve):
    labels = f.labels()
    pos = f.positions()
    c = len(labels)
    hand = np.array([f.handedness[x] for x in labels], dtype=np.float32)
    inter = np.zeros((c, c), dtype=np.float32)
    for i, x in enumerate(labels):
        p, q = pos[x]
        for j, y in enumerate(labels):
            if i != j:
                a, b = pos[y]
                inter[i, j] = int((p < a < q) != (p < b < q))
    # labels are in first-visit order, so y precedes x exactly when j < i
    before = np.tril(np.ones((c, c), dtype=np.float32), -1).T  # before[j, i] = j < i
    return hand, inter, inter * before


def a2_all(f: PlaneCurve) -> np.ndarray:
    """a2 of every resolution, indexed like :func:`resolutions`."""
    c = f.crossing_count
    structure = _structure(f)
    return _a2_table(f, np.arange(1 << c, dtype=np.int64), structure)


def a2_avg(f: PlaneCurve, max_crossings: int = DEFAULT_MAX_CROSSINGS, method: str = "enumerate") -> Fraction:
    """Exact mean of a2 over all 2^c over/under choices.

    ``enumerate`` evaluates the skein recursion on every resolution and refuses
    above the cap.  ``pairs`` averages the arrow-pair count instead: each term
    depends on two crossings only, so the mean over all choices is an O(c^2)
    sum and needs no cap.
    """
    if method == "pairs":
        return a2_avg_pairs(f)
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    c = f.crossing_count
    if c > max_crossings:
        raise ResolutionCapExceeded(c, max_crossings)
    if c == 0:
        return Fraction(0)
    structure = _structure(f)
    total = 0
    for start in range(0, 1 << c, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << c), dtype=np.int64)
        total += int(_a2_table(f, masks, structure).sum())
    return Fraction(total, 1 << c)


def a2_avg_pairs(f: PlaneCurve) -> Fraction:
    """Mean of :func:`a2_crosscheck` over all resolutions, by linearity."""
    labels = f.labels()
    if not labels:
        return Fraction(0)
    pos = f.positions()
    p = np.array([pos[x][0] for x in labels])
    q = np.array([pos[x][1] for x in labels])
    h = np.array([f.handedness[x] for x in labels], dtype=np.int64)
    total = 0
    for bx in (0, 1):
        over_x, under_x = (p, q) if bx == 0 else (q, p)
        sx = h if bx == 0 else -h
        for by in (0, 1):
            over_y, under_y = (p, q) if by == 0 else (q, p)
            sy = h if by == 0 else -h
            cond = (
                (under_x[:, None] < over_y[None, :])
                & (over_y[None, :] < over_x[:, None])
                & (over_x[:, None] < under_y[None, :])
            )
            np.fill_diagonal(cond, False)
            total += int((cond * np.outer(sx, sy)).sum())
    return Fraction(total, 4)


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def fraction_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator, "decimal": _decimal(q)}


def _decimal(q: Fraction) -> str:
    # dyadic values have finite decimal expansions
    if not is_dyadic(q):
        return str(float(q))
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, rest = divmod(q.numerator, q.denominator)
    if rest == 0:
        return f"{sign}{whole}"
    digits = ""
    while rest:
        rest *= 10
        d, rest = divmod(rest, q.denominator)
        digits += str(d)
    return f"{sign}{whole}.{digits}"


def alpha(
    d, n: int | None = None, max_crossings: int = DEFAULT_MAX_CROSSINGS, method: str = "enumerate"
) -> Fraction:
    """Sum of averaged a2 over all n-cycles (default: Hamiltonian cycles)."""
    from .diagram import restrict_to_cycle
    from .graphs import iter_cycles

    g = d.graph
    n = g.order if n is None else n
    total = Fraction(0)
    for gamma in iter_cycles(g, n):
        curve = restrict_to_cycle(d, gamma)
        if method == "enumerate" and curve.crossing_count > max_crossings:
            raise ResolutionCapExceeded(
                curve.crossing_count, max_crossings, "cycle " + " ".join(gamma.names(g))
            )
        total += a2_avg(curve, max_crossings, method)
    return total


def host_kind(g) -> str | None:
    """'K5', 'K3,3' or None for any other host."""
    degrees = sorted(g.degree(v) for v in range(g.order))
    if g.order == 5 and g.size == 10:
        return "K5"
    if g.order == 6 and g.size == 9 and degrees == [3] * 6:
        triangle = any(
            g.edge_between(a, b) is not None and g.edge_between(b, c) is not None and g.edge_between(a, c) is not None
            for a, b, c in itertools.combinations(range(6), 3)
        )
        return None if triangle else "K3,3"
    return None


def d_value(d) -> int:
    """Number of crossings made of two vertex-disjoint edges."""
    g = d.graph
    if host_kind(g) is None:
        warnings.warn("d(f) parity is only guaranteed for K5 and K3,3 hosts", stacklevel=2)
    count = 0
    for x in d.crossings.values():
        if g.edges_disjoint(x.first[0], x.second[0]):
            count += 1
    return count
