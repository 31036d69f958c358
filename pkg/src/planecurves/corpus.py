"""Test corpora: chord diagrams and realizable plane curves up to a crossing
bound, and reproducible seed streams for random walks."""

from __future__ import annotations

import functools
import random
from typing import Iterator

from .curves import ChordDiagram, PlaneCurve


def _matchings(n: int) -> Iterator[tuple[int, ...]]:
    """All perfect matchings of n positions as words labelled by first occurrence."""
    word = [0] * n

    def rec(label: int) -> Iterator[tuple[int, ...]]:
        try:
            i = word.index(0)
        except ValueError:
            yield tuple(word)
            return
        word[i] = label
        for j in range(i + 1, n):
            if word[j] == 0:
                word[j] = label
                yield from rec(label + 1)
                word[j] = 0
        word[i] = 0

    yield from rec(1)


def chord_diagrams(c: int) -> list[ChordDiagram]:
    """One representative (the canonical one) per rotation class of c-chord diagrams."""
    out = []
    for w in _matchings(2 * c):
        cd = ChordDiagram(w)
        if cd.canonical() == cd:
            out.append(cd)
    return out


def _curve_key(f: PlaneCurve) -> tuple:
    best = None
    for k in range(max(len(f.sequence), 1)):
        g = f.rebased(k).relabeled()
        key = (g.sequence, tuple(g.handedness[x] for x in g.labels()))
        if best is None or key < best:
            best = key
    return best


@functools.lru_cache(maxsize=None)
def _realizable(c: int) -> tuple[PlaneCurve, ...]:
    if c == 0:
        return (PlaneCurve((), {}),)
    out, seen = [], set()
    for cd in chord_diagrams(c):
        for mask in range(1 << c):
            hand = {x: 1 if (mask >> (x - 1)) & 1 else -1 for x in range(1, c + 1)}
            f = PlaneCurve(cd.word, hand)
            if f.genus() != 0:
                continue
            key = _curve_key(f)
            if key in seen:
                continue
            seen.add(key)
            out.append(PlaneCurve(key[0], {x + 1: h for x, h in enumerate(key[1])}))
    out.sort(key=_curve_key)
    return tuple(out)


def realizable_curves(max_crossings: int, min_crossings: int = 0) -> list[PlaneCurve]:
    """Every spherical curve with the given crossing range, up to moving the base point.

    Curves are enumerated as (Gauss word, handedness) pairs and kept when the
    associated 4-valent map has genus 0.
    """
    out: list[PlaneCurve] = []
    for c in range(min_crossings, max_crossings + 1):
        out.extend(_realizable(c))
    return out


def seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.randrange(2**31) for _ in range(count)]
