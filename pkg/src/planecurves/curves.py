"""Plane curves as based Gauss words, their chord diagrams, and pattern search."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Mapping, Sequence

from ._maps import HAND_NAMES, HAND_VALUES, L, R, crossing_order, set_cyclic, trace_faces


class CurveError(ValueError):
    pass


@dataclass(frozen=True, eq=True)
class PlaneCurve:
    """A generic immersion of an oriented circle, combinatorially.

    ``sequence`` lists the crossing labels met from the base point, each twice.
    ``handedness[x]`` is -1 (L) when, walking the first occurrence of ``x``,
    the second strand passes from the left to the right, and +1 (R) otherwise.
    """

    sequence: tuple
    handedness: Mapping[Hashable, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sequence", tuple(self.sequence))
        object.__setattr__(self, "handedness", dict(self.handedness))

    @property
    def crossing_count(self) -> int:
        return len(self.sequence) // 2

    def labels(self) -> list:
        """Crossing labels in order of first occurrence."""
        seen, out = set(), []
        for x in self.sequence:
            if x not in seen:
                seen.add(x)
                out.append(x)
        return out

    def positions(self) -> dict:
        pos: dict = {}
        for i, x in enumerate(self.sequence):
            pos.setdefault(x, []).append(i)
        return {x: tuple(p) for x, p in pos.items()}

    def problems(self) -> list[str]:
        out = []
        counts: dict = {}
        for x in self.sequence:
            counts[x] = counts.get(x, 0) + 1
        for x, k in counts.items():
            if k != 2:
                out.append(f"crossing {x!r} occurs {k} times")
            if self.handedness.get(x) not in (L, R):
                out.append(f"crossing {x!r} has no handedness")
        for x in self.handedness:
            if x not in counts:
                out.append(f"handedness given for absent crossing {x!r}")
        return out

    def check(self) -> None:
        bad = self.problems()
        if bad:
            raise CurveError("; ".join(bad))

    def genus(self) -> int:
        """Genus of the surface carried by the curve's 4-valent map."""
        c = self.crossing_count
        if c == 0:
            return 0
        n = len(self.sequence)
        sigma = [0] * (2 * n)
        for x, (p, q) in self.positions().items():
            # segment i runs from position i to position i + 1
            in1, out1 = 2 * ((p - 1) % n) + 1, 2 * p
            in2, out2 = 2 * ((q - 1) % n) + 1, 2 * q
            set_cyclic(sigma, crossing_order(self.handedness[x], out1, in1, out2, in2))
        faces = len(trace_faces(sigma))
        chi = c - n + faces
        return (2 - chi) // 2

    def is_realizable(self) -> bool:
        return not self.problems() and self.genus() == 0

    def chord_diagram(self) -> ChordDiagram:
        return chord_diagram(self)

    def rebased(self, k: int) -> PlaneCurve:
        """Move the base point forward past ``k`` passages."""
        n = len(self.sequence)
        if n == 0:
            return self
        k %= n
        hand = dict(self.handedness)
        for x, (p, q) in self.positions().items():
            if p < k <= q:
                hand[x] = -hand[x]
        return PlaneCurve(self.sequence[k:] + self.sequence[:k], hand)

    def reversed(self) -> PlaneCurve:
        return PlaneCurve(self.sequence[::-1], {x: -h for x, h in self.handedness.items()})

    def mirror(self) -> PlaneCurve:
        return PlaneCurve(self.sequence, {x: -h for x, h in self.handedness.items()})

    def relabeled(self) -> PlaneCurve:
        """Labels replaced by 1, 2, ... in order of first occurrence."""
        new = {x: i + 1 for i, x in enumerate(self.labels())}
        return PlaneCurve(tuple(new[x] for x in self.sequence), {new[x]: h for x, h in self.handedness.items()})

    def to_json(self) -> dict:
        return {
            "sequence": [str(x) for x in self.sequence],
            "handedness": {str(x): HAND_NAMES[h] for x, h in self.handedness.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> PlaneCurve:
        try:
            seq = tuple(str(x) for x in data["sequence"])
            raw = data.get("handedness", {})
            hand = {str(x): HAND_VALUES[str(h).upper()] for x, h in raw.items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise CurveError(f"malformed curve record: {exc}") from None
        curve = cls(seq, hand)
        curve.check()
        return curve


def curve_from_word(word: Sequence, handedness: Mapping | Sequence | None = None) -> PlaneCurve:
    """Convenience constructor; ``handedness`` may be a mapping, a sequence in
    first-occurrence order, or omitted.

    When omitted, the first planar assignment is used, scanning labels in
    first-occurrence order with the first crossing fixed to R and L tried before
    R for the rest.  A word with no planar assignment raises ``CurveError``.
    """
    labels = []
    for x in word:
        if x not in labels:
            labels.append(x)
    if handedness is None:
        return _planar_assignment(tuple(word), labels)
    elif isinstance(handedness, Mapping):
        hand = {x: HAND_VALUES[h] if isinstance(h, str) else int(h) for x, h in handedness.items()}
    else:
        hand = {x: HAND_VALUES[h] if isinstance(h, str) else int(h) for x, h in zip(labels, handedness)}
    curve = PlaneCurve(tuple(word), hand)
    curve.check()
    return curve


def _planar_assignment(word: tuple, labels: list) -> PlaneCurve:
    c = len(labels)
    for mask in range(1 << max(c - 1, 0)):
        hand = {x: R for x in labels}
        for i, x in enumerate(labels[1:]):
            hand[x] = R if (mask >> (c - 2 - i)) & 1 else L
        curve = PlaneCurve(word, hand)
        curve.check()
        if curve.genus() == 0:
            return curve
    raise CurveError("the Gauss word has no planar handedness assignment")


@dataclass(frozen=True, order=True)
class ChordDiagram:
    """Chords on an oriented circle as a word in 1..c, labels numbered by
    first occurrence from the base point."""

    word: tuple[int, ...]

    def __post_init__(self) -> None:
        word = _normalize(self.word)
        object.__setattr__(self, "word", word)
        counts: dict[int, int] = {}
        for x in word:
            counts[x] = counts.get(x, 0) + 1
        if any(k != 2 for k in counts.values()):
            raise CurveError(f"every chord needs exactly two endpoints: {self.word}")

    @classmethod
    def of(cls, *labels) -> ChordDiagram:
        return cls(tuple(labels))

    @property
    def chords(self) -> int:
        return len(self.word) // 2

    def __len__(self) -> int:
        return self.chords

    def positions(self) -> dict[int, tuple[int, int]]:
        pos: dict[int, list[int]] = {}
        for i, x in enumerate(self.word):
            pos.setdefault(x, []).append(i)
        return {x: (p[0], p[1]) for x, p in pos.items()}

    def partners(self) -> list[int]:
        out = [0] * len(self.word)
        for p, q in self.positions().values():
            out[p], out[q] = q, p
        return out

    def rotate(self, k: int) -> ChordDiagram:
        if not self.word:
            return self
        k %= len(self.word)
        return ChordDiagram(self.word[k:] + self.word[:k])

    def canonical(self) -> ChordDiagram:
        """Lexicographically least normalized rotation."""
        if not self.word:
            return self
        return min(self.rotate(k) for k in range(len(self.word)))

    def restrict(self, keep) -> ChordDiagram:
        keep = set(keep)
        return ChordDiagram(tuple(x for x in self.word if x in keep))

    def interleaved(self, a: int, b: int) -> bool:
        pos = self.positions()
        (p, q), (r, s) = pos[a], pos[b]
        return (p < r < q) != (p < s < q)

    def interleave_counts(self) -> dict[int, int]:
        pos = self.positions()
        return {a: sum(1 for b in pos if b != a and self.interleaved(a, b)) for a in pos}

    def to_json(self) -> dict:
        return {"sequence": list(self.word)}


def _normalize(word: Sequence) -> tuple[int, ...]:
    new: dict = {}
    out = []
    for x in word:
        if x not in new:
            new[x] = len(new) + 1
        out.append(new[x])
    return tuple(out)


def chord_diagram(f: PlaneCurve) -> ChordDiagram:
    """The chord diagram of the curve: its pairing with handedness forgotten."""
    return ChordDiagram(f.sequence)


def equivalent(a: ChordDiagram, b: ChordDiagram) -> bool:
    """Equal up to rotation of the circle; reflections are not identified."""
    return len(a.word) == len(b.word) and a.canonical() == b.canonical()


def gauss_evenness(cd: ChordDiagram) -> bool:
    """Every chord interleaves an even number of chords (necessary for planarity)."""
    return all(k % 2 == 0 for k in cd.interleave_counts().values())


def r1_reducible(f: PlaneCurve | ChordDiagram) -> bool:
    """True when deleting chords with adjacent endpoints empties the diagram."""
    word = f.word if isinstance(f, ChordDiagram) else chord_diagram(f).word
    stack: list[int] = []
    for x in word:
        if stack and stack[-1] == x:
            stack.pop()
        else:
            stack.append(x)
    # the leftover is cyclic: its two ends are adjacent too
    lo, hi = 0, len(stack) - 1
    while lo < hi and stack[lo] == stack[hi]:
        lo += 1
        hi -= 1
    return lo > hi


def _pattern_rotations(pat: ChordDiagram) -> list[tuple[tuple[int, ...], dict[int, int]]]:
    """Distinct normalized rotations of ``pat`` with a map back to pat's labels."""
    out, seen = [], set()
    n = len(pat.word)
    for k in range(max(n, 1)):
        rotated = pat.word[k:] + pat.word[:k]
        norm = _normalize(rotated)
        if norm in seen:
            continue
        seen.add(norm)
        back = {nl: ol for nl, ol in zip(norm, rotated)}
        out.append((norm, back))
    return out


def _embed(big: ChordDiagram, w: tuple[int, ...]) -> dict[int, int] | None:
    """Increasing positions of ``big`` whose induced word equals ``w`` exactly."""
    bw = big.word
    partner = big.partners()
    m, n = len(w), len(bw)
    wpos: dict[int, list[int]] = {}
    for i, x in enumerate(w):
        wpos.setdefault(x, []).append(i)
    close_at = {x: p[1] for x, p in wpos.items()}
    chosen = [0] * m
    assign: dict[int, int] = {}  # pattern label -> big position of its first endpoint
    pending: list[int] = []  # pattern labels opened but not closed

    def rec(i: int, lo: int) -> bool:
        if i == m:
            return True
        lab = w[i]
        if lab in assign:
            pos = partner[assign[lab]]
            if pos < lo:
                return False
            chosen[i] = pos
            pending.remove(lab)
            ok = rec(i + 1, pos + 1)
            if not ok:
                pending.append(lab)
            return ok
        # open a new chord: leave room for the remaining m - i - 1 endpoints
        for p in range(lo, n - (m - i - 1)):
            q = partner[p]
            if q < p:
                continue
            fits = True
            for other in pending:
                oq = partner[assign[other]]
                if (close_at[other] < close_at[lab]) != (oq < q):
                    fits = False
                    break
            if not fits:
                continue
            assign[lab] = p
            pending.append(lab)
            chosen[i] = p
            if rec(i + 1, p + 1):
                return True
            pending.remove(lab)
            del assign[lab]
        return False

    if not rec(0, 0):
        return None
    return {lab: bw[p] for lab, p in assign.items()}


def contains_subchord(big: ChordDiagram, pat: ChordDiagram) -> dict[int, int] | None:
    """Find chords of ``big`` forming a sub-chord diagram equivalent to ``pat``.

    Returns a map from pattern chord label to ``big`` chord label, or None.
    """
    if pat.chords == 0:
        return {}
    if pat.chords > big.chords:
        return None
    for w, back in _pattern_rotations(pat):
        hit = _embed(big, w)
        if hit is not None:
            return {back[lab]: b for lab, b in hit.items()}
    return None


def verify_injection(big: ChordDiagram, pat: ChordDiagram, injection: Mapping[int, int]) -> bool:
    """Re-check a witness from scratch: the chosen chords induce ``pat``."""
    chosen = set(injection.values())
    if len(chosen) != pat.chords or set(injection) != set(range(1, pat.chords + 1)):
        return False
    return equivalent(big.restrict(chosen), pat)


# Presets validated against the knot oracle on every realizable curve with at
# most five crossings (see tests/test_acceptance.py).
C1 = ChordDiagram((1, 2, 1, 2))
C2 = ChordDiagram((1, 2, 1, 3, 2, 3))
PRESETS = {"C1": C1, "C2": C2}


def load_pattern(spec: str) -> ChordDiagram:
    """``C1``/``C2`` or a JSON file holding ``{"sequence": [...]}``."""
    if spec.upper() in PRESETS:
        return PRESETS[spec.upper()]
    path = Path(spec)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CurveError(f"cannot read pattern {spec!r}: {exc}") from None
    try:
        return ChordDiagram(tuple(data["sequence"]))
    except (KeyError, TypeError) as exc:
        raise CurveError(f"malformed pattern file {spec!r}: {exc}") from None
