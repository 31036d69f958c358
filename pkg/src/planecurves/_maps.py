"""Dart-level helpers shared by diagrams and curves.

A segment ``s`` owns darts ``2s`` (at its tail) and ``2s + 1`` (at its head);
``d ^ 1`` is the opposite dart.  ``sigma[d]`` is the next dart counterclockwise
around the node of ``d``.  Faces are orbits of ``d -> sigma[d ^ 1]``; walking
dart ``d`` away from its node keeps the face on the right.
"""

from __future__ import annotations

L, R = -1, 1
HAND_NAMES = {L: "L", R: "R"}
HAND_VALUES = {"L": L, "R": R}


def crossing_order(hand: int, out1: int, in1: int, out2: int, in2: int) -> tuple[int, int, int, int]:
    """Counterclockwise order of the four darts at a crossing."""
    if hand == L:
        return (out1, in2, in1, out2)
    return (out1, out2, in1, in2)


def set_cyclic(sigma: list[int], ring) -> None:
    ring = list(ring)
    for i, d in enumerate(ring):
        sigma[d] = ring[(i + 1) % len(ring)]


def trace_faces(sigma: list[int]) -> list[list[int]]:
    seen = [False] * len(sigma)
    faces = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        face = []
        d = start
        while not seen[d]:
            seen[d] = True
            face.append(d)
            d = sigma[d ^ 1]
        faces.append(face)
    return faces
