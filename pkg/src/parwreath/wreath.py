"""Wreath products of transformation monoids in semidirect-product form.

An element ``(s_0, ..., s_{m-1}) r`` acts on ``Y x Z`` by
``(y, z) -> (y s_z, z r)``.  Elements are stored as the tuple of bottom maps
plus the top map; :func:`flatten` turns one into a transformation of
``{0, ..., n*m - 1}`` using the canonical layout ``(y, z) <-> y + n*z``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DegreeMismatchError,
    NotInvertibleError,
    NotPartitionPreservingError,
    ParseError,
)
from .transform import (
    Transformation,
    UniformPartition,
    compose,
    identity,
    inverse,
    is_permutation,
)


@dataclass(frozen=True)
class WreathElement:
    bottoms: tuple[Transformation, ...]
    top: Transformation

    def __post_init__(self):
        object.__setattr__(self, "bottoms", tuple(self.bottoms))
        if len(self.bottoms) != self.top.degree:
            raise DegreeMismatchError(
                f"{len(self.bottoms)} bottom maps for a top map of degree {self.top.degree}"
            )
        n = self.bottoms[0].degree
        if any(s.degree != n for s in self.bottoms):
            raise DegreeMismatchError("bottom maps must share one degree")

    @property
    def n(self) -> int:
        return self.bottoms[0].degree

    @property
    def m(self) -> int:
        return self.top.degree

    def __mul__(self, other: WreathElement) -> WreathElement:
        return multiply(self, other)

    def __str__(self) -> str:
        return format_element(self)


def wreath_identity(n: int, m: int) -> WreathElement:
    return WreathElement(tuple(identity(n) for _ in range(m)), identity(m))


def embed_bottom(s: Transformation, i: int, m: int) -> WreathElement:
    """``s`` placed in component ``i`` with identities elsewhere and identity top."""
    if not 0 <= i < m:
        raise ValueError(f"component {i} is outside [0, {m - 1}]")
    idn = identity(s.degree)
    return WreathElement(tuple(s if j == i else idn for j in range(m)), identity(m))


def embed_top(r: Transformation, n: int) -> WreathElement:
    return WreathElement(tuple(identity(n) for _ in range(r.degree)), r)


def act(w: WreathElement, y: int, z: int) -> tuple[int, int]:
    if not (0 <= y < w.n and 0 <= z < w.m):
        raise ValueError(f"({y}, {z}) is outside Y x Z for n={w.n}, m={w.m}")
    return w.bottoms[z].images[y], w.top.images[z]


def theta(r: Transformation, bottoms: Sequence[Transformation]) -> tuple[Transformation, ...]:
    """Rearrange a tuple of bottom maps by a top map: component ``i`` becomes ``bottoms[i r]``.

    Defined for every top map, invertible or not.
    """
    if r.degree != len(bottoms):
        raise DegreeMismatchError(f"top map of degree {r.degree} against {len(bottoms)} components")
    return tuple(bottoms[j] for j in r.images)


def multiply(w1: WreathElement, w2: WreathElement) -> WreathElement:
    """Product ``(s1 r1)(s2 r2) = (s1 . theta(r1)(s2)) (r1 r2)``."""
    if (w1.n, w1.m) != (w2.n, w2.m):
        raise DegreeMismatchError(f"shapes {(w1.n, w1.m)} and {(w2.n, w2.m)} differ")
    twisted = theta(w1.top, w2.bottoms)
    return WreathElement(
        tuple(compose(a, b) for a, b in zip(w1.bottoms, twisted)),
        compose(w1.top, w2.top),
    )


def conjugate_by_top(r: Transformation, s: WreathElement) -> WreathElement:
    """``r s r^-1`` for a permutation ``r`` of the top set and ``s`` with identity top."""
    if not is_permutation(r):
        raise NotInvertibleError("conjugation needs an invertible top map")
    if s.top != identity(s.m):
        raise ValueError("conjugate_by_top expects an element with identity top")
    return WreathElement(theta(r, s.bottoms), identity(s.m))


def wreath_power(w: WreathElement, e: int) -> WreathElement:
    out = wreath_identity(w.n, w.m)
    for _ in range(e):
        out = multiply(out, w)
    return out


def wreath_inverse(w: WreathElement) -> WreathElement:
    return unflatten(inverse(flatten(w)), UniformPartition(w.n, w.m))


def flatten(w: WreathElement) -> Transformation:
    n = w.n
    imgs = []
    for z, (s, zr) in enumerate(zip(w.bottoms, w.top.images)):
        base = n * zr
        imgs.extend(base + v for v in s.images)
    return Transformation(imgs)


def unflatten(f: Transformation, partition: UniformPartition) -> WreathElement:
    """Recover ``(t_0, ..., t_{m-1}) s`` from a partition-preserving transformation."""
    n, m = partition.block_size, partition.block_count
    if f.degree != n * m:
        raise DegreeMismatchError(f"degree {f.degree} does not match {n} x {m}")
    bottoms = []
    top = []
    for z in range(m):
        block = f.images[n * z : n * z + n]
        targets = {v // n for v in block}
        if len(targets) != 1:
            raise NotPartitionPreservingError(
                f"block {z} is spread over blocks {sorted(targets)}"
            )
        top.append(targets.pop())
        bottoms.append(Transformation(v % n for v in block))
    return WreathElement(tuple(bottoms), Transformation(top))


_TEXT_RE = re.compile(r"^\s*\[(?P<bottoms>[^\]]*)\]\s*;(?P<top>.*)$")


def format_element(w: WreathElement) -> str:
    """Text form ``[s_0 | s_1 | ...] ; r`` with space-separated 0-based images."""
    return "[" + " | ".join(str(s) for s in w.bottoms) + "] ; " + str(w.top)


def parse_element(text: str) -> WreathElement:
    match = _TEXT_RE.match(text)
    if match is None:
        raise ParseError(f"not a wreath element: {text!r}")
    try:
        bottoms = tuple(
            Transformation(int(v) for v in part.split())
            for part in match.group("bottoms").split("|")
        )
        top = Transformation(int(v) for v in match.group("top").split())
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return WreathElement(bottoms, top)
