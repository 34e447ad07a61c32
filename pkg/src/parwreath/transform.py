"""Transformations of {0, ..., k-1}, kernels and uniform partitions.

Transformations act on the right: ``compose(f, g)`` applies ``f`` first, so
point ``p`` goes to ``g.images[f.images[p]]``.  Points are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeMismatchError, InvalidDegreeError, NotInvertibleError


@dataclass(frozen=True, slots=True)
class Transformation:
    """A total map on ``{0, ..., degree-1}`` stored as its image table."""

    images: tuple[int, ...]

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(v) for v in images)
        k = len(imgs)
        if k < 1:
            raise InvalidDegreeError("a transformation needs degree >= 1")
        for p, v in enumerate(imgs):
            if not 0 <= v < k:
                raise InvalidDegreeError(f"image {v} of point {p} is outside [0, {k - 1}]")
        object.__setattr__(self, "images", imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, p: int) -> int:
        return self.images[p]

    def __mul__(self, other: Transformation) -> Transformation:
        return compose(self, other)

    def __len__(self) -> int:
        return len(self.images)

    def __repr__(self) -> str:
        return f"Transformation({list(self.images)})"

    def __str__(self) -> str:
        return " ".join(map(str, self.images))

    def image_size(self) -> int:
        return len(set(self.images))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.uint8 if self.degree <= 256 else np.uint16)

    @classmethod
    def from_array(cls, row: Sequence[int] | np.ndarray) -> Transformation:
        return cls(int(v) for v in row)


@dataclass(frozen=True, slots=True)
class Kernel:
    """Kernel of a transformation as a canonical class-id table.

    Class ids are numbered in order of first occurrence, so two kernels are
    equal exactly when their tables are equal.
    """

    class_of: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.class_of)

    @property
    def class_count(self) -> int:
        return max(self.class_of) + 1 if self.class_of else 0

    def classes(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.class_count)]
        for p, c in enumerate(self.class_of):
            out[c].add(p)
        return [frozenset(c) for c in out]

    def related(self, p: int, q: int) -> bool:
        return self.class_of[p] == self.class_of[q]

    def is_discrete(self) -> bool:
        return self.class_count == self.degree

    def refines(self, other: Kernel) -> bool:
        """True if every class of ``self`` lies inside a class of ``other``."""
        if self.degree != other.degree:
            raise DegreeMismatchError("kernels of different degree")
        rep: dict[int, int] = {}
        for a, b in zip(self.class_of, other.class_of):
            if rep.setdefault(a, b) != b:
                return False
        return True

    def pairs(self) -> set[tuple[int, int]]:
        """The kernel as a relation (includes the diagonal)."""
        groups = self.classes()
        return {(p, q) for c in groups for p in c for q in c}


@dataclass(frozen=True, slots=True)
class UniformPartition:
    """``block_count`` blocks of ``block_size`` points in the canonical layout.

    Block ``z`` is ``{n*z, ..., n*z + n - 1}`` and point ``(y, z)`` of ``Y x Z``
    is stored at index ``y + n*z``.
    """

    block_size: int
    block_count: int

    def __post_init__(self):
        if self.block_size < 1 or self.block_count < 1:
            raise InvalidDegreeError("block size and block count must be >= 1")

    @property
    def n(self) -> int:
        return self.block_size

    @property
    def m(self) -> int:
        return self.block_count

    @property
    def degree(self) -> int:
        return self.block_size * self.block_count

    def non_trivial(self) -> bool:
        return self.block_size >= 2 and self.block_count >= 2

    def encode(self, y: int, z: int) -> int:
        if not (0 <= y < self.block_size and 0 <= z < self.block_count):
            raise ValueError(f"({y}, {z}) is outside Y x Z")
        return y + self.block_size * z

    def decode(self, p: int) -> tuple[int, int]:
        if not 0 <= p < self.degree:
            raise ValueError(f"point {p} is outside [0, {self.degree - 1}]")
        return p % self.block_size, p // self.block_size

    def block_of(self, p: int) -> int:
        return p // self.block_size

    def blocks(self) -> list[range]:
        n = self.block_size
        return [range(n * z, n * z + n) for z in range(self.block_count)]


def identity(k: int) -> Transformation:
    if k < 1:
        raise InvalidDegreeError(f"degree must be >= 1, got {k}")
    return Transformation(range(k))


def compose(f: Transformation, g: Transformation) -> Transformation:
    """``f`` then ``g``."""
    if f.degree != g.degree:
        raise DegreeMismatchError(f"cannot compose degree {f.degree} with degree {g.degree}")
    gi = g.images
    return Transformation(gi[v] for v in f.images)


def compose_all(fs: Iterable[Transformation], k: int) -> Transformation:
    out = identity(k)
    for f in fs:
        out = compose(out, f)
    return out


def power(f: Transformation, e: int) -> Transformation:
    out = identity(f.degree)
    for _ in range(e):
        out = compose(out, f)
    return out


def is_permutation(f: Transformation) -> bool:
    return len(set(f.images)) == f.degree


def inverse(f: Transformation) -> Transformation:
    if not is_permutation(f):
        raise NotInvertibleError(f"{list(f.images)} is not a permutation")
    inv = [0] * f.degree
    for p, v in enumerate(f.images):
        inv[v] = p
    return Transformation(inv)


def kernel(f: Transformation) -> Kernel:
    ids: dict[int, int] = {}
    return Kernel(tuple(ids.setdefault(v, len(ids)) for v in f.images))


def cycle(k: int, points: Sequence[int]) -> Transformation:
    """The permutation sending ``points[i]`` to ``points[i+1]`` cyclically."""
    if k < 1:
        raise InvalidDegreeError(f"degree must be >= 1, got {k}")
    if len(set(points)) != len(points):
        raise ValueError(f"repeated point in cycle {list(points)}")
    imgs = list(range(k))
    for i, p in enumerate(points):
        if not 0 <= p < k:
            raise ValueError(f"cycle point {p} is outside [0, {k - 1}]")
        imgs[p] = points[(i + 1) % len(points)]
    return Transformation(imgs)


def constant(k: int, value: int = 0) -> Transformation:
    return Transformation([value] * k)
