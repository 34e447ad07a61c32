"""The partition monoids T(X,P), Sigma(X,P), Gamma(X,P), S(X,P) and their generators.

Every structure lives on ``X = Y x Z`` with ``|Y| = n`` and ``|Z| = m`` in the
canonical layout of :class:`~parwreath.transform.UniformPartition`.  Up to
that layout

* T(X,P)     = T_Y wr T_Z   (blocks map into blocks),
* Sigma(X,P) = T_Y wr Sym_Z (block map is a permutation),
* Gamma(X,P) = Sym_Y wr T_Z (injective on every block),
* S(X,P)     = Sym_Y wr Sym_Z (the unit group of T(X,P)).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DegreeMismatchError, UnsupportedCaseError
from .transform import Transformation, UniformPartition, cycle, identity, is_permutation
from .wreath import WreathElement, embed_bottom, embed_top, flatten


class StructureKind(enum.Enum):
    TXP = "txp"
    SIGMA = "sigma"
    GAMMA = "gamma"
    SXP = "sxp"

    @classmethod
    def parse(cls, text: str | StructureKind) -> StructureKind:
        if isinstance(text, StructureKind):
            return text
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown structure {text!r}; expected one of txp, sigma, gamma, sxp") from None

    @property
    def bottom_is_full(self) -> bool:
        return self in (StructureKind.TXP, StructureKind.SIGMA)

    @property
    def top_is_full(self) -> bool:
        return self in (StructureKind.TXP, StructureKind.GAMMA)

    @property
    def label(self) -> str:
        return {
            StructureKind.TXP: "T(X,P)",
            StructureKind.SIGMA: "Sigma(X,P)",
            StructureKind.GAMMA: "Gamma(X,P)",
            StructureKind.SXP: "S(X,P)",
        }[self]


@dataclass(frozen=True)
class GeneratorSet:
    degree: int
    elements: tuple[Transformation, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        elements = tuple(self.elements)
        labels = tuple(self.labels) if self.labels else tuple(f"g{i}" for i in range(len(elements)))
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "labels", labels)
        if len(labels) != len(elements):
            raise ValueError("one label per element is required")
        if len(set(labels)) != len(labels):
            raise ValueError(f"labels must be unique: {labels}")
        for f in elements:
            if f.degree != self.degree:
                raise DegreeMismatchError(f"element of degree {f.degree} in a degree-{self.degree} set")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Transformation]:
        return iter(self.elements)

    def __getitem__(self, key: int | str) -> Transformation:
        if isinstance(key, str):
            return self.elements[self.labels.index(key)]
        return self.elements[key]

    def union(self, other: GeneratorSet) -> GeneratorSet:
        if other.degree != self.degree:
            raise DegreeMismatchError("generator sets of different degree")
        labels = list(self.labels)
        for lab in other.labels:
            base, i = lab, 1
            while lab in labels:
                lab = f"{base}_{i}"
                i += 1
            labels.append(lab)
        return GeneratorSet(self.degree, self.elements + other.elements, tuple(labels))

    def to_array(self) -> np.ndarray:
        dtype = np.uint8 if self.degree <= 256 else np.uint16
        if not self.elements:
            return np.zeros((0, self.degree), dtype=dtype)
        return np.array([f.images for f in self.elements], dtype=dtype)

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Transformation], prefix: str = "g") -> GeneratorSet:
        elements = tuple(elements)
        return cls(degree, elements, tuple(f"{prefix}{i}" for i in range(len(elements))))


def _check_degree(f: Transformation, partition: UniformPartition) -> None:
    if f.degree != partition.degree:
        raise DegreeMismatchError(f"degree {f.degree} does not match the partition's {partition.degree} points")


def membership(f: Transformation, partition: UniformPartition, kind: StructureKind | str) -> bool:
    kind = StructureKind.parse(kind)
    _check_degree(f, partition)
    n = partition.block_size
    top = []
    for block in partition.blocks():
        images = [f.images[p] for p in block]
        targets = {v // n for v in images}
        if len(targets) != 1:
            return False
        if kind is StructureKind.GAMMA and len(set(images)) != n:
            return False
        top.append(targets.pop())
    if kind is StructureKind.SIGMA:
        return len(set(top)) == len(top)
    if kind is StructureKind.SXP:
        return is_permutation(f)
    return True


def membership_mask(maps: np.ndarray, partition: UniformPartition, kind: StructureKind | str) -> np.ndarray:
    """Row-wise :func:`membership` for an ``(N, n*m)`` array of image tables."""
    kind = StructureKind.parse(kind)
    n, m = partition.block_size, partition.block_count
    arr = np.asarray(maps).reshape(-1, m, n)
    blocks = arr // n
    ok = (blocks == blocks[:, :, :1]).all(axis=(1, 2))
    if kind is StructureKind.TXP:
        return ok
    if kind is StructureKind.SIGMA:
        top = np.sort(blocks[:, :, 0], axis=1)
        return ok & (np.diff(top, axis=1) != 0).all(axis=1)
    if kind is StructureKind.GAMMA:
        within = np.sort(arr, axis=2)
        return ok & (np.diff(within, axis=2) != 0).all(axis=(1, 2))
    flat = np.sort(arr.reshape(arr.shape[0], -1), axis=1)
    return ok & (np.diff(flat, axis=1) != 0).all(axis=1)


def order_formula(n: int, m: int, kind: StructureKind | str) -> int:
    kind = StructureKind.parse(kind)
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    bottom = n**n if kind.bottom_is_full else math.factorial(n)
    top = m**m if kind.top_is_full else math.factorial(m)
    return bottom**m * top


def symmetric_group_generators(k: int) -> GeneratorSet:
    if k < 1:
        raise ValueError("degree must be >= 1")
    if k == 1:
        return GeneratorSet(1)
    if k == 2:
        return GeneratorSet(2, (cycle(2, [0, 1]),), ("transposition",))
    return GeneratorSet(k, (cycle(k, [0, 1]), cycle(k, list(range(k)))), ("transposition", "cycle"))


def collapse_map(k: int) -> Transformation:
    """The map sending 0 to 1 and fixing everything else (identity when k = 1)."""
    if k == 1:
        return identity(1)
    return Transformation([1] + list(range(1, k)))


def full_transformation_generators(k: int) -> GeneratorSet:
    sym = symmetric_group_generators(k)
    if k == 1:
        return sym
    return GeneratorSet(k, sym.elements + (collapse_map(k),), sym.labels + ("collapse",))


def degenerate_identity(n: int, m: int, kind: StructureKind | str) -> str:
    """What a structure collapses to on a trivial partition."""
    kind = StructureKind.parse(kind)
    if m == 1:
        full = kind.bottom_is_full
    else:  # n == 1: singleton blocks
        full = kind.top_is_full
    return f"{kind.label} = {'T_X' if full else 'Sym_X'}"


def _require_non_trivial(n: int, m: int, kind: StructureKind) -> None:
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if n < 2 or m < 2:
        ident = degenerate_identity(n, m, kind)
        classical = "rank 3 when |X| >= 3" if ident.endswith("T_X") else "rank 2 when |X| >= 3"
        raise UnsupportedCaseError(
            f"partition with n={n}, m={m} is trivial: {ident} ({classical})", identity=ident
        )


def paper_elements(n: int, m: int) -> dict[str, WreathElement]:
    """The wreath elements x, y, alpha, beta for ``n, m >= 2``.

    x = (id, (0 1), id, ..., id) * (0 1 ... m-1) when n or m is odd, otherwise the
    top is (1 2 ... m-1); y = ((0 1 ... n-1), id, ..., id) * (0 1);
    alpha = (c, id, ..., id) * id and beta = (id, ..., id) * c where c maps 0 to 1
    and fixes the rest.
    """
    if n < 2 or m < 2:
        raise ValueError("x, y, alpha, beta need n, m >= 2")
    idn = identity(n)
    if n % 2 == 1 or m % 2 == 1:
        x_top = cycle(m, list(range(m)))
    else:
        x_top = cycle(m, list(range(1, m)))
    x = WreathElement(tuple(cycle(n, [0, 1]) if i == 1 else idn for i in range(m)), x_top)
    y = WreathElement(
        tuple(cycle(n, list(range(n))) if i == 0 else idn for i in range(m)), cycle(m, [0, 1])
    )
    alpha = embed_bottom(collapse_map(n), 0, m)
    beta = embed_top(collapse_map(m), n)
    return {"x": x, "y": y, "alpha": alpha, "beta": beta}


_GENERATOR_LABELS = {
    StructureKind.SXP: ("x", "y"),
    StructureKind.SIGMA: ("x", "y", "alpha"),
    StructureKind.GAMMA: ("x", "y", "beta"),
    StructureKind.TXP: ("x", "y", "alpha", "beta"),
}


def paper_generators(n: int, m: int, kind: StructureKind | str) -> GeneratorSet:
    """Generating set of minimum size for a non-trivial partition, flattened to degree n*m."""
    kind = StructureKind.parse(kind)
    _require_non_trivial(n, m, kind)
    elems = paper_elements(n, m)
    labels = _GENERATOR_LABELS[kind]
    return GeneratorSet(n * m, tuple(flatten(elems[lab]) for lab in labels), labels)


def component_generators(n: int, m: int, kind: StructureKind | str) -> GeneratorSet:
    """Generators of the bottom monoid in component 0 plus generators of the top monoid.

    Valid for every ``n, m >= 1`` (the top symmetric group moves component 0
    onto every other component), so it also covers trivial partitions.
    """
    kind = StructureKind.parse(kind)
    bottom = full_transformation_generators(n) if kind.bottom_is_full else symmetric_group_generators(n)
    top = full_transformation_generators(m) if kind.top_is_full else symmetric_group_generators(m)
    elements = [flatten(embed_bottom(s, 0, m)) for s in bottom]
    elements += [flatten(embed_top(r, n)) for r in top]
    labels = [f"bottom_{lab}" for lab in bottom.labels] + [f"top_{lab}" for lab in top.labels]
    return GeneratorSet(n * m, tuple(elements), tuple(labels))


def structure_generators(n: int, m: int, kind: StructureKind | str) -> GeneratorSet:
    """The x, y, alpha, beta generators when the partition is non-trivial, component generators otherwise."""
    kind = StructureKind.parse(kind)
    if n >= 2 and m >= 2:
        return paper_generators(n, m, kind)
    return component_generators(n, m, kind)


def unit_group_generators(n: int, m: int) -> GeneratorSet:
    return structure_generators(n, m, StructureKind.SXP)


def iter_all_maps(k: int, chunk: int = 1 << 18) -> Iterator[np.ndarray]:
    """All ``k**k`` image tables in lexicographic order, in chunks of rows."""
    total = k**k
    weights = np.array([k ** (k - 1 - p) for p in range(k)], dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield ((idx[:, None] // weights[None, :]) % k).astype(np.uint8)


def filter_elements(n: int, m: int, kind: StructureKind | str) -> np.ndarray:
    """Brute force: every map of degree n*m that passes :func:`membership_mask`."""
    partition = UniformPartition(n, m)
    parts = [rows[membership_mask(rows, partition, kind)] for rows in iter_all_maps(n * m)]
    return np.concatenate(parts, axis=0)


def _all_bottoms(k: int, full: bool) -> list[tuple[int, ...]]:
    if full:
        return list(itertools.product(range(k), repeat=k))
    return list(itertools.permutations(range(k)))


def wreath_elements(n: int, m: int, kind: StructureKind | str) -> np.ndarray:
    """Flattened image tables of every element of the matching wreath product."""
    kind = StructureKind.parse(kind)
    bottoms = np.array(_all_bottoms(n, kind.bottom_is_full), dtype=np.int64)
    tops = np.array(_all_bottoms(m, kind.top_is_full), dtype=np.int64)
    rows = []
    for choice in itertools.product(range(len(bottoms)), repeat=m):
        bottom_part = bottoms[list(choice)]  # (m, n)
        # image of y + n*z is bottom_part[z, y] + n * top[z]
        imgs = bottom_part[None, :, :] + n * tops[:, :, None]
        rows.append(imgs.reshape(len(tops), n * m))
    return np.concatenate(rows, axis=0).astype(np.uint8)


def sort_rows(rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows)
    if rows.shape[0] == 0:
        return rows
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def same_element_set(a: np.ndarray, b: np.ndarray) -> bool:
    a, b = sort_rows(a), sort_rows(b)
    return a.shape == b.shape and bool((a == b).all())


def check_generators(gens: Sequence[Transformation], partition: UniformPartition, kind: StructureKind) -> bool:
    return all(membership(f, partition, kind) for f in gens)
