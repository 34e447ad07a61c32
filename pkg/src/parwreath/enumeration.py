"""Breadth-first monoid closure with hash deduplication.

``closure(U)`` starts from the identity and right-multiplies by every
generator until nothing new appears.  Elements are kept as an ``(N, k)``
uint8 array in BFS order; element 0 is always the identity, so the first
word found for each element is a shortest one.

Frontier expansion may be spread over threads (the compiled kernels release
the GIL).  Candidates are inserted in (element, generator) order no matter how
the work was split, so the enumeration order itself does not depend on the
thread count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import _kernels as K
from .errors import BudgetExceededError, DegreeMismatchError
from .structures import GeneratorSet
from .transform import Transformation

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 2_000_000
_NO_LIMIT = 1 << 62
_CHUNK_CANDIDATES = 1 << 18


@dataclass(eq=False)
class ClosureResult:
    """The enumerated submonoid generated by ``generators``.

    ``complete`` is False when enumeration stopped at the element limit; the
    element set is then only a prefix of the BFS order and ``order`` is the
    partial count.
    """

    degree: int
    array: np.ndarray
    generators: GeneratorSet
    complete: bool = True
    _keys: np.ndarray | None = field(default=None, repr=False)
    _table: np.ndarray | None = field(default=None, repr=False)
    _bits: int = field(default=0, repr=False)
    _index: dict[bytes, int] | None = field(default=None, repr=False)
    _parent: np.ndarray | None = field(default=None, repr=False)
    _via: np.ndarray | None = field(default=None, repr=False)
    _product: np.ndarray | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return int(self.array.shape[0])

    @property
    def overflow(self) -> bool:
        return not self.complete

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    def __len__(self) -> int:
        return self.order

    def __getitem__(self, i: int) -> Transformation:
        return Transformation.from_array(self.array[i])

    def __iter__(self) -> Iterator[Transformation]:
        for row in self.array:
            yield Transformation.from_array(row)

    @property
    def elements(self) -> list[Transformation]:
        return list(self)

    def index(self, f: Transformation | Sequence[int] | np.ndarray) -> int:
        """Position of ``f`` in the enumeration, or -1."""
        row = np.asarray(f.images if isinstance(f, Transformation) else f)
        if row.shape != (self.degree,):
            raise DegreeMismatchError(f"expected degree {self.degree}, got shape {row.shape}")
        return int(self.index_many(row[None, :])[0])

    def index_many(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows)
        if rows.ndim != 2 or rows.shape[1] != self.degree:
            raise DegreeMismatchError(f"expected rows of degree {self.degree}")
        if self._bits:
            keys = K.pack_rows(np.ascontiguousarray(rows, dtype=np.uint8), self._bits)
            return K.find_many(self._table, self._keys, keys)
        dtype = self.array.dtype
        return np.array([self._index.get(r.astype(dtype).tobytes(), -1) for r in rows], dtype=np.int64)

    def __contains__(self, f: Transformation) -> bool:
        return contains(self, f)

    def image_sizes(self) -> np.ndarray:
        srt = np.sort(self.array, axis=1)
        return 1 + (np.diff(srt.astype(np.int64), axis=1) != 0).sum(axis=1)

    def unit_mask(self) -> np.ndarray:
        return self.image_sizes() == self.degree

    @property
    def has_word_log(self) -> bool:
        return self._parent is not None

    def word(self, i: int) -> list[int]:
        """Generator indices whose product (left to right) is element ``i``."""
        if self._parent is None:
            raise ValueError("closure was run without word_log=True")
        out = []
        while i != 0:
            out.append(int(self._via[i]))
            i = int(self._parent[i])
        return out[::-1]

    @property
    def word_log(self) -> list[list[int]] | None:
        if self._parent is None:
            return None
        return [self.word(i) for i in range(self.order)]

    def product_table(self) -> np.ndarray:
        """``table[i, j]`` = index of element i followed by element j (cached)."""
        if not self.complete:
            raise ValueError("product table of an incomplete closure")
        if self._product is None:
            if self._bits:
                self._product = K.product_table(self.array, self._table, self._keys, self._bits)
            else:
                n = self.order
                out = np.empty((n, n), dtype=np.int32)
                for i in range(n):
                    # row j is element j applied after element i
                    out[i] = self.index_many(self.array[:, self.array[i].astype(np.int64)])
                self._product = out
        return self._product

    def element_set(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in row) for row in self.array}


def _initial_arrays(k: int, cap: int, log_words: bool):
    dtype = np.uint8 if k <= 256 else np.uint16
    elems = np.empty((cap, k), dtype=dtype)
    elems[0] = np.arange(k)
    parent = np.zeros(cap if log_words else 1, dtype=np.int32)
    via = np.zeros(cap if log_words else 1, dtype=np.int16)
    return elems, parent, via


def _grow(arr: np.ndarray, cap: int) -> np.ndarray:
    out = np.empty((cap,) + arr.shape[1:], dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


def closure(
    generators: GeneratorSet,
    limit: int | None = None,
    threads: int = 1,
    word_log: bool = False,
) -> ClosureResult:
    """Enumerate the monoid generated by ``generators``.

    When more than ``limit`` elements would be needed, enumeration stops and
    the result comes back with ``complete=False`` instead of raising.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    if len(generators) > 32767 and word_log:
        raise ValueError("word_log supports at most 32767 generators")
    bits = K.packing_bits(generators.degree)
    if bits == 0:
        return _closure_unpacked(generators, limit, word_log)
    return _closure_packed(generators, bits, limit, max(1, threads), word_log)


def _closure_packed(generators, bits, limit, threads, log_words) -> ClosureResult:
    k = generators.degree
    gens = np.ascontiguousarray(generators.to_array(), dtype=np.uint8)
    g = gens.shape[0]
    lim = _NO_LIMIT if limit is None else int(limit)

    cap = 1024
    elems, parent, via = _initial_arrays(k, cap, log_words)
    keys = np.empty(cap, dtype=np.uint64)
    keys[0] = K.pack_rows(elems[:1], bits)[0]
    table = K.rehash(keys, 1, 2 * cap)
    count = 1
    complete = True

    per_chunk = max(1, _CHUNK_CANDIDATES // max(g, 1))
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    buffers = [
        (np.empty((per_chunk * g, k), dtype=np.uint8), np.empty(per_chunk * g, dtype=np.uint64))
        for _ in range(threads)
    ]
    try:
        lo, hi = 0, count
        while lo < hi and complete and g:
            starts = list(range(lo, hi, per_chunk))
            for b in range(0, len(starts), threads):
                batch = starts[b : b + threads]
                jobs = [(s, min(s + per_chunk, hi), buffers[t]) for t, s in enumerate(batch)]
                if pool is None:
                    sizes = [K.expand(elems, s, e, gens, bits, buf[0], buf[1]) for s, e, buf in jobs]
                else:
                    futs = [pool.submit(K.expand, elems, s, e, gens, bits, buf[0], buf[1]) for s, e, buf in jobs]
                    sizes = [f.result() for f in futs]
                for (s, _, (rows, ckeys)), n_cand in zip(jobs, sizes):
                    c = 0
                    while True:
                        count, c, status = K.insert(
                            table, keys, elems, parent, via, count, rows, ckeys, c, n_cand,
                            s, g, lim, log_words,
                        )
                        if status == K.STATUS_DONE:
                            break
                        if status == K.STATUS_OVERFLOW:
                            complete = False
                            break
                        if count >= elems.shape[0]:
                            cap = 2 * elems.shape[0]
                            elems = _grow(elems, cap)
                            keys = _grow(keys, cap)
                            if log_words:
                                parent = _grow(parent, cap)
                                via = _grow(via, cap)
                        if count >= table.shape[0] // 2:
                            table = K.rehash(keys, count, 2 * table.shape[0])
                    if not complete:
                        break
                if not complete:
                    break
            lo, hi = hi, count
    finally:
        if pool is not None:
            pool.shutdown()

    if not complete:
        log.info("closure stopped at limit %d", count)
    return ClosureResult(
        degree=k,
        array=elems[:count].copy(),
        generators=generators,
        complete=complete,
        _keys=keys[:count].copy(),
        _table=table,
        _bits=bits,
        _parent=parent[:count].copy() if log_words else None,
        _via=via[:count].copy() if log_words else None,
    )


def _closure_unpacked(generators, limit, log_words) -> ClosureResult:
    k = generators.degree
    gens = generators.to_array().astype(np.int64)
    dtype = np.uint8 if k <= 256 else np.uint16
    lim = _NO_LIMIT if limit is None else int(limit)
    ident = np.arange(k, dtype=dtype)
    rows = [ident]
    index = {ident.tobytes(): 0}
    parent, via = [0], [0]
    complete = True
    lo, hi = 0, 1
    g = gens.shape[0]
    while lo < hi and complete and g:
        front = np.array(rows[lo:hi], dtype=np.int64)
        cands = np.stack([gen[front] for gen in gens], axis=1).reshape(-1, k).astype(dtype)
        for c, row in enumerate(cands):
            key = row.tobytes()
            if key in index:
                continue
            if len(rows) >= lim:
                complete = False
                break
            index[key] = len(rows)
            rows.append(row)
            parent.append(lo + c // g)
            via.append(c % g)
        lo, hi = hi, len(rows)
    return ClosureResult(
        degree=k,
        array=np.array(rows, dtype=dtype).reshape(len(rows), k),
        generators=generators,
        complete=complete,
        _index=index,
        _parent=np.array(parent, dtype=np.int32) if log_words else None,
        _via=np.array(via, dtype=np.int16) if log_words else None,
    )


def contains(result: ClosureResult, f: Transformation) -> bool:
    if f.degree != result.degree:
        raise DegreeMismatchError(f"degree {f.degree} against a closure of degree {result.degree}")
    return result.index(f) >= 0


def is_generating(generators: GeneratorSet, target_order: int, limit: int | None = None,
                  threads: int = 1) -> bool:
    """Whether ``generators`` generate a monoid of exactly ``target_order`` elements."""
    if target_order < 1:
        raise ValueError("target_order must be >= 1")
    if limit is not None and limit < target_order:
        raise BudgetExceededError(f"limit {limit} is below the target order {target_order}")
    res = closure(generators, limit=target_order, threads=threads)
    return res.complete and res.order == target_order


def unit_indices(result: ClosureResult) -> np.ndarray:
    return np.flatnonzero(result.unit_mask())


def units(result: ClosureResult) -> GeneratorSet:
    """The permutations among the enumerated elements (the group of units)."""
    idx = unit_indices(result)
    return GeneratorSet(
        result.degree,
        tuple(result[int(i)] for i in idx),
        tuple(f"u{int(i)}" for i in idx),
    )


def subset(result: ClosureResult, indices: Sequence[int], prefix: str = "e") -> GeneratorSet:
    idx = [int(i) for i in indices]
    return GeneratorSet(result.degree, tuple(result[i] for i in idx), tuple(f"{prefix}{i}" for i in idx))


def dump_elements(result: ClosureResult, path: str | Path) -> None:
    from .fileio import write_rows

    write_rows(path, result.degree, result.array)


def dump_word_log(result: ClosureResult, path: str | Path) -> None:
    if not result.has_word_log:
        raise ValueError("closure was run without word_log=True")
    with open(path, "w") as fh:
        for i in range(result.order):
            fh.write(f"{i}: " + " ".join(f"g_{j}" for j in result.word(i)) + "\n")


def load_closure(path: str | Path, limit: int | None = None, threads: int = 1) -> ClosureResult:
    """Read an element-set file and close it (a dumped closure reloads to itself)."""
    from .fileio import read_generator_set

    return closure(read_generator_set(path), limit=limit, threads=threads)
