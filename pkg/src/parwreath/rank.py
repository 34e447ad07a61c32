"""Rank and relative rank by exhaustive subset search.

All searches run on the product table of an enumerated monoid, so testing a
candidate generating set is a BFS over element indices.  Candidates of size
0, 1, 2, ... are tried in order, so the first success is minimal; every
smaller size has been exhausted and the number of rejected candidates is
reported as the certificate.

Two reductions are available, both sound:

* symmetry: if a unit ``g`` of the fixed part is available, ``V`` generates
  iff ``g^-1 V g`` does, so the first member of ``V`` only ranges over
  conjugacy-class representatives;
* unit pruning: a generating set of a finite transformation monoid must
  contain a generating set of its unit group, so subsets whose units fall
  short are skipped without a closure.
"""

from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _kernels as K
from .enumeration import ClosureResult, closure, subset, unit_indices
from .errors import BudgetExceededError, DegreeMismatchError
from .structures import GeneratorSet, StructureKind, structure_generators

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**9
TABLE_LIMIT = 6000


class Quantity(enum.Enum):
    RANK = "rank"
    RELATIVE_RANK = "relative_rank"
    GROUP_RANK = "group_rank"


class Method(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    LEMMA1_DECOMPOSED = "lemma1"


@dataclass
class Certificate:
    search_space: str
    rejected_count: int = 0
    pruned_count: int = 0
    per_size: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "search_space": self.search_space,
            "rejected_count": self.rejected_count,
            "pruned_count": self.pruned_count,
            "per_size": {str(k): v for k, v in sorted(self.per_size.items())},
        }


@dataclass
class RankReport:
    quantity: Quantity
    value: int
    witness: GeneratorSet
    certificate: Certificate
    method: Method = Method.EXHAUSTIVE
    elapsed: float = 0.0
    fixed: GeneratorSet | None = None
    exceeds_max_k: bool = False
    structure: str | None = None
    parts: list[RankReport] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "quantity": self.quantity.value,
            "value": self.value,
            "method": self.method.value,
            "exceeds_max_k": self.exceeds_max_k,
            "witness": [str(f) for f in self.witness],
            "witness_labels": list(self.witness.labels),
            "certificate": self.certificate.to_dict(),
        }
        if self.structure is not None:
            out["structure"] = self.structure
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out


class _Search:
    """Buffers and product table for repeated subset tests on one monoid."""

    def __init__(self, monoid: ClosureResult):
        if not monoid.complete:
            raise ValueError("rank search needs a completely enumerated monoid")
        if monoid.order > TABLE_LIMIT:
            raise BudgetExceededError(
                f"monoid of order {monoid.order} exceeds the product-table limit {TABLE_LIMIT}"
            )
        self.monoid = monoid
        self.table = monoid.product_table()
        self.n = monoid.order
        self.seen = np.zeros(self.n, dtype=np.int64)
        self.queue = np.empty(self.n, dtype=np.int64)
        self.stamp = 0

    def generated(self, gens) -> np.ndarray:
        """Boolean mask of the submonoid generated by element indices ``gens``."""
        gens = np.asarray(gens, dtype=np.int64)
        self.stamp += 1
        K.generated_count(self.table, gens, gens.shape[0], self.seen, self.stamp, self.queue)
        return self.seen == self.stamp

    def generated_size(self, gens) -> int:
        gens = np.asarray(gens, dtype=np.int64)
        self.stamp += 1
        return int(K.generated_count(self.table, gens, gens.shape[0], self.seen, self.stamp, self.queue))

    def reduce(self, gens) -> list[int]:
        """A subsequence of ``gens`` generating the same submonoid."""
        kept: list[int] = []
        reached = self.generated([])
        for g in gens:
            if not reached[g]:
                kept.append(int(g))
                reached = self.generated(kept)
        return kept

    def inverse_indices(self, units: np.ndarray) -> np.ndarray:
        inv = np.full(self.n, -1, dtype=np.int64)
        ident_rows = self.table[np.ix_(units, units)] == 0
        for a, b in zip(*np.nonzero(ident_rows)):
            inv[units[a]] = units[b]
        return inv

    def orbit_ids(self, group_gens: list[int], units: np.ndarray) -> np.ndarray:
        inv = self.inverse_indices(units)
        return K.conjugation_orbits(self.table, inv, np.asarray(group_gens, dtype=np.int64), self.n)


def _pool_order(monoid: ClosureResult, candidates: np.ndarray) -> np.ndarray:
    """Candidates sorted by image size (largest first), then enumeration index."""
    sizes = monoid.image_sizes()[candidates]
    order = np.lexsort((candidates, -sizes))
    return candidates[order].astype(np.int64)


def _run_search(
    search: _Search,
    fixed: list[int],
    pool: np.ndarray,
    max_k: int,
    *,
    symmetry_gens: list[int] | None,
    units: np.ndarray | None,
    prune: bool,
    threads: int,
    budget: int,
    description: str,
):
    """Return ``(value, witness_indices, certificate, exceeds)``."""
    n = search.n
    cert = Certificate(description)
    unit_mask = np.zeros(n, dtype=np.bool_)
    group_order = 0
    if units is not None:
        unit_mask[units] = True
        group_order = len(units)

    if search.generated_size(fixed) == n:
        return 0, [], cert, False
    cert.per_size[0] = 1
    cert.rejected_count = 1
    calls = 1

    if symmetry_gens is not None and len(symmetry_gens) > 0:
        orbit = search.orbit_ids(symmetry_gens, units)
        _, first_pos = np.unique(orbit[pool], return_index=True)
        firsts = np.sort(first_pos).astype(np.int64)
        after_first = False
    else:
        firsts = np.arange(pool.shape[0], dtype=np.int64)
        after_first = True

    fixed_arr = np.asarray(fixed, dtype=np.int64)
    threads = max(1, threads)
    chunks = np.array_split(firsts, threads * 4 if threads > 1 else 1)
    chunks = [c for c in chunks if c.size]
    buffers = [(np.zeros(n, dtype=np.int64), np.empty(n, dtype=np.int64)) for _ in range(threads)]
    pool_exec = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for r in range(1, max_k + 1):
            rejected_here = 0
            pruned_here = 0
            found = None
            for b in range(0, len(chunks), threads):
                batch = chunks[b : b + threads]
                remaining = budget - calls
                args = [
                    (search.table, pool, ch, r, after_first, fixed_arr, n, unit_mask, group_order,
                     prune, remaining, buffers[t][0], buffers[t][1], 0)
                    for t, ch in enumerate(batch)
                ]
                if pool_exec is None:
                    results = [K.scan_subsets(*a) for a in args]
                else:
                    results = [f.result() for f in [pool_exec.submit(K.scan_subsets, *a) for a in args]]
                for t in range(len(batch)):
                    buffers[t][0][:] = 0
                for ok, combo, tested, pruned, budget_hit, _ in results:
                    calls += tested + (1 if ok else 0)
                    rejected_here += tested
                    pruned_here += pruned
                    if budget_hit or calls > budget:
                        cert.per_size[r] = rejected_here + pruned_here
                        cert.rejected_count += rejected_here + pruned_here
                        cert.pruned_count += pruned_here
                        raise BudgetExceededError(
                            f"search budget of {budget} closure calls exhausted at size {r}", partial=cert
                        )
                    if ok and found is None:
                        found = [int(pool[p]) for p in combo[:r]]
                if found is not None:
                    return r, found, cert, False
            cert.per_size[r] = rejected_here + pruned_here
            cert.rejected_count += rejected_here + pruned_here
            cert.pruned_count += pruned_here
            log.debug("size %d exhausted: %d rejected", r, rejected_here + pruned_here)
    finally:
        if pool_exec is not None:
            pool_exec.shutdown()
    return max_k + 1, [], cert, True


def rank_exhaustive(
    monoid: ClosureResult,
    max_k: int,
    *,
    symmetry: bool | None = None,
    prune_units: bool = False,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
    quantity: Quantity = Quantity.RANK,
) -> RankReport:
    """Smallest number of elements of ``monoid`` that generate it.

    ``symmetry`` defaults to on for groups and off otherwise, so a monoid
    search enumerates every subset literally.  ``prune_units`` skips subsets
    whose units do not generate the unit group.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    start = time.perf_counter()
    search = _Search(monoid)
    units = unit_indices(monoid)
    is_group = len(units) == monoid.order
    if symmetry is None:
        symmetry = is_group
    group_gens = search.reduce(units) if (symmetry or prune_units) else None
    pool = _pool_order(monoid, np.arange(monoid.order))
    desc = f"subsets of the {monoid.order} elements"
    if symmetry:
        desc += ", first member up to conjugation by the unit group"
    if prune_units:
        desc += ", skipping subsets whose units do not generate the unit group"
    value, wit, cert, exceeds = _run_search(
        search, [], pool, max_k,
        symmetry_gens=group_gens if symmetry else None,
        units=units, prune=prune_units, threads=threads, budget=budget, description=desc,
    )
    if quantity is Quantity.RANK and is_group:
        quantity = Quantity.GROUP_RANK
    return RankReport(
        quantity=quantity,
        value=value,
        witness=subset(monoid, wit),
        certificate=cert,
        elapsed=time.perf_counter() - start,
        exceeds_max_k=exceeds,
    )


def _indices_in(monoid: ClosureResult, gens: GeneratorSet) -> list[int]:
    if gens.degree != monoid.degree:
        raise DegreeMismatchError("generator degree differs from the monoid's")
    idx = monoid.index_many(gens.to_array()) if len(gens) else np.zeros(0, dtype=np.int64)
    if (idx < 0).any():
        raise ValueError("every element of the fixed set must lie in the monoid")
    return [int(i) for i in idx]


def relative_rank(
    monoid: ClosureResult,
    fixed: GeneratorSet,
    max_k: int,
    *,
    symmetry: bool = True,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> RankReport:
    """Fewest elements V with ``<V + fixed> = monoid``.

    Candidates are drawn from elements outside ``<fixed>`` (members of
    ``<fixed>`` never help).  With ``symmetry`` the first member ranges over
    representatives under conjugation by the units of ``<fixed>``.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    start = time.perf_counter()
    search = _Search(monoid)
    fixed_idx = search.reduce(_indices_in(monoid, fixed))
    inside = search.generated(fixed_idx)
    units = unit_indices(monoid)
    fixed_units = np.array([u for u in units if inside[u]], dtype=np.int64)
    pool = _pool_order(monoid, np.flatnonzero(~inside))
    sym_gens = search.reduce(fixed_units) if symmetry else None
    desc = f"subsets of the {len(pool)} elements outside the {int(inside.sum())}-element submonoid of the fixed set"
    if symmetry:
        desc += ", first member up to conjugation by its units"
    value, wit, cert, exceeds = _run_search(
        search, fixed_idx, pool, max_k,
        symmetry_gens=sym_gens, units=fixed_units, prune=False,
        threads=threads, budget=budget, description=desc,
    )
    return RankReport(
        quantity=Quantity.RELATIVE_RANK,
        value=value,
        witness=subset(monoid, wit),
        certificate=cert,
        elapsed=time.perf_counter() - start,
        fixed=fixed,
        exceeds_max_k=exceeds,
    )


def group_of_units(monoid: ClosureResult, threads: int = 1) -> ClosureResult:
    units = subset(monoid, unit_indices(monoid), prefix="u")
    return closure(units, threads=threads)


def rank_via_lemma1(
    monoid: ClosureResult,
    max_k: int,
    *,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> RankReport:
    """rank S = rank(S : G) + rank G with G the unit group."""
    start = time.perf_counter()
    group = group_of_units(monoid, threads=threads)
    g_rep = rank_exhaustive(group, max_k, symmetry=True, threads=threads, budget=budget,
                            quantity=Quantity.GROUP_RANK)
    rel = relative_rank(monoid, units_as_set(group), max_k, threads=threads, budget=budget)
    exceeds = g_rep.exceeds_max_k or rel.exceeds_max_k
    value = max_k + 1 if exceeds else g_rep.value + rel.value
    witness = g_rep.witness.union(rel.witness)
    cert = Certificate(
        f"group rank: {g_rep.certificate.search_space}; relative rank: {rel.certificate.search_space}",
        rejected_count=g_rep.certificate.rejected_count + rel.certificate.rejected_count,
        pruned_count=g_rep.certificate.pruned_count + rel.certificate.pruned_count,
    )
    if not exceeds:
        check = closure(witness, limit=monoid.order)
        if not (check.complete and check.order == monoid.order):
            raise AssertionError("combined witness does not generate the monoid")
    return RankReport(
        quantity=Quantity.RANK,
        value=value,
        witness=witness,
        certificate=cert,
        method=Method.LEMMA1_DECOMPOSED,
        elapsed=time.perf_counter() - start,
        exceeds_max_k=exceeds,
        parts=[g_rep, rel],
    )


def units_as_set(group: ClosureResult) -> GeneratorSet:
    return GeneratorSet(group.degree, tuple(group), tuple(f"u{i}" for i in range(group.order)))


def verify_lemma1_consistency(monoid: ClosureResult, gens: GeneratorSet) -> bool:
    """Whether the units among a generating set generate the whole unit group."""
    gen_closure = closure(gens, limit=monoid.order)
    if not (gen_closure.complete and gen_closure.order == monoid.order):
        raise ValueError("the given set does not generate the monoid")
    group_order = len(unit_indices(monoid))
    unit_part = [f for f in gens if f.image_size() == f.degree]
    sub = closure(GeneratorSet.from_elements(monoid.degree, unit_part), limit=group_order + 1)
    return sub.complete and sub.order == group_order


@dataclass
class Lemma1Sweep:
    subset_size: int
    total: int
    generating: int
    violations: int


def lemma1_sweep(monoid: ClosureResult, subset_size: int) -> Lemma1Sweep:
    """Check every generating ``subset_size``-subset against the unit-group claim."""
    search = _Search(monoid)
    units = unit_indices(monoid)
    mask = np.zeros(search.n, dtype=np.bool_)
    mask[units] = True
    total, generating, violations, _ = K.lemma1_sweep(
        search.table, subset_size, mask, len(units), search.seen, search.queue, search.stamp
    )
    return Lemma1Sweep(subset_size, int(total), int(generating), int(violations))


@dataclass
class ObstructionSweep:
    n: int
    m: int
    kind: StructureKind
    order: int
    candidates: int
    successes: int

    @property
    def holds(self) -> bool:
        return self.successes == 0


def kernel_obstruction_sweep(
    n: int,
    m: int,
    kind: StructureKind | str = StructureKind.TXP,
    limit: int = TABLE_LIMIT,
) -> ObstructionSweep:
    """Try every element as the single extra generator on top of S(X,P)."""
    kind = StructureKind.parse(kind)
    monoid = closure(structure_generators(n, m, kind), limit=limit)
    if not monoid.complete:
        raise BudgetExceededError(f"{kind.label} at n={n}, m={m} has more than {limit} elements")
    search = _Search(monoid)
    group_gens = search.reduce(_indices_in(monoid, structure_generators(n, m, StructureKind.SXP)))
    ok, _ = K.single_extension_sweep(
        search.table, np.asarray(group_gens, dtype=np.int64), np.arange(search.n, dtype=np.int64),
        search.n, search.seen, search.queue, search.stamp,
    )
    return ObstructionSweep(n, m, kind, monoid.order, search.n, int(ok.sum()))


def verify_kernel_obstruction(n: int, m: int, kind: StructureKind | str = StructureKind.TXP,
                              limit: int = TABLE_LIMIT) -> bool:
    """True iff no single element together with S(X,P) generates the structure."""
    return kernel_obstruction_sweep(n, m, kind, limit).holds
