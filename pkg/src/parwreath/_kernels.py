"""Compiled inner loops for closure enumeration and generating-set search.

Transformations of degree k are packed into one uint64 key with
``bits = max(1, (k-1).bit_length())`` bits per point whenever ``k*bits <= 64``
(so up to degree 16).  Keys live in an open-addressing hash table of int32
slots holding ``index + 1`` (0 marks an empty slot).
"""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_DONE = 0
STATUS_GROW = 1
STATUS_OVERFLOW = 2


def packing_bits(k: int) -> int:
    """Bits per point for the packed key, or 0 if degree k does not fit in 64 bits."""
    bits = max(1, (k - 1).bit_length())
    return bits if bits * k <= 64 else 0


@njit(cache=True, nogil=True, inline="always")
def _mix(key):
    # splitmix64 finalizer
    z = key ^ (key >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def pack_rows(rows, bits):
    n, k = rows.shape
    out = np.empty(n, dtype=np.uint64)
    for i in range(n):
        key = np.uint64(0)
        for p in range(k):
            key |= np.uint64(rows[i, p]) << np.uint64(bits * p)
        out[i] = key
    return out


@njit(cache=True, nogil=True)
def expand(elems, lo, hi, gens, bits, out_rows, out_keys):
    """Right-multiply ``elems[lo:hi]`` by every generator, in (element, generator) order."""
    g, k = gens.shape
    c = 0
    for i in range(lo, hi):
        for j in range(g):
            key = np.uint64(0)
            for p in range(k):
                v = gens[j, elems[i, p]]
                out_rows[c, p] = v
                key |= np.uint64(v) << np.uint64(bits * p)
            out_keys[c] = key
            c += 1
    return c


@njit(cache=True, nogil=True)
def find(table, keys, key):
    mask = np.uint64(table.shape[0] - 1)
    h = _mix(key) & mask
    while True:
        slot = table[h]
        if slot == 0:
            return -1
        if keys[slot - 1] == key:
            return slot - 1
        h = (h + np.uint64(1)) & mask


@njit(cache=True, nogil=True)
def find_many(table, keys, query):
    out = np.empty(query.shape[0], dtype=np.int64)
    for i in range(query.shape[0]):
        out[i] = find(table, keys, query[i])
    return out


@njit(cache=True, nogil=True)
def rehash(keys, count, size):
    table = np.zeros(size, dtype=np.int32)
    mask = np.uint64(size - 1)
    for i in range(count):
        h = _mix(keys[i]) & mask
        while table[h] != 0:
            h = (h + np.uint64(1)) & mask
        table[h] = i + 1
    return table


@njit(cache=True, nogil=True)
def insert(table, keys, elems, parent, via, count, cand_rows, cand_keys, start, n_cand,
           parent_base, n_gens, limit, log_words):
    """Insert candidates ``start .. n_cand-1`` that are new.

    Returns ``(count, next_candidate, status)``; status is STATUS_GROW when the
    element arrays or the table need more room, STATUS_OVERFLOW when one more
    element would exceed ``limit``.
    """
    mask = np.uint64(table.shape[0] - 1)
    cap = elems.shape[0]
    max_load = table.shape[0] // 2
    k = elems.shape[1]
    for c in range(start, n_cand):
        key = cand_keys[c]
        h = _mix(key) & mask
        while True:
            slot = table[h]
            if slot == 0:
                if count >= limit:
                    return count, c, 2
                if count >= cap or count >= max_load:
                    return count, c, 1
                table[h] = count + 1
                keys[count] = key
                for p in range(k):
                    elems[count, p] = cand_rows[c, p]
                if log_words:
                    parent[count] = parent_base + c // n_gens
                    via[count] = c % n_gens
                count += 1
                break
            if keys[slot - 1] == key:
                break
            h = (h + np.uint64(1)) & mask
    return count, n_cand, 0


@njit(cache=True, nogil=True)
def product_table(elems, table, keys, bits):
    """``out[i, j]`` = index of ``elems[i]`` followed by ``elems[j]``."""
    n, k = elems.shape
    out = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(n):
            key = np.uint64(0)
            for p in range(k):
                key |= np.uint64(elems[j, elems[i, p]]) << np.uint64(bits * p)
            out[i, j] = find(table, keys, key)
    return out


@njit(cache=True, nogil=True)
def generated_count(table, gens, n_gens, seen, stamp, queue):
    """Size of the submonoid generated by ``gens[:n_gens]`` (indices into ``table``).

    Element 0 must be the identity.  ``seen`` holds stamps; entries equal to
    ``stamp`` are visited, so the buffer never needs clearing.
    """
    seen[0] = stamp
    queue[0] = 0
    head = 0
    tail = 1
    while head < tail:
        a = queue[head]
        head += 1
        for j in range(n_gens):
            b = table[a, gens[j]]
            if seen[b] != stamp:
                seen[b] = stamp
                queue[tail] = b
                tail += 1
    return tail


@njit(cache=True, nogil=True)
def scan_subsets(table, pool, firsts, r, after_first, fixed, target, unit_mask, group_order,
                 prune, budget, seen, queue, stamp0):
    """Search r-subsets of ``pool`` positions for one that, with ``fixed``, generates ``target`` elements.

    The first member ranges over ``firsts`` (positions into ``pool``); the
    remaining r-1 members are combinations of positions after it
    (``after_first``) or of every other position.  With ``prune`` a subset is
    skipped unless its unit members generate a group of ``group_order``
    elements.

    Returns ``(found, combo, tested, pruned, budget_hit, stamp)`` where
    ``combo`` holds pool positions of the first success.
    """
    n_pool = pool.shape[0]
    n_fixed = fixed.shape[0]
    gens = np.empty(n_fixed + r, dtype=np.int64)
    for i in range(n_fixed):
        gens[i] = fixed[i]
    unit_gens = np.empty(r, dtype=np.int64)
    combo = np.empty(r, dtype=np.int64)
    rest = np.empty(n_pool, dtype=np.int64)
    idx = np.empty(max(r - 1, 1), dtype=np.int64)
    tested = 0
    pruned = 0
    stamp = stamp0
    for fi in range(firsts.shape[0]):
        f = firsts[fi]
        n_rest = 0
        for q in range(n_pool):
            if after_first:
                if q > f:
                    rest[n_rest] = q
                    n_rest += 1
            elif q != f:
                rest[n_rest] = q
                n_rest += 1
        s = r - 1
        if s > n_rest:
            continue
        for i in range(s):
            idx[i] = i
        while True:
            combo[0] = f
            for i in range(s):
                combo[i + 1] = rest[idx[i]]
            skip = False
            if prune:
                nu = 0
                for i in range(r):
                    e = pool[combo[i]]
                    if unit_mask[e]:
                        unit_gens[nu] = e
                        nu += 1
                stamp += 1
                if generated_count(table, unit_gens, nu, seen, stamp, queue) != group_order:
                    skip = True
                    pruned += 1
            if not skip:
                if tested >= budget:
                    return False, combo, tested, pruned, True, stamp
                for i in range(r):
                    gens[n_fixed + i] = pool[combo[i]]
                stamp += 1
                tested += 1
                if generated_count(table, gens, n_fixed + r, seen, stamp, queue) == target:
                    return True, combo, tested - 1, pruned, False, stamp
            # next combination of s out of n_rest
            i = s - 1
            while i >= 0 and idx[i] == n_rest - s + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, s):
                idx[j] = idx[j - 1] + 1
    return False, combo, tested, pruned, False, stamp


@njit(cache=True, nogil=True)
def single_extension_sweep(table, fixed, candidates, target, seen, queue, stamp0):
    """For each candidate c, whether ``fixed + [c]`` generates ``target`` elements."""
    n_fixed = fixed.shape[0]
    gens = np.empty(n_fixed + 1, dtype=np.int64)
    for i in range(n_fixed):
        gens[i] = fixed[i]
    out = np.zeros(candidates.shape[0], dtype=np.bool_)
    stamp = stamp0
    for c in range(candidates.shape[0]):
        gens[n_fixed] = candidates[c]
        stamp += 1
        out[c] = generated_count(table, gens, n_fixed + 1, seen, stamp, queue) == target
    return out, stamp


@njit(cache=True, nogil=True)
def lemma1_sweep(table, r, unit_mask, group_order, seen, queue, stamp0):
    """Over all r-subsets of the monoid: how many generate it, and how many of
    those have unit members that fail to generate the unit group."""
    n = table.shape[0]
    gens = np.empty(r, dtype=np.int64)
    unit_gens = np.empty(r, dtype=np.int64)
    idx = np.empty(r, dtype=np.int64)
    for i in range(r):
        idx[i] = i
    generating = 0
    violations = 0
    total = 0
    stamp = stamp0
    if r > n:
        return 0, 0, 0, stamp
    while True:
        for i in range(r):
            gens[i] = idx[i]
        total += 1
        stamp += 1
        if generated_count(table, gens, r, seen, stamp, queue) == n:
            generating += 1
            nu = 0
            for i in range(r):
                if unit_mask[idx[i]]:
                    unit_gens[nu] = idx[i]
                    nu += 1
            stamp += 1
            if generated_count(table, unit_gens, nu, seen, stamp, queue) != group_order:
                violations += 1
        i = r - 1
        while i >= 0 and idx[i] == n - r + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, r):
            idx[j] = idx[j - 1] + 1
    return total, generating, violations, stamp


@njit(cache=True, nogil=True)
def conjugation_orbits(table, inverse_of, group_gens, n_elems):
    """Orbit id of each element under conjugation ``a -> g^-1 a g`` by the group."""
    orbit = np.full(n_elems, -1, dtype=np.int64)
    queue = np.empty(n_elems, dtype=np.int64)
    next_id = 0
    for start in range(n_elems):
        if orbit[start] >= 0:
            continue
        orbit[start] = next_id
        queue[0] = start
        head = 0
        tail = 1
        while head < tail:
            a = queue[head]
            head += 1
            for j in range(group_gens.shape[0]):
                g = group_gens[j]
                b = table[table[inverse_of[g], a], g]
                if orbit[b] < 0:
                    orbit[b] = next_id
                    queue[tail] = b
                    tail += 1
        next_id += 1
    return orbit
