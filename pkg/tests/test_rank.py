import itertools

import pytest

from conftest import naive_closure
from parwreath.enumeration import closure, units
from parwreath.errors import BudgetExceededError
from parwreath.rank import (
    Method,
    Quantity,
    kernel_obstruction_sweep,
    lemma1_sweep,
    rank_exhaustive,
    rank_via_lemma1,
    relative_rank,
    units_as_set,
    group_of_units,
    verify_kernel_obstruction,
    verify_lemma1_consistency,
)
from parwreath.structures import GeneratorSet, StructureKind, paper_generators
from parwreath.transform import Transformation, identity

T = Transformation
K = StructureKind
EXPECTED_22 = {K.TXP: 4, K.SIGMA: 3, K.GAMMA: 3, K.SXP: 2}


def generates(gens, monoid):
    res = closure(gens, limit=monoid.order)
    return res.complete and res.order == monoid.order


@pytest.mark.parametrize("kind", list(K))
def test_exhaustive_rank_n2_m2(monoids22, kind):
    rep = rank_exhaustive(monoids22[kind], 4)
    assert rep.value == EXPECTED_22[kind]
    assert not rep.exceeds_max_k
    assert len(rep.witness) == rep.value
    assert generates(rep.witness, monoids22[kind])
    assert rep.method == Method.EXHAUSTIVE


def test_txp_certificate_counts(monoids22):
    rep = rank_exhaustive(monoids22[K.TXP], 4)
    # every subset of size <= 3 of the 64 elements was rejected
    assert rep.certificate.per_size == {0: 1, 1: 64, 2: 2016, 3: 41664}
    assert rep.certificate.rejected_count == 1 + 64 + 2016 + 41664
    assert rep.certificate.pruned_count == 0


@pytest.mark.parametrize("kind", list(K))
def test_lemma1_agrees_with_exhaustive(monoids22, kind):
    rep = rank_via_lemma1(monoids22[kind], 4)
    assert rep.value == EXPECTED_22[kind]
    group_rep, rel_rep = rep.parts
    assert group_rep.quantity == Quantity.GROUP_RANK and group_rep.value == 2
    assert rel_rep.quantity == Quantity.RELATIVE_RANK
    assert rel_rep.value == EXPECTED_22[kind] - 2
    assert generates(rep.witness, monoids22[kind])


@pytest.mark.parametrize("n,m", [(2, 3), (3, 2)])
def test_lemma1_small_cases(n, m):
    for kind, rel in [(K.TXP, 2), (K.SIGMA, 1), (K.GAMMA, 1)]:
        mon = closure(paper_generators(n, m, kind))
        rep = rank_via_lemma1(mon, 4)
        assert [p.value for p in rep.parts] == [2, rel]


def brute_rank(monoid, max_k):
    elems = [f.images for f in monoid]
    target = monoid.element_set()
    for r in range(max_k + 1):
        for combo in itertools.combinations(elems, r):
            if naive_closure(list(combo), monoid.degree) == target:
                return r
    return max_k + 1


@pytest.mark.parametrize("kind", [K.SIGMA, K.GAMMA, K.SXP])
def test_matches_pure_python_brute_force(monoids22, kind):
    assert rank_exhaustive(monoids22[kind], 4).value == brute_rank(monoids22[kind], 4)


def test_small_monoids_brute_force():
    cases = [
        [[1, 0, 2], [1, 2, 0], [0, 0, 2]],
        [[1, 1, 2], [0, 2, 2]],
        [[0, 0, 0]],
        [[1, 0, 2, 3], [0, 1, 3, 3]],
    ]
    for imgs in cases:
        mon = closure(GeneratorSet.from_elements(len(imgs[0]), [T(i) for i in imgs]))
        for sym in (True, False):
            assert rank_exhaustive(mon, 4, symmetry=sym).value == brute_rank(mon, 4)


def test_trivial_monoid_has_rank_zero():
    rep = rank_exhaustive(closure(GeneratorSet(3)), 2)
    assert rep.value == 0 and len(rep.witness) == 0


def test_relative_ranks(monoids22):
    group = units_as_set(group_of_units(monoids22[K.TXP]))
    assert relative_rank(monoids22[K.TXP], group, 4).value == 2
    assert relative_rank(monoids22[K.SIGMA], group, 4).value == 1
    assert relative_rank(monoids22[K.GAMMA], group, 4).value == 1
    assert relative_rank(monoids22[K.SXP], group, 4).value == 0
    # with the symmetry reduction off the answer is the same
    assert relative_rank(monoids22[K.TXP], group, 4, symmetry=False).value == 2


def test_relative_witness_completes_the_group(monoids22):
    mon = monoids22[K.TXP]
    group = units_as_set(group_of_units(mon))
    rep = relative_rank(mon, group, 4)
    assert generates(group.union(rep.witness), mon)
    assert all(f.image_size() < 4 for f in rep.witness)


def test_exceeds_max_k(monoids22):
    rep = rank_exhaustive(monoids22[K.TXP], 3)
    assert rep.exceeds_max_k and rep.value == 4
    assert len(rep.witness) == 0


def test_budget_exceeded(monoids22):
    with pytest.raises(BudgetExceededError) as info:
        rank_exhaustive(monoids22[K.TXP], 4, budget=100)
    partial = info.value.partial
    assert partial is not None and partial.rejected_count >= 65


@pytest.mark.parametrize("kind", list(K))
def test_pruning_and_symmetry_preserve_the_rank(monoids22, kind):
    base = rank_exhaustive(monoids22[kind], 4, symmetry=False).value
    assert rank_exhaustive(monoids22[kind], 4, prune_units=True).value == base
    assert rank_exhaustive(monoids22[kind], 4, symmetry=True).value == base


def test_pruning_reduces_closure_calls(monoids22):
    plain = rank_exhaustive(monoids22[K.TXP], 4, symmetry=False)
    pruned = rank_exhaustive(monoids22[K.TXP], 4, symmetry=False, prune_units=True)
    assert pruned.certificate.pruned_count > 0
    assert pruned.certificate.rejected_count == plain.certificate.rejected_count


@pytest.mark.parametrize("threads", [2, 4])
def test_threads_do_not_change_the_report(monoids22, threads):
    ref = rank_exhaustive(monoids22[K.TXP], 4)
    rep = rank_exhaustive(monoids22[K.TXP], 4, threads=threads)
    assert rep.value == ref.value
    assert rep.certificate.per_size == ref.certificate.per_size
    assert [f.images for f in rep.witness] == [f.images for f in ref.witness]


def test_rank_monotone_under_inclusion(monoids22):
    # SXP sits in SIGMA and GAMMA, both sit in TXP
    ranks = {k: rank_exhaustive(monoids22[k], 4).value for k in K}
    assert ranks[K.SXP] <= ranks[K.SIGMA] <= ranks[K.TXP]
    assert ranks[K.SXP] <= ranks[K.GAMMA] <= ranks[K.TXP]


def test_lemma1_consistency_examples(monoids22):
    mon = monoids22[K.TXP]
    assert verify_lemma1_consistency(mon, paper_generators(2, 2, K.TXP))
    with pytest.raises(ValueError):
        verify_lemma1_consistency(mon, GeneratorSet(4, (identity(4),)))


def test_lemma1_sweep_txp_n2_m2(monoids22):
    sweep = lemma1_sweep(monoids22[K.TXP], 4)
    assert sweep.total == 635376  # C(64, 4)
    assert sweep.generating > 0
    assert sweep.violations == 0


def test_lemma1_sweep_finite_monoids():
    # a few unrelated monoids: units inside any generating set generate the group
    for imgs in ([[1, 2, 0], [0, 0, 2]], [[1, 0, 2, 3], [1, 2, 3, 0], [0, 0, 2, 3]]):
        mon = closure(GeneratorSet.from_elements(len(imgs[0]), [T(i) for i in imgs]))
        for r in (2, 3):
            assert lemma1_sweep(mon, r).violations == 0


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3)])
def test_kernel_obstruction_holds(n, m):
    assert verify_kernel_obstruction(n, m)
    sweep = kernel_obstruction_sweep(n, m)
    assert sweep.candidates == sweep.order


def test_kernel_obstruction_fails_for_sigma():
    sweep = kernel_obstruction_sweep(2, 2, K.SIGMA)
    assert not sweep.holds and sweep.successes == 16


def test_report_to_dict(monoids22):
    d = rank_via_lemma1(monoids22[K.SIGMA], 4).to_dict()
    assert d["value"] == 3
    assert set(d["certificate"]) >= {"search_space", "rejected_count", "pruned_count", "per_size"}
    assert len(d["parts"]) == 2


def test_units_generate_group(monoids22):
    g = group_of_units(monoids22[K.TXP])
    assert g.order == 8 == len(units(monoids22[K.TXP]))
