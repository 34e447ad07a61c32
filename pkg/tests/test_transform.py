import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parwreath.errors import DegreeMismatchError, InvalidDegreeError, NotInvertibleError
from parwreath.transform import (
    Transformation,
    UniformPartition,
    compose,
    cycle,
    identity,
    inverse,
    is_permutation,
    kernel,
)


def maps(k):
    return st.lists(st.integers(0, k - 1), min_size=k, max_size=k).map(Transformation)


@st.composite
def same_degree(draw, count, max_k=8):
    k = draw(st.integers(1, max_k))
    return tuple(draw(maps(k)) for _ in range(count))


def T(*imgs):
    return Transformation(imgs)


@pytest.mark.parametrize("k, expected", [(3, (0, 1, 2)), (1, (0,))])
def test_identity(k, expected):
    assert identity(k).images == expected


def test_identity_rejects_bad_degree():
    with pytest.raises(InvalidDegreeError):
        identity(0)


def test_transformation_validates_images():
    with pytest.raises(InvalidDegreeError):
        T(0, 3, 1)
    with pytest.raises(InvalidDegreeError):
        Transformation([])


def test_compose_examples():
    assert compose(T(1, 1, 2), T(0, 2, 2)) == T(2, 2, 2)
    assert compose(T(0, 1, 2), T(2, 0, 1)) == T(2, 0, 1)
    assert T(1, 1, 2) * T(0, 2, 2) == T(2, 2, 2)


def test_compose_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        compose(identity(3), identity(4))


@settings(max_examples=1000)
@given(same_degree(3))
def test_compose_associative(triple):
    a, b, c = triple
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(same_degree(2))
def test_right_action_law(pair):
    f, g = pair
    h = compose(f, g)
    for p in range(f.degree):
        assert h(p) == g(f(p))


@given(maps(4))
def test_identity_law(f):
    assert compose(identity(4), f) == f
    assert compose(f, identity(4)) == f


def test_permutation_examples():
    assert is_permutation(T(1, 0, 2))
    assert inverse(T(1, 0, 2)) == T(1, 0, 2)
    assert not is_permutation(T(1, 1, 2))
    assert inverse(T(2, 0, 1)) == T(1, 2, 0)
    assert compose(T(2, 0, 1), T(1, 2, 0)) == identity(3)


def test_inverse_of_non_permutation():
    with pytest.raises(NotInvertibleError):
        inverse(T(1, 1, 2))


@given(same_degree(2))
def test_inverse_two_sided_and_closure_of_permutations(pair):
    f, g = pair
    if is_permutation(f):
        assert compose(f, inverse(f)) == identity(f.degree)
        assert compose(inverse(f), f) == identity(f.degree)
    assert is_permutation(compose(f, g)) == (is_permutation(f) and is_permutation(g))


def test_kernel_examples():
    # ker of the collapse map on 4 points: {0,1} plus the diagonal
    ker = kernel(T(1, 1, 2, 3))
    assert ker.classes() == [frozenset({0, 1}), frozenset({2}), frozenset({3})]
    assert ker.pairs() == {(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (1, 0)}
    assert kernel(identity(4)).is_discrete()
    assert kernel(T(0, 0, 0)).classes() == [frozenset({0, 1, 2})]


def test_kernel_is_canonical():
    assert kernel(T(3, 3, 0, 1)) == kernel(T(1, 1, 2, 3))
    assert kernel(T(2, 1, 2)).class_of == (0, 1, 0)


@given(maps(6))
def test_kernel_matches_fibres(f):
    ker = kernel(f)
    assert ker.class_count == f.image_size()
    for p in range(6):
        for q in range(6):
            assert ker.related(p, q) == (f(p) == f(q))


@given(same_degree(2, max_k=6))
def test_kernel_refinement_under_composition(pair):
    f, g = pair
    assert kernel(f).refines(kernel(compose(f, g)))


def test_cycle_examples():
    assert cycle(3, [0, 1, 2]) == T(1, 2, 0)
    assert cycle(4, [0, 1]) == T(1, 0, 2, 3)
    assert cycle(3, []) == identity(3)


@pytest.mark.parametrize("points", [[0, 0], [0, 3]])
def test_cycle_rejects_bad_points(points):
    with pytest.raises(ValueError):
        cycle(3, points)


def test_uniform_partition_layout():
    P = UniformPartition(3, 2)
    assert P.degree == 6
    assert [list(b) for b in P.blocks()] == [[0, 1, 2], [3, 4, 5]]
    assert P.non_trivial()
    assert not UniformPartition(1, 4).non_trivial()
    assert not UniformPartition(4, 1).non_trivial()


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_uniform_partition_bijection(n, m, data):
    P = UniformPartition(n, m)
    y = data.draw(st.integers(0, n - 1))
    z = data.draw(st.integers(0, m - 1))
    assert P.decode(P.encode(y, z)) == (y, z)
    assert P.block_of(P.encode(y, z)) == z
