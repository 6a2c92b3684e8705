import pytest
from hypothesis import given, strategies as st

from qsp.errors import InvalidRootDatum, NonFiniteType
from qsp.rootdata import (
    RootDatum, cartan_matrix, height, is_nonnegative, wadd, weights_of_height, wscale,
)

# classical counts of positive roots
POSITIVE_ROOT_COUNTS = {
    "A1": 1, "A2": 3, "A3": 6, "A4": 10, "B2": 4, "B3": 9, "C3": 9, "D4": 12,
    "G2": 6, "F4": 24, "E6": 36, "E7": 63, "A1xA1": 2, "A2xB2": 7,
}


def full(datum):
    return tuple(datum.nodes)


def test_bilinear_examples():
    a2 = RootDatum.from_name("A2")
    assert a2.bilinear((1, 0), (0, 1)) == -1
    b2 = RootDatum.from_matrix([[2, -1], [-2, 2]], [2, 1])
    assert b2.bilinear((1, 0), (0, 1)) == -2
    assert RootDatum.from_name("B2") == b2


def test_weights_and_heights():
    assert height((2, 0, 1)) == 3
    assert is_nonnegative((0, 1)) and not is_nonnegative((1, -1))
    assert sorted(weights_of_height(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(weights_of_height(3, 4)) == 15


@pytest.mark.parametrize("matrix,d", [
    ([[2, -1], [-1, 3]], None),
    ([[2, 1], [1, 2]], None),
    ([[2, -1], [0, 2]], None),
    ([[2, -1], [-2, 2]], [1, 1]),
    ([[2, -1], [-2, 2]], [4, 2]),
])
def test_invalid_cartan(matrix, d):
    with pytest.raises(InvalidRootDatum):
        RootDatum.from_matrix(matrix, d)


def test_is_finite_type():
    a2 = RootDatum.from_name("A2")
    assert a2.is_finite_type([])
    assert a2.is_finite_type([0, 1])
    aff = RootDatum.from_name("A1~")
    assert aff.cartan == ((2, -2), (-2, 2))
    assert aff.is_finite_type([0])
    assert not aff.is_finite_type([0, 1])
    with pytest.raises(NonFiniteType):
        aff.finite_type_data([0, 1])
    assert not RootDatum.from_matrix([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]).is_finite_type([0, 1, 2])


def test_finite_type_data_a2_full():
    a2 = RootDatum.from_name("A2")
    data = a2.finite_type_data([0, 1])
    assert set(data.positive_roots) == {(1, 0), (0, 1), (1, 1)}
    assert len(data.longest_word) == 3
    assert data.sum2rho == (2, 2)


def test_finite_type_data_a3_middle():
    a3 = RootDatum.from_name("A3")
    data = a3.finite_type_data([1])
    assert data.positive_roots == ((0, 1, 0),)
    assert data.sum2rho == (0, 1, 0)
    assert data.longest_word == (1,)
    assert data.copairings == (-1, 2, -1)


def test_finite_type_data_empty():
    data = RootDatum.from_name("A3").finite_type_data([])
    assert data.positive_roots == ()
    assert data.longest_word == ()
    assert data.copairings == (0, 0, 0)
    assert data.sum2rho == (0, 0, 0)


def test_weyl_apply_examples():
    a2 = RootDatum.from_name("A2")
    assert a2.weyl_apply((0,), (1, 0)) == (-1, 0)
    w = a2.finite_type_data([0, 1]).longest_word
    assert w in ((0, 1, 0), (1, 0, 1))
    assert a2.weyl_apply(w, (1, 0)) == (0, -1)
    assert a2.weyl_apply((0, 1, 0), (1, 0)) == (0, -1)


@pytest.mark.parametrize("name,count", sorted(POSITIVE_ROOT_COUNTS.items()))
def test_positive_root_counts(name, count):
    datum = RootDatum.from_name(name)
    data = datum.finite_type_data(full(datum))
    assert len(data.positive_roots) == count
    assert len(data.longest_word) == count
    roots = set(data.positive_roots)
    image = {wscale(-1, datum.weyl_apply(data.longest_word, b)) for b in roots}
    assert image == roots
    total = datum.zero
    for b in roots:
        total = wadd(total, b)
    assert data.sum2rho == total


@pytest.mark.parametrize("name", ["A3", "B3", "G2", "D4"])
def test_single_node_copairing(name):
    datum = RootDatum.from_name(name)
    for i in datum.nodes:
        assert datum.finite_type_data([i]).copairings[i] == 2


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "G2"])
def test_copairings_integral_on_every_subset(name):
    datum = RootDatum.from_name(name)
    n = datum.rank
    for mask in range(1 << n):
        X = [i for i in range(n) if mask >> i & 1]
        data = datum.finite_type_data(X)
        # alpha_j(2 rho_X^vee) = 2 for simple roots of X
        for j in X:
            assert data.copairings[j] == 2


def test_cartan_names():
    assert cartan_matrix("G2") == [[2, -1], [-3, 2]]
    assert RootDatum.from_name("G2").d == (3, 1)
    assert RootDatum.from_name("C2").d == (1, 2)
    assert RootDatum.from_name("A1xA1").cartan == ((2, 0), (0, 2))
    with pytest.raises(InvalidRootDatum):
        cartan_matrix("Q7")


DATA = [RootDatum.from_name(n) for n in ("A3", "B3", "G2", "A1~", "C3")]
weights3 = st.tuples(*[st.integers(-4, 4)] * 3)


@given(st.sampled_from(DATA), st.data())
def test_form_properties(datum, data):
    n = datum.rank
    b = tuple(data.draw(st.integers(-4, 4)) for _ in range(n))
    c = tuple(data.draw(st.integers(-4, 4)) for _ in range(n))
    i = data.draw(st.integers(0, n - 1))
    assert datum.bilinear(b, c) == datum.bilinear(c, b)
    assert datum.reflect(i, datum.reflect(i, b)) == b
    assert datum.bilinear(datum.reflect(i, b), datum.reflect(i, c)) == datum.bilinear(b, c)
