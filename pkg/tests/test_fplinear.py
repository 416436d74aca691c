import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kunneth import fplinear as fl
from kunneth.errors import CompositionNotZero, KunnethError


@st.composite
def small_matrix(draw, max_dim=4):
    p = draw(st.sampled_from([2, 3, 5]))
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    data = [[draw(st.integers(0, p - 1)) for _ in range(cols)] for _ in range(rows)]
    return fl.FpMatrix.from_dense(p, data, cols)


def brute_kernel_size(m):
    count = 0
    for x in itertools.product(range(m.p), repeat=m.cols):
        if not any(m.apply(x)):
            count += 1
    return count


@settings(max_examples=150, deadline=None)
@given(small_matrix())
def test_rank_nullity_against_enumeration(m):
    r = fl.rank(m)
    assert brute_kernel_size(m) == m.p ** (m.cols - r)
    ker = fl.kernel_basis(m)
    assert len(ker) == m.cols - r
    for v in ker:
        assert not any(m.apply(v))


@settings(max_examples=100, deadline=None)
@given(small_matrix())
def test_rank_of_transpose(m):
    assert fl.rank(m) == fl.rank(m.transpose())


@settings(max_examples=100, deadline=None)
@given(small_matrix(), st.data())
def test_solve_finds_preimages(m, data):
    x = [data.draw(st.integers(0, m.p - 1)) for _ in range(m.cols)]
    b = m.apply(x)
    y = fl.solve(m, b)
    assert y is not None
    assert tuple(m.apply(y)) == tuple(b)


def test_solve_reports_inconsistency():
    m = fl.FpMatrix.from_dense(2, [[1, 1], [1, 1]])
    assert fl.solve(m, [1, 0]) is None


def test_entries_reduced_mod_p():
    m = fl.FpMatrix.from_dense(3, [[4, 3], [-1, 0]])
    assert m.to_dense() == [[1, 0], [2, 0]]


def test_mixed_primes_rejected():
    with pytest.raises(KunnethError):
        fl.FpMatrix.identity(2, 2) @ fl.FpMatrix.identity(3, 2)


def test_not_a_prime():
    with pytest.raises(Exception):
        fl.FpMatrix.zero(4, 1, 1)


def test_homology_of_short_complex():
    # F_2 --(1,1)--> F_2^2 --(1 1)--> F_2 : exact in the middle
    d_in = fl.FpMatrix.from_dense(2, [[1], [1]])
    d_out = fl.FpMatrix.from_dense(2, [[1, 1]])
    assert fl.homology(d_in, d_out).dim == 0
    zero_in = fl.FpMatrix.zero(2, 2, 0)
    h = fl.homology(zero_in, d_out)
    assert h.dim == 1
    assert h.coordinates((1, 1)) == (1,)


def test_homology_requires_composite_zero():
    d = fl.FpMatrix.identity(3, 2)
    with pytest.raises(CompositionNotZero):
        fl.homology(d, d)


def test_echelon_membership():
    e = fl.Echelon(5)
    assert e.add((1, 2, 0))
    assert not e.add((2, 4, 0))
    assert e.contains((3, 1, 0))
    assert not e.contains((0, 0, 1))
