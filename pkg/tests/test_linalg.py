import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from floerkit import linalg

from oracles import nullspace_mod_p, rank_mod_p

small = st.tuples(st.integers(1, 9), st.integers(1, 70)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(0, 1))
)


def is_rref(m, pivots, p):
    for r, c in enumerate(pivots):
        if m[r, c] != 1 or np.any(np.delete(m[:, c], r) % p):
            return False
        if np.any(m[r, :c] % p):
            return False
    return not np.any(m[len(pivots):] % p)


def test_rref_f2_example():
    a = np.array([[0, 1, 1], [1, 1, 0], [1, 0, 1]])
    m, piv = linalg.rref(a, 2)
    assert piv == [0, 1]
    assert m.tolist() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]


def test_rref_f2_wide_row_packing():
    # more than 64 columns crosses machine-word boundaries
    a = np.zeros((2, 130), dtype=np.int64)
    a[0, [3, 129]] = 1
    a[1, [3, 70]] = 1
    m, piv = linalg.rref(a, 2)
    assert piv == [3, 70]
    assert m[0].nonzero()[0].tolist() == [3, 129]
    assert m[1].nonzero()[0].tolist() == [70, 129]


@given(small)
def test_rref_f2_matches_oracle(a):
    m, piv = linalg.rref(a, 2)
    assert is_rref(m, piv, 2)
    assert len(piv) == rank_mod_p(a.tolist(), 2)
    # same row space: stacking adds no rank
    assert linalg.rank(np.vstack([a, m]), 2) == len(piv)


@given(small)
def test_nullspace_f2_matches_oracle(a):
    ns = linalg.nullspace(a, 2)
    want = nullspace_mod_p(a.tolist(), a.shape[1], 2)
    assert ns.shape[1] == len(want) == a.shape[1] - rank_mod_p(a.tolist(), 2)
    assert not np.any((a @ ns) % 2)


@given(st.sampled_from([3, 5]), st.tuples(st.integers(1, 6), st.integers(1, 8)), st.data())
def test_rref_odd_prime(p, shape, data):
    a = data.draw(arrays(np.int64, shape, elements=st.integers(0, p - 1)))
    m, piv = linalg.rref(a, p)
    assert is_rref(m, piv, p)
    assert len(piv) == rank_mod_p(a.tolist(), p)
