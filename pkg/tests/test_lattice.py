import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from floerkit.conley import catalog_flow, linear_flow
from floerkit.conley.flows import sample_field
from floerkit.errors import FieldMismatch, NotNegativeDefinite, SchemaError
from floerkit.homology import GradedHomology
from floerkit.lattice import (
    E8_CARTAN,
    char_min_abs_square,
    det_exact,
    form_from_json,
    froyshov_inequality_check,
    furuta_bound_check,
    make_form,
    smith_flow_check,
    smith_inequality_check,
)

from strategies import counted

ODD_BLOCKS = [
    [[-1]],
    [[-3]],
    [[-2, 1], [1, -3]],
    [[-3, 1], [1, -3]],
    [[-1, 0], [0, -5]],
    [[-3, 1, 0], [1, -2, 1], [0, 1, -3]],
]


def brute_char_min(gram, bound):
    """Characteristic means ``c.Qx = x.Qx mod 2`` for every basis vector ``x``."""
    g = np.array(gram, dtype=np.int64)
    n = g.shape[0]
    basis = np.eye(n, dtype=np.int64)
    best = None
    for c in itertools.product(range(-bound, bound + 1), repeat=n):
        c = np.array(c, dtype=np.int64)
        if all((c @ g @ x - x @ g @ x) % 2 == 0 for x in basis):
            v = abs(int(c @ g @ c))
            best = v if best is None else min(best, v)
    return best


def block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    k = 0
    for b in blocks:
        b = np.array(b)
        out[k : k + len(b), k : k + len(b)] = b
        k += len(b)
    return out


# forms


def test_e8_is_unimodular_and_even():
    assert det_exact(E8_CARTAN) == 1
    assert not np.any(np.diag(E8_CARTAN) % 2)


def test_det_exact_examples():
    assert det_exact([[0, 1], [1, 0]]) == -1
    assert det_exact([[2, 4], [1, 2]]) == 0
    assert det_exact(np.diag([2, 3, 5])) == 30


def test_form_rank_and_signature():
    f = make_form(3, ["-E8", "-E8"])
    assert f.rank == 19 and f.signature == -19 and f.exact


def test_not_negative_definite():
    with pytest.raises(NotNegativeDefinite):
        make_form(0, [E8_CARTAN])
    with pytest.raises(NotNegativeDefinite):
        make_form(0, [[[-1, 2], [2, -1]]])


def test_form_validation():
    with pytest.raises(SchemaError):
        make_form(0, [[[-2, 1], [0, -2]]])
    with pytest.raises(SchemaError):
        make_form(-1)
    with pytest.raises(SchemaError):
        make_form(0, ["E7"])
    with pytest.raises(SchemaError):
        form_from_json({"m": 1, "extra": 2})
    with pytest.raises(SchemaError):
        make_form(0, [{"name": "x", "gram": [[-3]], "even": True}])


def test_form_json_roundtrip():
    f = make_form(2, ["-E8", [[-2, 1], [1, -3]]])
    g = form_from_json(f.to_json())
    assert g.to_json() == f.to_json()
    assert f.to_json()["blocks"][0] == {"name": "-E8"}


# characteristic minimum


def test_char_min_examples():
    assert char_min_abs_square(make_form(1)) == 1
    assert char_min_abs_square(make_form(0, ["-E8"])) == 0
    assert char_min_abs_square(make_form(2, ["-E8"])) == 2


@pytest.mark.parametrize("gram", ODD_BLOCKS)
def test_odd_block_matches_brute_force(gram):
    f = make_form(0, [gram])
    assert not f.exact
    assert char_min_abs_square(f) == brute_char_min(gram, 3)
    # a wider search finds nothing smaller for these blocks
    assert brute_char_min(gram, 5) == brute_char_min(gram, 3)


def test_bound_must_be_positive():
    with pytest.raises(SchemaError):
        char_min_abs_square(make_form(1), bound=0)


blocks = st.lists(st.sampled_from(["-E8"] + list(range(len(ODD_BLOCKS)))), max_size=3)


def as_block(b):
    return b if isinstance(b, str) else ODD_BLOCKS[b]


@given(st.integers(0, 4), blocks, st.integers(0, 4), blocks)
def test_char_min_additive(m1, b1, m2, b2):
    f1 = make_form(m1, [as_block(b) for b in b1])
    f2 = make_form(m2, [as_block(b) for b in b2])
    both = make_form(m1 + m2, [as_block(b) for b in b1 + b2])
    assert char_min_abs_square(both) == char_min_abs_square(f1) + char_min_abs_square(f2)


@given(st.integers(0, 2), st.lists(st.sampled_from(range(4)), min_size=1, max_size=2))
def test_char_min_of_direct_sum_matches_brute_force(m, idx):
    grams = [[[-1]]] * m + [ODD_BLOCKS[i] for i in idx]
    total = block_diag(grams)
    if total.shape[0] > 4:
        total = total[:4, :4]
        grams = None
    f = make_form(m, [ODD_BLOCKS[i] for i in idx]) if grams else make_form(0, [total])
    assert char_min_abs_square(f) == brute_char_min(total, 3)


# Frøyshov inequality


def test_froyshov_examples():
    v = froyshov_inequality_check(1, make_form(0, ["-E8"]))
    assert v.allowed and v.required == 1 and v.margin == 0
    v = froyshov_inequality_check(1, make_form(0, ["-E8", "-E8"]))
    assert not v.allowed and v.required == 2
    for m in range(5):
        assert froyshov_inequality_check(1, make_form(m)).allowed


def test_calibrated_sweep():
    catalog = {"0": [], "-E8": ["-E8"], "-E8+-E8": ["-E8", "-E8"]}
    allowed = {
        (name, m) for name, bl in catalog.items() for m in range(5)
        if froyshov_inequality_check(1, make_form(m, bl)).allowed
    }
    assert allowed == {(name, m) for name in ("0", "-E8") for m in range(5)}


def test_verdict_json_marks_bounded_search():
    exact = froyshov_inequality_check(0, make_form(1, ["-E8"])).to_json()
    assert exact["verdict"] == "excluded" and "note" not in exact
    assert exact["margin"] == "-1"
    loose = froyshov_inequality_check(1, make_form(0, [[[-3]]])).to_json()
    assert "bounded search" in loose["note"]
    assert loose["required"] == str(Fraction(1 - 3, 8))


@given(st.integers(-3, 3), st.integers(0, 3), st.integers(0, 4), blocks)
def test_froyshov_monotone_in_h(h, dh, m, bl):
    f = make_form(m, [as_block(b) for b in bl])
    if froyshov_inequality_check(h, f).allowed:
        assert froyshov_inequality_check(h + dh, f).allowed


# 10/8 bound


def test_furuta_examples():
    assert furuta_bound_check(22, -16)["verdict"] == "satisfied"
    assert furuta_bound_check(21, -16)["verdict"] == "violated"
    assert furuta_bound_check(2, 0)["verdict"] == "satisfied"
    with pytest.raises(SchemaError):
        furuta_bound_check(3, 8)


# Smith inequality


def test_smith_equality():
    h = GradedHomology(2, {0: 1, 3: 2})
    r = smith_inequality_check(h, h)
    assert r.satisfied and r.total == r.fixed == 3


def test_smith_violation_flagged():
    r = smith_inequality_check(GradedHomology(2, {1: 1}), GradedHomology(2, {0: 2}))
    assert not r.satisfied and "inconsistent" in r.to_json()["note"]


def test_smith_field_mismatch():
    with pytest.raises(FieldMismatch):
        smith_inequality_check(GradedHomology(2, {0: 1}), GradedHomology(3, {0: 1}))
    with pytest.raises(FieldMismatch):
        smith_inequality_check(GradedHomology(0, {0: 1}), GradedHomology(0, {0: 1}))


def test_smith_double_well():
    r = smith_flow_check(catalog_flow("double_well_1d"), [-1])
    assert r.satisfied and (r.total, r.fixed) == (1, 1)


COEFS = [(a, b) for a in (-1, 1) for b in (-1, 0, 1)]


def odd_product_flow(coefs, res):
    """``x_i' = a_i x_i + b_i x_i^3``, symmetric under every coordinate sign flip."""
    n = len(coefs)
    lip = [max(abs(a), abs(a + 6.75 * b)) for a, b in coefs]
    return sample_field(
        lambda *xs: [a * x + b * x**3 for (a, b), x in zip(coefs, xs)],
        [-1.5] * n, [1.5] * n, [res] * n, lip,
    )


@st.composite
def symmetric_flows(draw):
    kind = draw(st.sampled_from(["catalog", "linear", "odd"]))
    if kind == "catalog":
        name = draw(st.sampled_from(["double_well_1d", "saddle_2d", "max_2d", "min_2d"]))
        res = draw(st.sampled_from([8, 12, 16])) * (2 if name == "double_well_1d" else 1)
        spec = catalog_flow(name, res)
    elif kind == "linear":
        signs = draw(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=3))
        spec = linear_flow(signs, draw(st.sampled_from([6, 8])))
    else:
        coefs = draw(st.lists(st.sampled_from(COEFS), min_size=1, max_size=2))
        spec = odd_product_flow(coefs, 24 if len(coefs) == 1 else 20)
    flips = draw(st.lists(st.booleans(), min_size=spec.dimension, max_size=spec.dimension))
    action = [-(i + 1) if f else i + 1 for i, f in enumerate(flips)]
    return spec, action


@pytest.mark.property_suite
@given(symmetric_flows())
@counted
def test_smith_inequality_on_symmetric_flows(case):
    spec, action = case
    r = smith_flow_check(spec, action)
    assert r.satisfied, r.to_json()
    assert r.total == 1  # every sampled flow has an isolating box with sphere index
