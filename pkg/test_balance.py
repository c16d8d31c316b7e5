import logging

import pytest
from hypothesis import given, settings, strategies as st

from balanced.balance import (
    find_strong_odd_cycle,
    incidence_matrix,
    is_balanced,
    oracle_balanced_matrix,
    require_balanced,
)
from balanced.core import build, classify_walk, set_limits
from balanced.errors import InstanceTooLarge, NotBalanced
from balanced.gen import gen_bipartite, gen_interval, gen_planted

logging.basicConfig(level=logging.INFO)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_balanced_examples(C4, T1, P3):
    assert find_strong_odd_cycle(C4) is None, "C4 has no odd cycle at all."
    assert is_balanced(T1).balanced, "T1 has only two edges."
    assert is_balanced(P3).to_dict() == {"verdict": "balanced", "witness": None}, "P3 is a forest."


def test_unbalanced_witness(H5, C3):
    cert = is_balanced(H5)
    assert not cert.balanced, "H5 contains a strong triangle."
    assert cert.to_dict()["witness"] == [1, 0, 2, 1, 3, 2, 1], "The witness should start at the smallest vertex."
    assert tuple(classify_walk(H5, cert.witness.sequence())) == ("cycle", True, 3), "Witness must validate."
    assert is_balanced(C3).witness.sequence() == [1, 0, 2, 1, 3, 2, 1], "C3 witness is the triangle itself."


def test_three_edge_is_not_a_strong_cycle():
    # the only odd cycle runs through a 3-edge holding all its vertices
    H = build([1, 2, 3], [{1, 2, 3}, {2, 3}, {1, 3}])
    assert is_balanced(H).balanced, "A cycle through an edge holding three walk vertices is not strong."


def test_longer_odd_cycle():
    C5 = build(range(1, 6), [{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}])
    witness = find_strong_odd_cycle(C5)
    assert witness is not None and witness.length == 5, "C5 is its own strong odd cycle."


def test_require_balanced(H5, P3):
    require_balanced(P3, "test")
    with pytest.raises(NotBalanced) as info:
        require_balanced(H5, "test")
    assert info.value.witness is not None, "NotBalanced should carry the witness."


def test_oracle(C4, H5):
    assert incidence_matrix(H5).tolist() == [[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 1]], "Rows are edges."
    assert oracle_balanced_matrix(C4), "C4 has no odd 2-regular submatrix."
    assert not oracle_balanced_matrix(H5), "Rows of H5 restricted to columns 1..3 form a triangle."
    set_limits(oracle_max=3)
    with pytest.raises(InstanceTooLarge):
        oracle_balanced_matrix(C4)


def test_search_budget(C4):
    with pytest.raises(InstanceTooLarge):
        find_strong_odd_cycle(C4, max_states=1)


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_search_agrees_with_oracle(seed):
    for H in (gen_interval(6, 6, 3, seed), gen_bipartite(3, 3, 0.5, seed), gen_planted(6, seed)):
        assert is_balanced(H).balanced == oracle_balanced_matrix(H), f"Search and oracle disagree on {H}."


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_planted_instances_are_unbalanced(seed):
    H = gen_planted(7, seed)
    cert = is_balanced(H)
    assert not cert.balanced, "Planted instances carry an odd cycle of 2-edges."
    assert classify_walk(H, cert.witness.sequence()).strong, "The witness must be strong."
