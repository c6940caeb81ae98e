from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import closure, in_proper_coset
from spectralgap.errors import ConfigError
from spectralgap.groups import (coset_witness, cyclic, dihedral, direct_product, from_table,
                                generated_subgroup, is_adapted, is_strongly_adapted, left_cosets,
                                named_group, quaternion, symmetric)
from spectralgap.measure import ProbMeasure, dirac, from_pairs, uniform

CORPUS = [cyclic(n) for n in range(1, 13)] + [dihedral(3), dihedral(4), quaternion(), symmetric(3),
                                               symmetric(4), direct_product(cyclic(2), cyclic(2))]


def test_generated_subgroup_examples():
    Z6 = cyclic(6)
    assert generated_subgroup(Z6, [2]) == {0, 2, 4}
    assert generated_subgroup(Z6, [1]) == set(range(6))
    S3 = symmetric(3)
    transposition, three_cycle = S3.element("102"), S3.element("120")
    assert generated_subgroup(S3, [transposition, three_cycle]) == set(range(6))


def test_generated_subgroup_rejects_empty():
    with pytest.raises(ValueError, match="empty generating set"):
        generated_subgroup(cyclic(4), [])


@given(st.sampled_from(CORPUS), st.data())
def test_generated_subgroup_is_closed(G, data):
    S = data.draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=3))
    H = generated_subgroup(G, S)
    assert G.identity in H and set(S) <= H
    assert all(G.op(a, b) in H for a in H for b in H)
    assert all(G.inverse(a) in H for a in H)
    assert H == closure(G.mul, S)


def test_adapted_examples():
    assert is_adapted(cyclic(2), dirac(cyclic(2), 1))
    assert not is_adapted(cyclic(4), dirac(cyclic(4), 2))
    S3 = symmetric(3)
    assert is_adapted(S3, uniform(S3, ["102", "021", "210"]))


def test_strongly_adapted_examples():
    Z2, Z4 = cyclic(2), cyclic(4)
    assert not is_strongly_adapted(Z2, dirac(Z2, 1))
    assert is_strongly_adapted(Z2, uniform(Z2, [0, 1]))
    mu = from_pairs(Z4, [(1, "1/2"), (3, "1/2")])
    assert not is_strongly_adapted(Z4, mu)
    g, H = coset_witness(Z4, mu)
    assert H == {0, 2} and {Z4.op(g, h) for h in H} == {1, 3}


def test_adaptedness_rejects_foreign_measure():
    with pytest.raises(ValueError):
        is_adapted(cyclic(3), dirac(cyclic(4), 1))


@given(st.sampled_from(CORPUS), st.data())
def test_coset_search_matches_exhaustive_oracle(G, data):
    support = data.draw(st.sets(st.integers(0, G.order - 1), min_size=1, max_size=min(G.order, 5)))
    mu = uniform(G, sorted(support))
    assert is_strongly_adapted(G, mu) == (not in_proper_coset(G.mul, support))
    if is_strongly_adapted(G, mu):
        assert is_adapted(G, mu)


@pytest.mark.parametrize("G", CORPUS, ids=lambda G: G.name)
def test_group_axioms(G):
    G.check_associative()
    e = G.identity
    for g in G.elements:
        assert G.op(e, g) == g == G.op(g, e)
        assert G.op(g, G.inverse(g)) == e == G.op(G.inverse(g), g)
    assert generated_subgroup(G, G.generators) == set(G.elements)


def test_dihedral_relations():
    D = dihedral(5)
    r, s = D.element("r1"), D.element("s")
    assert D.order == 10 and D.format(D.identity) == "e"
    x = D.identity
    for _ in range(5):
        x = D.op(x, r)
    assert x == D.identity
    assert D.op(s, s) == D.identity
    assert D.op(D.op(s, r), s) == D.inverse(r)
    assert not D.is_abelian


def test_quaternion_relations():
    Q = quaternion()
    i, j, k, m1 = (Q.element(x) for x in ("i", "j", "k", "-1"))
    assert Q.op(i, i) == Q.op(j, j) == Q.op(k, k) == m1
    assert Q.op(Q.op(i, j), k) == m1
    assert Q.exponent == 4 and not Q.is_abelian


def test_symmetric_composition_convention():
    S3 = symmetric(3)
    p, q = S3.element("120"), S3.element("102")
    # (p*q)(i) = p[q[i]]: q = (1,0,2) then p = (1,2,0) gives (2,1,0)
    assert S3.format(S3.op(p, q)) == "210"
    assert symmetric(4).order == 24 and not symmetric(3).is_abelian
    with pytest.raises(ConfigError):
        symmetric(6)


def test_direct_product_and_names():
    G = named_group("Z2xZ3")
    assert G.order == 6 and G.is_abelian and G.exponent == 6
    assert named_group("cyclic:6").order == 6
    assert named_group("D4").order == 8 and named_group("Q8").name == "Q8"
    with pytest.raises(ConfigError):
        named_group("Q7")


def test_from_table_validation():
    Z3 = cyclic(3)
    G = from_table(Z3.mul.tolist(), labels=["a", "b", "c"])
    assert G == Z3 and G.element("b") == 1
    bad = np.array([[0, 1, 2], [1, 0, 2], [2, 2, 0]])  # not a group: row 2 repeats
    with pytest.raises(ConfigError):
        from_table(bad)
    nonassoc = np.array([[0, 1, 2], [1, 2, 0], [2, 1, 0]])
    with pytest.raises(ConfigError):
        from_table(nonassoc)
    with pytest.raises(ConfigError):
        from_table(Z3.mul, generators=[0])


@pytest.mark.parametrize("G", [dihedral(4), symmetric(4), quaternion()], ids=lambda G: G.name)
def test_left_cosets_partition(G):
    for H in ({G.identity}, generated_subgroup(G, [1]), set(G.elements)):
        cosets = left_cosets(G, H)
        assert sum(len(c) for c in cosets) == G.order
        assert set().union(*cosets) == set(G.elements)
        assert len(cosets) * len(H) == G.order


def test_element_lookup():
    D = dihedral(4)
    assert D.element("r1s") == 5 and D.element(3) == 3 and D.element("3") == 3
    with pytest.raises(ConfigError):
        D.element("t")
    with pytest.raises(ConfigError):
        D.element(8)
    assert ProbMeasure(D, {0: 1}).support == (0,)
