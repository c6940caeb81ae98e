from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import orbital_count
from spectralgap.errors import ConfigError, NumericalError
from spectralgap.groups import cyclic, dihedral, direct_product, generated_subgroup, quaternion, symmetric
from spectralgap.rep import (UnitaryRep, character, characters, cocycle_matrix, commutant_dimension,
                             coset_gset, direct_sum, disjoint_union, explicit_rep, fixed_subspace, gset,
                             hs_inner, is_ergodic, mixing_check, natural_gset, quasi_regular_rep,
                             regular_gset, regular_rep, restrict_to_mean_zero, tensor_with_conjugate,
                             trivial_gset, unvec, vec)

SWAP = np.array([[0, 1], [1, 0]])


def test_regular_rep_examples():
    Z2 = cyclic(2)
    assert np.array_equal(regular_rep(Z2).image(1), SWAP)
    evals = np.linalg.eigvals(regular_rep(cyclic(3)).image(1))
    expected = np.exp(2j * np.pi * np.arange(3) / 3)
    assert np.allclose(np.sort_complex(evals), np.sort_complex(expected), atol=1e-12)


@pytest.mark.parametrize("G", [cyclic(7), dihedral(4), quaternion(), symmetric(4)], ids=lambda G: G.name)
def test_regular_rep_is_a_unitary_homomorphism(G):
    pi = regular_rep(G)
    assert pi.validate() == 0.0
    assert fixed_subspace(pi).shape[1] == 1


def test_quasi_regular_uniform_is_permutation():
    X = coset_gset(dihedral(4), generated_subgroup(dihedral(4), [dihedral(4).element("s")]))
    pi = quasi_regular_rep(X)
    for U in pi.images:
        assert set(np.unique(U.real)) <= {0.0, 1.0} and np.allclose(U.imag, 0)
    assert pi.validate() < 1e-12


def test_quasi_regular_cocycle_example():
    X = gset(cyclic(2), [[0, 1], [1, 0]], weights=[1, 4])
    M = cocycle_matrix(X, 1)
    assert np.allclose(M, [[0, 2], [0.5, 0]])
    D = np.diag([1.0, 4.0])
    # unitary for the nu-weighted inner product
    assert np.allclose(M.conj().T @ D @ M, D)
    U = quasi_regular_rep(X).image(1)
    assert np.allclose(U, SWAP)


def test_gset_validation():
    Z2 = cyclic(2)
    with pytest.raises(ConfigError):
        gset(Z2, [[0, 1], [1, 0]], weights=[1, 0])
    with pytest.raises(ConfigError):
        gset(Z2, [[1, 0], [1, 0]])
    with pytest.raises(ConfigError):
        gset(cyclic(3), [[0, 1], [1, 0], [0, 1]])
    with pytest.raises(ConfigError):
        gset(Z2, [[0, 1], [1, 0]], weights=[1])


def test_mean_zero_examples():
    X = gset(cyclic(2), [[0, 1], [1, 0]])
    lam0 = restrict_to_mean_zero(X)
    assert lam0.dim == 1 and np.allclose(lam0.image(1), [[-1]])
    trivial = restrict_to_mean_zero(trivial_gset(cyclic(3), 3))
    assert all(np.allclose(U, np.eye(2)) for U in trivial.images)
    with pytest.raises(ConfigError, match="L²₀ requires invariant measure"):
        restrict_to_mean_zero(gset(cyclic(2), [[0, 1], [1, 0]], weights=[1, 4]))


def test_tensor_with_conjugate_examples():
    chi = character(cyclic(5), 2)
    T = tensor_with_conjugate(chi)
    assert T.dim == 1 and all(np.allclose(U, [[1]]) for U in T.images)
    assert fixed_subspace(tensor_with_conjugate(regular_rep(cyclic(2)))).shape[1] == 2
    assert fixed_subspace(tensor_with_conjugate(regular_rep(cyclic(3)))).shape[1] == 3


@pytest.mark.parametrize("G", [cyclic(4), dihedral(3), quaternion()], ids=lambda G: G.name)
def test_tensor_realizes_conjugation_and_is_hs_isometry(G):
    pi = regular_rep(G)
    T = tensor_with_conjugate(pi)
    rng = np.random.default_rng(0)
    d = pi.dim
    for g in G.elements:
        S = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        R = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        U = pi.image(g)
        assert np.allclose(unvec(T.image(g) @ vec(S), d), U @ S @ U.conj().T, atol=1e-12)
        KS, KR = unvec(T.image(g) @ vec(S), d), unvec(T.image(g) @ vec(R), d)
        assert abs(hs_inner(KS, KR) - hs_inner(S, R)) < 1e-10


def test_vec_is_column_major():
    T = np.arange(6).reshape(2, 3)
    assert list(vec(T)) == [0, 3, 1, 4, 2, 5]
    A = np.arange(9).reshape(3, 3)
    assert np.array_equal(unvec(vec(A), 3), A)


def test_fixed_subspace_needs_generating_set():
    pi = regular_rep(cyclic(4))
    with pytest.raises(ConfigError):
        fixed_subspace(pi, [2])
    assert fixed_subspace(pi, [3]).shape[1] == 1


def test_mixing_examples():
    assert not mixing_check(gset(cyclic(2), [[0, 1], [1, 0]]))
    assert not mixing_check(trivial_gset(cyclic(2), 3))
    assert mixing_check(trivial_gset(cyclic(3), 1))


def test_ergodicity_follows_transitivity():
    S4 = symmetric(4)
    assert is_ergodic(natural_gset(S4))
    X = disjoint_union(natural_gset(S4), coset_gset(S4, {S4.identity}))
    assert not X.is_transitive() and not is_ergodic(X)
    assert fixed_subspace(restrict_to_mean_zero(X)).shape[1] == len(X.orbits()) - 1


@pytest.mark.parametrize("G", [cyclic(2), cyclic(6), direct_product(cyclic(2), cyclic(2)),
                               dihedral(4), quaternion(), symmetric(3), symmetric(4)],
                         ids=lambda G: G.name)
def test_commutant_matches_orbital_count_oracle(G):
    for X in (regular_gset(G), coset_gset(G, generated_subgroup(G, [G.generators[0]]))):
        pi = quasi_regular_rep(X)
        oracle = orbital_count(X.action)
        assert commutant_dimension(pi) == oracle
        assert fixed_subspace(tensor_with_conjugate(pi)).shape[1] == oracle


@pytest.mark.parametrize("n", range(1, 9))
def test_abelian_regular_tensor_fixed_dim_is_order(n):
    pi = regular_rep(cyclic(n))
    assert fixed_subspace(tensor_with_conjugate(pi)).shape[1] == n


def test_characters_of_abelian_groups():
    G = direct_product(cyclic(2), cyclic(4))
    table = characters(G)
    assert len(table) == 8 and table[0] == (0,) * 8
    for i in range(8):
        chi = character(G, i)
        for g in G.elements:
            for h in G.elements:
                assert np.isclose(chi.image(G.op(g, h))[0, 0], chi.image(g)[0, 0] * chi.image(h)[0, 0])
    assert np.isclose(character(cyclic(3), 1).image(1)[0, 0], np.exp(2j * np.pi / 3))
    with pytest.raises(ConfigError):
        characters(symmetric(3))
    with pytest.raises(ConfigError):
        character(cyclic(3), 3)


def test_explicit_and_direct_sum():
    D3 = dihedral(3)
    c, s = np.cos(2 * np.pi / 3), np.sin(2 * np.pi / 3)
    rot = np.array([[c, -s], [s, c]])
    ref = np.array([[1, 0], [0, -1]])
    pi = explicit_rep(D3, {"r1": rot, "s": ref})
    assert pi.dim == 2 and commutant_dimension(pi) == 1
    rho = direct_sum(pi, regular_rep(D3))
    assert rho.dim == 8 and rho.validate() < 1e-12
    with pytest.raises(NumericalError):
        explicit_rep(D3, {"r1": 2 * rot, "s": ref})
    with pytest.raises(NumericalError):
        explicit_rep(D3, {"r1": rot, "s": np.eye(2)})  # s r s != r^-1
    with pytest.raises(ConfigError):
        UnitaryRep(D3, generator_images={"r1": rot})


@settings(max_examples=25)
@given(st.integers(1, 4), st.lists(st.integers(1, 5), min_size=6, max_size=6))
def test_trivial_action_weights_give_identity(n, ws):
    X = trivial_gset(cyclic(3), n, [Fraction(w) for w in ws[:n]])
    pi = quasi_regular_rep(X)
    assert all(np.allclose(U, np.eye(n)) for U in pi.images)
