from __future__ import annotations

import numpy as np
import pytest

from spectralgap.errors import ConfigError
from spectralgap.groups import dihedral, is_strongly_adapted, named_group
from spectralgap.suites import (SuiteResult, get_suite, gset_corpus, random_mixed_measure, random_rep,
                                random_unitary, suite_lemma2, suite_polar)


def test_random_unitary_is_unitary():
    rng = np.random.default_rng(0)
    for d in (1, 3, 8):
        U = random_unitary(rng, d)
        assert np.allclose(U.conj().T @ U, np.eye(d), atol=1e-12)


@pytest.mark.parametrize("name", ["Z6", "D4", "S4"])
def test_random_rep_is_a_representation(name):
    rng = np.random.default_rng(1)
    G = named_group(name)
    for _ in range(5):
        pi = random_rep(G, rng)
        assert pi.dim <= 24 + G.order and pi.validate() < 1e-12


def test_mixed_measures_cover_both_answers():
    rng = np.random.default_rng(2)
    D4 = dihedral(4)
    answers = {is_strongly_adapted(D4, random_mixed_measure(D4, rng)) for _ in range(60)}
    assert answers == {True, False}


def test_gset_corpus_weights_are_invariant():
    for _, X in gset_corpus(named_group("S3")):
        assert X.is_invariant() and X.size <= 12


def test_polar_suite_and_summary():
    res = suite_polar(samples=30, dims=(3, 6), seed=4)
    assert res.all_passed and res.total == 60
    assert res.summary().startswith("polar: 60/60 pass; worst error")
    lem = suite_lemma2(samples=5, dims=(2,), seed=0)
    assert "pair 5/5" in lem.summary()


def test_suite_result_bookkeeping():
    res = SuiteResult("demo", ("x", "margin", "ok"), [(1, 0.5, True), (2, -0.1, False)], margin_column=1)
    assert res.total == 2 and res.passed == 1 and not res.all_passed and res.worst[0] == 2
    with pytest.raises(ConfigError):
        get_suite("nope")
