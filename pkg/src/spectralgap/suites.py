"""Randomized and exhaustive verification suites behind ``spectralgap verify``.

Every suite takes a seed and returns a :class:`SuiteResult` holding one row
per sample, so that a run can be replayed and its worst case inspected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError
from .groups import FiniteGroup, generated_subgroup, named_group
from .measure import ProbMeasure, random_measure
from .rep import (UnitaryRep, character, coset_gset, commutant_dimension, direct_sum,
                  disjoint_union, fixed_subspace, gset, natural_gset, quasi_regular_rep,
                  regular_gset, regular_rep, restrict_to_mean_zero, tensor_with_conjugate,
                  trivial_gset)
from .spectral import (check_hs_inequality, check_nu_identities, check_polar_identities,
                       check_strong_adapted_equivalence, check_tensor_power_bound)
from .tolerances import DEFAULT, Tolerances


@dataclass
class SuiteResult:
    name: str
    header: tuple
    rows: list = field(default_factory=list)
    # index of the column holding a margin (larger is safer), if any
    margin_column: int | None = None
    ok_column: int = -1

    @property
    def total(self) -> int:
        return len(self.rows)

    @property
    def passed(self) -> int:
        return sum(bool(r[self.ok_column]) for r in self.rows)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.total

    @property
    def worst(self):
        if self.margin_column is None or not self.rows:
            return None
        return min(self.rows, key=lambda r: r[self.margin_column])

    def summary(self) -> str:
        line = f"{self.name}: {self.passed}/{self.total} pass"
        if "kind" in self.header:
            k = self.header.index("kind")
            kinds = dict.fromkeys(r[k] for r in self.rows)
            parts = []
            for kind in kinds:
                rows = [r for r in self.rows if r[k] == kind]
                parts.append(f"{kind} {sum(bool(r[self.ok_column]) for r in rows)}/{len(rows)}")
            line += f" ({', '.join(parts)})"
        w = self.worst
        if w is not None:
            line += f"; worst {self.header[self.margin_column]} = {w[self.margin_column]:.3e}"
        return line


def random_complex(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase correction."""
    Q, R = np.linalg.qr(random_complex(rng, d))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_mixed_measure(G: FiniteGroup, rng: np.random.Generator) -> ProbMeasure:
    """Random measure whose support is, in turn, small, inside a coset of a
    random cyclic subgroup, or arbitrary; the mix exercises both answers of
    the strong-adaptedness test."""
    mode = int(rng.integers(3))
    if mode == 0:
        return random_measure(G, rng, support_size=int(rng.integers(1, min(3, G.order) + 1)))
    if mode == 1:
        H = sorted(generated_subgroup(G, [int(rng.integers(G.order))]))
        g = int(rng.integers(G.order))
        coset = [G.op(g, h) for h in H]
        k = int(rng.integers(1, len(coset) + 1))
        pick = rng.choice(coset, size=k, replace=False)
        raw = rng.integers(1, 9, size=k)
        return ProbMeasure(G, {int(x): Fraction(int(r), int(raw.sum())) for x, r in zip(pick, raw)})
    return random_measure(G, rng)


def _groups(names) -> list[FiniteGroup]:
    return [named_group(n) if isinstance(n, str) else n for n in names]


# ---------------------------------------------------------------- operator inequalities

def suite_lemma2(samples: int = 10_000, dims=(2, 4, 8, 16), seed: int = 0,
                 tol: Tolerances = DEFAULT) -> SuiteResult:
    """``|<S,T>|^2 <= <|S|,|T|><|S^*|,|T^*|>`` on random pairs, plus equality at ``S = T``.

    Rows are ``(dim, kind, relative_margin, ok)`` where ``relative_margin`` is
    ``(rhs - lhs) / scale`` for pairs and ``-|rhs - lhs| / scale`` for ``S = T``.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("lemma2", ("dim", "kind", "relative_margin", "ok"), margin_column=2)
    for d in dims:
        for _ in range(samples):
            S, T = random_complex(rng, d), random_complex(rng, d)
            r = check_hs_inequality(S, T, tol)
            res.rows.append((d, "pair", r.margin / r.scale, r.holds))
        for _ in range(max(1, samples // 100)):
            S = random_complex(rng, d)
            r = check_hs_inequality(S, S, tol)
            dev = abs(r.rhs - r.lhs) / r.scale
            res.rows.append((d, "equal", -dev, dev <= tol.hs_equality))
    return res


def suite_polar(samples: int = 1000, dims=(2, 4, 8, 16), seed: int = 0,
                tol: Tolerances = DEFAULT) -> SuiteResult:
    """Polar identities on random matrices, including rank-deficient ones."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("polar", ("dim", "rank", "error", "ok"), margin_column=2)
    for d in dims:
        for i in range(samples):
            T = random_complex(rng, d)
            if i % 3 == 1:
                k = int(rng.integers(1, d))
                T = T[:, :k] @ random_complex(rng, d)[:k]
            r = check_polar_identities(T, tol)
            res.rows.append((d, r.rank, -max(r.factor_error, r.adjoint_error), r.holds))
    return res


def random_rep(G: FiniteGroup, rng: np.random.Generator, tol: Tolerances = DEFAULT,
               max_dim: int = 24) -> UnitaryRep:
    """A random unitary representation of ``G`` of dimension at most ``max_dim``.

    Built from regular, quasi-regular, mean-zero and (for abelian groups)
    character pieces, then conjugated by a Haar unitary so the matrices are
    not permutation-shaped.
    """
    pieces = []
    choices = ["regular", "cosets", "mean_zero"] + (["character"] if G.is_abelian else [])
    for _ in range(int(rng.integers(1, 3))):
        kind = choices[int(rng.integers(len(choices)))]
        if kind == "regular":
            pieces.append(regular_rep(G, tol))
        elif kind == "character":
            pieces.append(character(G, int(rng.integers(G.order)), tol))
        else:
            H = generated_subgroup(G, [int(rng.integers(G.order))])
            X = coset_gset(G, H)
            pieces.append(quasi_regular_rep(X, tol) if kind == "cosets" or X.size == 1
                          else restrict_to_mean_zero(X, tol))
    pi = pieces[0]
    for p in pieces[1:]:
        if pi.dim + p.dim <= max_dim:
            pi = direct_sum(pi, p)
    V = random_unitary(rng, pi.dim)
    imgs = np.einsum("ij,gjk,lk->gil", V, pi.images, V.conj())
    return UnitaryRep(G, images=imgs, label=f"conj({pi.label})", tol=tol)


TENSOR_GROUPS = ("Z5", "Z8", "D4", "S3", "S4")


def suite_tensor_power(samples: int = 50, n_max: int = 8, groups=TENSOR_GROUPS, seed: int = 0,
                       tol: Tolerances = DEFAULT) -> SuiteResult:
    """``||A^n|| <= ||B^n||^(1/2)`` and ``r(A)^2 <= r(B)`` on random triples.

    ``A = pi(mu)``, ``B = (pi ⊗ conj(pi))(mu)``. Rows:
    ``(group, rep, dim, worst_norm_margin, radius_margin, pointwise_margin, ok)``.
    """
    rng = np.random.default_rng(seed)
    Gs = _groups(groups)
    res = SuiteResult("tensor-power", ("group", "rep", "dim", "norm_margin", "radius_margin",
                                       "pointwise_margin", "ok"), margin_column=3)
    for _ in range(samples):
        G = Gs[int(rng.integers(len(Gs)))]
        pi = random_rep(G, rng, tol)
        mu = random_measure(G, rng)
        rep = check_tensor_power_bound(pi, mu, n_max, tol, seed=int(rng.integers(2 ** 31)))
        norm_margin = min(r.tensor_norm_sqrt - r.norm_power for r in rep.rows)
        radius_margin = rep.tensor_radius - rep.radius ** 2
        point = min(r.pointwise_margin for r in rep.rows)
        res.rows.append((G.name, pi.label, pi.dim, norm_margin, radius_margin, point, rep.holds))
    return res


def suite_nu_identities(groups=("S3", "D4"), samples: int = 100, seed: int = 0,
                        tol: Tolerances = DEFAULT) -> SuiteResult:
    """``pi(nu) = pi(mu)^* pi(mu)`` and ``||pi(nu)|| = ||pi(mu)||^2`` under the regular rep."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("nu-identities", ("group", "matrix_error", "norm_error", "ok"), margin_column=2)
    for G in _groups(groups):
        lam = regular_rep(G, tol)
        for _ in range(samples):
            r = check_nu_identities(lam, random_measure(G, rng), tol)
            res.rows.append((G.name, r.matrix_error, -abs(r.norm_nu - r.norm_mu_squared), r.holds))
    return res


ADAPTED_GROUPS = tuple(f"Z{n}" for n in range(1, 13)) + ("D4", "Q8", "S3", "S4")


def suite_adapted_equivalence(groups=ADAPTED_GROUPS, samples: int = 200, seed: int = 0) -> SuiteResult:
    """Direct coset search against adaptedness of ``reflect(mu) * mu``; exact agreement."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("adapted-equivalence", ("group", "support", "direct", "via_nu", "ok"))
    for G in _groups(groups):
        for _ in range(samples):
            mu = random_mixed_measure(G, rng)
            direct, via_nu = check_strong_adapted_equivalence(G, mu)
            supp = " ".join(G.format(g) for g in mu.support)
            res.rows.append((G.name, supp, direct, via_nu, direct == via_nu))
    return res


# ---------------------------------------------------------------- invariant vectors

def gset_corpus(G: FiniteGroup, max_size: int = 12, seed: int = 0) -> list[tuple[str, object]]:
    """Transitive and intransitive G-sets of size at most ``max_size``.

    Coset spaces of the subgroups generated by at most two elements, disjoint
    unions of pairs of those, trivial actions, and the natural action for
    symmetric groups. Weights are random but constant on orbits, hence
    invariant.
    """
    rng = np.random.default_rng(seed)
    subgroups = {}
    for a, b in itertools.combinations_with_replacement(range(G.order), 2):
        H = generated_subgroup(G, [a, b])
        subgroups.setdefault(H, None)
    transitive = [(f"G/H[{len(H)}]", coset_gset(G, H)) for H in sorted(subgroups, key=sorted)
                  if G.order // len(H) <= max_size]
    corpus = list(transitive)
    if G.name.startswith("S") and G.name[1:].isdigit():
        corpus.append(("natural", natural_gset(G)))
    small = [(n, X) for n, X in transitive if X.size <= max_size // 2]
    for (n1, X1), (n2, X2) in itertools.combinations_with_replacement(small, 2):
        if X1.size + X2.size <= max_size:
            corpus.append((f"{n1}+{n2}", disjoint_union(X1, X2)))
    for k in (1, 2, 3):
        corpus.append((f"trivial[{k}]", trivial_gset(G, k)))
    if G.order <= max_size:
        corpus.append(("regular", regular_gset(G)))

    out = []
    for name, X in corpus:
        w = [Fraction(0)] * X.size
        for orbit in X.orbits():
            c = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 6)))
            for x in orbit:
                w[x] = c
        out.append((name, gset(G, X.action, w)))
    return out


ERGODIC_GROUPS = ("Z6", "Z12", "D4", "Q8", "S3", "S4")


def suite_ergodicity(groups=ERGODIC_GROUPS, tol: Tolerances = DEFAULT, seed: int = 0) -> SuiteResult:
    """``dim fixed(lambda_X^0) == 0`` iff the action is transitive.

    The dimension itself must equal ``#orbits - 1``; rows record both.
    """
    res = SuiteResult("ergodicity", ("group", "gset", "size", "orbits", "fixed_dim", "transitive", "ok"))
    for G in _groups(groups):
        for name, X in gset_corpus(G, seed=seed):
            lam0 = restrict_to_mean_zero(X, tol)
            dim = fixed_subspace(lam0, tol=tol).shape[1] if lam0.dim else 0
            orbits = len(X.orbits())
            ok = (dim == 0) == X.is_transitive() and dim == orbits - 1
            res.rows.append((G.name, name, X.size, orbits, dim, X.is_transitive(), ok))
    return res


def suite_commutant(groups=("Z2", "Z3", "S3"), tol: Tolerances = DEFAULT) -> SuiteResult:
    """``dim fixed(pi ⊗ conj(pi))`` against a direct solve of ``U pi(g) = pi(g) U``."""
    res = SuiteResult("commutant", ("group", "rep", "fixed_dim", "commutant_dim", "ok"))
    for G in _groups(groups):
        lam = regular_rep(G, tol)
        f = fixed_subspace(tensor_with_conjugate(lam), tol=tol).shape[1]
        c = commutant_dimension(lam, tol=tol)
        res.rows.append((G.name, lam.label, f, c, f == c))
    return res


SUITES = {
    "lemma2": suite_lemma2,
    "tensor-power": suite_tensor_power,
    "nu-identities": suite_nu_identities,
    "polar": suite_polar,
    "adapted-equivalence": suite_adapted_equivalence,
    "ergodicity": suite_ergodicity,
    "commutant": suite_commutant,
}


def get_suite(name: str):
    try:
        return SUITES[name]
    except KeyError:
        raise ConfigError(f"unknown suite {name!r}; known: {', '.join(SUITES)}") from None
