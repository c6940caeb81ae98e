"""Finite-dimensional unitary representations of finite groups.

Matrices act on column vectors. Hilbert-Schmidt space is vectorized by
column-major stacking, ``vec(T) = T.reshape(-1, order="F")``, so that
``vec(A T B) = kron(B.T, A) vec(T)``.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import ConfigError, NumericalError
from .groups import FiniteGroup, generated_subgroup, left_cosets
from .tolerances import DEFAULT, Tolerances


def vec(T: np.ndarray) -> np.ndarray:
    return np.asarray(T).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


def unitarity_defect(U: np.ndarray) -> float:
    d = U.shape[0]
    if d == 0:
        return 0.0
    return float(np.abs(U.conj().T @ U - np.eye(d)).max())


class UnitaryRep:
    """A unitary representation of a finite group.

    Either the full image table or only generator images may be given; in
    the latter case images of all elements are expanded lazily along the
    Cayley graph on first access.
    """

    def __init__(self, group: FiniteGroup, *, images: np.ndarray | None = None,
                 generator_images: Mapping[int, np.ndarray] | None = None,
                 label: str = "rep", tol: Tolerances = DEFAULT):
        self.group = group
        self.label = label
        self.tol = tol
        if images is not None:
            images = np.asarray(images, dtype=complex)
            if images.ndim != 3 or images.shape[0] != group.order or images.shape[1] != images.shape[2]:
                raise ConfigError("images must have shape (order, dim, dim)")
            images.setflags(write=False)
            self.__dict__["images"] = images
            self.dim = images.shape[1]
            self.generator_images = {g: images[g] for g in group.generators}
        elif generator_images is not None:
            gi = {group.element(g): np.asarray(U, dtype=complex) for g, U in generator_images.items()}
            dims = {U.shape for U in gi.values()}
            if len(dims) != 1 or any(len(s) != 2 or s[0] != s[1] for s in dims):
                raise ConfigError("generator images must be square matrices of one size")
            if len(generated_subgroup(group, gi)) != group.order:
                raise ConfigError("generator images must be given on a generating set")
            self.generator_images = gi
            self.dim = next(iter(dims))[0]
        else:
            raise ConfigError("need images or generator_images")
        for g, U in self.generator_images.items():
            if unitarity_defect(U) > tol.unitarity:
                raise NumericalError(f"image of {group.format(g)} is not unitary")

    def __repr__(self):
        return f"UnitaryRep({self.label}, group={self.group.name}, dim={self.dim})"

    @cached_property
    def images(self) -> np.ndarray:
        G = self.group
        out = np.zeros((G.order, self.dim, self.dim), dtype=complex)
        done = np.zeros(G.order, dtype=bool)
        out[G.identity] = np.eye(self.dim)
        done[G.identity] = True
        frontier = [G.identity]
        gens = list(self.generator_images.items())
        while frontier:
            nxt = []
            for x in frontier:
                for s, U in gens:
                    y = G.op(x, s)
                    if not done[y]:
                        out[y] = out[x] @ U
                        done[y] = True
                        nxt.append(y)
            frontier = nxt
        out.setflags(write=False)
        return out

    def image(self, g) -> np.ndarray:
        return self.images[self.group.element(g)]

    def validate(self, seed: int = 0) -> float:
        """Return the worst unitarity/homomorphism defect; raise if above tolerance."""
        imgs = self.images
        G = self.group
        worst = max((unitarity_defect(U) for U in imgs), default=0.0)
        if G.order <= self.tol.exhaustive_order:
            pairs = itertools.product(range(G.order), repeat=2)
        else:
            rng = np.random.default_rng(seed)
            pairs = rng.integers(0, G.order, size=(self.tol.homomorphism_samples, 2))
        for g, h in pairs:
            err = np.abs(imgs[G.op(int(g), int(h))] - imgs[g] @ imgs[h]).max() if self.dim else 0.0
            worst = max(worst, float(err))
        if worst > self.tol.unitarity:
            raise NumericalError(f"{self.label}: representation defect {worst:.3e}")
        return worst


# ---------------------------------------------------------------- G-sets

@dataclass(frozen=True, eq=False)
class WeightedGSet:
    """A finite set ``0..n-1`` with a left action and positive point weights.

    ``action[g, x]`` is ``g·x``.
    """

    group: FiniteGroup
    action: np.ndarray
    weights: tuple

    def __post_init__(self):
        G = self.group
        act = np.array(self.action, dtype=np.int64)
        if act.ndim != 2 or act.shape[0] != G.order:
            raise ConfigError("action table must have shape (order, npoints)")
        n = act.shape[1]
        if n and (act.min() < 0 or act.max() >= n):
            raise ConfigError("action table entries must be point indices")
        weights = tuple(self.weights)
        if len(weights) != n:
            raise ConfigError("one weight per point required")
        if any(w <= 0 for w in weights):
            raise ConfigError("G-set weights must be strictly positive")
        if n and not np.array_equal(act[G.identity], np.arange(n)):
            raise ConfigError("identity must act trivially")
        # (gh)·x == g·(h·x)
        for g in range(G.order):
            if n and not np.array_equal(act[G.mul[g]], act[g][act]):
                raise ConfigError("action table is not a group action")
        act.setflags(write=False)
        object.__setattr__(self, "action", act)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.action.shape[1]

    def orbits(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for x in range(self.size):
            if x not in seen:
                orb = frozenset(int(y) for y in self.action[:, x])
                seen |= orb
                out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1

    def is_invariant(self) -> bool:
        w = self.weights
        return all(w[int(self.action[g, x])] == w[x]
                   for g in self.group.generators for x in range(self.size))


def _exact(w):
    if isinstance(w, (int, Fraction, np.integer)):
        return Fraction(int(w)) if not isinstance(w, Fraction) else w
    if isinstance(w, str):
        return Fraction(w)
    return float(w)


def gset(group: FiniteGroup, action, weights=None) -> WeightedGSet:
    act = np.asarray(action)
    if weights is None:
        weights = [Fraction(1)] * act.shape[1]
    return WeightedGSet(group, act, tuple(_exact(w) for w in weights))


def regular_gset(G: FiniteGroup) -> WeightedGSet:
    return gset(G, G.mul)


def coset_gset(G: FiniteGroup, H) -> WeightedGSet:
    """Left translation on the left cosets ``G/H``."""
    cosets = left_cosets(G, H)
    where = {g: i for i, c in enumerate(cosets) for g in c}
    reps = [min(c) for c in cosets]
    action = np.array([[where[G.op(g, r)] for r in reps] for g in G.elements])
    return gset(G, action)


def trivial_gset(G: FiniteGroup, n: int, weights=None) -> WeightedGSet:
    return gset(G, np.tile(np.arange(n), (G.order, 1)), weights)


def permutation_gset(G: FiniteGroup, generator_perms: Mapping, weights=None) -> WeightedGSet:
    """Extend permutations given on generators to an action table along the Cayley graph."""
    perms = {G.element(g): np.asarray(p, dtype=np.int64) for g, p in generator_perms.items()}
    n = len(next(iter(perms.values())))
    action = np.full((G.order, n), -1, dtype=np.int64)
    action[G.identity] = np.arange(n)
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, p in perms.items():
                # (s·x)·pt = s·(x·pt)
                y = G.op(s, x)
                if action[y, 0] < 0:
                    action[y] = p[action[x]]
                    nxt.append(y)
        frontier = nxt
    if (action < 0).any():
        raise ConfigError("generator permutations must be given on a generating set")
    return gset(G, action, weights)


def natural_gset(G: FiniteGroup) -> WeightedGSet:
    """``S_n`` acting on ``{0..n-1}``; relies on the permutation labels of ``symmetric``."""
    if not G.name.startswith("S"):
        raise ConfigError("natural action is defined for symmetric groups")
    n = len(G.labels[0])
    return gset(G, np.array([[int(G.labels[g][i]) for i in range(n)] for g in G.elements]))


def disjoint_union(X: WeightedGSet, Y: WeightedGSet) -> WeightedGSet:
    if X.group != Y.group:
        raise ConfigError("G-sets over different groups")
    action = np.hstack([X.action, Y.action + X.size])
    return WeightedGSet(X.group, action, X.weights + Y.weights)


# ---------------------------------------------------------------- constructors

def regular_rep(G: FiniteGroup, tol: Tolerances = DEFAULT) -> UnitaryRep:
    """Left translation ``h -> gh`` on ``L^2(G)`` as permutation matrices."""
    imgs = np.zeros((G.order, G.order, G.order), dtype=complex)
    g_idx, h_idx = np.meshgrid(np.arange(G.order), np.arange(G.order), indexing="ij")
    imgs[g_idx, G.mul[g_idx, h_idx], h_idx] = 1.0
    return UnitaryRep(G, images=imgs, label=f"regular({G.name})", tol=tol)


def cocycle_matrix(X: WeightedGSet, g: int) -> np.ndarray:
    """Coordinates of ``lambda_X(g)`` in the point-evaluation basis.

    ``(lambda_X(g) xi)(x) = sqrt(nu(g^{-1}x) / nu(x)) xi(g^{-1}x)``. This matrix
    is unitary for the nu-weighted inner product, not the Euclidean one.
    """
    G = X.group
    ginv = G.inverse(g)
    nu = np.array([float(w) for w in X.weights])
    M = np.zeros((X.size, X.size), dtype=complex)
    for x in range(X.size):
        y = int(X.action[ginv, x])
        M[x, y] = np.sqrt(nu[y] / nu[x])
    return M


def quasi_regular_rep(X: WeightedGSet, tol: Tolerances = DEFAULT) -> UnitaryRep:
    """``lambda_X`` on ``L^2(X, nu)`` in the orthonormal basis ``delta_x / sqrt(nu(x))``."""
    nu = np.array([float(w) for w in X.weights])
    half, ihalf = np.sqrt(nu), 1.0 / np.sqrt(nu)
    imgs = np.array([half[:, None] * cocycle_matrix(X, g) * ihalf[None, :] for g in X.group.elements])
    rep = UnitaryRep(X.group, images=imgs, label="quasi_regular", tol=tol)
    rep.gset = X
    return rep


def mean_zero_basis(X: WeightedGSet) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of the constants, in the
    orthonormal coordinates used by ``quasi_regular_rep``."""
    n = X.size
    u = np.sqrt(np.array([float(w) for w in X.weights]))
    u = u / np.linalg.norm(u)
    if n <= 1:
        return np.zeros((n, 0))
    # Householder reflection sending e_0 to u; its other columns span u^perp
    v = u.copy()
    v[0] -= 1.0
    if np.linalg.norm(v) < 1e-15:
        H = np.eye(n)
    else:
        H = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    return H[:, 1:]


def restrict_to_mean_zero(X, tol: Tolerances = DEFAULT) -> UnitaryRep:
    """``lambda_X^0``: the compression of ``lambda_X`` to ``(C 1_X)^perp``."""
    X = getattr(X, "gset", X)
    if not X.is_invariant():
        raise ConfigError("L²₀ requires invariant measure")
    Q = mean_zero_basis(X)
    full = quasi_regular_rep(X, tol)
    imgs = np.einsum("ia,gij,jb->gab", Q, full.images, Q)
    rep = UnitaryRep(X.group, images=imgs, label="mean_zero", tol=tol)
    rep.gset = X
    return rep


def characters(G: FiniteGroup) -> list[tuple[int, ...]]:
    """All characters of an abelian group as exponent tables.

    Entry ``k[g]`` means ``chi(g) = exp(2 pi i k[g] / exponent)``. Sorted by
    their values on the canonical generators, so index 0 is trivial and for
    ``Z/n`` character ``j`` sends ``1`` to ``exp(2 pi i j / n)``.
    """
    if not G.is_abelian:
        raise ConfigError(f"{G.name} is not abelian; characters do not span its dual")
    e = G.exponent
    gens = G.generators
    found = []
    for assign in itertools.product(range(e), repeat=len(gens)):
        k = [-1] * G.order
        k[G.identity] = 0
        frontier, ok = [G.identity], True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, a in zip(gens, assign):
                    y = G.op(x, s)
                    val = (k[x] + a) % e
                    if k[y] < 0:
                        k[y] = val
                        nxt.append(y)
                    elif k[y] != val:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok:
            found.append(tuple(k))
    if len(found) != G.order:
        raise NumericalError("character enumeration did not find |G| characters")
    return found


def character(G: FiniteGroup, index: int, tol: Tolerances = DEFAULT) -> UnitaryRep:
    table = characters(G)
    if not 0 <= index < len(table):
        raise ConfigError(f"character index must be in 0..{len(table) - 1}")
    k = np.array(table[index])
    vals = np.exp(2j * np.pi * k / G.exponent)
    return UnitaryRep(G, images=vals[:, None, None], label=f"character({G.name},{index})", tol=tol)


def direct_sum(pi: UnitaryRep, sigma: UnitaryRep) -> UnitaryRep:
    if pi.group != sigma.group:
        raise ConfigError("direct sum of representations of different groups")
    d1, d2 = pi.dim, sigma.dim
    imgs = np.zeros((pi.group.order, d1 + d2, d1 + d2), dtype=complex)
    imgs[:, :d1, :d1] = pi.images
    imgs[:, d1:, d1:] = sigma.images
    return UnitaryRep(pi.group, images=imgs, label=f"{pi.label}+{sigma.label}", tol=pi.tol)


def explicit_rep(G: FiniteGroup, generator_images: Mapping, tol: Tolerances = DEFAULT,
                 label: str = "explicit") -> UnitaryRep:
    rep = UnitaryRep(G, generator_images=generator_images, label=label, tol=tol)
    rep.validate()
    return rep


def vectorization_defect(U: np.ndarray, K: np.ndarray, rng: np.random.Generator, trials: int = 3) -> float:
    """max |K vec(T) - vec(U T U^{-1})| over random complex T."""
    d = U.shape[0]
    worst = 0.0
    for _ in range(trials):
        T = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        worst = max(worst, float(np.abs(K @ vec(T) - vec(U @ T @ U.conj().T)).max()))
    return worst


def tensor_with_conjugate(pi: UnitaryRep, seed: int = 0) -> UnitaryRep:
    """``pi ⊗ conj(pi)`` realized on Hilbert-Schmidt space as ``T -> pi(x) T pi(x)^{-1}``."""
    d = pi.dim
    imgs = np.einsum("gab,gij->gaibj", pi.images.conj(), pi.images).reshape(pi.group.order, d * d, d * d)
    rng = np.random.default_rng(seed)
    for g in pi.group.generators:
        err = vectorization_defect(pi.images[g], imgs[g], rng) if d else 0.0
        if err > pi.tol.vectorization * max(1, d):
            raise NumericalError(f"vectorization convention violated ({err:.2e})")
    return UnitaryRep(pi.group, images=imgs, label=f"tensor_conj({pi.label})", tol=pi.tol)


def hs_inner(S: np.ndarray, T: np.ndarray) -> complex:
    """``<S, T> = Trace(T^* S)``."""
    return complex(np.trace(T.conj().T @ S))


# ---------------------------------------------------------------- invariants

def _check_generating(G: FiniteGroup, generators) -> list[int]:
    gens = [G.element(g) for g in generators]
    if not gens or len(generated_subgroup(G, gens)) != G.order:
        raise ConfigError("fixed_subspace needs a generating set of the group")
    return gens


def fixed_subspace(pi: UnitaryRep, generators: Sequence | None = None,
                   tol: Tolerances | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the vectors fixed by every ``pi(g)``.

    Null space of ``sum_g (pi(g) - I)^*(pi(g) - I)``, with a rank threshold
    relative to its largest eigenvalue (floored at 1).
    """
    tol = tol or pi.tol
    gens = _check_generating(pi.group, generators if generators is not None else pi.group.generators)
    d = pi.dim
    if d == 0:
        return np.zeros((0, 0), dtype=complex)
    M = np.zeros((d, d), dtype=complex)
    for g in gens:
        D = pi.images[g] - np.eye(d)
        M += D.conj().T @ D
    evals, evecs = np.linalg.eigh(M)
    # floor of 1 keeps rounding noise from counting as rank when every pi(g) is ~I
    keep = evals <= tol.fixed * max(evals.max(), 1.0)
    return evecs[:, keep]


def commutant_dimension(pi: UnitaryRep, generators: Sequence | None = None,
                        tol: Tolerances | None = None) -> int:
    """Dimension of ``{U : U pi(g) = pi(g) U for all g}`` by direct linear solve."""
    tol = tol or pi.tol
    gens = _check_generating(pi.group, generators if generators is not None else pi.group.generators)
    d = pi.dim
    if d == 0:
        return 0
    eye = np.eye(d)
    # vec(U P - P U) = (P^T ⊗ I - I ⊗ P) vec(U)
    K = np.vstack([np.kron(pi.images[g].T, eye) - np.kron(eye, pi.images[g]) for g in gens])
    s = np.linalg.svd(K, compute_uv=False)
    rank = int((s > tol.fixed * max(s.max(), 1.0)).sum())
    return d * d - rank


def is_ergodic(X: WeightedGSet, tol: Tolerances = DEFAULT) -> bool:
    """No nonzero invariant vectors in ``L²₀(X)``."""
    lam0 = restrict_to_mean_zero(X, tol)
    return fixed_subspace(lam0, tol=tol).shape[1] == 0


def mixing_check(X: WeightedGSet, tol: Tolerances = DEFAULT) -> bool:
    """True iff ``lambda_X^0 ⊗ conj(lambda_X^0)`` has no nonzero invariant vector.

    On a finite set with more than one point this is always False, because
    the identity operator on ``L²₀`` is invariant; a one-point set is
    vacuously mixing.
    """
    lam0 = restrict_to_mean_zero(X, tol)
    if lam0.dim == 0:
        return True
    return fixed_subspace(tensor_with_conjugate(lam0), tol=tol).shape[1] == 0
