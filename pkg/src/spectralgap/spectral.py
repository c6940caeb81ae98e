"""Averaged operators ``pi(mu)``, their spectra, and the operator inequalities
that tie ``pi(mu)`` to ``pi ⊗ conj(pi)``.

Measure and group algebra stay exact up to :func:`average`, where weights
are converted to floats; everything after that is double precision with the
tolerances of a :class:`~spectralgap.tolerances.Tolerances` profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConfigError, NumericalError
from .groups import FiniteGroup, coset_witness, is_adapted
from .measure import ProbMeasure, convolution_power, nu_of
from .rep import UnitaryRep, tensor_with_conjugate
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True, eq=False)
class AveragedOperator:
    """The matrix ``sum_g mu(g) pi(g)`` together with where it came from."""

    matrix: object
    rep_label: str = ""
    measure: ProbMeasure | None = field(default=None, repr=False)
    # row/column labels when the operator lives on an enumerated set (e.g. a Cayley ball)
    basis: object = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else np.asarray(self.matrix)


@dataclass(frozen=True)
class SpectralReport:
    spectral_radius: float
    operator_norm: float
    method: str
    dim: int
    iterations: int = 0
    residual: float = 0.0

    @property
    def gap(self) -> float:
        return 1.0 - self.spectral_radius

    def as_text(self, rep: str = "", measure: str = "") -> str:
        rows = [("rep", rep), ("measure", measure), ("dim", self.dim),
                ("radius", f"{self.spectral_radius:.12g}"), ("norm", f"{self.operator_norm:.12g}"),
                ("gap", f"{self.gap:.12g}"), ("method", self.method)]
        if self.iterations:
            rows.append(("iterations", self.iterations))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def average(pi: UnitaryRep, mu: ProbMeasure, tol: Tolerances = DEFAULT) -> AveragedOperator:
    """``pi(mu) = sum_g mu(g) pi(g)``."""
    if mu.group != pi.group:
        raise ConfigError(f"measure lives on {mu.group}, representation on {pi.group}")
    A = np.zeros((pi.dim, pi.dim), dtype=complex)
    imgs = pi.images
    for g, w in mu.items():
        A += float(w) * imgs[g]
    if pi.dim and np.linalg.norm(A, 2) > 1 + tol.contraction:
        raise NumericalError("averaged operator is not a contraction")
    return AveragedOperator(A, pi.label, mu)


def _is_hermitian(M) -> bool:
    if sp.issparse(M):
        D = M - M.conj().T
        return D.nnz == 0 or abs(D).max() <= 1e-14 * max(abs(M).max(), 1.0)
    return bool(np.allclose(M, M.conj().T, rtol=0, atol=1e-14 * max(np.abs(M).max(), 1.0)))


def operator_norm(M) -> float:
    """Largest singular value."""
    if M.shape[0] == 0:
        return 0.0
    if sp.issparse(M):
        if M.shape[0] <= 2:
            return float(np.linalg.norm(M.toarray(), 2))
        if _is_hermitian(M):
            return _sparse_hermitian_radius(M)
        return float(spla.svds(M.astype(complex), k=1, return_singular_vectors=False)[0])
    return float(np.linalg.norm(M, 2))


def _sparse_hermitian_radius(M) -> float:
    if M.shape[0] <= 2:
        return float(np.abs(np.linalg.eigvalsh(M.toarray())).max())
    hi = spla.eigsh(M, k=1, which="LA", return_eigenvectors=False, tol=1e-14)[0]
    lo = spla.eigsh(M, k=1, which="SA", return_eigenvectors=False, tol=1e-14)[0]
    return float(max(abs(hi), abs(lo)))


def gelfand_iteration(M: np.ndarray, tol: Tolerances = DEFAULT) -> tuple[float, list[float], float]:
    """Estimate ``r = lim ||M^(2^k)||^(1/2^k)`` by repeated squaring.

    The matrix is renormalized after each squaring and ``log ||M^(2^k)||`` is
    carried separately, so nothing under- or overflows. Returns the estimate,
    the list of log-norms (index k) and the last change between estimates.
    """
    M = np.asarray(M, dtype=complex)
    n0 = np.linalg.norm(M, 2)
    if n0 == 0:
        return 0.0, [-math.inf], 0.0
    logs = [math.log(n0)]
    X = M / n0
    est = n0
    change = math.inf
    for k in range(1, tol.gelfand_max_squarings + 1):
        X = X @ X
        nk = np.linalg.norm(X, 2)
        if nk == 0:
            logs.append(-math.inf)
            return 0.0, logs, 0.0
        logs.append(2 * logs[-1] + math.log(nk))
        X /= nk
        new = math.exp(logs[-1] / 2 ** k)
        change = abs(new - est)
        est = new
        if change < tol.gelfand_stop:
            break
    return est, logs, change


def spectral_radius(A, tol: Tolerances = DEFAULT) -> SpectralReport:
    """Spectral radius and operator norm of an averaged operator.

    Dense eigenvalues up to ``tol.dense_max_dim``; beyond that, repeated-
    squaring Gelfand iteration for dense matrices, and Lanczos/Arnoldi for
    sparse ones (squaring would fill them in).
    """
    M = A.matrix if isinstance(A, AveragedOperator) else A
    n = M.shape[0]
    data = M.data if sp.issparse(M) else np.asarray(M)
    if not np.all(np.isfinite(data)):
        raise NumericalError("matrix has non-finite entries")
    if n == 0:
        return SpectralReport(0.0, 0.0, "dense-eigen", 0)
    if n == 1:
        # the entry is the eigenvalue; LAPACK can perturb it by an ulp
        r = float(abs(complex(M[0, 0])))
        return SpectralReport(r, r, "dense-eigen", 1)
    if sp.issparse(M) and n <= tol.dense_max_dim:
        M = M.toarray()
    if not sp.issparse(M) and n <= tol.dense_max_dim:
        if _is_hermitian(M):
            ev = np.linalg.eigvalsh((M + M.conj().T) / 2)
            r = float(np.abs(ev).max())
            return SpectralReport(r, r, "dense-eigen", n)
        r = float(np.abs(np.linalg.eigvals(M)).max())
        return SpectralReport(r, operator_norm(M), "dense-eigen", n)
    if not sp.issparse(M):
        r, logs, change = gelfand_iteration(M, tol)
        return SpectralReport(r, math.exp(logs[0]), "gelfand-iteration", n,
                              iterations=len(logs) - 1, residual=change)
    if _is_hermitian(M):
        r = _sparse_hermitian_radius(M)
        return SpectralReport(r, r, "sparse-eigen", n)
    ev = spla.eigs(M.astype(complex), k=1, which="LM", return_eigenvectors=False, tol=1e-14)
    return SpectralReport(float(abs(ev[0])), operator_norm(M), "sparse-eigen", n)


def approximate_eigenvalue_witness(A, c: complex, trials: int = 1,
                                   tol: Tolerances = DEFAULT) -> tuple[np.ndarray, float]:
    """Unit vector ``xi`` minimizing ``||A xi - c xi||`` among the candidates.

    The candidate is the right singular vector of ``A - cI`` for its smallest
    singular value, so the residual equals that singular value. For sparse
    operators ``trials`` random starts of inverse iteration on
    ``(A - cI)^*(A - cI)`` are used instead.
    """
    if abs(abs(c) - 1) > tol.unit_modulus:
        raise ValueError("witness value c must have modulus 1")
    M = A.matrix if isinstance(A, AveragedOperator) else A
    n = M.shape[0]
    if not sp.issparse(M) or n <= tol.dense_max_dim:
        D = (M.toarray() if sp.issparse(M) else np.asarray(M)) - c * np.eye(n)
        _, s, vh = np.linalg.svd(D)
        xi = vh[-1].conj()
        return xi, float(np.linalg.norm(D @ xi))
    D = (M.astype(complex) - c * sp.identity(n, format="csr")).tocsc()
    H = (D.conj().T @ D).tocsc()
    solve = spla.factorized(H + 1e-14 * sp.identity(n, format="csc"))
    rng = np.random.default_rng(0)
    best, best_res = None, math.inf
    for _ in range(max(trials, 1)):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x /= np.linalg.norm(x)
        for _ in range(50):
            x = solve(x)
            x /= np.linalg.norm(x)
        res = float(np.linalg.norm(D @ x))
        if res < best_res:
            best, best_res = x, res
    return best, best_res


# ---------------------------------------------------------------- operator inequalities

def abs_op(T: np.ndarray) -> np.ndarray:
    """``|T| = (T^* T)^(1/2)`` from the SVD ``T = W S V^*`` as ``V S V^*``.

    Square-rooting the eigenvalues of ``T^* T`` instead would turn rounding
    noise on the kernel into errors of order sqrt(eps).
    """
    T = np.asarray(T)
    _, s, Vh = np.linalg.svd(T)
    return (Vh.conj().T * s) @ Vh


def _hs(S, T) -> complex:
    return complex(np.vdot(T, S))  # Trace(T^* S)


@dataclass(frozen=True)
class HSInequality:
    lhs: float
    rhs: float
    margin: float
    scale: float
    holds: bool


def check_hs_inequality(S, T, tol: Tolerances = DEFAULT) -> HSInequality:
    """``|<S,T>|^2 <= <|S|,|T|> <|S^*|,|T^*|>`` for square matrices."""
    S, T = np.asarray(S), np.asarray(T)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape != T.shape:
        raise ValueError("S and T must be square matrices of the same shape")
    lhs = abs(_hs(S, T)) ** 2
    rhs = (_hs(abs_op(S), abs_op(T)) * _hs(abs_op(S.conj().T), abs_op(T.conj().T))).real
    scale = float(np.linalg.norm(S) ** 2 * np.linalg.norm(T) ** 2)
    margin = rhs - lhs
    return HSInequality(lhs, rhs, margin, scale, margin >= -tol.hs_margin * max(scale, 1e-300))


@dataclass(frozen=True)
class PolarReport:
    rank: int
    factor_error: float
    adjoint_error: float
    scale: float
    holds: bool
    partial_isometry: np.ndarray = field(repr=False)
    absolute: np.ndarray = field(repr=False)


def check_polar_identities(T, tol: Tolerances = DEFAULT) -> PolarReport:
    """Polar decomposition ``T = V|T|`` and ``|T^*| = V|T|V^*``.

    ``V`` comes from the SVD and is zero on the kernel of ``T``; ``|T^*|`` is
    computed independently from ``T T^*``.
    """
    T = np.asarray(T, dtype=complex)
    W, s, Vh = np.linalg.svd(T)
    scale = float(s.max()) if s.size else 0.0
    rank = int((s > tol.polar * max(scale, 1e-300)).sum())
    V = W[:, :rank] @ Vh[:rank]
    absT = abs_op(T)
    absTstar = abs_op(T.conj().T)
    e1 = float(np.abs(T - V @ absT).max())
    e2 = float(np.abs(absTstar - V @ absT @ V.conj().T).max())
    bound = tol.polar * max(scale, 1.0)
    return PolarReport(rank, e1, e2, scale, e1 <= bound and e2 <= bound, V, absT)


@dataclass(frozen=True)
class TensorPowerRow:
    n: int
    norm_power: float
    tensor_norm_sqrt: float
    holds: bool
    pointwise_margin: float


@dataclass(frozen=True)
class TensorPowerReport:
    rows: list
    radius: float
    tensor_radius: float
    radius_holds: bool

    @property
    def holds(self) -> bool:
        return self.radius_holds and all(r.holds and r.pointwise_margin >= 0 for r in self.rows)


def check_tensor_power_bound(pi: UnitaryRep, mu: ProbMeasure, n_max: int,
                             tol: Tolerances = DEFAULT, samples: int = 8,
                             seed: int = 0) -> TensorPowerReport:
    """Compare ``||pi(mu)^n||`` with ``||(pi ⊗ conj(pi))(mu)^n||^(1/2)``.

    Also checks the pointwise Jensen step
    ``|<pi(mu)^n xi, xi>|^2 <= <B^n (xi ⊗ conj xi), xi ⊗ conj xi>`` on random
    unit vectors; ``pointwise_margin`` is the smallest rhs - lhs seen (with
    the tolerance already added).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if pi.dim > 64:
        raise ConfigError(f"dim {pi.dim} > 64: the tensor square is too large; truncate the representation")
    A = average(pi, mu, tol).matrix
    B = average(tensor_with_conjugate(pi), mu, tol).matrix
    d = pi.dim
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    # xi ⊗ conj(xi) is vec(xi xi^*) under column-major stacking
    vs = np.array([np.outer(x, x.conj()).reshape(-1, order="F") for x in xs])
    rows = []
    An, Bn = np.eye(d), np.eye(d * d)
    for n in range(1, n_max + 1):
        An, Bn = An @ A, Bn @ B
        a, b = np.linalg.norm(An, 2), math.sqrt(np.linalg.norm(Bn, 2))
        lhs = np.abs(np.einsum("si,ij,sj->s", xs.conj(), An, xs)) ** 2
        rhs = np.einsum("si,ij,sj->s", vs.conj(), Bn, vs).real
        rows.append(TensorPowerRow(n, float(a), b, a <= b + tol.tensor_bound,
                                   float((rhs - lhs).min() + tol.tensor_bound)))
    rA = spectral_radius(A, tol).spectral_radius
    rB = spectral_radius(B, tol).spectral_radius
    return TensorPowerReport(rows, rA, rB, rA ** 2 <= rB + tol.radius_bound)


@dataclass(frozen=True)
class NuReport:
    matrix_error: float
    norm_nu: float
    norm_mu_squared: float
    min_eigenvalue: float
    hermitian_error: float
    holds: bool


def check_nu_identities(pi: UnitaryRep, mu: ProbMeasure, tol: Tolerances = DEFAULT) -> NuReport:
    """For ``nu = reflect(mu) * mu``: ``pi(nu) = pi(mu)^* pi(mu)``, positive, and
    ``||pi(nu)|| = ||pi(mu)||^2``."""
    A = average(pi, mu, tol).matrix
    N = average(pi, nu_of(mu), tol).matrix
    err = float(np.abs(N - A.conj().T @ A).max()) if pi.dim else 0.0
    herm = float(np.abs(N - N.conj().T).max()) if pi.dim else 0.0
    lam_min = float(np.linalg.eigvalsh((N + N.conj().T) / 2).min()) if pi.dim else 0.0
    nn, na = operator_norm(N), operator_norm(A) ** 2
    ok = (err <= tol.nu_matrix and abs(nn - na) <= tol.nu_norm
          and lam_min >= -tol.positivity and herm <= tol.nu_matrix)
    return NuReport(err, nn, na, lam_min, herm, ok)


def check_strong_adapted_equivalence(G: FiniteGroup, mu: ProbMeasure) -> tuple[bool, bool]:
    """``(direct coset search, adaptedness of reflect(mu) * mu)``; these must agree."""
    return coset_witness(G, mu) is None, is_adapted(G, nu_of(mu))


def power_operator(pi: UnitaryRep, mu: ProbMeasure, n: int, tol: Tolerances = DEFAULT) -> np.ndarray:
    """``pi(mu^{*n})``, which equals ``pi(mu)^n``."""
    return average(pi, convolution_power(mu, n), tol).matrix


def conjugation_average(pi: UnitaryRep, mu: ProbMeasure, T: np.ndarray) -> np.ndarray:
    """``(pi ⊗ conj(pi))(mu) T = sum_g mu(g) pi(g) T pi(g)^*`` without forming d²×d² matrices."""
    out = np.zeros_like(T, dtype=complex)
    for g, w in mu.items():
        U = pi.images[g]
        out += float(w) * (U @ T @ U.conj().T)
    return out


def positivity_improvement(pi: UnitaryRep, mu: ProbMeasure, T: np.ndarray) -> dict:
    """Diagnostic: fixed-point residuals of ``T`` and of ``|T|`` under the
    conjugation average, both normalized in Hilbert-Schmidt norm.

    No accuracy contract; it shows whether replacing an approximate fixed
    vector by its absolute value helps on a given example.
    """
    T = np.asarray(T, dtype=complex)
    T = T / np.linalg.norm(T)
    P = abs_op(T)
    P = P / np.linalg.norm(P)
    res_T = float(np.linalg.norm(conjugation_average(pi, mu, T) - T))
    res_abs = float(np.linalg.norm(conjugation_average(pi, mu, P) - P))
    return {"residual": res_T, "residual_abs": res_abs}


__all__ = [
    "AveragedOperator", "SpectralReport", "average", "spectral_radius", "operator_norm",
    "gelfand_iteration", "approximate_eigenvalue_witness", "abs_op", "check_hs_inequality",
    "check_polar_identities", "check_tensor_power_bound", "check_nu_identities",
    "check_strong_adapted_equivalence", "power_operator", "conjugation_average",
    "positivity_improvement",
]
