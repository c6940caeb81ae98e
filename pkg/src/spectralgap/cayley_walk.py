"""Random walks on free and free abelian groups.

Two routes to the spectral radius of left convolution by ``mu``:

* exact return probabilities ``p_n = mu^{*n}(e)`` and the estimators
  ``sqrt(p_2n / p_2n-2)`` and ``p_2n^(1/2n)``;
* Dirichlet truncations of the convolution operator to word-length balls,
  whose spectral radii increase with the radius toward the true value.

For non-amenable groups (free groups of rank >= 2) both stay bounded away
from 1; for Z^d they approach 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, NumericalError, ResourceCapError
from .measure import ProbMeasure, _integer_form
from .spectral import AveragedOperator, spectral_radius
from .tolerances import DEFAULT, Tolerances
from .words import FreeGroup, WordGroup

DEFAULT_MEMORY_CAP = 4 * 2 ** 30


class CayleyBall:
    """Elements of word length <= ``radius`` in breadth-first order.

    ``adjacency[i, j]`` is the index of ``s_j · element_i`` for the j-th
    symmetric generator ``s_j``, or -1 when that step leaves the ball.
    """

    def __init__(self, group: WordGroup, radius: int):
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        self.group = group
        self.radius = radius
        self.elements = group.ball(radius)
        self.index = {w: i for i, w in enumerate(self.elements)}
        self.step_generators = group.symmetric_generators()

    def __len__(self):
        return len(self.elements)

    @cached_property
    def adjacency(self) -> np.ndarray:
        op = self.group.op
        get = self.index.get
        adj = np.full((len(self.elements), len(self.step_generators)), -1, dtype=np.int64)
        for i, w in enumerate(self.elements):
            for j, s in enumerate(self.step_generators):
                adj[i, j] = get(op(s, w), -1)
        return adj


def ball_size_formula(group: WordGroup, radius: int) -> int:
    """Closed forms: free rank k >= 2 gives ``1 + 2k((2k-1)^R - 1)/(2k-2)``, Z gives ``2R+1``."""
    if isinstance(group, FreeGroup) and group.rank >= 2:
        k = group.rank
        return 1 + 2 * k * ((2 * k - 1) ** radius - 1) // (2 * k - 2)
    return group.ball_sizes(radius)[-1]


# ---------------------------------------------------------------- exact returns

@dataclass(frozen=True)
class ReturnSeries:
    """``probabilities[n] = mu^{*n}(e)`` for ``n = 0..N``, exact."""

    probabilities: tuple
    measure: ProbMeasure = field(repr=False)
    method: str = "generic"

    @property
    def N(self) -> int:
        return len(self.probabilities) - 1

    def floats(self) -> list[float]:
        return [float(p) for p in self.probabilities]


def _log_fraction(p: Fraction) -> float:
    return math.log(p.numerator) - math.log(p.denominator)


def radial_profile(group: FreeGroup, mu: ProbMeasure) -> list[Fraction] | None:
    """Sphere masses of ``mu`` if it is uniform on every sphere it touches, else None."""
    by_len: dict[int, list[Fraction]] = {}
    for g, w in mu.items():
        by_len.setdefault(len(g), []).append(w)
    sizes = group.sphere_sizes(max(by_len))
    prof = [Fraction(0)] * (max(by_len) + 1)
    for r, ws in by_len.items():
        if len(ws) != sizes[r] or len(set(ws)) != 1:
            return None
        prof[r] = sum(ws)
    return prof


def _cancellation_law(k: int, a: int, b: int) -> list[Fraction]:
    """Law of the number of cancelled letters in ``x·y`` for ``x``, ``y``
    independent and uniform on the spheres of radii ``a`` and ``b`` in F_k."""
    m = min(a, b)
    if m == 0:
        return [Fraction(1)]
    first, cont = Fraction(1, 2 * k), Fraction(1, 2 * k - 1)
    law = [1 - first]
    reach = first
    for _ in range(1, m):
        law.append(reach * (1 - cont))
        reach *= cont
    law.append(reach)
    return law


def _radial_returns(group: FreeGroup, mu: ProbMeasure, N: int) -> list[Fraction]:
    prof = radial_profile(group, mu)
    L = len(prof) - 1
    k = group.rank
    laws: dict[tuple[int, int], list[Fraction]] = {}
    state = {0: Fraction(1)}
    out = [Fraction(1)]
    for step in range(1, N + 1):
        horizon = (N - step) * L
        new: dict[int, Fraction] = {}
        for a, ma in state.items():
            for b, sb in enumerate(prof):
                if not sb:
                    continue
                law = laws.get((a, b))
                if law is None:
                    law = laws[(a, b)] = _cancellation_law(k, a, b)
                for c, pc in enumerate(law):
                    length = a + b - 2 * c
                    if length <= horizon:
                        new[length] = new.get(length, 0) + ma * sb * pc
        state = {r: m for r, m in new.items() if m and r <= horizon}
        out.append(new.get(0, Fraction(0)))
    return out


def estimate_generic_memory(group: WordGroup, mu: ProbMeasure, N: int) -> int:
    """Rough byte count of the largest pruned convolution state."""
    L = max(mu.max_length(), 1)
    R = (N // 2) * L
    entries = group.ball_sizes(R)[-1]
    _, den = _integer_form(mu)
    per_entry = 150 + 8 * R + (N * den.bit_length()) // 8
    return entries * per_entry


def exact_return_probabilities(group: WordGroup, mu: ProbMeasure, N: int,
                               memory_cap: int = DEFAULT_MEMORY_CAP,
                               method: str = "auto") -> ReturnSeries:
    """``p_n = mu^{*n}(e)`` for ``n = 0..N`` by exact convolution.

    The generic route keeps the full group-algebra state but drops words that
    can no longer return to the identity in the remaining steps, so nothing
    is truncated. On a free group with a measure that is uniform on spheres,
    the ``radial`` route convolves sphere masses instead (radial measures
    form a subalgebra), which is exact and far smaller; ``auto`` picks it
    whenever it applies.
    """
    if mu.group != group:
        raise ConfigError("measure is not on this group")
    if N < 0:
        raise ValueError("N must be nonnegative")
    radial_ok = isinstance(group, FreeGroup) and radial_profile(group, mu) is not None
    if method == "auto":
        method = "radial" if radial_ok else "generic"
    if method == "radial":
        if not radial_ok:
            raise ConfigError("radial route needs a free group and a sphere-uniform measure")
        return ReturnSeries(tuple(_radial_returns(group, mu, N)), mu, "radial")
    if method != "generic":
        raise ConfigError(f"unknown method {method!r}")

    need = estimate_generic_memory(group, mu, N)
    if need > memory_cap:
        fit = N
        while fit > 0 and estimate_generic_memory(group, mu, fit) > memory_cap:
            fit -= 1
        raise ResourceCapError(
            f"estimated {need / 2**30:.2f} GiB exceeds cap {memory_cap / 2**30:.2f} GiB; try N <= {fit}",
            suggestion=fit)

    L = max(mu.max_length(), 1)
    base, den = _integer_form(mu)
    op, length, e = group.op, group.length, group.identity
    state = {e: 1}
    out = [Fraction(1)]
    for step in range(1, N + 1):
        horizon = (N - step) * L
        new: dict = {}
        get = new.get
        for x, wx in state.items():
            for y, wy in base.items():
                z = op(x, y)
                if length(z) <= horizon:
                    new[z] = get(z, 0) + wx * wy
        state = new
        out.append(Fraction(state.get(e, 0), den ** step))
    return ReturnSeries(tuple(out), mu, "generic")


@dataclass(frozen=True)
class RadiusEstimate:
    ratio: float
    power: float
    n_max: int
    power_sequence: list = field(repr=False)
    ratio_sequence: list = field(repr=False)

    @property
    def band(self) -> tuple[float, float]:
        return (min(self.power, self.ratio), max(self.power, self.ratio))

    @property
    def uncertainty(self) -> float:
        return abs(self.ratio - self.power)


def estimate_spectral_radius_from_returns(series: ReturnSeries) -> RadiusEstimate:
    """Ratio estimator ``sqrt(p_2n / p_2n-2)`` at the largest even index, plus the
    monotone lower bounds ``p_2n^(1/2n)``."""
    if not series.measure.is_symmetric:
        raise ConfigError("ratio estimator needs a symmetric measure; "
                          "estimate reflect(mu)*mu instead, whose radius is ||lambda(mu)||^2")
    p = series.probabilities
    n_max = series.N // 2
    if n_max < 1:
        raise ValueError("need at least p_2")
    power_seq = [math.exp(_log_fraction(p[2 * n]) / (2 * n)) if p[2 * n] else 0.0
                 for n in range(1, n_max + 1)]
    ratio_seq = [math.sqrt(p[2 * n] / p[2 * n - 2]) if p[2 * n - 2] else 0.0
                 for n in range(1, n_max + 1)]
    return RadiusEstimate(ratio_seq[-1], power_seq[-1], n_max, power_seq, ratio_seq)


# ---------------------------------------------------------------- truncations

def truncated_operator(group: WordGroup, mu: ProbMeasure, radius: int,
                       memory_cap: int = DEFAULT_MEMORY_CAP) -> AveragedOperator:
    """Left convolution by ``mu`` compressed to the ball of the given radius.

    Entry ``(x, y)`` is ``mu(x y^{-1})``; steps that leave the ball are
    dropped, so columns near the boundary sum to less than 1.
    """
    if mu.group != group:
        raise ConfigError("measure is not on this group")
    if mu.max_length() > radius:
        raise ConfigError(f"radius {radius} too small for support of length {mu.max_length()}")
    size = ball_size_formula(group, radius)
    if size * (len(mu.support) * 24 + 200) > memory_cap:
        raise ResourceCapError(f"ball of radius {radius} has {size} elements; exceeds memory cap")
    ball = CayleyBall(group, radius)
    op, get = group.op, ball.index.get
    rows, cols, vals = [], [], []
    for g, w in mu.items():
        wf = float(w)
        for j, y in enumerate(ball.elements):
            i = get(op(g, y))
            if i is not None:
                rows.append(i)
                cols.append(j)
                vals.append(wf)
    n = len(ball)
    M = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return AveragedOperator(M, f"truncated[{group}, R={radius}]", mu, basis=ball)


@dataclass(frozen=True)
class ScanRow:
    R: int
    dim: int
    radius: float
    gap: float


def gap_scan(group: WordGroup, mu: ProbMeasure, radii, tol: Tolerances = DEFAULT,
             memory_cap: int = DEFAULT_MEMORY_CAP) -> list[ScanRow]:
    """Spectral radius of the truncation for each radius, in the given order.

    Raises if the radius decreases along increasing R (Dirichlet monotonicity).
    """
    rows = []
    for R in radii:
        A = truncated_operator(group, mu, int(R), memory_cap)
        rep = spectral_radius(A, tol)
        rows.append(ScanRow(int(R), A.dim, rep.spectral_radius, 1.0 - rep.spectral_radius))
    by_r = sorted(rows, key=lambda r: r.R)
    for lo, hi in zip(by_r, by_r[1:]):
        if hi.radius < lo.radius - 1e-10:
            raise NumericalError(f"truncated radius decreased from R={lo.R} to R={hi.R}")
    return rows
