"""Circle-group counterexamples and the dense-subgroup measure, as named runs.

The circle is parametrized in turns: the element ``t`` in ``[0, 1)`` is the
point ``exp(2 pi i t)``, i.e. the angle ``2 pi t``. Exact rational turns are
kept as ``Fraction`` so that ``phi(n) = 1`` can be detected exactly; use
:meth:`CircleMeasure.from_radians` for angles in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError, NumericalError
from .measure import ProbMeasure, as_fraction
from .spectral import AveragedOperator, spectral_radius
from .tolerances import DEFAULT, Tolerances

ROTATION_BLOCK = 2 ** 16


class CircleGroup:
    """The circle group in turn coordinates, with exact or float angles."""

    identity = Fraction(0)

    def __repr__(self):
        return "S1"

    def __eq__(self, other):
        return isinstance(other, CircleGroup)

    def __hash__(self):
        return hash("S1")

    @staticmethod
    def _norm(t):
        return t % 1 if isinstance(t, Fraction) else float(t) % 1.0

    def op(self, a, b):
        return self._norm(a + b)

    def inverse(self, a):
        return self._norm(-a)

    def contains(self, g) -> bool:
        return isinstance(g, (Fraction, float)) and 0 <= g < 1

    def element(self, ref):
        if isinstance(ref, str):
            ref = Fraction(ref) if "/" in ref or ref.strip().isdigit() else float(ref)
        if isinstance(ref, int):
            ref = Fraction(ref)
        return self._norm(ref)

    def sort_key(self, g):
        return float(g)

    def format(self, g) -> str:
        return str(g)


S1 = CircleGroup()


@dataclass(frozen=True)
class CircleMeasure:
    """Finitely many atoms on the circle plus a Fourier truncation ``N``."""

    atoms: tuple
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ConfigError("truncation N must be at least 1")
        atoms = tuple((S1.element(t), as_fraction(w)) for t, w in self.atoms)
        if not atoms or any(w <= 0 for _, w in atoms):
            raise ConfigError("circle atoms need positive weights")
        if sum(w for _, w in atoms) != 1:
            raise ConfigError("circle weights must sum to 1")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_radians(cls, atoms, N: int) -> "CircleMeasure":
        """Atoms given as ``(theta, weight)`` with ``theta`` in radians."""
        return cls(tuple(((float(th) / (2 * math.pi)) % 1.0, w) for th, w in atoms), N)

    @classmethod
    def from_measure(cls, mu: ProbMeasure, N: int) -> "CircleMeasure":
        if mu.group != S1:
            raise ConfigError("measure does not live on the circle")
        return cls(tuple(mu.items()), N)


@dataclass(frozen=True)
class FourierProfile:
    """``values[n-1] = phi(n) = sum_j w_j exp(-2 pi i n t_j)`` for ``n = 1..N``.

    Negative modes are ``phi(-n) = conj(phi(n))`` and are not stored.
    """

    values: np.ndarray = field(repr=False)
    sup: float
    argmax: int
    closest_to_one: float
    closest_index: int

    @property
    def N(self) -> int:
        return len(self.values)

    def phi(self, n: int) -> complex:
        if n == 0 or abs(n) > self.N:
            raise IndexError("mode outside 1 <= |n| <= N")
        v = complex(self.values[abs(n) - 1])
        return v if n > 0 else v.conjugate()


def _rotation_scan(t: float, N: int) -> np.ndarray:
    """``exp(-2 pi i n t)`` for ``n = 1..N`` by incremental rotation.

    Each block of ``ROTATION_BLOCK`` steps restarts from a directly computed
    phase, which keeps the accumulated drift far below 1e-9 at N = 10^6.
    """
    out = np.empty(N, dtype=complex)
    step = np.exp(-2j * np.pi * t)
    for start in range(1, N + 1, ROTATION_BLOCK):
        stop = min(start + ROTATION_BLOCK, N + 1)
        anchor = np.exp(-2j * np.pi * ((start * t) % 1.0))
        factors = np.full(stop - start, step)
        factors[0] = anchor
        out[start - 1: stop - 1] = np.cumprod(factors)
    return out


def circle_truncation_profile(mu: CircleMeasure) -> FourierProfile:
    """Diagonal of the circle's regular representation, restricted to the
    non-constant Fourier modes ``1 <= |n| <= N``, averaged against ``mu``.

    The truncated operator is diagonal, so its spectral radius is the sup of
    ``|phi(n)|``.
    """
    N = mu.N
    n = np.arange(1, N + 1, dtype=np.int64)
    values = np.zeros(N, dtype=complex)
    rational_zero = np.ones(N, dtype=bool)
    has_float = False
    for t, w in mu.atoms:
        wf = float(w)
        if isinstance(t, Fraction):
            p, q = t.numerator, t.denominator
            r = ((n % q) * p) % q
            rational_zero &= r == 0
            values += wf * np.exp(-2j * np.pi * r / q)
        else:
            has_float = True
            values += wf * _rotation_scan(t, N)
    if not has_float:
        # every atom at phase 0: phi(n) is the total mass, exactly 1
        values[rational_zero] = 1.0
    mags = np.abs(values)
    # |phi| <= total mass = 1; pull back values that rounding put an ulp outside
    over = mags > 1.0
    values[over] /= mags[over]
    mags[over] = 1.0
    k = int(np.argmax(mags))
    dist = np.abs(1.0 - values)
    j = int(np.argmin(dist))
    return FourierProfile(values, float(mags[k]), k + 1, float(dist[j]), j + 1)


@dataclass(frozen=True)
class CollapseRow:
    N: int
    sup: float
    argmax: int


def gap_collapse_curve(mu: CircleMeasure, N_list) -> list[CollapseRow]:
    """Running ``max_{1 <= |n| <= N} |phi(n)|`` for increasing ``N``."""
    N_list = [int(x) for x in N_list]
    if any(b <= a for a, b in zip(N_list, N_list[1:])) or not N_list or N_list[0] < 1:
        raise ConfigError("N list must be positive and strictly increasing")
    prof = circle_truncation_profile(CircleMeasure(mu.atoms, N_list[-1]))
    mags = np.abs(prof.values)
    rows = []
    for N in N_list:
        k = int(np.argmax(mags[:N]))
        rows.append(CollapseRow(N, float(mags[k]), k + 1))
    return rows


def dense_subgroup_measure(group, elements, K: int) -> ProbMeasure:
    """``sum_{n<=K} 2^{-n} delta_{g_n}``, renormalized by ``1 - 2^{-K}``.

    A finite stand-in for the infinite sum over a dense sequence; repeated
    elements have their weights merged.
    """
    if K < 1:
        raise ConfigError("K must be at least 1")
    elements = list(elements)
    if len(elements) < K:
        raise ConfigError(f"need {K} elements, got {len(elements)}")
    norm = 1 - Fraction(1, 2 ** K)
    w: dict = {}
    for i, g in enumerate(elements[:K], start=1):
        g = group.element(g)
        w[g] = w.get(g, 0) + Fraction(1, 2 ** i) / norm
    return ProbMeasure(group, w)


@dataclass(frozen=True)
class CharacterCounterexample:
    z: object
    chi_order: int
    value: complex
    radius: float
    numeric_radius: float
    dense_orbit: bool


def dirac_character_counterexample(z, chi_order: int,
                                   tol: Tolerances = DEFAULT) -> CharacterCounterexample:
    """``pi = chi`` with ``chi(w) = w^chi_order`` and ``mu = delta_z``.

    ``pi(mu) = pi(z)`` is unitary, so once ``|chi(z)| = 1`` is confirmed to
    ``tol.unit_modulus`` the spectral radius is exactly 1 however ``z`` is
    chosen. ``numeric_radius`` is the floating-point eigenvalue modulus, which
    can sit an ulp below 1. ``dense_orbit`` records whether ``z`` generates a
    dense subgroup (irrational turn).
    """
    if isinstance(z, complex):
        if abs(abs(z) - 1) > 1e-12:
            raise ConfigError("z must lie on the unit circle")
        t = (math.atan2(z.imag, z.real) / (2 * math.pi)) % 1.0
    else:
        t = S1.element(z)
    phase = S1._norm(chi_order * t)
    if isinstance(phase, Fraction):
        ang = 2 * math.pi * phase
        value = complex(math.cos(ang), math.sin(ang))
        if phase.denominator in (1, 2, 4):
            # quarter turns are exact in floating point
            value = complex(round(value.real), round(value.imag))
    else:
        value = complex(np.exp(2j * np.pi * phase))
    A = AveragedOperator(np.array([[value]]), f"chi^{chi_order}")
    numeric = spectral_radius(A, tol).spectral_radius
    if abs(numeric - 1.0) > tol.unit_modulus:
        raise NumericalError(f"character value {value} is not unimodular")
    return CharacterCounterexample(z, chi_order, value, 1.0, numeric, not isinstance(t, Fraction))


# ---------------------------------------------------------------- registry

@dataclass
class ScenarioResult:
    name: str
    passed: bool
    lines: list
    header: tuple
    rows: list

    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


ALPHA = math.sqrt(2) - 1
BETA = math.sqrt(3) - 1


def run_remark_ii() -> ScenarioResult:
    cases = [(ALPHA, 1), (Fraction(1, 4), 2), (ALPHA, 0), (Fraction(1, 3), 0)]
    rows, lines, ok = [], [], True
    for t, k in cases:
        r = dirac_character_counterexample(t, k)
        ok &= r.radius == 1.0
        rows.append((str(t), k, r.value.real, r.value.imag, r.radius, r.numeric_radius))
        lines.append(f"z = exp(2πi·{t}), chi(w) = w^{k}: pi(mu) = [{r.value:.6f}], "
                     f"radius = {r.radius!r} (float eigenvalue modulus {r.numeric_radius!r})")
    return ScenarioResult("remark-ii", ok, lines,
                          ("z_turns", "chi_order", "re", "im", "radius", "numeric_radius"), rows)


def run_remark_iii(atoms=((ALPHA, "1/2"), (BETA, "1/2")), N_list=(10, 100, 1000, 10_000),
                   threshold: float = 0.999) -> ScenarioResult:
    if len(atoms) > 4:
        raise ConfigError("remark-iii is capped at 4 atoms (the pigeonhole guarantee needs N ~ Q^atoms)")
    mu = CircleMeasure(tuple(atoms), max(N_list))
    curve = gap_collapse_curve(mu, N_list)
    prof = circle_truncation_profile(mu)
    monotone = all(b.sup >= a.sup for a, b in zip(curve, curve[1:]))
    # simultaneous Dirichlet: some n <= Q^d puts every n t_j within 1/Q of an integer
    Q = int(math.floor(max(N_list) ** (1 / len(atoms))))
    guaranteed = math.cos(2 * math.pi / Q)
    ok = monotone and curve[-1].sup >= threshold and prof.sup >= guaranteed \
        and prof.closest_to_one <= 2 * math.pi / Q
    lines = [f"N = {r.N:>8}: sup|phi| = {r.sup:.9f} at n = {r.argmax}" for r in curve]
    lines.append(f"monotone: {monotone}; pigeonhole floor cos(2π/{Q}) = {guaranteed:.6f}")
    lines.append(f"min |1 - phi(n)| = {prof.closest_to_one:.3e} at n = {prof.closest_index}")
    rows = [(r.N, r.sup, r.argmax) for r in curve]
    return ScenarioResult("remark-iii", ok, lines, ("N", "sup", "argmax"), rows)


def run_lemma3_circle(K: int = 12, N: int = 10_000, threshold: float = 0.99) -> ScenarioResult:
    elements = [(n * ALPHA) % 1.0 for n in range(1, K + 1)]
    mu = dense_subgroup_measure(S1, elements, K)
    prof = circle_truncation_profile(CircleMeasure.from_measure(mu, N))
    curve = gap_collapse_curve(CircleMeasure.from_measure(mu, N), [10, 100, 1000, N])
    ok = prof.sup >= threshold
    lines = [f"K = {K} atoms g_n = n·(√2-1) mod 1 with weights 2^-n/(1-2^-K)",
             *(f"N = {r.N:>8}: sup|phi| = {r.sup:.9f} at n = {r.argmax}" for r in curve),
             f"min |1 - phi(n)| = {prof.closest_to_one:.3e} at n = {prof.closest_index}"]
    return ScenarioResult("lemma3-circle", ok, lines, ("N", "sup", "argmax"),
                          [(r.N, r.sup, r.argmax) for r in curve])


SCENARIOS = {
    "remark-ii": run_remark_ii,
    "remark-iii": run_remark_iii,
    "lemma3-circle": run_lemma3_circle,
}


def run_all() -> ScenarioResult:
    results = [fn() for fn in SCENARIOS.values()]
    lines = []
    for r in results:
        lines.append(f"[{r.name}] {r.verdict()}")
        lines.extend("  " + x for x in r.lines)
    return ScenarioResult("all", all(r.passed for r in results), lines, ("scenario", "verdict"),
                          [(r.name, r.verdict()) for r in results])


def run_scenario(name: str) -> ScenarioResult:
    if name == "all":
        return run_all()
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}") from None
