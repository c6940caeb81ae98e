"""Finitely supported probability measures with exact rational weights."""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .errors import ConfigError


def as_fraction(w) -> Fraction:
    """Exact conversion; strings like ``"3/8"`` and ints are accepted, floats are not."""
    if isinstance(w, Fraction):
        return w
    if isinstance(w, (int, np.integer)) and not isinstance(w, bool):
        return Fraction(int(w))
    if isinstance(w, str):
        try:
            return Fraction(w.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse weight {w!r}") from None
    raise ConfigError(f"weights must be exact rationals, got {w!r}")


@dataclass(frozen=True, eq=False)
class ProbMeasure:
    """A probability measure on ``group`` with finite support.

    ``weights`` maps canonical element keys to positive fractions summing to 1.
    """

    group: object
    weights: Mapping = field(repr=False)

    def __post_init__(self):
        clean: dict = {}
        for g, w in self.weights.items():
            if isinstance(g, np.integer):
                g = int(g)
            if not self.group.contains(g):
                raise ConfigError(f"{g!r} is not an element of {self.group}")
            w = as_fraction(w)
            if w < 0:
                raise ConfigError("measure weights must be nonnegative")
            if w:
                clean[g] = clean.get(g, 0) + w
        if sum(clean.values()) != 1:
            raise ConfigError(f"weights sum to {sum(clean.values())}, not 1")
        ordered = {g: clean[g] for g in sorted(clean, key=self.group.sort_key)}
        object.__setattr__(self, "weights", MappingProxyType(ordered))

    def __eq__(self, other):
        return (isinstance(other, ProbMeasure) and self.group == other.group
                and dict(self.weights) == dict(other.weights))

    def __repr__(self):
        fmt = getattr(self.group, "format", repr)
        body = " + ".join(f"{w}·δ[{fmt(g)}]" for g, w in self.weights.items())
        return f"ProbMeasure({body})"

    @property
    def support(self) -> tuple:
        return tuple(self.weights)

    def __getitem__(self, g) -> Fraction:
        return self.weights.get(g, Fraction(0))

    def items(self):
        return self.weights.items()

    @property
    def total_mass(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    @property
    def is_symmetric(self) -> bool:
        inv = self.group.inverse
        return all(self[inv(g)] == w for g, w in self.weights.items())

    def max_length(self) -> int:
        return max(self.group.length(g) for g in self.support)


# ---------------------------------------------------------------- constructors

def dirac(group, g) -> ProbMeasure:
    return ProbMeasure(group, {group.element(g): 1})


def uniform(group, elements: Iterable) -> ProbMeasure:
    elems = list(dict.fromkeys(group.element(g) for g in elements))
    if not elems:
        raise ConfigError("uniform measure needs at least one element")
    return ProbMeasure(group, {g: Fraction(1, len(elems)) for g in elems})


def uniform_on_generators(group) -> ProbMeasure:
    """Uniform on the canonical generators and their inverses (symmetric)."""
    return uniform(group, group.symmetric_generators())


def lazy(alpha, mu: ProbMeasure) -> ProbMeasure:
    """``alpha·δ_e + (1 - alpha)·mu``."""
    alpha = as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ConfigError("laziness must lie in [0, 1]")
    w = {g: (1 - alpha) * p for g, p in mu.items()}
    e = mu.group.identity
    w[e] = w.get(e, 0) + alpha
    return ProbMeasure(mu.group, w)


def from_pairs(group, pairs) -> ProbMeasure:
    """Build from ``[(element, "p/q"), ...]`` literals."""
    w: dict = {}
    for ref, weight in pairs:
        g = group.element(ref)
        w[g] = w.get(g, 0) + as_fraction(weight)
    return ProbMeasure(group, w)


def random_measure(group, rng: np.random.Generator, support_size: int | None = None,
                   max_denominator: int = 16) -> ProbMeasure:
    """Random measure on a finite group with small-denominator rational weights."""
    n = group.order
    k = support_size or int(rng.integers(1, n + 1))
    support = rng.choice(n, size=min(k, n), replace=False)
    raw = rng.integers(1, max_denominator + 1, size=len(support))
    total = int(raw.sum())
    return ProbMeasure(group, {int(g): Fraction(int(r), total) for g, r in zip(support, raw)})


# ---------------------------------------------------------------- algebra

def _integer_form(mu: ProbMeasure) -> tuple[dict, int]:
    den = math.lcm(*(w.denominator for w in mu.weights.values()))
    return {g: w.numerator * (den // w.denominator) for g, w in mu.items()}, den


def _convolve_int(a: dict, b: dict, op) -> dict:
    out: dict = {}
    get = out.get
    for x, wx in a.items():
        for y, wy in b.items():
            z = op(x, y)
            out[z] = get(z, 0) + wx * wy
    return out


def _from_integer_form(group, num: dict, den: int) -> ProbMeasure:
    return ProbMeasure(group, {g: Fraction(c, den) for g, c in num.items() if c})


def _check_same_group(m1: ProbMeasure, m2: ProbMeasure, group=None):
    if m1.group != m2.group or (group is not None and group != m1.group):
        raise ValueError("measures live on different group contexts")


def convolve(mu1: ProbMeasure, mu2: ProbMeasure, group=None) -> ProbMeasure:
    """``(mu1 * mu2)(g) = sum over a·b = g of mu1(a)·mu2(b)``, exactly."""
    _check_same_group(mu1, mu2, group)
    a, da = _integer_form(mu1)
    b, db = _integer_form(mu2)
    return _from_integer_form(mu1.group, _convolve_int(a, b, mu1.group.op), da * db)


def reflect(mu: ProbMeasure) -> ProbMeasure:
    """The measure ``g -> mu(g^{-1})``."""
    inv = mu.group.inverse
    return ProbMeasure(mu.group, {inv(g): w for g, w in mu.items()})


def convolution_power(mu: ProbMeasure, n: int) -> ProbMeasure:
    """``mu^{*n}`` by binary powering; ``n = 0`` gives the Dirac mass at the identity."""
    if n < 0:
        raise ValueError("convolution power must be nonnegative")
    if n == 0:
        return ProbMeasure(mu.group, {mu.group.identity: 1})
    op = mu.group.op
    base, den = _integer_form(mu)
    result, rden = None, 1
    while n:
        if n & 1:
            if result is None:
                result, rden = dict(base), den
            else:
                result, rden = _convolve_int(result, base, op), rden * den
        n >>= 1
        if n:
            base, den = _convolve_int(base, base, op), den * den
    return _from_integer_form(mu.group, result, rden)


def nu_of(mu: ProbMeasure) -> ProbMeasure:
    """``reflect(mu) * mu``, adapted exactly when ``mu`` is strongly adapted."""
    return convolve(reflect(mu), mu)


def float_weights(mu: ProbMeasure) -> list[tuple[object, float]]:
    return [(g, float(w)) for g, w in mu.items()]
