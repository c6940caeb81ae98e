"""Central tolerance profile threaded through every numerical check."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import ConfigError


@dataclass(frozen=True)
class Tolerances:
    unitarity: float = 1e-12
    # relative singular-value threshold for fixed-subspace / commutant rank decisions
    fixed: float = 1e-9
    contraction: float = 1e-10
    hs_margin: float = 1e-9
    hs_equality: float = 1e-10
    polar: float = 1e-9
    tensor_bound: float = 1e-9
    radius_bound: float = 1e-6
    nu_matrix: float = 1e-10
    nu_norm: float = 1e-9
    positivity: float = 1e-10
    vectorization: float = 1e-12
    unit_modulus: float = 1e-12
    gelfand_stop: float = 1e-6
    gelfand_max_squarings: int = 24
    dense_max_dim: int = 512
    exhaustive_order: int = 64
    homomorphism_samples: int = 10_000

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ConfigError(f"tolerance {f.name!r} must be positive")

    def with_overrides(self, **kwargs) -> "Tolerances":
        unknown = set(kwargs) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown tolerance fields: {sorted(unknown)}")
        return replace(self, **kwargs)


DEFAULT = Tolerances()

PROFILES: dict[str, Tolerances] = {
    "default": DEFAULT,
    "strict": Tolerances(fixed=1e-11, polar=1e-11, hs_margin=1e-11, gelfand_stop=1e-8),
    "loose": Tolerances(unitarity=1e-9, fixed=1e-7, contraction=1e-8, polar=1e-7,
                        hs_margin=1e-7, tensor_bound=1e-7, nu_matrix=1e-8, nu_norm=1e-7),
}


def get_profile(name: str) -> Tolerances:
    try:
        return PROFILES[name]
    except KeyError:
        raise ConfigError(f"unknown tolerance profile {name!r}; known: {sorted(PROFILES)}") from None
