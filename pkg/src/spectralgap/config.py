"""YAML run configurations and the small string grammars used by CLI flags.

A config names a group, a measure and a representation, plus per-command
parameters::

    group: D4
    measure: {pairs: [[r1, 1/4], [r3, 1/4], [s, 1/2]]}
    rep: {kind: mean_zero, gset: {kind: cosets, subgroup: [s]}}
    tolerance_profile: default
    seed: 0
    csv: out.csv

See ``configs/`` for complete examples of every command.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, NumericalError
from .groups import FiniteGroup, direct_product, from_table, generated_subgroup, named_group
from .measure import ProbMeasure, dirac, from_pairs, lazy, uniform, uniform_on_generators
from .rep import (UnitaryRep, character, coset_gset, direct_sum, explicit_rep, gset, natural_gset,
                  permutation_gset, quasi_regular_rep, regular_gset, regular_rep,
                  restrict_to_mean_zero, tensor_with_conjugate, trivial_gset)
from .tolerances import Tolerances, get_profile
from .words import ProductGroup, WordGroup, named_word_group

COMMANDS = ("spectrum", "verify", "walk", "scan", "scenario")


@dataclass
class RunConfig:
    group: object = None
    measure: object = None
    rep: object = None
    params: dict = field(default_factory=dict)
    tolerance_profile: str = "default"
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    csv: str | None = None
    memory_cap: int | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        if self.memory_cap is not None and (not isinstance(self.memory_cap, int) or self.memory_cap <= 0):
            raise ConfigError("memory_cap must be a positive integer of bytes")
        self.tol  # resolve eagerly so bad profiles fail at load time

    @property
    def tol(self) -> Tolerances:
        base = get_profile(self.tolerance_profile)
        return base.with_overrides(**self.tolerances) if self.tolerances else base


_TOP_KEYS = {"group", "measure", "rep", "tolerance_profile", "tolerances",
             "seed", "csv", "memory_cap", *COMMANDS}


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    params = {}
    for cmd in COMMANDS:
        if isinstance(data.get(cmd), dict):
            params.update(data[cmd])
    tols = data.get("tolerances") or {}
    if not isinstance(tols, dict):
        raise ConfigError("tolerances must be a mapping")
    return RunConfig(
        group=data.get("group"),
        measure=data.get("measure"),
        rep=data.get("rep"),
        params=params,
        tolerance_profile=data.get("tolerance_profile", "default"),
        tolerances={k: float(v) if not isinstance(v, int) else v for k, v in tols.items()},
        seed=data.get("seed", 0),
        csv=data.get("csv"),
        memory_cap=data.get("memory_cap"),
    )


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    return config_from_dict(data or {})


# ---------------------------------------------------------------- groups

def build_group(spec) -> FiniteGroup | WordGroup:
    """``"D4"``, ``"Z12"``, ``"free:2"``, ``"zd:1"``, or ``{table: [[...]], labels, generators}``."""
    if spec is None:
        raise ConfigError("no group given")
    if isinstance(spec, dict):
        if "table" in spec:
            try:
                return from_table(np.array(spec["table"], dtype=np.int64), labels=spec.get("labels"),
                                  generators=spec.get("generators"), name=spec.get("name"))
            except ValueError as exc:
                raise ConfigError(f"bad group table: {exc}") from None
        if "name" in spec:
            return build_group(spec["name"])
        if "kind" in spec:
            kind = str(spec["kind"]).lower()
            if kind == "product":
                parts = [build_group(f) for f in spec.get("factors", [])]
                if len(parts) < 2:
                    raise ConfigError("product needs at least two factors")
                if all(isinstance(p, FiniteGroup) for p in parts):
                    out = parts[0]
                    for p in parts[1:]:
                        out = direct_product(out, p)
                    return out
                if all(isinstance(p, WordGroup) for p in parts):
                    return ProductGroup(tuple(parts))
                raise ConfigError("cannot mix finite and word groups in a product")
            if kind == "quaternion":
                return build_group("Q8")
            arg = spec.get("n", spec.get("rank", spec.get("dim")))
            if arg is None:
                raise ConfigError(f"group kind {kind!r} needs n, rank or dim")
            return build_group(f"{kind}:{int(arg)}")
        raise ConfigError("group mapping needs 'table', 'name' or 'kind'")
    s = str(spec)
    try:
        return named_group(s)
    except ConfigError:
        return named_word_group(s)


def resolve_elements(G, refs) -> list:
    if isinstance(refs, (str, int)):
        refs = [refs]
    try:
        return [G.element(r) for r in refs]
    except (KeyError, ValueError, IndexError) as exc:
        raise ConfigError(f"unknown element in {refs!r}: {exc}") from None


# ---------------------------------------------------------------- measures

_UNIFORM_GENS = {"uniform-gens", "uniform_gens", "uniform_on_generators", "uniform-on-generators"}


def parse_measure_string(G, text: str) -> ProbMeasure:
    """Flag grammar: ``uniform-gens``, ``dirac:g``, ``uniform:a,b``,
    ``lazy:1/2:<measure>``, or pairs ``a:1/4,A:1/4,b:1/2``."""
    t = text.strip()
    if t in _UNIFORM_GENS:
        return uniform_on_generators(G)
    head, _, rest = t.partition(":")
    if head == "dirac":
        return dirac(G, rest.strip())
    if head == "uniform":
        return uniform(G, resolve_elements(G, _split(rest)))
    if head == "lazy":
        alpha, _, inner = rest.partition(":")
        return lazy(alpha, parse_measure_string(G, inner))
    pairs = []
    for item in _split(t):
        ref, sep, w = item.rpartition(":")
        if not sep:
            raise ConfigError(f"cannot parse measure {text!r}")
        pairs.append((ref.strip(), w))
    return _pairs(G, pairs)


def _split(text: str) -> list[str]:
    # commas inside parentheses belong to Z^d elements such as (1,-2)
    return [x for x in re.split(r",(?![^()]*\))", text) if x.strip()]


def _pairs(G, pairs) -> ProbMeasure:
    try:
        return from_pairs(G, pairs)
    except (KeyError, ValueError, IndexError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad measure pairs: {exc}") from None


def build_measure(G, spec) -> ProbMeasure:
    """String (flag grammar) or mapping with one of ``pairs``, ``uniform``,
    ``uniform_on_generators``, ``dirac``, ``lazy: {alpha, of}``."""
    if spec is None:
        return uniform_on_generators(G)
    if isinstance(spec, str):
        return parse_measure_string(G, spec)
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("measure must be a string or a single-key mapping")
    (kind, arg), = spec.items()
    if kind == "pairs":
        return _pairs(G, [tuple(p) for p in arg])
    if kind == "uniform":
        return uniform(G, resolve_elements(G, arg))
    if kind in ("uniform_on_generators", "uniform-gens"):
        return uniform_on_generators(G)
    if kind == "dirac":
        return dirac(G, resolve_elements(G, arg)[0])
    if kind == "lazy":
        return lazy(str(arg["alpha"]), build_measure(G, arg.get("of")))
    raise ConfigError(f"unknown measure kind {kind!r}")


# ---------------------------------------------------------------- G-sets and reps

def build_gset(G: FiniteGroup, spec):
    if spec is None or spec == "regular":
        return regular_gset(G)
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind", "explicit")
    weights = spec.get("weights")
    if kind == "regular":
        return regular_gset(G)
    if kind == "cosets":
        H = generated_subgroup(G, resolve_elements(G, spec.get("subgroup", [])) or [G.identity])
        X = coset_gset(G, H)
        return gset(G, X.action, weights) if weights else X
    if kind == "natural":
        return natural_gset(G)
    if kind == "trivial":
        return trivial_gset(G, int(spec.get("size", 1)), weights)
    if kind == "explicit":
        if "action" in spec:
            return gset(G, np.array(spec["action"], dtype=np.int64), weights)
        if "generators" in spec:
            perms = {G.element(g): p for g, p in spec["generators"].items()}
            return permutation_gset(G, perms, weights)
        raise ConfigError("explicit G-set needs 'action' or 'generators'")
    raise ConfigError(f"unknown G-set kind {kind!r}")


def parse_complex(x) -> complex:
    """Numbers or strings such as ``"1"``, ``"-i"``, ``"0.5+0.5i"``."""
    if isinstance(x, (int, float)):
        return complex(x)
    s = str(x).replace(" ", "").replace("i", "j")
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse complex entry {x!r}") from None


def build_rep(G: FiniteGroup, spec, tol: Tolerances) -> UnitaryRep:
    if not isinstance(G, FiniteGroup):
        raise ConfigError("representations are built for finite groups only")
    if spec is None:
        spec = "regular"
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind")
    if kind == "regular":
        return regular_rep(G, tol)
    if kind == "quasi_regular":
        return quasi_regular_rep(build_gset(G, spec.get("gset")), tol)
    if kind == "mean_zero":
        return restrict_to_mean_zero(build_gset(G, spec.get("gset")), tol)
    if kind == "character":
        return character(G, int(spec.get("index", 0)), tol)
    if kind == "tensor_conj":
        return tensor_with_conjugate(build_rep(G, spec.get("of"), tol))
    if kind == "direct_sum":
        parts = [build_rep(G, p, tol) for p in spec.get("parts", [])]
        if not parts:
            raise ConfigError("direct_sum needs parts")
        out = parts[0]
        for p in parts[1:]:
            out = direct_sum(out, p)
        return out
    if kind == "explicit":
        images = {}
        for g, rows in (spec.get("images") or {}).items():
            images[G.element(g)] = np.array([[parse_complex(x) for x in row] for row in rows])
        if not images:
            raise ConfigError("explicit rep needs generator images")
        try:
            return explicit_rep(G, images, tol)
        except (ValueError, NumericalError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"explicit rep rejected: {exc}") from None
    raise ConfigError(f"unknown rep kind {kind!r}")
