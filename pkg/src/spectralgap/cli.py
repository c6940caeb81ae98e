"""Command-line entry point: ``spectralgap <command> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (including
a failed verification suite or scenario), 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction

from .cayley_walk import (DEFAULT_MEMORY_CAP, estimate_spectral_radius_from_returns,
                          exact_return_probabilities, gap_scan)
from .config import RunConfig, build_group, build_measure, build_rep, load_config
from .errors import ConfigError, NumericalError, ResourceCapError
from .groups import FiniteGroup
from .scenarios import SCENARIOS, run_scenario
from .spectral import average, spectral_radius
from .suites import SUITES, get_suite
from .words import WordGroup

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_RESOURCE = 0, 2, 3, 4

WALK_COLUMNS = ("n", "p_n_num", "p_n_den", "p_n_float", "ratio_estimate", "power_estimate")
SCAN_COLUMNS = ("R", "dim", "radius", "gap")


def _cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if x is None:
        return ""
    return str(x)


def write_table(header, rows, path: str | None, out) -> None:
    """CSV to ``path`` (``-`` for stdout) or an aligned text table to ``out``."""
    if path:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(x) for x in r])
        if path == "-":
            out.write(buf.getvalue())
        else:
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(buf.getvalue())
        return
    cells = [list(header)] + [[_cell(x) for x in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    for c in cells:
        out.write("  ".join(v.rjust(wd) for v, wd in zip(c, widths)).rstrip() + "\n")


def _parse_ints(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _parse_bytes(text: str) -> int:
    units = {"K": 2 ** 10, "M": 2 ** 20, "G": 2 ** 30}
    t = text.strip().upper().removesuffix("B").removesuffix("I")
    mult = units.get(t[-1:], 1)
    if mult > 1:
        t = t[:-1]
    try:
        value = int(float(t) * mult)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid byte count {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("memory cap must be positive")
    return value


def _rep_from_flag(text: str):
    """``regular``, ``mean_zero``, ``tensor_conj``, ``character:K``."""
    kind, _, arg = text.partition(":")
    if kind == "character":
        return {"kind": "character", "index": int(arg or 0)}
    if kind == "tensor_conj":
        return {"kind": "tensor_conj", "of": "regular"}
    return {"kind": kind}


def resolve(args) -> RunConfig:
    """Merge a config file (if any) with command-line flags; flags win."""
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.csv is not None:
        cfg.csv = args.csv
    if args.tolerance_profile is not None:
        cfg.tolerance_profile = args.tolerance_profile
    if args.memory_cap is not None:
        cfg.memory_cap = args.memory_cap
    if getattr(args, "group", None):
        cfg.group = args.group
    if getattr(args, "measure", None):
        cfg.measure = args.measure
    if getattr(args, "rep", None):
        cfg.rep = _rep_from_flag(args.rep)
    for key in ("samples", "dim", "n_max", "steps", "radii", "method", "suite", "name"):
        val = getattr(args, key, None)
        if val is not None:
            cfg.params[key] = val
    cfg.validate()
    return cfg


# ---------------------------------------------------------------- commands

def cmd_spectrum(cfg: RunConfig, out) -> int:
    G = build_group(cfg.group)
    if not isinstance(G, FiniteGroup):
        raise ConfigError(f"spectrum needs a finite group; use 'scan' for {G}")
    tol = cfg.tol
    mu = build_measure(G, cfg.measure)
    pi = build_rep(G, cfg.rep, tol)
    rep = spectral_radius(average(pi, mu, tol), tol)
    if cfg.csv:
        write_table(("rep", "dim", "spectral_radius", "operator_norm", "gap", "method"),
                    [(pi.label, rep.dim, rep.spectral_radius, rep.operator_norm, rep.gap, rep.method)],
                    cfg.csv, out)
    else:
        out.write(rep.as_text(pi.label, repr(mu)) + "\n")
    return EXIT_OK


def _suite_kwargs(name: str, cfg: RunConfig) -> dict:
    p = cfg.params
    kw: dict = {}
    if name != "commutant" and name != "ergodicity":
        kw["seed"] = cfg.seed
    if "samples" in p and name not in ("commutant", "ergodicity"):
        kw["samples"] = int(p["samples"])
    if "dim" in p and name in ("lemma2", "polar"):
        kw["dims"] = tuple(_parse_ints(p["dim"]))
    if "dims" in p and name in ("lemma2", "polar"):
        kw["dims"] = tuple(_parse_ints(p["dims"]))
    if "n_max" in p and name == "tensor-power":
        kw["n_max"] = int(p["n_max"])
    groups = p.get("groups") or ([cfg.group] if cfg.group else None)
    if groups and name not in ("lemma2", "polar"):
        kw["groups"] = tuple(str(g) for g in groups)
    if name != "adapted-equivalence":
        kw["tol"] = cfg.tol
    return kw


def cmd_verify(cfg: RunConfig, out) -> int:
    name = cfg.params.get("suite")
    if not name:
        raise ConfigError(f"verify needs a suite: {', '.join(SUITES)}")
    suite = get_suite(name)
    res = suite(**_suite_kwargs(name, cfg))
    if cfg.csv:
        write_table(res.header, res.rows, cfg.csv, out)
    if cfg.csv != "-":
        out.write(res.summary() + "\n")
    if not cfg.csv:
        for r in res.rows:
            if not r[res.ok_column]:
                out.write("FAIL " + ", ".join(f"{h}={_cell(v)}" for h, v in zip(res.header, r)) + "\n")
    return EXIT_OK if res.all_passed else EXIT_NUMERICAL


def _word_setup(cfg: RunConfig):
    G = build_group(cfg.group or "free:2")
    if not isinstance(G, WordGroup):
        raise ConfigError(f"walk and scan need a word group such as free:2 or zd:1, got {G}")
    return G, build_measure(G, cfg.measure)


def cmd_walk(cfg: RunConfig, out) -> int:
    G, mu = _word_setup(cfg)
    steps = int(cfg.params.get("steps", 20))
    series = exact_return_probabilities(G, mu, steps, cfg.memory_cap or DEFAULT_MEMORY_CAP,
                                        method=cfg.params.get("method", "auto"))
    est = estimate_spectral_radius_from_returns(series) if mu.is_symmetric and steps >= 2 else None
    rows = []
    for n, p in enumerate(series.probabilities):
        ratio = power = None
        if est is not None and n >= 2 and n % 2 == 0:
            ratio, power = est.ratio_sequence[n // 2 - 1], est.power_sequence[n // 2 - 1]
        p = Fraction(p)
        rows.append((n, p.numerator, p.denominator, float(p), ratio, power))
    write_table(WALK_COLUMNS, rows, cfg.csv, out)
    if est is not None and cfg.csv != "-":
        lo, hi = est.band
        out.write(f"# {G}, {series.method} route: ratio estimate {est.ratio:.6f}, "
                  f"power estimate {est.power:.6f}, band [{lo:.6f}, {hi:.6f}]\n")
    return EXIT_OK


def cmd_scan(cfg: RunConfig, out) -> int:
    G, mu = _word_setup(cfg)
    radii = _parse_ints(cfg.params.get("radii", "2,4,6"))
    rows = gap_scan(G, mu, radii, cfg.tol, cfg.memory_cap or DEFAULT_MEMORY_CAP)
    write_table(SCAN_COLUMNS, [(r.R, r.dim, r.radius, r.gap) for r in rows], cfg.csv, out)
    return EXIT_OK


def cmd_scenario(cfg: RunConfig, out) -> int:
    name = cfg.params.get("name")
    if not name:
        raise ConfigError(f"scenario needs a name: {', '.join(SCENARIOS)}")
    res = run_scenario(name)
    if cfg.csv:
        write_table(res.header, res.rows, cfg.csv, out)
    if cfg.csv != "-":
        for line in res.lines:
            out.write(line + "\n")
        out.write(f"verdict: {res.verdict()}\n")
    return EXIT_OK if res.passed else EXIT_NUMERICAL


COMMANDS = {"spectrum": cmd_spectrum, "verify": cmd_verify, "walk": cmd_walk,
            "scan": cmd_scan, "scenario": cmd_scenario}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML run configuration")
    common.add_argument("--seed", type=int, help="seed for randomized suites")
    common.add_argument("--csv", metavar="PATH", help="write CSV here ('-' for stdout)")
    common.add_argument("--tolerance-profile", metavar="NAME", help="default, strict or loose")
    common.add_argument("--memory-cap", type=_parse_bytes, metavar="BYTES",
                        help="refuse computations estimated above this (suffixes K, M, G allowed)")

    parser = argparse.ArgumentParser(prog="spectralgap",
                                     description="Spectral radii of averaged group representations.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("spectrum", parents=[common], help="spectral radius of pi(mu)")
    p.add_argument("--group")
    p.add_argument("--measure")
    p.add_argument("--rep", help="regular, mean_zero, tensor_conj or character:K")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", nargs="?", help=", ".join(SUITES))
    p.add_argument("--samples", type=int)
    p.add_argument("--dim", help="matrix dimension(s), comma-separated")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--group")

    p = sub.add_parser("walk", parents=[common], help="exact return probabilities")
    p.add_argument("--group")
    p.add_argument("--measure")
    p.add_argument("--steps", type=int)
    p.add_argument("--method", choices=("auto", "radial", "generic"))

    p = sub.add_parser("scan", parents=[common], help="truncated-operator radii on Cayley balls")
    p.add_argument("--group")
    p.add_argument("--measure")
    p.add_argument("--radii", help="comma-separated ball radii")

    p = sub.add_parser("scenario", parents=[common], help="run a named scenario")
    p.add_argument("name", nargs="?", help=", ".join(SCENARIOS) + " or all")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](resolve(args), out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
