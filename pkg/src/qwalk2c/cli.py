"""
Command-line front end: ``qwalk2c <simulate|density|stationary|verify|sweep>``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .limit_laws import density_at, limit_cdf, limit_density, stationary_law
from .quadrature import QuadratureSpec
from .tables import render
from .walk_engine import CoinParameters, InitialCoinState, evolve, position_distribution

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("simulate", "density", "stationary", "verify", "sweep")

PRESETS = {
    "bell": (math.sqrt(0.5), 0.0, 0.0, math.sqrt(0.5)),
    "nonloc": (-0.5, -0.5, -0.5, 0.5),
    "e00": (1.0, 0.0, 0.0, 0.0),
    "e11": (0.0, 0.0, 0.0, 1.0),
}

# Decimal literals such as 0.7071 miss unit norm by ~1e-5; anything closer
# than this is treated as intended-normalized and renormalized exactly.
TYPED_NORM_TOL = 1e-4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    beta: float = math.pi / 4
    alpha: tuple[complex, complex, complex, complex] = PRESETS["bell"]
    alpha_label: str = "bell"
    t: int = 100
    output_path: str = "-"
    format: str = "csv"
    quad_tolerance: float = 1e-10
    samples: int = 20
    seed: int = 0
    jobs: int = 1
    points: int = 401
    window: tuple[int, int] = (-10, 10)
    sweep_grid: tuple[float, float, int] = (0.1, math.pi / 2 - 0.1, 15)
    presets: tuple[str, ...] = ("bell", "nonloc")
    extra: dict = field(default_factory=dict)

    @property
    def coin(self) -> CoinParameters:
        return CoinParameters(self.beta)

    @property
    def initial(self) -> InitialCoinState:
        return InitialCoinState(np.array(self.alpha, dtype=np.complex128))

    @property
    def quad(self) -> QuadratureSpec:
        return QuadratureSpec(tol=self.quad_tolerance)


_PI_RE = re.compile(r"^\s*([-+]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$", re.IGNORECASE)


def parse_beta(text: str) -> float:
    """Parse radians given as a float or as ``pi/4``, ``3pi/8``, ``0.25*pi``."""
    m = _PI_RE.match(text)
    try:
        if m:
            num = m.group(1)
            factor = 1.0 if num in ("", "+") else -1.0 if num == "-" else float(num)
            value = factor * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
        else:
            value = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse beta {text!r}") from None
    if not 0.0 < value < math.pi / 2:
        raise ConfigError(f"beta must lie strictly inside (0, pi/2), got {value!r}")
    return value


def _parse_complex(token: str) -> complex:
    s = token.strip().replace(" ", "").replace("i", "j")
    if not s:
        raise ConfigError("empty amplitude")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse amplitude {token!r}") from None


def parse_alpha(text: str, renormalize: bool = False) -> tuple[complex, ...]:
    """
    Parse ``a1,a2,a3,a4`` (each ``re``, ``re+imi`` or ``imi``) or a preset name.
    """
    key = text.strip().lower()
    if key in PRESETS:
        return PRESETS[key]
    values = np.array([_parse_complex(tok) for tok in text.split(",")], dtype=np.complex128)
    if values.size != 4:
        raise ConfigError(f"alpha needs four comma-separated amplitudes, got {values.size}")
    norm = float(np.linalg.norm(values))
    if norm == 0.0:
        raise ConfigError("alpha is the zero vector")
    if abs(norm**2 - 1.0) > TYPED_NORM_TOL and not renormalize:
        raise ConfigError(
            f"alpha has norm {norm:.6g}, not 1; divide each amplitude by {norm:.6g} "
            "or pass --renormalize"
        )
    values = values / norm
    return tuple(complex(v) for v in values)


def _alpha_text(alpha) -> str:
    return ";".join(f"{z.real:.12g}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.12g}i" for z in alpha)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", default="pi/4", help="coin angle in radians, e.g. 0.6 or pi/4")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", help="initial coin amplitudes a1,a2,a3,a4 (complex as 0.5+0.5i)")
    g.add_argument("--preset", choices=sorted(PRESETS), help="named initial coin state")
    p.add_argument("--renormalize", action="store_true", help="divide --alpha by its norm")
    p.add_argument("--t", type=int, default=100, help="number of steps")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=0, help="worker processes (0 = all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk2c", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "evolve the walk and write p_t(x) per site",
        "density": "evaluate the weak-limit density and CDF of X_t/t",
        "stationary": "evaluate the stationary probabilities lim p_t(x)",
        "verify": "run pinned cases and random identity checks",
        "sweep": "tabulate limit-law constants over a beta grid",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        _common(p)
        if name == "density":
            p.add_argument("--points", type=int, default=401, help="grid points on [-1, 1]")
        if name == "stationary":
            p.add_argument("--xmin", type=int, default=-10)
            p.add_argument("--xmax", type=int, default=10)
        if name == "sweep":
            p.add_argument("--beta-min", default="0.1")
            p.add_argument("--beta-max", default=f"{math.pi / 2 - 0.1!r}")
            p.add_argument("--beta-steps", type=int, default=15)
            p.add_argument("--presets", default="bell,nonloc",
                           help=f"comma-separated presets from {sorted(PRESETS)}")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if not args.tol > 0:
        raise ConfigError(f"--tol must be positive, got {args.tol}")
    if args.t < 0:
        raise ConfigError(f"--t must be nonnegative, got {args.t}")
    if args.samples < 0:
        raise ConfigError(f"--samples must be nonnegative, got {args.samples}")
    if args.jobs < 0:
        raise ConfigError(f"--jobs must be nonnegative, got {args.jobs}")
    fmt = args.format or ("json" if str(args.out).lower().endswith(".json") else "csv")
    if args.alpha is not None:
        alpha, label = parse_alpha(args.alpha, args.renormalize), "custom"
    else:
        label = args.preset or "bell"
        alpha = PRESETS[label]
    cfg = RunConfig(
        command=args.command,
        beta=parse_beta(args.beta),
        alpha=alpha,
        alpha_label=label,
        t=args.t,
        output_path=args.out,
        format=fmt,
        quad_tolerance=args.tol,
        samples=args.samples,
        seed=args.seed,
        jobs=args.jobs or (os.cpu_count() or 1),
    )
    if args.command == "density":
        if args.points < 2:
            raise ConfigError("--points must be at least 2")
        cfg.points = args.points
    if args.command == "stationary":
        if args.xmin > args.xmax:
            raise ConfigError("--xmin must not exceed --xmax")
        cfg.window = (args.xmin, args.xmax)
    if args.command == "sweep":
        lo, hi = parse_beta(args.beta_min), parse_beta(args.beta_max)
        if args.beta_steps < 1 or lo > hi:
            raise ConfigError("sweep grid needs beta-min <= beta-max and beta-steps >= 1")
        names = tuple(n.strip().lower() for n in args.presets.split(",") if n.strip())
        unknown = [n for n in names if n not in PRESETS]
        if unknown or not names:
            raise ConfigError(f"unknown presets {unknown}; choose from {sorted(PRESETS)}")
        cfg.sweep_grid = (lo, hi, args.beta_steps)
        cfg.presets = names
    return cfg


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {"command": cfg.command, "beta": cfg.beta, "alpha": _alpha_text(cfg.alpha),
            "alpha_label": cfg.alpha_label}
    meta.update(extra)
    return meta


def cmd_simulate(cfg: RunConfig) -> tuple[dict, list[str], list[list]]:
    state = evolve(cfg.initial, cfg.coin, cfg.t)
    dist = position_distribution(state)
    mags = np.abs(state.amplitudes)
    meta = _meta(cfg, t=cfg.t, norm_residual=abs(state.norm_squared() - 1.0))
    columns = ["x", "p", "abs_00", "abs_01", "abs_10", "abs_11"]
    rows = [[int(x), p, *m] for x, p, m in zip(dist.support, dist.probabilities, mags)]
    return meta, columns, rows


def cmd_density(cfg: RunConfig) -> tuple[dict, list[str], list[list]]:
    d = limit_density(cfg.coin, cfg.initial)
    cb = d.support_bound
    ys = np.linspace(-1.0, 1.0, cfg.points)
    ys = ys[np.abs(np.abs(ys) - cb) > 1e-12]
    f = density_at(d, ys)
    F = limit_cdf(d, ys, cfg.quad)
    meta = _meta(cfg, c00=d.c00, c0=d.c0, c1=d.c1, c2=d.c2, cos_beta=cb)
    return meta, ["y", "f_ac", "F"], [[y, fy, Fy] for y, fy, Fy in zip(ys, f, F)]


def cmd_stationary(cfg: RunConfig) -> tuple[dict, list[str], list[list]]:
    law = stationary_law(cfg.coin, cfg.initial)
    xs = np.arange(cfg.window[0], cfg.window[1] + 1)
    p = law.probability(xs)
    meta = _meta(cfg, p0=law.p0, j_plus=law.j_plus, j_minus=law.j_minus, ratio=law.ratio,
                 total_mass=law.total_mass())
    return meta, ["x", "p"], [[int(x), float(v)] for x, v in zip(xs, p)]


def _sweep_row(args):
    index, beta, preset = args
    coin, initial = CoinParameters(beta), InitialCoinState(np.array(PRESETS[preset]))
    d, law = limit_density(coin, initial), stationary_law(coin, initial)
    return [index, beta, preset, d.c00, law.p0, law.ratio, law.j_plus, law.j_minus]


def cmd_sweep(cfg: RunConfig) -> tuple[dict, list[str], list[list]]:
    lo, hi, steps = cfg.sweep_grid
    betas = np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])
    items = [(i * len(cfg.presets) + j, float(b), name)
             for i, b in enumerate(betas) for j, name in enumerate(cfg.presets)]
    if cfg.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_sweep_row, items))
    else:
        rows = [_sweep_row(it) for it in items]
    meta = {"command": "sweep", "beta_min": lo, "beta_max": hi, "beta_steps": steps,
            "presets": "+".join(cfg.presets)}
    columns = ["index", "beta", "preset", "c00", "p0", "ratio", "j_plus", "j_minus"]
    return meta, columns, rows


def cmd_verify(cfg: RunConfig) -> tuple[dict, list[str], list[list], bool]:
    from .verify import simulation_checks, theorem_consistency_suite

    report = theorem_consistency_suite(cfg.samples, cfg.seed, cfg.jobs)
    report.checks.extend(simulation_checks())
    meta = {"command": "verify", "seed": cfg.seed, "samples": cfg.samples,
            "passed": report.passed, "families": "+".join(report.families)}
    columns = ["name", "family", "beta", "value", "bound", "passed"]
    rows = [[c.name, c.family, c.parameters.get("beta", ""), c.value, c.bound, c.passed]
            for c in report.checks]
    print(report.summary(), file=sys.stderr)
    return meta, columns, rows, report.passed


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output_path == "-":
        sys.stdout.write(text)
        return
    path = Path(cfg.output_path)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
    except (ConfigError, ValueError) as exc:
        print(f"qwalk2c: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    status = EXIT_OK
    handlers = {"simulate": cmd_simulate, "density": cmd_density,
                "stationary": cmd_stationary, "sweep": cmd_sweep}
    if cfg.command == "verify":
        meta, columns, rows, ok = cmd_verify(cfg)
        status = EXIT_OK if ok else EXIT_VERIFY
    else:
        meta, columns, rows = handlers[cfg.command](cfg)
    try:
        _write(cfg, render(cfg.format, meta, columns, rows))
    except OSError as exc:
        print(f"qwalk2c: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
