"""Experiment registry and command-line front end.

Each registry entry reproduces one figure's data: a sweep over a y-grid
(or a prime axis) emitting CSV with a '#'-prefixed metadata block, the
value series, and an analytic overlay column pair where a limit formula
exists.  Floats are printed with 17 significant digits so files
round-trip exactly.

Determinism contract: compute tasks are pure and merged in fixed grid
order, so the emitted bytes do not depend on the thread count.  Thread
count and wall time are therefore reported on stderr, not in the file.

CLI:
    murmur <experiment> [--x N] [--c R | --delta R]
           [--y-min R --y-max R --y-step R] [--parity +|-]
           [--variant eight_d|dagger] [--weight bump:a,b | indicator:a,b]
           [--mode brute|closed|analytic|empirical] [--threads N]
           [--out PATH]
    murmur list
    murmur validate [--quick]

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Callable

import numpy as np

from . import __version__, complex_family as cf, real_family as rf, validate

MODES = ("brute", "closed", "analytic", "empirical")


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    X: int
    c: float | None = None
    delta: float | None = None
    y_min: float = 0.0
    y_max: float = 2.0
    y_step: float = 0.05
    p_max: int | None = None
    parity: int = 1
    variant: str = "eight_d"
    weight_kind: str = "bump"
    weight_a: float | None = None
    weight_b: float | None = None
    mode: str = "closed"
    a_max: int | None = None
    n_max: int | None = None
    quad_tol: float | None = None
    m_cutoff_tol: float | None = None
    grid_step: float | None = None
    threads: int = 0  # 0: machine parallelism (or MURMUR_THREADS)
    out: str | None = None

    def weight(self) -> rf.Weight:
        a, b = self.weight_a, self.weight_b
        if a is None or b is None:
            a, b = (1.0, 2.0) if self.parity == 1 else (-2.0, -1.0)
        if self.weight_kind == "bump":
            return rf.bump_weight(a, b)
        if self.weight_kind == "indicator":
            return rf.indicator_weight(a, b)
        raise ConfigError(f"unsupported weight kind {self.weight_kind!r}")

    def policy(self) -> rf.TruncationPolicy:
        base = rf.DEFAULT_POLICY
        overrides = {
            k: v
            for k, v in (
                ("a_max", self.a_max),
                ("n_max", self.n_max),
                ("quad_tol", self.quad_tol),
                ("m_cutoff_tol", self.m_cutoff_tol),
                ("grid_step", self.grid_step),
            )
            if v is not None
        }
        return replace(base, **overrides) if overrides else base

    def y_grid(self) -> np.ndarray:
        if self.y_step <= 0:
            raise ConfigError("y_step must be positive")
        if self.y_min > self.y_max:
            raise ConfigError("y_min must not exceed y_max")
        n = int(round((self.y_max - self.y_min) / self.y_step))
        return self.y_min + self.y_step * np.arange(n + 1)

    def effective_threads(self) -> int:
        if self.threads > 0:
            return self.threads
        env = os.environ.get("MURMUR_THREADS")
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    x: np.ndarray
    values: np.ndarray  # complex
    overlay: np.ndarray | None
    plot_component: str  # 'real' | 'imag'
    wall_time_s: float
    version: str = __version__

    def __post_init__(self):
        if len(self.x) != len(self.values):
            raise ValueError("row count must equal grid size")
        if not np.all(np.isfinite(self.values.view(np.float64))):
            raise ValueError("non-finite value in experiment result")
        if self.overlay is not None and not np.all(
            np.isfinite(self.overlay.view(np.float64))
        ):
            raise ValueError("non-finite overlay in experiment result")


def _parallel_map(fn: Callable, items, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------

def _run_prime_geometric(cfg: ExperimentConfig, threads: int):
    ys = cfg.y_grid()
    mode = "closed" if cfg.mode in ("analytic", "empirical") else cfg.mode
    vals = _parallel_map(
        lambda y: cf.prime_window_average(float(y), cfg.X, cfg.c, cfg.parity, mode),
        ys,
        threads,
    )
    overlay = [cf.prime_window_limit(float(y), cfg.c, cfg.parity) for y in ys]
    return ys, np.array(vals), np.array(overlay)


def _run_prime_short(cfg: ExperimentConfig, threads: int):
    ys = cfg.y_grid()
    mode = "closed" if cfg.mode in ("analytic", "empirical") else cfg.mode
    vals = _parallel_map(
        lambda y: cf.prime_window_average_short(
            float(y), cfg.X, cfg.delta, cfg.parity, mode
        ),
        ys,
        threads,
    )
    overlay = [cf.prime_window_limit_short(float(y), cfg.parity) for y in ys]
    return ys, np.array(vals), np.array(overlay)


def _run_composite(cfg: ExperimentConfig, threads: int, short: bool):
    ys = cfg.y_grid()
    window = (
        cf.ShortWindow(cfg.X, cfg.delta) if short else cf.GeometricWindow(cfg.X, cfg.c)
    )
    mode = "closed" if cfg.mode in ("analytic", "empirical") else cfg.mode
    vals = _parallel_map(
        lambda y: cf.composite_window_sums(float(y), window, cfg.parity, mode).combined_sum,
        ys,
        threads,
    )
    overlay = [
        cf.composite_window_limit(float(y), cfg.parity, None if short else cfg.c)
        for y in ys
    ]
    return ys, np.array(vals), np.array(overlay)


def _run_empirical(cfg: ExperimentConfig, threads: int):
    ys = cfg.y_grid()
    weight = cfg.weight()
    policy = cfg.policy()
    ys = ys[ys * cfg.X > 2]  # the weighted sum requires yX > 2
    vals = _parallel_map(
        lambda y: rf.empirical_average(float(y), cfg.X, cfg.delta, weight, cfg.variant),
        ys,
        threads,
    )
    if weight.smooth:
        overlay = [
            rf.density_dual(float(y), weight, cfg.variant, policy) for y in ys
        ]
    else:
        overlay = [
            rf.density_primal(float(y), weight, cfg.variant, policy).value for y in ys
        ]
    return ys, np.array(vals, dtype=complex), np.array(overlay, dtype=complex)


def _run_dyadic(cfg: ExperimentConfig, threads: int, family: str, normalization: str):
    p_max = cfg.p_max
    rows = cf.dyadic_raw_sum(cfg.X, cfg.parity, family, p_max, normalization, threads)
    x = np.array([p for p, _ in rows], dtype=np.float64)
    vals = np.array([v for _, v in rows])
    return x, vals, None


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    figure: str
    defaults: dict
    runner: Callable
    has_overlay: bool


REGISTRY: dict[str, ExperimentSpec] = {}


def _register(name, figure, defaults, runner, has_overlay):
    REGISTRY[name] = ExperimentSpec(name, figure, defaults, runner, has_overlay)


_register(
    "fig1_top",
    "prime-conductor geometric window [X, 2X] with its integral limit",
    dict(X=2**10, c=2.0, y_min=0.0, y_max=10.0, y_step=0.01, mode="closed"),
    _run_prime_geometric,
    True,
)
_register(
    "fig1_bottom",
    "prime-conductor short window [X, X + X^0.51] with cos/sin limit",
    dict(X=2002, delta=0.51, y_min=0.0, y_max=2.0, y_step=0.005, mode="closed"),
    _run_prime_short,
    True,
)
_register(
    "fig2",
    "weighted real-character sum (smooth bump) with its analytic density",
    dict(
        X=2**19,
        delta=2 / 3,
        y_min=0.0,
        y_max=2.0,
        y_step=0.05,
        mode="empirical",
        variant="eight_d",
        weight_kind="bump",
    ),
    _run_empirical,
    True,
)
_register(
    "fig3_sharp",
    "weighted real-character sum with a sharp cut-off weight",
    dict(
        X=2**19,
        delta=2 / 3,
        y_min=0.0,
        y_max=2.0,
        y_step=0.05,
        mode="empirical",
        variant="eight_d",
        weight_kind="indicator",
    ),
    _run_empirical,
    True,
)
_register(
    "fig4",
    "raw dyadic sum over primitive quadratic characters, per prime",
    dict(X=2**17, p_max=2**19 - 1, mode="closed"),
    lambda cfg, t: _run_dyadic(cfg, t, "Q", "none"),
    False,
)
_register(
    "fig5",
    "dyadic average over all primitive characters, per prime",
    dict(X=2**10, p_max=10 * 2**10, mode="brute"),
    lambda cfg, t: _run_dyadic(cfg, t, "D", "inv_X"),
    False,
)
_register(
    "fig6",
    "all-conductor geometric window with the (5/pi^2)-scaled limit",
    dict(X=2**10, c=2.0, y_min=0.0, y_max=10.0, y_step=0.01, mode="closed"),
    lambda cfg, t: _run_composite(cfg, t, short=False),
    True,
)
_register(
    "fig7",
    "all-conductor short window with the (5/pi^2)-scaled limit",
    dict(X=2002, delta=0.51, y_min=0.0, y_max=2.0, y_step=0.005, mode="closed"),
    lambda cfg, t: _run_composite(cfg, t, short=True),
    True,
)
_register(
    "fig8",
    "plain-Kronecker weighted real-character sum with its density",
    dict(
        X=2**19,
        delta=2 / 3,
        y_min=0.0,
        y_max=2.0,
        y_step=0.05,
        mode="empirical",
        variant="dagger",
        weight_kind="bump",
    ),
    _run_empirical,
    True,
)

#: experiments whose minus-parity values are purely imaginary
_IMAGINARY_MINUS = {"fig1_top", "fig1_bottom", "fig4", "fig5", "fig6", "fig7"}


def build_config(experiment: str, **overrides) -> ExperimentConfig:
    if experiment not in REGISTRY:
        raise ConfigError(
            f"unknown experiment {experiment!r}; known: "
            + ", ".join(sorted(REGISTRY) + ["validate_all"])
        )
    merged = dict(REGISTRY[experiment].defaults)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    # the dyadic prime axes scale with X unless pinned explicitly
    if overrides.get("X") is not None and overrides.get("p_max") is None:
        if experiment == "fig4":
            merged["p_max"] = 4 * merged["X"] - 1
        elif experiment == "fig5":
            merged["p_max"] = 10 * merged["X"]
    cfg = ExperimentConfig(experiment=experiment, **merged)
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")
    if cfg.parity not in (1, -1):
        raise ConfigError("parity must be +1 or -1")
    if cfg.variant not in rf.VARIANTS:
        raise ConfigError(f"variant must be one of {rf.VARIANTS}")
    return cfg


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute one registry experiment; output is thread-count invariant."""
    if cfg.experiment not in REGISTRY:
        raise ConfigError(
            f"unknown experiment {cfg.experiment!r}; known: "
            + ", ".join(sorted(REGISTRY) + ["validate_all"])
        )
    spec = REGISTRY[cfg.experiment]
    start = time.perf_counter()
    x, values, overlay = spec.runner(cfg, cfg.effective_threads())
    wall = time.perf_counter() - start
    component = (
        "imag" if cfg.parity == -1 and cfg.experiment in _IMAGINARY_MINUS else "real"
    )
    return ExperimentResult(
        config=cfg,
        x=np.asarray(x, dtype=np.float64),
        values=np.asarray(values, dtype=complex),
        overlay=None if overlay is None else np.asarray(overlay, dtype=complex),
        plot_component=component,
        wall_time_s=wall,
    )


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

_VOLATILE_FIELDS = {"threads", "out"}  # excluded: byte-identity across thread counts


def emit_csv(result: ExperimentResult, path: str) -> None:
    """Write the result with '#' metadata lines and 17-digit floats."""
    cfg = result.config
    lines = []
    for f in fields(cfg):
        if f.name in _VOLATILE_FIELDS:
            continue
        val = getattr(cfg, f.name)
        if val is None:
            continue
        if isinstance(val, float):
            val = format(val, ".17g")
        lines.append(f"# {f.name}={val}")
    lines.append(f"# plot_component={result.plot_component}")
    lines.append(f"# version={result.version}")
    header = "x,value_re,value_im"
    if result.overlay is not None:
        header += ",overlay_re,overlay_im"
    lines.append(header)
    for i in range(len(result.x)):
        row = [
            format(float(result.x[i]), ".17g"),
            format(float(result.values[i].real), ".17g"),
            format(float(result.values[i].imag), ".17g"),
        ]
        if result.overlay is not None:
            row.append(format(float(result.overlay[i].real), ".17g"))
            row.append(format(float(result.overlay[i].imag), ".17g"))
        lines.append(",".join(row))
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path!r}: {exc}") from exc


def parse_csv(path: str):
    """Read back an emitted CSV: (metadata, x, values, overlay-or-None)."""
    metadata: dict[str, str] = {}
    rows = []
    header = None
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].strip().partition("=")
                    metadata[key.strip()] = val
                elif header is None:
                    header = line.split(",")
                else:
                    try:
                        rows.append([float(tok) for tok in line.split(",")])
                    except ValueError as exc:
                        raise ValueError(f"{path}:{lineno}: bad row: {exc}") from exc
    except OSError as exc:
        raise OSError(f"cannot read CSV from {path!r}: {exc}") from exc
    if header is None:
        raise ValueError(f"{path}: no header line found")
    data = np.array(rows, dtype=np.float64).reshape(len(rows), len(header))
    x = data[:, 0]
    values = data[:, 1] + 1j * data[:, 2]
    overlay = data[:, 3] + 1j * data[:, 4] if len(header) == 5 else None
    return metadata, x, values, overlay


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _parse_weight(text: str) -> tuple[str, float, float]:
    try:
        kind, _, ab = text.partition(":")
        a, b = (float(t) for t in ab.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad weight spec {text!r}; expected kind:a,b") from exc
    if kind not in ("bump", "indicator"):
        raise ConfigError("weight kind must be bump or indicator")
    return kind, a, b


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="murmur",
        description="Murmuration experiments for Dirichlet character families.",
        epilog="Experiments: "
        + "; ".join(f"{s.name}: {s.figure}" for s in REGISTRY.values())
        + "; validate_all: run the acceptance checks.",
    )
    parser.add_argument("experiment", help="experiment name, 'list', or 'validate'")
    parser.add_argument("--x", type=int, dest="X")
    parser.add_argument("--c", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--y-min", type=float, dest="y_min")
    parser.add_argument("--y-max", type=float, dest="y_max")
    parser.add_argument("--y-step", type=float, dest="y_step")
    parser.add_argument("--p-max", type=int, dest="p_max")
    parser.add_argument("--parity", choices=["+", "-"])
    parser.add_argument("--variant", choices=list(rf.VARIANTS))
    parser.add_argument("--weight", type=str)
    parser.add_argument("--mode", choices=list(MODES))
    parser.add_argument("--a-max", type=int, dest="a_max")
    parser.add_argument("--n-max", type=int, dest="n_max")
    parser.add_argument("--quad-tol", type=float, dest="quad_tol")
    parser.add_argument("--m-cutoff-tol", type=float, dest="m_cutoff_tol")
    parser.add_argument("--grid-step", type=float, dest="grid_step")
    parser.add_argument("--threads", type=int, default=0)
    parser.add_argument("--out", type=str)
    parser.add_argument("--quick", action="store_true", help="for validate")
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] == "list":
        for spec in REGISTRY.values():
            print(f"{spec.name:12s} {spec.figure}")
        print(f"{'validate_all':12s} run the acceptance checks (alias: validate)")
        return 0
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.experiment in ("validate", "validate_all"):
        results = validate.run_all(quick=args.quick)
        failed = [r for r in results if not r.passed]
        if failed:
            print(f"{len(failed)} check(s) failed", file=sys.stderr)
            return 1
        return 0

    overrides = dict(
        X=args.X,
        c=args.c,
        delta=args.delta,
        y_min=args.y_min,
        y_max=args.y_max,
        y_step=args.y_step,
        p_max=args.p_max,
        parity={"+": 1, "-": -1}.get(args.parity),
        variant=args.variant,
        mode=args.mode,
        a_max=args.a_max,
        n_max=args.n_max,
        quad_tol=args.quad_tol,
        m_cutoff_tol=args.m_cutoff_tol,
        grid_step=args.grid_step,
    )
    if args.weight:
        kind, a, b = _parse_weight(args.weight)
        overrides.update(weight_kind=kind, weight_a=a, weight_b=b)
    try:
        cfg = build_config(args.experiment, **overrides)
        if args.threads:
            cfg = replace(cfg, threads=args.threads)
        result = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = args.out or f"{args.experiment}.csv"
    emit_csv(result, out)
    print(
        f"{cfg.experiment}: {len(result.x)} rows -> {out} "
        f"[{result.wall_time_s:.2f}s, {cfg.effective_threads()} threads]",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
