"""Config-driven command line front end.

Configs are flat ``key = value`` files with ``#`` comments; the last
occurrence of a key wins, which is what lets ``--set key=value`` overrides
work by appending lines.  Three modes:

    solve    one run at a single N; writes the results CSV plus a nodal dump
    sweep    one run per N in a range; writes the results CSV plus plot data
    compare  like sweep, but errors are measured against a high-N reference

The results CSV always has the header ``N,l2_e,linf_e,l2_estar,linf_estar,
runtime_ms`` with errors in scientific notation at 6 significant digits.  By
default the runtime column is written as zero so identical configs produce
byte-identical files; set ``timing = on`` for wall-clock values.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .analysis import (
    ConvergenceTable,
    SolverConfig,
    SweepRow,
    convergence_sweep,
    reference_solution,
    solve_once,
)
from .problem import EXAMPLE_KEYS, VideProblem, make_example
from .problem import exact_phi_pair

__all__ = [
    "ConfigError",
    "RunSpec",
    "parse_config",
    "render",
    "run",
    "emit_plot_data",
    "main",
]

CSV_HEADER = "N,l2_e,linf_e,l2_estar,linf_estar,runtime_ms"

MODES = ("solve", "sweep", "compare")
FORCINGS = ("corrected", "printed")

# named coefficients for inline (problem = custom) definitions
_COEFFS = {
    "zero": lambda t: 0.0,
    "one": lambda t: 1.0,
    "neg_one": lambda t: -1.0,
    "cos": math.cos,
    "exp_neg": lambda t: math.exp(-t),
    "sin2": lambda t: math.sin(2.0 * t),
}
_KERNELS = {
    "zero": lambda t, s: 0.0,
    "one": lambda t, s: 1.0,
    "neg_one": lambda t, s: -1.0,
}


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


@dataclass
class RunSpec:
    mode: str
    problem: str
    n_values: tuple[int, ...]
    lam: Optional[float] = None
    alpha: float = -0.5
    beta: float = -0.5
    forcing: str = "corrected"
    output: str = "results.csv"
    linf_grid: int = 2001
    l2_quad: Optional[int] = None
    ref_n: Optional[int] = None
    eps: Optional[float] = None
    mu: Optional[float] = None
    horizon: Optional[float] = None
    y0: Optional[float] = None
    a1: Optional[str] = None
    b1: Optional[str] = None
    f1: Optional[str] = None
    k1: Optional[str] = None
    k2: Optional[str] = None
    timing: bool = False


# config key -> (RunSpec field, parser)
def _parse_n_values(text: str) -> tuple[int, ...]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("ranges are start:stop:step")
        start, stop, step = (int(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be positive")
        values = tuple(range(start, stop + 1, step))
    else:
        values = (int(text),)
    if not values:
        raise ValueError("empty N range")
    if any(n < 2 for n in values):
        raise ValueError("every N must be >= 2")
    return values


def _parse_bool(text: str) -> bool:
    if text in ("on", "true", "1"):
        return True
    if text in ("off", "false", "0"):
        return False
    raise ValueError("expected on/off")


_KEY_TABLE = {
    "mode": ("mode", str),
    "problem": ("problem", str),
    "N": ("n_values", _parse_n_values),
    "lambda": ("lam", float),
    "alpha": ("alpha", float),
    "beta": ("beta", float),
    "forcing": ("forcing", str),
    "output": ("output", str),
    "linf_grid": ("linf_grid", int),
    "l2_quad": ("l2_quad", int),
    "ref_N": ("ref_n", int),
    "eps": ("eps", float),
    "mu": ("mu", float),
    "T": ("horizon", float),
    "y0": ("y0", float),
    "a1": ("a1", str),
    "b1": ("b1", str),
    "f1": ("f1", str),
    "K1": ("k1", str),
    "K2": ("k2", str),
    "timing": ("timing", _parse_bool),
}

_REQUIRED_KEYS = ("mode", "problem", "N")
_CUSTOM_ONLY_KEYS = ("a1", "b1", "f1", "K1", "K2")


def parse_config(text: str) -> RunSpec:
    """Parse and validate a flat key = value configuration."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEY_TABLE:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for key {key!r}")
        raw[key] = value  # last occurrence wins

    missing = [k for k in _REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    kwargs = {}
    for key, value in raw.items():
        attr, parser = _KEY_TABLE[key]
        try:
            kwargs[attr] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"invalid value for key {key!r}: {exc}") from exc
    spec = RunSpec(**kwargs)
    _validate(spec)
    return spec


def _validate(spec: RunSpec) -> None:
    if spec.mode not in MODES:
        raise ConfigError(f"key 'mode' must be one of {MODES}, got {spec.mode!r}")
    if spec.problem != "custom" and spec.problem not in EXAMPLE_KEYS:
        raise ConfigError(
            f"key 'problem' must be 'custom' or one of {EXAMPLE_KEYS}, got {spec.problem!r}"
        )
    if spec.lam is not None and not 0.0 < spec.lam <= 1.0:
        raise ConfigError(f"key 'lambda' must lie in (0, 1], got {spec.lam}")
    if spec.forcing not in FORCINGS:
        raise ConfigError(f"key 'forcing' must be one of {FORCINGS}, got {spec.forcing!r}")
    if spec.linf_grid < 2:
        raise ConfigError(f"key 'linf_grid' must be >= 2, got {spec.linf_grid}")
    if spec.l2_quad is not None and spec.l2_quad < 1:
        raise ConfigError(f"key 'l2_quad' must be >= 1, got {spec.l2_quad}")
    if spec.mode == "compare":
        if spec.ref_n is None:
            raise ConfigError("compare mode requires key 'ref_N'")
        if spec.ref_n <= max(spec.n_values):
            raise ConfigError(
                f"key 'ref_N' must exceed the largest N ({max(spec.n_values)}), got {spec.ref_n}"
            )
    if spec.mode == "solve" and len(spec.n_values) != 1:
        raise ConfigError("solve mode takes a single N, not a range")
    if spec.problem == "custom":
        if spec.mu is None:
            raise ConfigError("custom problems require key 'mu'")
        for key in ("a1", "b1", "f1"):
            value = getattr(spec, key)
            if value is not None and value not in _COEFFS:
                raise ConfigError(
                    f"key {key!r} must name one of {sorted(_COEFFS)}, got {value!r}"
                )
        for key in ("k1", "k2"):
            value = getattr(spec, key)
            if value is not None and value not in _KERNELS:
                raise ConfigError(
                    f"key {key.upper()!r} must name one of {sorted(_KERNELS)}, got {value!r}"
                )
    else:
        for key in _CUSTOM_ONLY_KEYS:
            attr = _KEY_TABLE[key][0]
            if getattr(spec, attr) is not None:
                raise ConfigError(f"key {key!r} is only valid with problem = custom")


def render(spec: RunSpec) -> str:
    """Inverse of parse_config, used for round-trip testing."""
    attr_to_key = {attr: key for key, (attr, _) in _KEY_TABLE.items()}
    lines = []
    for f in fields(RunSpec):
        value = getattr(spec, f.name)
        if value is None:
            continue
        key = attr_to_key[f.name]
        if f.name == "n_values":
            if len(value) == 1:
                text = str(value[0])
            else:
                step = value[1] - value[0]
                text = f"{value[0]}:{value[-1]}:{step}"
        elif f.name == "timing":
            text = "on" if value else "off"
        else:
            text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def build_problem(spec: RunSpec) -> VideProblem:
    if spec.problem == "custom":
        return VideProblem(
            a1=_COEFFS[spec.a1 or "zero"],
            b1=_COEFFS[spec.b1 or "zero"],
            f1=_COEFFS[spec.f1 or "zero"],
            k1=_KERNELS[spec.k1 or "zero"],
            k2=_KERNELS[spec.k2 or "zero"],
            mu=spec.mu,
            eps=spec.eps if spec.eps is not None else 0.5,
            T=spec.horizon if spec.horizon is not None else 1.0,
            y0=spec.y0 if spec.y0 is not None else 0.0,
            label="custom",
        )
    overrides = {"mu": spec.mu, "eps": spec.eps, "T": spec.horizon, "forcing": spec.forcing}
    if spec.problem == "5.4":
        overrides["y0"] = spec.y0
    elif spec.y0 is not None:
        raise ConfigError("key 'y0' is only adjustable for problem 5.4 or custom")
    return make_example(spec.problem, **overrides)


def build_solver_config(spec: RunSpec) -> SolverConfig:
    return SolverConfig(
        lam=spec.lam,
        alpha=spec.alpha,
        beta=spec.beta,
        l2_points=spec.l2_quad,
        linf_points=spec.linf_grid,
    )


def _fmt_err(x: float) -> str:
    return f"{x:.5e}"


def _write_csv(table: ConvergenceTable, path: Path, timing: bool) -> None:
    lines = [CSV_HEADER]
    for r in table.rows:
        ms = f"{r.runtime_ms:.3f}" if timing else "0.000"
        lines.append(
            f"{r.n},{_fmt_err(r.l2_e)},{_fmt_err(r.linf_e)},"
            f"{_fmt_err(r.l2_estar)},{_fmt_err(r.linf_estar)},{ms}"
        )
    path.write_text("\n".join(lines) + "\n")


def emit_plot_data(table: ConvergenceTable, path) -> None:
    """Plot-ready columns: N and log10 of each error channel."""
    rows = [r for r in table.rows if not r.failed]
    if not rows:
        raise ValueError("cannot emit plot data for an empty table")

    def log10(x: float) -> str:
        return f"{math.log10(x):.6f}" if x > 0 else "-inf"

    lines = [
        f"{r.n} {log10(r.l2_e)} {log10(r.linf_e)} {log10(r.l2_estar)} {log10(r.linf_estar)}"
        for r in rows
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def _write_nodal_dump(grid, sol, path: Path) -> None:
    lines = ["theta,phi,phi_star"]
    for theta, phi, phi_star in zip(grid.points, sol.u, sol.u_star):
        # shortest round-trip decimal form, full precision
        lines.append(f"{float(theta)!r},{float(phi)!r},{float(phi_star)!r}")
    path.write_text("\n".join(lines) + "\n")


def run(spec: RunSpec) -> int:
    """Execute a run spec; returns the process exit status."""
    problem = build_problem(spec)
    config = build_solver_config(spec)
    out = Path(spec.output)

    if spec.mode == "solve":
        n = spec.n_values[0]
        grid, sol, runtime_ms = solve_once(problem, n, config)
        if exact_phi_pair(problem) is not None:
            table = convergence_sweep(problem, config, [n])
        else:
            # no exact solution to measure against in solve mode
            table = ConvergenceTable(
                rows=[
                    SweepRow(
                        n=n,
                        l2_e=math.nan,
                        linf_e=math.nan,
                        l2_estar=math.nan,
                        linf_estar=math.nan,
                        runtime_ms=runtime_ms,
                    )
                ]
            )
        _write_nodal_dump(grid, sol, out.with_suffix(".nodes.csv"))
    elif spec.mode == "sweep":
        table = convergence_sweep(problem, config, spec.n_values)
    else:
        ref = reference_solution(problem, config, spec.ref_n)
        table = convergence_sweep(problem, config, spec.n_values, reference=ref)

    _write_csv(table, out, spec.timing)
    if spec.mode in ("sweep", "compare"):
        try:
            emit_plot_data(table, out.with_suffix(".plot.dat"))
        except ValueError:
            pass  # every row failed; the CSV still records the failures
    for r in table.rows:
        status = f"FAILED: {r.message}" if r.failed else "ok"
        print(
            f"N={r.n:3d}  l2_e={_fmt_err(r.l2_e)}  linf_e={_fmt_err(r.linf_e)}  "
            f"l2_e*={_fmt_err(r.l2_estar)}  linf_e*={_fmt_err(r.linf_estar)}  [{status}]"
        )
    return 0 if not any(r.failed for r in table.rows) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="muntzvide",
        description="Spectral collocation runs for delay Volterra integro-differential equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=f"{mode} run")
        p.add_argument("--config", required=True, help="path to a key = value config file")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config key (repeatable)",
        )
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    extra = [f"mode = {args.command}"]
    for item in args.set:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        key, _, value = item.partition("=")
        extra.append(f"{key.strip()} = {value.strip()}")
    try:
        spec = parse_config(text + "\n" + "\n".join(extra) + "\n")
        return run(spec)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
