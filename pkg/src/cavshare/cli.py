"""Command-line driver: figure data, sweeps, optimization, verification.

Runs are configured by `key = value` files and/or mirroring flags, and all
output is CSV with a single `#` metadata line recording the effective
parameters. Formatting is pinned (17 significant digits, comma delimiter,
LF endings) so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import analytic, dissipative
from . import verify as verify_mod
from .errors import (
    CapacityExceeded,
    InvalidParameter,
    ParseError,
    StepSizeUnstable,
    UnknownKey,
)
from .model import CouplingProfile, PairIndex, ParityKind, SinglePhoton, SystemParams
from .optimize import optimal_intensity

_COMMANDS = ("figure", "sweep", "optimize", "verify")
_FIGURES = ("fig1", "fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4")
_KEYS = (
    "command",
    "figure",
    "N",
    "g",
    "gamma_over_g",
    "alpha2",
    "parity",
    "t_start",
    "t_stop",
    "points",
    "out",
)

_TWO_PI = 2.0 * math.pi
_DEFAULT_TIME_POINTS = 801  # 400 per pi-period on [0, 2pi]
_FIG4_SPAN = 6.0 * math.pi
_FIG4_POINTS = 2401
_FIG2_INTENSITY_AXIS = (0.0, 6.0, 61)
_FIG2CD_INTENSITY_AXIS = (0.0, 6.0, 601)
_FIG3_INTENSITIES = (0.01, 0.1, 1.0, 2.0)
_FIG2CD_N = (2, 3, 5, 10)
_PEAK_GT = math.pi / 2.0


@dataclass(frozen=True)
class RunConfig:
    """Effective run settings; None means "use the command's default"."""

    command: str = "figure"
    figure: str = "fig1"
    n: int | None = None
    g: float | None = None
    gamma_over_g: float | None = None
    alpha2: float | None = None
    parity: ParityKind | None = None
    t_start: float | None = None
    t_stop: float | None = None
    points: int | None = None
    out: str | None = None


def _convert(key: str, raw: str, lineno: int):
    try:
        if key == "command":
            if raw not in _COMMANDS:
                raise ValueError(f"one of {', '.join(_COMMANDS)}")
            return raw
        if key == "figure":
            if raw not in _FIGURES:
                raise ValueError(f"one of {', '.join(_FIGURES)}")
            return raw
        if key in ("N", "points"):
            try:
                return int(raw)
            except ValueError:
                raise ValueError("an integer") from None
        if key in ("g", "gamma_over_g", "alpha2", "t_start", "t_stop"):
            try:
                return float(raw)
            except ValueError:
                raise ValueError("a number") from None
        if key == "parity":
            lowered = raw.lower()
            if lowered not in ("even", "odd"):
                raise ValueError("even or odd")
            return ParityKind.EVEN if lowered == "even" else ParityKind.ODD
        if key == "out":
            return raw
    except ValueError as exc:
        raise ParseError(lineno, f"bad value for {key}: {raw!r} (expected {exc})") from None
    raise UnknownKey(key)


_FIELD_FOR_KEY = {
    "command": "command",
    "figure": "figure",
    "N": "n",
    "g": "g",
    "gamma_over_g": "gamma_over_g",
    "alpha2": "alpha2",
    "parity": "parity",
    "t_start": "t_start",
    "t_stop": "t_stop",
    "points": "points",
    "out": "out",
}


def parse_config(text: str) -> RunConfig:
    """Parse a `key = value` document (blank lines and # comments allowed)."""
    cfg = RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(lineno, "expected key = value")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _KEYS:
            raise UnknownKey(key)
        cfg = replace(cfg, **{_FIELD_FOR_KEY[key]: _convert(key, raw, lineno)})
    return cfg


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, ParityKind):
        return value.name.lower()
    return str(value)


def _write_csv(path: str, meta: list[tuple[str, object]], header: list[str],
               rows) -> int:
    lines = ["# " + " ".join(f"{k}={_fmt(v)}" for k, v in meta)]
    lines.append(",".join(header))
    count = 0
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
        count += 1
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write("\n".join(lines) + "\n")
    return count


def _grid(start: float, stop: float, points: int) -> np.ndarray:
    if points < 2:
        raise InvalidParameter("points", "grid needs at least 2 points")
    if not stop > start:
        raise InvalidParameter("t_stop", "grid stop must exceed start")
    return np.linspace(start, stop, points)


def _time_axis(cfg: RunConfig, default_stop: float, default_points: int):
    start = cfg.t_start if cfg.t_start is not None else 0.0
    stop = cfg.t_stop if cfg.t_stop is not None else default_stop
    points = cfg.points if cfg.points is not None else default_points
    return start, stop, points


def run_figure(cfg: RunConfig) -> tuple[str, int]:
    figure = cfg.figure
    out = cfg.out if cfg.out is not None else f"{figure}.csv"
    parity_of = {"fig2a": ParityKind.ODD, "fig2b": ParityKind.EVEN,
                 "fig2c": ParityKind.ODD, "fig2d": ParityKind.EVEN}

    if figure == "fig1":
        n = cfg.n if cfg.n is not None else 3
        start, stop, points = _time_axis(cfg, _TWO_PI, _DEFAULT_TIME_POINTS)
        params = SystemParams(n_crystallites=n)
        profile = CouplingProfile.isotropic(1.0, n)
        pair = PairIndex(1, 2)
        rows = (
            (
                float(gt),
                analytic.single_photon_concurrence(profile, float(gt), pair),
                analytic.mean_photon_number(params, float(gt), SinglePhoton()),
            )
            for gt in _grid(start, stop, points)
        )
        meta = [("command", "figure"), ("figure", figure), ("N", n),
                ("t_start", start), ("t_stop", stop), ("points", points),
                ("out", out)]
        count = _write_csv(out, meta, ["Gt", "concurrence", "mean_photon"], rows)
        return out, count

    if figure in ("fig2a", "fig2b"):
        n = cfg.n if cfg.n is not None else 3
        parity = parity_of[figure]
        start, stop, points = _time_axis(cfg, _TWO_PI, _DEFAULT_TIME_POINTS)
        x_lo, x_hi, x_pts = _FIG2_INTENSITY_AXIS
        xs = _grid(x_lo, x_hi, x_pts)

        def surface():
            for gt in _grid(start, stop, points):
                for x in xs:
                    params = SystemParams(
                        n_crystallites=n, intensity=float(x), parity=parity
                    )
                    yield float(gt), float(x), analytic.coherent_concurrence(
                        params, float(gt)
                    )

        meta = [("command", "figure"), ("figure", figure), ("N", n),
                ("parity", parity), ("t_start", start), ("t_stop", stop),
                ("points", points), ("out", out)]
        count = _write_csv(out, meta, ["Gt", "intensity", "concurrence"], surface())
        return out, count

    if figure in ("fig2c", "fig2d"):
        parity = parity_of[figure]
        # the grid keys drive the intensity axis here; these panels have no
        # time axis (the peak is taken at Gt = pi/2)
        x_lo, x_hi, x_pts = _FIG2CD_INTENSITY_AXIS
        start = cfg.t_start if cfg.t_start is not None else x_lo
        stop = cfg.t_stop if cfg.t_stop is not None else x_hi
        points = cfg.points if cfg.points is not None else x_pts

        def curves():
            for n in _FIG2CD_N:
                for x in _grid(start, stop, points):
                    params = SystemParams(
                        n_crystallites=n, intensity=float(x), parity=parity
                    )
                    yield float(x), analytic.coherent_concurrence(
                        params, _PEAK_GT
                    ), n

        meta = [("command", "figure"), ("figure", figure), ("parity", parity),
                ("t_start", start), ("t_stop", stop), ("points", points),
                ("out", out)]
        count = _write_csv(out, meta, ["intensity", "max_concurrence", "N"], curves())
        return out, count

    if figure == "fig3":
        def table():
            for x in _FIG3_INTENSITIES:
                for n in range(2, 11):
                    odd = analytic.coherent_concurrence(
                        SystemParams(n_crystallites=n, intensity=x,
                                     parity=ParityKind.ODD), _PEAK_GT
                    )
                    even = analytic.coherent_concurrence(
                        SystemParams(n_crystallites=n, intensity=x,
                                     parity=ParityKind.EVEN), _PEAK_GT
                    )
                    yield x, n, odd, even, 2.0 / n

        meta = [("command", "figure"), ("figure", figure), ("out", out)]
        count = _write_csv(
            out, meta,
            ["intensity", "N", "max_concurrence_odd", "max_concurrence_even",
             "two_over_N"],
            table(),
        )
        return out, count

    # fig4: damped evolution, both parities, two decay ratios, wide columns
    n = cfg.n if cfg.n is not None else 3
    x = cfg.alpha2 if cfg.alpha2 is not None else 1.0
    start, stop, points = _time_axis(cfg, _FIG4_SPAN, _FIG4_POINTS)
    ratios = (0.13, 0.5)
    systems = [
        SystemParams(n_crystallites=n, decay_rate=ratio, intensity=x, parity=parity)
        for ratio in ratios
        for parity in (ParityKind.ODD, ParityKind.EVEN)
    ]

    def decay_rows():
        for gt in _grid(start, stop, points):
            yield (float(gt),) + tuple(
                dissipative.damped_concurrence(params, float(gt))
                for params in systems
            )

    header = ["Gt", "odd_gamma_0.13", "even_gamma_0.13",
              "odd_gamma_0.5", "even_gamma_0.5"]
    meta = [("command", "figure"), ("figure", figure), ("N", n), ("alpha2", x),
            ("t_start", start), ("t_stop", stop), ("points", points),
            ("out", out)]
    count = _write_csv(out, meta, header, decay_rows())
    return out, count


def run_sweep(cfg: RunConfig) -> tuple[str, int]:
    out = cfg.out if cfg.out is not None else "sweep.csv"
    n = cfg.n if cfg.n is not None else 3
    g = cfg.g if cfg.g is not None else 1.0
    ratio = cfg.gamma_over_g if cfg.gamma_over_g is not None else 0.0
    x = cfg.alpha2 if cfg.alpha2 is not None else 1.0
    parity = cfg.parity if cfg.parity is not None else ParityKind.ODD
    start, stop, points = _time_axis(cfg, _TWO_PI, _DEFAULT_TIME_POINTS)
    params = SystemParams(
        n_crystallites=n, coupling=g, decay_rate=ratio * g, intensity=x,
        parity=parity,
    )
    if ratio > 0.0:
        values = (
            (float(gt), dissipative.damped_concurrence(params, float(gt)))
            for gt in _grid(start, stop, points)
        )
    else:
        values = (
            (float(gt), analytic.coherent_concurrence(params, float(gt)))
            for gt in _grid(start, stop, points)
        )
    meta = [("command", "sweep"), ("N", n), ("g", g), ("gamma_over_g", ratio),
            ("alpha2", x), ("parity", parity), ("t_start", start),
            ("t_stop", stop), ("points", points), ("out", out)]
    count = _write_csv(out, meta, ["Gt", "concurrence"], values)
    return out, count


def run_optimize(cfg: RunConfig) -> tuple[str, int]:
    out = cfg.out if cfg.out is not None else "optimize.csv"
    parity = cfg.parity if cfg.parity is not None else ParityKind.ODD
    n_values = [cfg.n] if cfg.n is not None else list(range(2, 11))
    rows = []
    for n in n_values:
        report = optimal_intensity(n, parity)
        rows.append((
            n, parity, report.intensity, report.concurrence, report.method,
            report.residual, report.iterations,
        ))
    meta = [("command", "optimize"), ("parity", parity), ("out", out)]
    if cfg.n is not None:
        meta.insert(1, ("N", cfg.n))
    count = _write_csv(
        out, meta,
        ["N", "parity", "intensity", "concurrence", "method", "residual",
         "iterations"],
        rows,
    )
    return out, count


def run_verify(cfg: RunConfig) -> int:
    out = cfg.out if cfg.out is not None else "verify.csv"
    results = verify_mod.run_all(
        n_times=cfg.points,
        gt_max=cfg.t_stop,
        n_override=cfg.n,
        intensity_override=cfg.alpha2,
        gamma_override=cfg.gamma_over_g,
    )
    meta: list[tuple[str, object]] = [("command", "verify")]
    for key, value in (("N", cfg.n), ("alpha2", cfg.alpha2),
                       ("gamma_over_g", cfg.gamma_over_g),
                       ("t_stop", cfg.t_stop), ("points", cfg.points)):
        if value is not None:
            meta.append((key, value))
    meta.append(("out", out))
    rows = (
        (case.case_id, case.analytic, case.oracle, case.abs_error,
         case.tolerance, case.status)
        for result in results
        for case in result.cases
    )
    _write_csv(
        out, meta,
        ["case_id", "analytic", "oracle", "abs_error", "tolerance", "status"],
        rows,
    )
    n_pass = n_fail = n_skip = 0
    for result in results:
        p, f, s = result.counts()
        n_pass += p
        n_fail += f
        n_skip += s
    print(f"verify: {n_pass} pass, {n_fail} fail, {n_skip} skip -> {out}")
    if n_fail:
        return 2
    if n_skip:
        return 3
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we own codes
        raise ParseError(0, message)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cavshare",
        description="Pairwise-entanglement data generator: figure data, "
                    "sweeps, intensity optimization, analytic-vs-oracle "
                    "verification.",
    )
    parser.add_argument("--config", help="configuration file (key = value lines)")
    for key in _KEYS:
        parser.add_argument(f"--{key}", dest=key, help=f"config key {key}")
    return parser


def main(argv: list[str]) -> int:
    ns = build_arg_parser().parse_args(argv)
    if ns.config is not None:
        with open(ns.config, "r", encoding="utf-8") as handle:
            cfg = parse_config(handle.read())
    else:
        cfg = RunConfig()
    for key in _KEYS:
        raw = getattr(ns, key)
        if raw is not None:
            cfg = replace(cfg, **{_FIELD_FOR_KEY[key]: _convert(key, raw, 0)})
    if cfg.command == "figure":
        path, count = run_figure(cfg)
    elif cfg.command == "sweep":
        path, count = run_sweep(cfg)
    elif cfg.command == "optimize":
        path, count = run_optimize(cfg)
    else:
        return run_verify(cfg)
    print(f"{cfg.command}: wrote {count} rows -> {path}")
    return 0


def entrypoint(argv: list[str] | None = None) -> int:
    try:
        return main(sys.argv[1:] if argv is None else argv)
    except (ParseError, UnknownKey, InvalidParameter, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StepSizeUnstable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
