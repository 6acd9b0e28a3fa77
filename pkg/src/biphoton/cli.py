"""Command-line entry point: ``scan``, ``contour``, ``validate``, ``analytic``.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
import tempfile
from typing import Callable, Sequence

import numpy as np

from . import analytic
from .analytic import Limit
from .coincidence import DEFAULT_CLASSIFY_TOL
from .config import (
    ScenarioConfig,
    build_beamsplitter,
    build_path,
    build_source,
    load_config,
)
from .scenario import SCAN_PARAMS, apply_optics, contour_data, evaluate, scan
from .spectral import JointSpectrum, Representation

DEFAULT_VALIDATE_TOL = 1e-6
DEFAULT_LATTICE = ("delta_z", -5.0, 5.0, 21)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def format_number(x: float) -> str:
    text = format(float(x), ".9g")
    return "0" if text == "-0" else text


def render_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError("row width does not match the header")
        lines.append(",".join(v if isinstance(v, str) else format_number(v) for v in row))
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def scan_table(cfg: ScenarioConfig, param: str, start: float, stop: float, steps: int,
               tol: float = DEFAULT_CLASSIFY_TOL) -> str:
    result = scan(build_source(cfg), build_path(cfg), param, start, stop, steps,
                  build_beamsplitter(cfg), tol)
    header = [param, "pc", "reference", "verdict"]
    if result.polarized:
        header += ["pc_aa", "pc_bb", "pc_cross"]
    rows = []
    for r in result.rows:
        row = [r.value, r.pc, r.reference, r.verdict.value]
        if result.polarized:
            row += [r.pc_aa, r.pc_bb, r.pc_cross]
        rows.append(row)
    return render_csv(header, rows)


def contour_table(cfg: ScenarioConfig) -> str:
    path = dataclasses.replace(build_path(cfg), z1=0.0, z2=0.0)
    spec = apply_optics(build_source(cfg), path)
    if not isinstance(spec, JointSpectrum):
        raise UsageError("contours are only available for single-polarization spectra")
    if spec.representation is not Representation.CONTINUUM:
        raise UsageError(f"contours need a continuum spectrum, not {spec.representation.value}")
    values = contour_data(spec)
    nu = spec.grid.nodes
    rows = [[nu[i], nu[j], values[i, j]] for i in range(len(nu)) for j in range(len(nu))]
    return render_csv(["nu1", "nu2", "value"], rows)


def config_with(cfg: ScenarioConfig, param: str, value: float) -> ScenarioConfig:
    """Copy of ``cfg`` with one scan parameter set, mirroring :func:`scenario.path_with`."""
    o = cfg.optics
    if param == "delta_z":
        optics = dataclasses.replace(o, delta_z=value)
    elif param == "theta" and cfg.polarized:
        optics = dataclasses.replace(o, wave_plate_theta=value)
    elif param in ("theta", "two_theta", "delta_L"):
        if o.mz_delta_L is None:
            raise UsageError(f"scanning {param!r} needs a Mach-Zehnder (mz_delta_L)")
        if param == "delta_L":
            optics = dataclasses.replace(o, mz_delta_L=value)
        else:
            optics = dataclasses.replace(o, mz_theta=value / 2 if param == "two_theta" else value)
    else:
        raise UsageError(f"unknown scan parameter {param!r}; expected one of {SCAN_PARAMS}")
    return dataclasses.replace(cfg, optics=optics)


def _pump(spec) -> analytic.Bandwidth:
    if spec.phase_matching == "gaussian":
        return spec.sigma_p
    if spec.phase_matching == "delta":
        return Limit.DELTA
    return Limit.FLAT


def oracle_for(cfg: ScenarioConfig) -> Callable[[ScenarioConfig], dict[str, float]] | None:
    """Closed form for the scenario, or None when none is known.

    The returned function maps a config (same source, any optics) to the
    expected ``pc`` and, for two-polarization products, channel values.
    """
    b = cfg.beamsplitter
    if not math.isclose(b.theta, math.pi / 4, rel_tol=0, abs_tol=1e-15):
        return None
    s = cfg.spectrum
    if s.kind in ("product_gaussian", "spdc_type1"):
        pump = Limit.FLAT if s.kind == "product_gaussian" else _pump(s)

        def type1(c: ScenarioConfig) -> dict[str, float]:
            o = c.optics
            if o.mz_delta_L is None:
                p = analytic.Type1Params(s.sigma1, s.sigma2, pump, s.delta_omega, o.delta_z)
                return {"pc": analytic.pc_type1(p)}
            beta = pump if isinstance(pump, Limit) else pump / s.sigma1
            p = analytic.MZParams(beta, o.mz_delta_L, o.mz_theta or 0.0, o.delta_z, s.sigma1)
            return {"pc": analytic.pc_mz(p)}

        if cfg.optics.mz_delta_L is not None and (s.sigma1 != s.sigma2 or s.delta_omega != 0):
            return None
        return type1
    if s.kind == "spdc_type2":
        pump = _pump(s)

        def type2(c: ScenarioConfig) -> dict[str, float]:
            theta = s.theta + (c.optics.wave_plate_theta or 0.0)
            p = analytic.Type2Params(s.omega_alpha, s.omega_beta, s.sigma_alpha, s.sigma_beta,
                                     pump, theta, c.optics.delta_z)
            return {"pc": analytic.pc_type2_entangled(p)}

        return type2
    if s.kind == "two_mode_product":

        def independent(c: ScenarioConfig) -> dict[str, float]:
            theta = s.theta + (c.optics.wave_plate_theta or 0.0)
            p = analytic.Type2Params(s.omega_alpha, s.omega_beta, s.sigma_alpha, s.sigma_beta,
                                     Limit.FLAT, theta, c.optics.delta_z, s.n_alpha, 1.0 - s.n_alpha)
            r = analytic.pc_type2_independent(p)
            return {"pc": r.pc_total, "pc_aa": r.pc_mm_alpha, "pc_bb": r.pc_mm_beta,
                    "pc_cross": r.pc_cross}

        return independent
    return None


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    has_oracle: bool
    points: int = 0
    max_deviation: float = 0.0
    tolerance: float = DEFAULT_VALIDATE_TOL

    @property
    def passed(self) -> bool:
        return self.has_oracle and self.max_deviation <= self.tolerance

    def summary(self) -> str:
        if not self.has_oracle:
            return "no oracle: no closed form is available for this configuration"
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}: max |quadrature - closed form| = {self.max_deviation:.3e} "
                f"over {self.points} points (tolerance {self.tolerance:.3e})")


def validate(cfg: ScenarioConfig, tol: float = DEFAULT_VALIDATE_TOL, param: str = "delta_z",
             start: float = -5.0, stop: float = 5.0, steps: int = 21) -> ValidationReport:
    oracle = oracle_for(cfg)
    if oracle is None:
        return ValidationReport(False, tolerance=tol)
    source = build_source(cfg)
    bs = build_beamsplitter(cfg)
    worst = 0.0
    values = np.linspace(start, stop, steps)
    for v in values:
        point = config_with(cfg, param, float(v))
        row = evaluate(source, build_path(point), bs)
        for name, expected in oracle(point).items():
            got = row.pc if name == "pc" else getattr(row, name)
            worst = max(worst, abs(got - expected))
    return ValidationReport(True, len(values), worst, tol)


# ---------------------------------------------------------------------------
# Direct closed-form evaluation
# ---------------------------------------------------------------------------

ANALYTIC_MODELS = ("type1", "mz", "mz_quarter", "type2", "type2_independent")


def _bandwidth(text: str) -> analytic.Bandwidth:
    low = text.strip().lower()
    if low in ("delta", "flat"):
        return Limit(low)
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, 'delta' or 'flat', got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"bandwidth must be positive, got {text!r}")
    return value


def analytic_values(model: str, args: argparse.Namespace) -> dict[str, float]:
    if model == "type1":
        p = analytic.Type1Params(args.sigma1, args.sigma2, args.sigma_p, args.delta_omega, args.delta_z)
        return {"pc": analytic.pc_type1(p)}
    if model == "mz":
        p = analytic.MZParams(args.beta, args.delta_L, args.theta, args.delta_z, args.sigma)
        return {"pc": analytic.pc_mz(p)}
    if model == "mz_quarter":
        return {"pc": analytic.pc_mz_quarter(args.delta_L, args.delta_z, args.sigma)}
    p = analytic.Type2Params(args.omega_alpha, args.omega_beta, args.sigma_alpha, args.sigma_beta,
                             args.sigma_p, args.theta, args.delta_z, args.n_alpha, 1.0 - args.n_alpha)
    if model == "type2":
        return {"pc": analytic.pc_type2_entangled(p)}
    r = analytic.pc_type2_independent(p)
    return {"pc": r.pc_total, "pc_aa": r.pc_mm_alpha, "pc_bb": r.pc_mm_beta, "pc_cross": r.pc_cross}


_ANALYTIC_SCAN = {"delta_z": "delta_z", "theta": "theta", "delta_L": "delta_L"}


def analytic_table(args: argparse.Namespace) -> str:
    if args.param not in _ANALYTIC_SCAN and args.param != "two_theta":
        raise UsageError(f"unknown scan parameter {args.param!r}; expected one of {SCAN_PARAMS}")
    rows, header = [], None
    for v in np.linspace(args.start, args.stop, args.steps):
        point = argparse.Namespace(**vars(args))
        if args.param == "two_theta":
            point.theta = float(v) / 2
        else:
            setattr(point, _ANALYTIC_SCAN[args.param], float(v))
        values = analytic_values(args.model, point)
        header = header or [args.param, *values]
        rows.append([float(v), *values.values()])
    return render_csv(header, rows)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_scan_range(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--param", choices=SCAN_PARAMS, required=required, default=DEFAULT_LATTICE[0])
    p.add_argument("--from", dest="start", type=float, required=required, default=DEFAULT_LATTICE[1])
    p.add_argument("--to", dest="stop", type=float, required=required, default=DEFAULT_LATTICE[2])
    p.add_argument("--steps", type=int, required=required, default=DEFAULT_LATTICE[3])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biphoton", description="Two-photon beam-splitter interference")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="coincidence probability over a parameter range")
    p.add_argument("--config", required=True)
    _add_scan_range(p, required=True)
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=DEFAULT_CLASSIFY_TOL, help="CI/ACI classification tolerance")

    p = sub.add_parser("contour", help="joint spectrum envelope on the frequency grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out")

    p = sub.add_parser("validate", help="compare quadrature against the closed form")
    p.add_argument("--config", required=True)
    _add_scan_range(p, required=False)
    p.add_argument("--tol", type=float, default=DEFAULT_VALIDATE_TOL)

    p = sub.add_parser("analytic", help="evaluate a closed form directly")
    p.add_argument("--model", choices=ANALYTIC_MODELS, required=True)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--sigma-p", dest="sigma_p", type=_bandwidth, default=Limit.FLAT)
    p.add_argument("--delta-omega", dest="delta_omega", type=float, default=0.0)
    p.add_argument("--delta-z", dest="delta_z", type=float, default=0.0)
    p.add_argument("--beta", type=_bandwidth, default=1.0)
    p.add_argument("--delta-L", dest="delta_L", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--omega-alpha", dest="omega_alpha", type=float, default=0.0)
    p.add_argument("--omega-beta", dest="omega_beta", type=float, default=0.0)
    p.add_argument("--sigma-alpha", dest="sigma_alpha", type=float, default=1.0)
    p.add_argument("--sigma-beta", dest="sigma_beta", type=float, default=1.0)
    p.add_argument("--n-alpha", dest="n_alpha", type=float, default=0.5)
    p.add_argument("--param", choices=SCAN_PARAMS)
    p.add_argument("--from", dest="start", type=float, default=DEFAULT_LATTICE[1])
    p.add_argument("--to", dest="stop", type=float, default=DEFAULT_LATTICE[2])
    p.add_argument("--steps", type=int, default=DEFAULT_LATTICE[3])
    p.add_argument("--out")
    return parser


def _check_range(args) -> None:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if args.stop < args.start:
        raise UsageError("--to must not be below --from")


def run(args: argparse.Namespace) -> int:
    if args.command == "analytic":
        if args.param is None:
            values = analytic_values(args.model, args)
            emit(render_csv(list(values), [list(values.values())]), args.out)
        else:
            _check_range(args)
            emit(analytic_table(args), args.out)
        return 0

    cfg = load_config(args.config)
    if args.command == "scan":
        _check_range(args)
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        emit(scan_table(cfg, args.param, args.start, args.stop, args.steps, args.tol), args.out)
        return 0
    if args.command == "contour":
        emit(contour_table(cfg), args.out)
        return 0
    _check_range(args)
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    report = validate(cfg, args.tol, args.param, args.start, args.stop, args.steps)
    print(report.summary())
    return 0 if report.passed or not report.has_oracle else 1


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"biphoton {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
