"""Optical paths between source and beam splitter, and parameter scans."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Union

import numpy as np

from .beamsplitter import BALANCED, BeamSplitter
from .coincidence import DEFAULT_CLASSIFY_TOL, Verdict, pc_case1, pc_case2
from .spectral import JointSpectrum, PolarizedJointSpectrum, Representation

Spectrum = Union[JointSpectrum, PolarizedJointSpectrum]

SCAN_PARAMS = ("delta_z", "theta", "two_theta", "delta_L")


@dataclass(frozen=True)
class MachZehnder:
    """Unbalanced interferometer: arms ``z +/- delta_L``, carrier phase ``theta``."""

    delta_L: float
    theta: float = 0.0
    arm: int = 1

    def __post_init__(self):
        if self.delta_L < 0:
            raise ValueError("delta_L must be nonnegative")
        if self.arm not in (1, 2):
            raise ValueError("arm must be 1 or 2")


@dataclass(frozen=True)
class WavePlate:
    theta: float
    path: int = 1
    polarization: str = "b"

    def __post_init__(self):
        if self.path not in (1, 2):
            raise ValueError("path must be 1 or 2")
        if self.polarization not in ("a", "b"):
            raise ValueError("polarization must be 'a' or 'b'")


@dataclass(frozen=True)
class OpticalPath:
    z1: float = 0.0
    z2: float = 0.0
    mz: MachZehnder | None = None
    wave_plate: WavePlate | None = None

    @property
    def delta_z(self) -> float:
        return self.z2 - self.z1


def _line_phase(js: JointSpectrum, f1, f2) -> np.ndarray:
    """Evaluate ``f1(nu1) * f2(nu2)`` on the support of ``js``."""
    nu = js.grid.nodes
    if js.representation is Representation.CORRELATED:
        return f1(nu) * f2(-nu)
    return np.outer(f1(nu), f2(nu))


def apply_path_delay(spec: Spectrum, z1: float, z2: float) -> Spectrum:
    """Free propagation: ``C -> C exp[i (nu1 z1 + nu2 z2)]``."""
    if isinstance(spec, PolarizedJointSpectrum):
        return spec.map_channels(lambda _k, js: apply_path_delay(js, z1, z2))
    phase = _line_phase(spec, lambda nu: np.exp(1j * nu * z1), lambda nu: np.exp(1j * nu * z2))
    return spec.replace_values(spec.values * phase)


def apply_mz(js: JointSpectrum, delta_L: float, theta: float, arm: int = 1) -> JointSpectrum:
    """Multiply the chosen photon's axis by ``cos(nu delta_L + theta)`` and renormalize."""
    if js.representation is Representation.ATOMS:
        raise ValueError("Mach-Zehnder needs a continuum or correlated spectrum")
    MachZehnder(delta_L, theta, arm)
    fringe = lambda nu: np.cos(nu * delta_L + theta)  # noqa: E731
    one = lambda nu: np.ones_like(nu)  # noqa: E731
    factor = _line_phase(js, fringe, one) if arm == 1 else _line_phase(js, one, fringe)
    return js.replace_values(js.values * factor).normalized()


def apply_wave_plate(
    pjs: PolarizedJointSpectrum, theta: float, path: int = 1, polarization: str = "b"
) -> PolarizedJointSpectrum:
    """Phase ``exp(i theta)`` on every channel whose path-``path`` photon has ``polarization``."""
    WavePlate(theta, path, polarization)
    phase = np.exp(1j * theta)
    return pjs.map_channels(
        lambda key, js: js.replace_values(js.values * phase) if key[path - 1] == polarization else js
    )


def apply_optics(source: Spectrum, path: OpticalPath) -> Spectrum:
    spec = source
    if path.mz is not None:
        if isinstance(spec, PolarizedJointSpectrum):
            raise ValueError("Mach-Zehnder is only supported for single-polarization spectra")
        spec = apply_mz(spec, path.mz.delta_L, path.mz.theta, path.mz.arm)
    if path.wave_plate is not None:
        if not isinstance(spec, PolarizedJointSpectrum):
            raise ValueError("a wave plate needs a two-polarization spectrum")
        wp = path.wave_plate
        spec = apply_wave_plate(spec, wp.theta, wp.path, wp.polarization)
    if path.z1 or path.z2:
        spec = apply_path_delay(spec, path.z1, path.z2)
    return spec


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    value: float
    pc: float
    reference: float
    verdict: Verdict
    pc_aa: float | None = None
    pc_bb: float | None = None
    pc_cross: float | None = None


@dataclass(frozen=True)
class ScanResult:
    param: str
    rows: tuple[ScanRow, ...]
    polarized: bool

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows])

    @property
    def pc(self) -> np.ndarray:
        return np.array([r.pc for r in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)


def path_with(path: OpticalPath, param: str, value: float, polarized: bool) -> OpticalPath:
    """Copy of ``path`` with one scan parameter set to ``value``.

    ``theta`` sets the Mach-Zehnder carrier phase for single-polarization
    spectra and the path-1 beta wave plate for two-polarization spectra.
    """
    if param not in SCAN_PARAMS:
        raise ValueError(f"unknown scan parameter {param!r}; expected one of {SCAN_PARAMS}")
    if param == "delta_z":
        return dataclasses.replace(path, z2=path.z1 + value)
    if param == "theta" and polarized:
        wp = path.wave_plate or WavePlate(0.0)
        return dataclasses.replace(path, wave_plate=dataclasses.replace(wp, theta=value))
    if path.mz is None:
        raise ValueError(f"scanning {param!r} needs a Mach-Zehnder in the optical path")
    if param == "delta_L":
        mz = dataclasses.replace(path.mz, delta_L=value)
    else:
        mz = dataclasses.replace(path.mz, theta=value / 2 if param == "two_theta" else value)
    return dataclasses.replace(path, mz=mz)


def evaluate(source: Spectrum, path: OpticalPath, bs: BeamSplitter = BALANCED,
             tol: float = DEFAULT_CLASSIFY_TOL, value: float = 0.0) -> ScanRow:
    spec = apply_optics(source, path)
    if isinstance(spec, PolarizedJointSpectrum):
        rep = pc_case2(spec, bs, tol)
        return ScanRow(value, rep.pc_total, rep.reference, rep.verdict,
                       rep.pc_alpha_alpha, rep.pc_beta_beta, rep.pc_cross)
    rep = pc_case1(spec, bs, tol)
    return ScanRow(value, rep.pc, rep.reference, rep.verdict)


def scan(
    source: Spectrum,
    path: OpticalPath,
    param: str,
    start: float,
    stop: float,
    steps: int,
    bs: BeamSplitter = BALANCED,
    tol: float = DEFAULT_CLASSIFY_TOL,
) -> ScanResult:
    """Coincidence probability over ``linspace(start, stop, steps)`` of ``param``."""
    if param not in SCAN_PARAMS:
        raise ValueError(f"unknown scan parameter {param!r}; expected one of {SCAN_PARAMS}")
    if steps < 2:
        raise ValueError("a scan needs at least 2 steps")
    if stop < start:
        raise ValueError("scan range must be increasing")
    polarized = isinstance(source, PolarizedJointSpectrum)
    rows = tuple(
        evaluate(source, path_with(path, param, float(v), polarized), bs, tol, float(v))
        for v in np.linspace(start, stop, steps)
    )
    return ScanResult(param, rows, polarized)


def contour_data(js: JointSpectrum, retain_phase: bool = False) -> np.ndarray:
    """Spectral envelope on the ``(nu1, nu2)`` lattice.

    Pass a spectrum built without path delays.  The real part is returned
    unless ``retain_phase``; its sign marks the bright and dark lobes.
    """
    if js.representation is not Representation.CONTINUUM:
        raise ValueError("contours need a continuum spectrum")
    return js.values.copy() if retain_phase else js.values.real.copy()
