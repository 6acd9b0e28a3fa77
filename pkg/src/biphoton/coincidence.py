"""Coincidence probabilities and interference classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .beamsplitter import BALANCED, BeamSplitter, OutputStateCase1
from .spectral import TOL_NORM, JointSpectrum, PolarizedJointSpectrum

DEFAULT_CLASSIFY_TOL = 1e-6


class Verdict(str, enum.Enum):
    CI = "CI"  # coalescence: fewer coincidences than without interference
    ACI = "ACI"  # anti-coalescence
    NONE = "NONE"


def classify(pc: float, reference: float, tol: float = DEFAULT_CLASSIFY_TOL) -> Verdict:
    if not tol > 0:
        raise ValueError(f"classification tolerance must be positive, got {tol!r}")
    if pc < reference - tol:
        return Verdict.CI
    if pc > reference + tol:
        return Verdict.ACI
    return Verdict.NONE


@dataclass(frozen=True)
class CoincidenceReport:
    """``pc == reference * (1 - interference_term)``."""

    pc: float
    reference: float
    interference_term: float
    verdict: Verdict


@dataclass(frozen=True)
class ChannelReport:
    pc_alpha_alpha: float
    pc_beta_beta: float
    pc_alpha_beta: float
    pc_beta_alpha: float
    ref_alpha_alpha: float
    ref_beta_beta: float
    ref_cross: float
    verdict_alpha_alpha: Verdict
    verdict_beta_beta: Verdict
    verdict_cross: Verdict
    verdict: Verdict

    @property
    def pc_cross(self) -> float:
        return self.pc_alpha_beta + self.pc_beta_alpha

    @property
    def pc_total(self) -> float:
        return self.pc_alpha_alpha + self.pc_beta_beta + self.pc_cross

    @property
    def reference(self) -> float:
        return self.ref_alpha_alpha + self.ref_beta_beta + self.ref_cross


def _check_norm(norm: float) -> None:
    if abs(norm - 1.0) > TOL_NORM:
        raise ValueError(f"input state has norm {norm!r}, expected 1")


def _swap_overlap(a: JointSpectrum, b: JointSpectrum) -> complex:
    """``int a(nu1, nu2) b*(nu2, nu1)``; the 1-D line integral for correlated spectra."""
    return complex(np.sum(a.weights * a.values * np.conj(b.swapped())))


def _coinc_norm(a: JointSpectrum, b: JointSpectrum, bs: BeamSplitter) -> float:
    """Squared norm of ``a(nu1, nu2) cos^2 - b(nu2, nu1) sin^2``."""
    amp = a.values * bs.cos2 - b.swapped() * bs.sin2
    return float(np.sum(a.weights * np.abs(amp) ** 2))


def _no_interference(bs: BeamSplitter) -> float:
    return bs.cos2**2 + bs.sin2**2


def interference_term(js: JointSpectrum) -> float:
    """``(1/2) int [C(nu1,nu2) C*(nu2,nu1) + c.c.]``; zero means no interference."""
    return _swap_overlap(js, js).real


def pc_case1(
    js: JointSpectrum, bs: BeamSplitter = BALANCED, tol: float = DEFAULT_CLASSIFY_TOL
) -> CoincidenceReport:
    """Coincidence probability of a single-polarization pair.

    At 50/50 this is ``(1/4) int |C - C^T|^2``; perfectly correlated spectra
    use the same expression on the line ``nu1 + nu2 = 0``.
    """
    _check_norm(js.norm())
    pc = _coinc_norm(js, js, bs)
    reference = _no_interference(bs)
    term = 2.0 * bs.cos2 * bs.sin2 * interference_term(js) / reference
    return CoincidenceReport(pc, reference, term, classify(pc, reference, tol))


def pc_case2(
    pjs: PolarizedJointSpectrum, bs: BeamSplitter = BALANCED, tol: float = DEFAULT_CLASSIFY_TOL
) -> ChannelReport:
    """Polarization-resolved coincidence probabilities."""
    _check_norm(sum(pjs.weights.values()))
    base = _no_interference(bs)
    pc_aa = _coinc_norm(pjs["aa"], pjs["aa"], bs)
    pc_bb = _coinc_norm(pjs["bb"], pjs["bb"], bs)
    pc_ab = _coinc_norm(pjs["ab"], pjs["ba"], bs)
    pc_ba = _coinc_norm(pjs["ba"], pjs["ab"], bs)
    w = pjs.weights
    ref_aa, ref_bb = base * w["aa"], base * w["bb"]
    ref_x = base * (w["ab"] + w["ba"])
    total = pc_aa + pc_bb + pc_ab + pc_ba
    return ChannelReport(
        pc_alpha_alpha=pc_aa,
        pc_beta_beta=pc_bb,
        pc_alpha_beta=pc_ab,
        pc_beta_alpha=pc_ba,
        ref_alpha_alpha=ref_aa,
        ref_beta_beta=ref_bb,
        ref_cross=ref_x,
        verdict_alpha_alpha=classify(pc_aa, ref_aa, tol),
        verdict_beta_beta=classify(pc_bb, ref_bb, tol),
        verdict_cross=classify(pc_ab + pc_ba, ref_x, tol),
        verdict=classify(total, ref_aa + ref_bb + ref_x, tol),
    )


def port_probabilities(out: OutputStateCase1) -> tuple[float, float, float]:
    """``(p_both1, p_both2, p_coinc)``."""
    return out.p_both1, out.p_both2, out.p_coinc
