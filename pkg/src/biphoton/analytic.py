"""Closed-form coincidence probabilities for Gaussian scenarios.

Every function here is an independent check on the quadrature engine:
bandwidths in units of ``sigma_ref``, path differences in units of
``c / sigma_ref``, 50/50 beam splitter throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Union


class Limit(enum.Enum):
    """Limits of the pump bandwidth: ``DELTA`` is sigma_p -> 0, ``FLAT`` is sigma_p -> inf."""

    DELTA = "delta"
    FLAT = "flat"


Bandwidth = Union[float, Limit]


def _check_pump(sigma_p: Bandwidth) -> None:
    if not isinstance(sigma_p, Limit) and not sigma_p > 0:
        raise ValueError(f"pump bandwidth must be positive or a Limit, got {sigma_p!r}")


@dataclass(frozen=True)
class Type1Params:
    sigma1: float = 1.0
    sigma2: float = 1.0
    sigma_p: Bandwidth = Limit.FLAT
    delta_omega: float = 0.0
    delta_z: float = 0.0

    def __post_init__(self):
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise ValueError("bandwidths must be positive")
        _check_pump(self.sigma_p)


@dataclass(frozen=True)
class MZParams:
    """Mach-Zehnder in path 1; ``beta = sigma_p / sigma`` or a :class:`Limit`."""

    beta: Bandwidth = 1.0
    delta_L: float = 1.0
    theta: float = 0.0
    delta_z: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.delta_L < 0:
            raise ValueError("delta_L must be nonnegative")
        if not self.sigma > 0:
            raise ValueError("bandwidth must be positive")
        _check_pump(self.beta)


@dataclass(frozen=True)
class Type2Params:
    omega_alpha: float = 0.0
    omega_beta: float = 0.0
    sigma_alpha: float = 1.0
    sigma_beta: float = 1.0
    sigma_p: Bandwidth = 1.0
    theta: float = 0.0
    delta_z: float = 0.0
    n_alpha: float = 0.5
    n_beta: float = 0.5

    def __post_init__(self):
        if not (self.sigma_alpha > 0 and self.sigma_beta > 0):
            raise ValueError("bandwidths must be positive")
        _check_pump(self.sigma_p)
        if min(self.n_alpha, self.n_beta) < 0 or abs(self.n_alpha + self.n_beta - 1.0) > 1e-9:
            raise ValueError(f"mode weights {self.n_alpha!r}, {self.n_beta!r} must be >= 0 and sum to 1")


def effective_bandwidths(sigma1: float, sigma2: float, sigma_p: Bandwidth) -> tuple[float, float]:
    """``(sigma_s, sigma_f)``: spatial-coherence and frequency-range bandwidths."""
    _check_pump(sigma_p)
    s1, s2 = sigma1**2, sigma2**2
    sigma_s = math.sqrt(2 * s1 * s2 / (s1 + s2))
    if sigma_p is Limit.DELTA:
        return sigma_s, sigma_s
    if sigma_p is Limit.FLAT:
        return sigma_s, math.sqrt((s1 + s2) / 2)
    sp = sigma_p**2
    return sigma_s, math.sqrt((sp * (s1 + s2) + 4 * s1 * s2) / (2 * (sp + s1 + s2)))


def pc_type1(p: Type1Params) -> float:
    """Two-photon dip for a type-I pair (any pump when bandwidths match)."""
    if p.sigma1 == p.sigma2:
        sigma = p.sigma1
        return 0.5 * (1 - math.exp(-0.5 * (p.delta_z * sigma) ** 2 - 0.5 * (p.delta_omega / sigma) ** 2))
    sigma_s, sigma_f = effective_bandwidths(p.sigma1, p.sigma2, p.sigma_p)
    visibility = sigma_s / sigma_f
    return 0.5 * (
        1 - visibility * math.exp(-0.5 * (p.delta_z * sigma_s) ** 2 - 0.5 * (p.delta_omega / sigma_f) ** 2)
    )


def pc_mz(p: MZParams) -> float:
    """Degenerate pair with a Mach-Zehnder of half-difference ``delta_L`` in path 1."""
    L, z, s = p.delta_L, p.delta_z, p.sigma
    c2 = math.cos(2 * p.theta)
    side = 0.5 * math.exp(-0.5 * ((L + z) * s) ** 2) + 0.5 * math.exp(-0.5 * ((L - z) * s) ** 2)
    if p.beta is Limit.DELTA:
        b_norm = 1 + c2 * math.exp(-0.5 * (L * s) ** 2)
        center = c2 * math.exp(-0.5 * (z * s) ** 2)
    elif p.beta is Limit.FLAT:
        b_norm = 1 + c2 * math.exp(-((L * s) ** 2))
        center = c2 * math.exp(-0.5 * (L**2 + z**2) * s**2)
    else:
        b2 = p.beta**2
        b_norm = 1 + c2 * math.exp(-(1 + b2) / (2 + b2) * (L * s) ** 2)
        center = c2 * math.exp(-0.5 * (b2 / (2 + b2) * L**2 + z**2) * s**2)
    if b_norm <= 0:
        # only reachable at delta_L = 0 with cos(2 theta) = -1: the arm output vanishes
        raise ValueError("Mach-Zehnder output has zero norm for these parameters")
    return 0.5 * (1 - (center + side) / b_norm)


def pc_mz_quarter(delta_L: float, delta_z: float, sigma: float = 1.0) -> float:
    """Mach-Zehnder dip at ``2 theta = pi/2``, where the pump bandwidth drops out."""
    return 0.5 * (
        1
        - 0.5 * (math.exp(-0.5 * ((delta_L + delta_z) * sigma) ** 2) + math.exp(-0.5 * ((delta_L - delta_z) * sigma) ** 2))
    )


def type2_effective_bandwidth(sigma_alpha: float, sigma_beta: float, sigma_p: Bandwidth) -> float:
    _check_pump(sigma_p)
    sa, sb = sigma_alpha**2, sigma_beta**2
    if sigma_p is Limit.DELTA:
        return math.sqrt(2 * sa * sb / (sa + sb))
    if sigma_p is Limit.FLAT:
        return math.sqrt((sa + sb) / 2)
    sp = sigma_p**2
    return math.sqrt((sp * sa + sp * sb + 4 * sa * sb) / (2 * (sp + sa + sb)))


def pc_type2_entangled(p: Type2Params) -> float:
    """Polarization-entangled type-II pair; beats at ``omega_beta - omega_alpha``."""
    if p.sigma_alpha == p.sigma_beta:
        sigma = p.sigma_alpha
    else:
        sigma = type2_effective_bandwidth(p.sigma_alpha, p.sigma_beta, p.sigma_p)
    beat = math.cos((p.omega_beta - p.omega_alpha) * p.delta_z - p.theta)
    return 0.5 * (1 - beat * math.exp(-0.5 * (p.delta_z * sigma) ** 2))


class IndependentType2(NamedTuple):
    pc_mm_alpha: float
    pc_mm_beta: float
    pc_cross: float
    pc_total: float


def pc_type2_independent(p: Type2Params) -> IndependentType2:
    """Two identical, independent two-mode photons with phase ``theta`` on path-1 beta.

    The same-polarization dips decay with each mode's own bandwidth.
    """
    z = p.delta_z
    aa = 0.5 * p.n_alpha**2 * (1 - math.exp(-0.5 * (z * p.sigma_alpha) ** 2))
    bb = 0.5 * p.n_beta**2 * (1 - math.exp(-0.5 * (z * p.sigma_beta) ** 2))
    beat = math.cos((p.omega_beta - p.omega_alpha) * z - p.theta)
    cross = p.n_alpha * p.n_beta * (
        1 - beat * math.exp(-0.25 * z**2 * (p.sigma_alpha**2 + p.sigma_beta**2))
    )
    return IndependentType2(aa, bb, cross, aa + bb + cross)
