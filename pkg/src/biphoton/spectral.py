"""Joint spectral amplitudes for two-photon wavepackets.

Frequencies are detunings in units of a reference bandwidth, and path
lengths are in units of ``c / sigma_ref``, so the speed of light never
appears.  All spectra live on a symmetric, odd-sized grid so that the
reflection ``nu -> -nu`` and the swap ``(nu1, nu2) -> (nu2, nu1)`` map nodes
to nodes exactly.

Three representations are kept apart:

* ``CONTINUUM``  -- an ``N x N`` matrix of amplitude densities ``C(nu1, nu2)``
* ``ATOMS``      -- monochromatic pairs; dense ``N x N`` matrix of Kronecker
  weights (no spacing factor)
* ``CORRELATED`` -- ``C(nu1, nu2) = h(nu1) * delta(nu1 + nu2)`` stored as the
  vector ``h``
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

DEFAULT_NU_MAX = 6.0
DEFAULT_POINTS = 257
TOL_NORM = 1e-9

CHANNELS = ("aa", "bb", "ab", "ba")


class SpectrumTruncationWarning(UserWarning):
    """A spectrum extends past the edge of its frequency grid."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# Grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform detuning grid ``[-nu_max, nu_max]`` with an odd node count."""

    nu_max: float
    points: int

    def __post_init__(self):
        if not (isinstance(self.points, (int, np.integer)) and self.points >= 3):
            raise ValueError(f"grid needs at least 3 points, got {self.points!r}")
        if self.points % 2 == 0:
            raise ValueError(f"grid point count must be odd, got {self.points}")
        if not (math.isfinite(self.nu_max) and self.nu_max > 0):
            raise ValueError(f"nu_max must be positive, got {self.nu_max!r}")

    @property
    def nu_min(self) -> float:
        return -self.nu_max

    @property
    def spacing(self) -> float:
        return 2.0 * self.nu_max / (self.points - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        # built from integer offsets so nodes[k] == -nodes[-1-k] bit-for-bit
        k = np.arange(self.points) - (self.points - 1) // 2
        nodes = k * self.spacing
        nodes.setflags(write=False)
        return nodes

    @cached_property
    def weights(self) -> np.ndarray:
        """Trapezoidal quadrature weights."""
        w = np.full(self.points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        w.setflags(write=False)
        return w

    @cached_property
    def weights2d(self) -> np.ndarray:
        w = np.outer(self.weights, self.weights)
        w.setflags(write=False)
        return w

    def index_of(self, nu: float) -> int:
        """Index of the node at detuning ``nu``; raises if ``nu`` is off-grid."""
        pos = (nu + self.nu_max) / self.spacing
        idx = int(round(pos))
        if not (0 <= idx < self.points) or abs(pos - idx) > 1e-9:
            raise ValueError(f"detuning {nu!r} is not a node of {self}")
        return idx

    def covers(self, center: float, width: float, n_widths: float = 3.0) -> bool:
        return abs(center) + n_widths * width <= self.nu_max


def make_grid(nu_max: float = DEFAULT_NU_MAX, points: int = DEFAULT_POINTS) -> FrequencyGrid:
    return FrequencyGrid(float(nu_max), int(points))


def _check_coverage(grid: FrequencyGrid, center: float, width: float, what: str) -> None:
    if not grid.covers(center, width):
        warnings.warn(
            f"{what} centred at {center:g} with width {width:g} is truncated by "
            f"the grid edge at +/-{grid.nu_max:g}",
            SpectrumTruncationWarning,
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# Single-photon spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SinglePhotonSpectrum:
    """Amplitude spectrum ``C(nu)`` of one photon in one mode.

    ``weight`` is the probability carried by this mode; the quadrature of
    ``|C|^2`` equals it.
    """

    grid: FrequencyGrid
    amplitudes: np.ndarray
    center_offset: float = 0.0
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))
        if self.amplitudes.shape != (self.grid.points,):
            raise ValueError("amplitude vector does not match the grid")
        if self.weight < 0:
            raise ValueError("mode weight must be nonnegative")

    def norm(self) -> float:
        return float(np.sum(self.grid.weights * np.abs(self.amplitudes) ** 2))

    def overlap(self, other: SinglePhotonSpectrum) -> complex:
        """``int C_self(nu) C_other(nu)^* dnu``."""
        _same_grid(self.grid, other.grid)
        return complex(np.sum(self.grid.weights * self.amplitudes * np.conj(other.amplitudes)))


def single_from_amplitudes(
    grid: FrequencyGrid, amplitudes, weight: float = 1.0, center_offset: float = 0.0
) -> SinglePhotonSpectrum:
    """Wrap sampled amplitudes, rescaled so that their norm equals ``weight``."""
    amps = np.asarray(amplitudes, dtype=complex)
    norm = float(np.sum(grid.weights * np.abs(amps) ** 2))
    if weight > 0:
        if norm <= 0:
            raise ValueError("cannot normalize an all-zero spectrum")
        amps = amps * math.sqrt(weight / norm)
    else:
        amps = np.zeros_like(amps)
    return SinglePhotonSpectrum(grid, amps, center_offset, float(weight))


def gaussian_single(
    center: float = 0.0,
    width: float = 1.0,
    phase_path: float = 0.0,
    grid: FrequencyGrid | None = None,
    weight: float = 1.0,
) -> SinglePhotonSpectrum:
    """Gaussian photon ``exp[-(nu-center)^2 / (2 width^2)] exp(i nu phase_path)``."""
    grid = grid or make_grid()
    if not width > 0:
        raise ValueError(f"bandwidth must be positive, got {width!r}")
    _check_coverage(grid, center, width, "single-photon spectrum")
    nu = grid.nodes
    amps = np.exp(-((nu - center) ** 2) / (2.0 * width**2)) * np.exp(1j * nu * phase_path)
    return single_from_amplitudes(grid, amps, weight, center_offset=center)


# ---------------------------------------------------------------------------
# Joint spectra
# ---------------------------------------------------------------------------


class Representation(enum.Enum):
    CONTINUUM = "continuum"
    ATOMS = "atoms"
    CORRELATED = "correlated"


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """Two-photon amplitude, photon 1 on axis 0 and photon 2 on axis 1.

    Constructors normalize to unit norm; channels of a
    :class:`PolarizedJointSpectrum` carry their channel weight instead.
    """

    grid: FrequencyGrid
    representation: Representation
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        n = self.grid.points
        expected = (n,) if self.representation is Representation.CORRELATED else (n, n)
        if self.values.shape != expected:
            raise ValueError(
                f"{self.representation.value} spectrum needs shape {expected}, "
                f"got {self.values.shape}"
            )

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weights matching ``values``."""
        if self.representation is Representation.CONTINUUM:
            return self.grid.weights2d
        if self.representation is Representation.CORRELATED:
            return self.grid.weights
        return np.ones((self.grid.points, self.grid.points))

    def swapped(self) -> np.ndarray:
        """Amplitude with the photon frequencies exchanged, ``C(nu2, nu1)``."""
        if self.representation is Representation.CORRELATED:
            # on the line nu2 = -nu1 the swap is a reflection of h
            return self.values[::-1]
        return self.values.T

    def norm(self) -> float:
        return float(np.sum(self.weights * np.abs(self.values) ** 2))

    def replace_values(self, values) -> JointSpectrum:
        return JointSpectrum(self.grid, self.representation, values)

    def normalized(self) -> JointSpectrum:
        norm = self.norm()
        if norm <= 0:
            raise ValueError("cannot normalize an all-zero spectrum")
        return self.replace_values(self.values / math.sqrt(norm))

    def atoms(self) -> list[tuple[float, float, complex]]:
        """Nonzero ``(nu1, nu2, amplitude)`` triples of an atomic spectrum."""
        if self.representation is not Representation.ATOMS:
            raise ValueError("only atomic spectra have an atom list")
        nu = self.grid.nodes
        rows, cols = np.nonzero(self.values)
        return [(float(nu[i]), float(nu[j]), complex(self.values[i, j])) for i, j in zip(rows, cols)]

    @property
    def is_empty(self) -> bool:
        return not np.any(self.values)


def _same_grid(a: FrequencyGrid, b: FrequencyGrid) -> None:
    if a != b:
        raise ValueError(f"spectra live on different grids: {a} vs {b}")


def joint_from_matrix(grid: FrequencyGrid, matrix) -> JointSpectrum:
    """Normalized continuum spectrum from a sampled density matrix."""
    return JointSpectrum(grid, Representation.CONTINUUM, np.asarray(matrix, dtype=complex)).normalized()


def joint_from_atoms(
    grid: FrequencyGrid, atoms: Iterable[tuple[float, float, complex]], normalize: bool = True
) -> JointSpectrum:
    """Atomic spectrum from ``(nu1, nu2, amplitude)`` triples on grid nodes."""
    values = np.zeros((grid.points, grid.points), dtype=complex)
    for nu1, nu2, amp in atoms:
        values[grid.index_of(nu1), grid.index_of(nu2)] += amp
    js = JointSpectrum(grid, Representation.ATOMS, values)
    return js.normalized() if normalize else js


def correlated(grid: FrequencyGrid, h) -> JointSpectrum:
    """Perfectly correlated spectrum ``h(nu1) delta(nu1 + nu2)``, normalized."""
    return JointSpectrum(grid, Representation.CORRELATED, np.asarray(h, dtype=complex)).normalized()


class PhaseMatchingKind(enum.Enum):
    FLAT = "flat"
    GAUSSIAN = "gaussian"
    DELTA = "delta"


@dataclass(frozen=True)
class PhaseMatching:
    """Pump phase-matching factor ``g(nu1 + nu2)``."""

    kind: PhaseMatchingKind
    sigma_p: float | None = None

    def __post_init__(self):
        if self.kind is PhaseMatchingKind.GAUSSIAN:
            if self.sigma_p is None or not self.sigma_p > 0:
                raise ValueError(f"Gaussian phase matching needs sigma_p > 0, got {self.sigma_p!r}")
        elif self.sigma_p is not None:
            raise ValueError(f"{self.kind.value} phase matching takes no bandwidth")

    @classmethod
    def flat(cls) -> PhaseMatching:
        return cls(PhaseMatchingKind.FLAT)

    @classmethod
    def gaussian(cls, sigma_p: float) -> PhaseMatching:
        return cls(PhaseMatchingKind.GAUSSIAN, float(sigma_p))

    @classmethod
    def delta(cls) -> PhaseMatching:
        return cls(PhaseMatchingKind.DELTA)

    def __call__(self, x):
        if self.kind is PhaseMatchingKind.GAUSSIAN:
            return np.exp(-np.asarray(x) ** 2 / (2.0 * self.sigma_p**2))
        if self.kind is PhaseMatchingKind.FLAT:
            return np.ones_like(np.asarray(x, dtype=float))
        raise ValueError("delta phase matching has no pointwise value")


def product_spectrum(s1: SinglePhotonSpectrum, s2: SinglePhotonSpectrum) -> JointSpectrum:
    """Un-entangled pair ``C(nu1, nu2) = C1(nu1) C2(nu2)``."""
    _same_grid(s1.grid, s2.grid)
    return joint_from_matrix(s1.grid, np.outer(s1.amplitudes, s2.amplitudes))


def spdc_type1(
    delta_omega: float,
    sigma: float,
    pm: PhaseMatching,
    grid: FrequencyGrid | None = None,
    sigma2: float | None = None,
) -> JointSpectrum:
    """Type-I down-converted pair with central frequencies ``-/+ delta_omega/2``.

    Detunings are measured from the mean of the two central frequencies, so
    the pump sits at ``nu1 + nu2 = 0``.  ``sigma`` is the bandwidth of photon 1
    and ``sigma2`` (default ``sigma``) that of photon 2.  Delta phase matching
    returns a ``CORRELATED`` spectrum.
    """
    grid = grid or make_grid()
    sigma1 = sigma
    sigma2 = sigma if sigma2 is None else sigma2
    for s in (sigma1, sigma2):
        if not s > 0:
            raise ValueError(f"bandwidth must be positive, got {s!r}")
    c1, c2 = -0.5 * delta_omega, 0.5 * delta_omega
    _check_coverage(grid, c1, sigma1, "photon 1")
    _check_coverage(grid, c2, sigma2, "photon 2")

    nu = grid.nodes
    if pm.kind is PhaseMatchingKind.DELTA:
        h = np.exp(-((nu - c1) ** 2) / (2 * sigma1**2) - ((-nu - c2) ** 2) / (2 * sigma2**2))
        return correlated(grid, h)
    n1, n2 = np.meshgrid(nu, nu, indexing="ij")
    amp = pm(n1 + n2) * np.exp(-((n1 - c1) ** 2) / (2 * sigma1**2) - ((n2 - c2) ** 2) / (2 * sigma2**2))
    return joint_from_matrix(grid, amp)


class BellState(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


def bell_case1(kind: BellState | str, node1: float, node2: float, grid: FrequencyGrid | None = None) -> JointSpectrum:
    """Monochromatic Bell pair in one polarization mode.

    ``PHI``: both photons at ``node1`` or both at ``node2``.
    ``PSI``: one photon at each node, in either order.
    """
    grid = grid or make_grid()
    kind = BellState(kind)
    r = 1.0 / math.sqrt(2.0)
    sign = 1.0 if kind in (BellState.PHI_PLUS, BellState.PSI_PLUS) else -1.0
    if kind in (BellState.PSI_PLUS, BellState.PSI_MINUS):
        if grid.index_of(node1) == grid.index_of(node2):
            raise ValueError("psi Bell states need two distinct frequencies")
        atoms = [(node1, node2, r), (node2, node1, sign * r)]
    else:
        atoms = [(node1, node1, r), (node2, node2, sign * r)]
    return joint_from_atoms(grid, atoms, normalize=False)


# ---------------------------------------------------------------------------
# Two polarization modes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolarizedJointSpectrum:
    """Four channel amplitudes keyed ``aa``, ``bb``, ``ab``, ``ba``.

    The first letter is the polarization of the photon in path 1.  Channel
    weights are the channel norms and sum to one.
    """

    channels: Mapping[str, JointSpectrum]
    weights: Mapping[str, float] = field(init=False)

    def __post_init__(self):
        if set(self.channels) != set(CHANNELS):
            raise ValueError(f"need exactly the channels {CHANNELS}, got {sorted(self.channels)}")
        reps = {js.representation for js in self.channels.values()}
        grids = {js.grid for js in self.channels.values()}
        if len(reps) != 1 or len(grids) != 1:
            raise ValueError("all channels must share one grid and one representation")
        weights = {k: self.channels[k].norm() for k in CHANNELS}
        total = sum(weights.values())
        if abs(total - 1.0) > TOL_NORM:
            raise ValueError(f"channel weights sum to {total!r}, not 1")
        object.__setattr__(self, "channels", dict((k, self.channels[k]) for k in CHANNELS))
        object.__setattr__(self, "weights", weights)

    @property
    def grid(self) -> FrequencyGrid:
        return self.channels["aa"].grid

    @property
    def representation(self) -> Representation:
        return self.channels["aa"].representation

    def __getitem__(self, key: str) -> JointSpectrum:
        return self.channels[key]

    def map_channels(self, fn) -> PolarizedJointSpectrum:
        return PolarizedJointSpectrum({k: fn(k, js) for k, js in self.channels.items()})


def _polarized_from_values(grid, rep, values: Mapping[str, np.ndarray]) -> PolarizedJointSpectrum:
    weights = grid.weights2d if rep is Representation.CONTINUUM else grid.weights
    total = sum(float(np.sum(weights * np.abs(v) ** 2)) for v in values.values())
    if total <= 0:
        raise ValueError("cannot normalize an all-zero spectrum")
    scale = 1.0 / math.sqrt(total)
    return PolarizedJointSpectrum({k: JointSpectrum(grid, rep, values[k] * scale) for k in CHANNELS})


def spdc_type2(
    omega_alpha: float,
    omega_beta: float,
    sigma_alpha: float,
    sigma_beta: float,
    pm: PhaseMatching,
    theta: float = 0.0,
    grid: FrequencyGrid | None = None,
) -> PolarizedJointSpectrum:
    """Polarization-entangled type-II pair.

    Photon 1 is ``alpha`` and photon 2 ``beta`` with amplitude ``C_ab``, or the
    reverse with the extra phase ``exp(i theta)``.  The pump line is
    ``nu1 + nu2 = omega_alpha + omega_beta``; delta phase matching needs that
    sum to be zero so the line falls on grid nodes.
    """
    grid = grid or make_grid()
    for s in (sigma_alpha, sigma_beta):
        if not s > 0:
            raise ValueError(f"bandwidth must be positive, got {s!r}")
    _check_coverage(grid, omega_alpha, sigma_alpha, "alpha photon")
    _check_coverage(grid, omega_beta, sigma_beta, "beta photon")
    nu = grid.nodes
    phase = np.exp(1j * theta)

    def env(x, w0, s):
        return np.exp(-((x - w0) ** 2) / (2 * s**2))

    if pm.kind is PhaseMatchingKind.DELTA:
        if abs(omega_alpha + omega_beta) > 1e-12:
            raise ValueError("delta phase matching needs omega_alpha + omega_beta == 0")
        rep = Representation.CORRELATED
        ab = env(nu, omega_alpha, sigma_alpha) * env(-nu, omega_beta, sigma_beta)
        ba = phase * env(nu, omega_beta, sigma_beta) * env(-nu, omega_alpha, sigma_alpha)
        zero = np.zeros(grid.points, dtype=complex)
    else:
        rep = Representation.CONTINUUM
        n1, n2 = np.meshgrid(nu, nu, indexing="ij")
        g = pm(n1 + n2 - omega_alpha - omega_beta)
        ab = g * env(n1, omega_alpha, sigma_alpha) * env(n2, omega_beta, sigma_beta)
        ba = phase * g * env(n1, omega_beta, sigma_beta) * env(n2, omega_alpha, sigma_alpha)
        zero = np.zeros((grid.points, grid.points), dtype=complex)
    return _polarized_from_values(grid, rep, {"aa": zero, "bb": zero, "ab": ab, "ba": ba})


def polarized_product(
    c1_alpha: SinglePhotonSpectrum,
    c1_beta: SinglePhotonSpectrum,
    c2_alpha: SinglePhotonSpectrum,
    c2_beta: SinglePhotonSpectrum,
) -> PolarizedJointSpectrum:
    """Two independent photons, each a superposition of both polarizations."""
    grid = c1_alpha.grid
    for s in (c1_beta, c2_alpha, c2_beta):
        _same_grid(grid, s.grid)
    for a, b, j in ((c1_alpha, c1_beta, 1), (c2_alpha, c2_beta, 2)):
        if abs(a.weight + b.weight - 1.0) > TOL_NORM:
            raise ValueError(f"mode weights of photon {j} sum to {a.weight + b.weight!r}, not 1")
    first = {"a": c1_alpha.amplitudes, "b": c1_beta.amplitudes}
    second = {"a": c2_alpha.amplitudes, "b": c2_beta.amplitudes}
    values = {k: np.outer(first[k[0]], second[k[1]]) for k in CHANNELS}
    return _polarized_from_values(grid, Representation.CONTINUUM, values)


def two_mode_product(
    c_alpha: SinglePhotonSpectrum, c_beta: SinglePhotonSpectrum, theta: float = 0.0
) -> PolarizedJointSpectrum:
    """Two identical two-mode photons with ``exp(i theta)`` on path-1 ``beta``."""
    c1_beta = SinglePhotonSpectrum(
        c_beta.grid, c_beta.amplitudes * np.exp(1j * theta), c_beta.center_offset, c_beta.weight
    )
    return polarized_product(c_alpha, c1_beta, c_alpha, c_beta)


# ---------------------------------------------------------------------------
# Analysis
# ---------------------------------------------------------------------------


def symmetry_decompose(js: JointSpectrum) -> tuple[float, float]:
    """Squared norms of the exchange-symmetric and antisymmetric parts."""
    sym = 0.5 * (js.values + js.swapped())
    anti = 0.5 * (js.values - js.swapped())
    w = js.weights
    return float(np.sum(w * np.abs(sym) ** 2)), float(np.sum(w * np.abs(anti) ** 2))


def to_time_domain(js: JointSpectrum, t_window: tuple[float, float], t_points: int) -> np.ndarray:
    """Two-photon wavepacket on ``linspace(*t_window, t_points)`` in both times.

    Entry ``[a, b]`` is ``sum C(nu1, nu2) exp(i nu1 tau_a) exp(i nu2 tau_b)``
    with quadrature weights, ``tau = z/c - t``.
    """
    t0, t1 = t_window
    if t_points < 1 or not t1 > t0:
        raise ValueError(f"empty time window {t_window!r} with {t_points} points")
    tau = np.linspace(t0, t1, t_points)
    nu = js.grid.nodes
    phase = np.exp(1j * np.outer(tau, nu))
    if js.representation is Representation.CORRELATED:
        # nu2 = -nu1, so the wavepacket depends on tau1 - tau2 only
        diff = tau[:, None] - tau[None, :]
        return np.exp(1j * diff[..., None] * nu) @ (js.grid.weights * js.values)
    return phase @ (js.weights * js.values) @ phase.T
