"""Lossless beam splitter acting on two-photon states.

The output state is obtained by substituting, for each input creation
operator, its image under the inverse mode transform (the vacuum is
invariant).  The beam splitter acts identically on every frequency and on
both polarizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import JointSpectrum, PolarizedJointSpectrum, Representation


@dataclass(frozen=True)
class BeamSplitter:
    theta: float = math.pi / 4
    phi_tau: float = 0.0
    phi_rho: float = 0.0

    @property
    def phi(self) -> float:
        return self.phi_tau + self.phi_rho

    @property
    def cos2(self) -> float:
        return math.cos(self.theta) ** 2

    @property
    def sin2(self) -> float:
        return math.sin(self.theta) ** 2

    def inverse(self) -> BeamSplitter:
        return BeamSplitter(-self.theta, -self.phi_tau, self.phi_rho)


BALANCED = BeamSplitter()


def bs_matrix(bs: BeamSplitter) -> np.ndarray:
    """Annihilation-operator transform ``b = S a``."""
    c, s = math.cos(bs.theta), math.sin(bs.theta)
    return np.array(
        [
            [np.exp(1j * bs.phi_tau) * c, np.exp(1j * bs.phi_rho) * s],
            [-np.exp(-1j * bs.phi_rho) * s, np.exp(-1j * bs.phi_tau) * c],
        ]
    )


def bs_inverse(bs: BeamSplitter) -> np.ndarray:
    return bs_matrix(bs.inverse())


def creation_map(bs: BeamSplitter) -> np.ndarray:
    """Matrix ``M`` with ``U a_p^dag U^-1 = sum_r M[p, r] a_r^dag``.

    ``M`` is the complex conjugate of the inverse transform, i.e. ``S^T``.
    """
    return np.conj(bs_inverse(bs))


# ---------------------------------------------------------------------------
# Output states
# ---------------------------------------------------------------------------


def _pair_probability(amp: np.ndarray, weights: np.ndarray) -> float:
    """Probability of an ``i <= j`` amplitude table for two photons in one port.

    Off-diagonal entries are singly occupied modes; a diagonal entry is the
    coefficient of ``(a^dag)^2 |0>``, whose squared norm is 2.
    """
    upper = np.triu(weights * np.abs(amp) ** 2, k=1).sum()
    diag = 2.0 * np.sum(np.diag(weights) * np.abs(np.diag(amp)) ** 2)
    return float(upper + diag)


@dataclass(frozen=True, eq=False)
class OutputStateCase1:
    """Output of a single-polarization two-photon state.

    ``amp_coinc[i, j]``: coefficient of ``a1^dag(nu_i) a2^dag(nu_j)``.
    ``amp_both1[i, j]`` for ``i <= j``: coefficient of
    ``a1^dag(nu_i) a1^dag(nu_j)`` (zero below the diagonal); likewise
    ``amp_both2`` for port 2.  ``weights`` are the quadrature weights of the
    node pairs (all ones for atomic states).
    """

    amp_coinc: np.ndarray
    amp_both1: np.ndarray
    amp_both2: np.ndarray
    weights: np.ndarray

    @property
    def p_coinc(self) -> float:
        return float(np.sum(self.weights * np.abs(self.amp_coinc) ** 2))

    @property
    def p_both1(self) -> float:
        return _pair_probability(self.amp_both1, self.weights)

    @property
    def p_both2(self) -> float:
        return _pair_probability(self.amp_both2, self.weights)

    @property
    def total(self) -> float:
        return self.p_both1 + self.p_both2 + self.p_coinc

    def to_tensor(self) -> np.ndarray:
        """Symmetric tensor ``T[p, i, q, j]`` with state ``sum T a_p^dag(i) a_q^dag(j) |0>``."""
        n = self.amp_coinc.shape[0]
        t = np.zeros((2, n, 2, n), dtype=complex)
        t[0, :, 1, :] = 0.5 * self.amp_coinc
        t[1, :, 0, :] = 0.5 * self.amp_coinc.T
        for port, amp in ((0, self.amp_both1), (1, self.amp_both2)):
            upper = np.triu(amp, k=1)
            t[port, :, port, :] = 0.5 * (upper + upper.T) + np.diag(np.diag(amp))
        return t

    @classmethod
    def from_tensor(cls, t: np.ndarray, weights: np.ndarray) -> OutputStateCase1:
        both = []
        for port in (0, 1):
            block = t[port, :, port, :]
            both.append(np.triu(block + block.T, k=1) + np.diag(np.diag(block)))
        return cls(t[0, :, 1, :] + t[1, :, 0, :].T, both[0], both[1], weights)


def input_tensor(js: JointSpectrum) -> np.ndarray:
    """Tensor form of ``sum C(i, j) a1^dag(i) a2^dag(j) |0>``."""
    _require_dense(js)
    n = js.grid.points
    t = np.zeros((2, n, 2, n), dtype=complex)
    t[0, :, 1, :] = 0.5 * js.values
    t[1, :, 0, :] = 0.5 * js.values.T
    return t


def transform_tensor(t: np.ndarray, bs: BeamSplitter) -> np.ndarray:
    """Apply the beam splitter to an arbitrary two-photon tensor."""
    m = creation_map(bs)
    return np.einsum("pr,qs,piqj->risj", m, m, t)


def _require_dense(js: JointSpectrum) -> None:
    if js.representation is Representation.CORRELATED:
        raise ValueError(
            "perfectly correlated spectra have no finite output state; "
            "use the coincidence module's reduced rule"
        )


def _case1_amplitudes(c: np.ndarray, bs: BeamSplitter):
    ct = c.T
    cs = math.cos(bs.theta) * math.sin(bs.theta)
    coinc = c * bs.cos2 - ct * bs.sin2
    pair = c + ct
    # diagonal: C(nu, nu) alone multiplies (a^dag(nu))^2
    pair = np.triu(pair, k=1) + np.diag(np.diag(c))
    both1 = pair * np.exp(1j * bs.phi) * cs
    both2 = -pair * np.exp(-1j * bs.phi) * cs
    return coinc, both1, both2


def transform_case1(js: JointSpectrum, bs: BeamSplitter = BALANCED) -> OutputStateCase1:
    _require_dense(js)
    coinc, both1, both2 = _case1_amplitudes(js.values, bs)
    return OutputStateCase1(coinc, both1, both2, js.weights)


@dataclass(frozen=True, eq=False)
class OutputStateCase2:
    """Output of a two-polarization state.

    Same-polarization channels are independent case-1 outputs.  In the cross
    sector, with ``nu_i`` on the alpha photon and ``nu_j`` on the beta photon:

    * ``cross_1a2b``: ``a1alpha^dag(i) a2beta^dag(j)``
    * ``cross_2a1b``: ``a2alpha^dag(i) a1beta^dag(j)``
    * ``cross_both1``: ``a1alpha^dag(i) a1beta^dag(j)``
    * ``cross_both2``: ``a2alpha^dag(i) a2beta^dag(j)``
    """

    aa: OutputStateCase1
    bb: OutputStateCase1
    cross_1a2b: np.ndarray
    cross_2a1b: np.ndarray
    cross_both1: np.ndarray
    cross_both2: np.ndarray
    weights: np.ndarray

    def _p(self, amp) -> float:
        return float(np.sum(self.weights * np.abs(amp) ** 2))

    @property
    def p_cross_coinc(self) -> float:
        return self._p(self.cross_1a2b) + self._p(self.cross_2a1b)

    @property
    def p_cross_together(self) -> float:
        return self._p(self.cross_both1) + self._p(self.cross_both2)

    @property
    def total(self) -> float:
        return self.aa.total + self.bb.total + self.p_cross_coinc + self.p_cross_together


def transform_case2(pjs: PolarizedJointSpectrum, bs: BeamSplitter = BALANCED) -> OutputStateCase2:
    ab, ba = pjs["ab"], pjs["ba"]
    _require_dense(ab)
    cs = math.cos(bs.theta) * math.sin(bs.theta)
    x = ab.values
    y = ba.swapped()  # C_ba(nu2, nu1): beta photon in path 1 at nu_j
    return OutputStateCase2(
        aa=transform_case1(pjs["aa"], bs),
        bb=transform_case1(pjs["bb"], bs),
        cross_1a2b=x * bs.cos2 - y * bs.sin2,
        cross_2a1b=y * bs.cos2 - x * bs.sin2,
        cross_both1=(x + y) * np.exp(1j * bs.phi) * cs,
        cross_both2=-(x + y) * np.exp(-1j * bs.phi) * cs,
        weights=ab.weights,
    )
