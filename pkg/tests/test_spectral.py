import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from biphoton.spectral import (
    CHANNELS,
    BellState,
    FrequencyGrid,
    JointSpectrum,
    PhaseMatching,
    PolarizedJointSpectrum,
    Representation,
    SpectrumTruncationWarning,
    bell_case1,
    correlated,
    gaussian_single,
    joint_from_atoms,
    joint_from_matrix,
    make_grid,
    polarized_product,
    product_spectrum,
    spdc_type1,
    spdc_type2,
    symmetry_decompose,
    to_time_domain,
    two_mode_product,
)


def test_default_grid():
    g = make_grid()
    assert g.points == 257 and g.nu_max == 6.0
    assert g.spacing == pytest.approx(0.046875)
    assert g.nodes[128] == 0.0
    assert np.array_equal(g.nodes, -g.nodes[::-1])
    assert g.weights.sum() == pytest.approx(12.0)


@pytest.mark.parametrize("points", [2, 256, 1])
def test_grid_rejects_bad_point_counts(points):
    with pytest.raises(ValueError):
        FrequencyGrid(6.0, points)


def test_grid_rejects_nonpositive_range():
    with pytest.raises(ValueError):
        make_grid(0.0, 11)


def test_index_of():
    g = make_grid(1.0, 5)
    assert g.index_of(-0.5) == 1
    with pytest.raises(ValueError):
        g.index_of(0.3)
    with pytest.raises(ValueError):
        g.index_of(2.0)


def test_gaussian_single_normalized():
    s = gaussian_single(0.5, 0.8, phase_path=2.0)
    assert s.norm() == pytest.approx(1.0, abs=1e-12)


def test_gaussian_single_weight():
    s = gaussian_single(0.0, 1.0, weight=0.3)
    assert s.norm() == pytest.approx(0.3, abs=1e-12)


def test_truncation_warning():
    with pytest.warns(SpectrumTruncationWarning):
        gaussian_single(5.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gaussian_single(0.0, 1.0)


def test_gaussian_overlap_matches_closed_form():
    # <g(0, 1) | g(d, 1)> = exp(-d^2 / 4) for normalized Gaussians
    a = gaussian_single(0.0, 1.0)
    b = gaussian_single(1.0, 1.0)
    assert abs(a.overlap(b)) == pytest.approx(math.exp(-0.25), abs=1e-10)


def test_product_spectrum_norm_and_shape():
    js = product_spectrum(gaussian_single(-0.5), gaussian_single(0.5, 1.3))
    assert js.representation is Representation.CONTINUUM
    assert js.norm() == pytest.approx(1.0, abs=1e-12)


def test_product_of_offset_gaussians_off_diagonal():
    js = product_spectrum(gaussian_single(-0.75), gaussian_single(0.75))
    i, j = np.unravel_index(np.argmax(np.abs(js.values)), js.values.shape)
    nu = js.grid.nodes
    assert nu[i] == pytest.approx(-0.75) and nu[j] == pytest.approx(0.75)


@pytest.mark.parametrize("pm", [PhaseMatching.flat(), PhaseMatching.gaussian(0.5), PhaseMatching.delta()])
def test_spdc_type1_normalized(pm):
    js = spdc_type1(0.0, 1.0, pm)
    assert js.norm() == pytest.approx(1.0, abs=1e-12)
    expected = Representation.CORRELATED if pm.kind.value == "delta" else Representation.CONTINUUM
    assert js.representation is expected


def test_spdc_type1_symmetric_at_degeneracy():
    js = spdc_type1(0.0, 1.0, PhaseMatching.gaussian(1.0))
    assert np.allclose(js.values, js.values.T, atol=1e-15)
    s, a = symmetry_decompose(js)
    assert s == pytest.approx(1.0) and a == pytest.approx(0.0, abs=1e-15)


def test_spdc_type1_flat_factorizes():
    js = spdc_type1(1.0, 1.0, PhaseMatching.flat())
    assert np.linalg.matrix_rank(js.values, tol=1e-10) == 1


def test_phase_matching_rejects_bad_bandwidth():
    with pytest.raises(ValueError):
        PhaseMatching.gaussian(0.0)


def test_spdc_rejects_bad_bandwidth():
    with pytest.raises(ValueError):
        spdc_type1(0.0, -1.0, PhaseMatching.flat())


@pytest.mark.parametrize("kind", list(BellState))
def test_bell_states_normalized(kind):
    js = bell_case1(kind, -0.75, 0.75)
    assert js.representation is Representation.ATOMS
    assert js.norm() == pytest.approx(1.0, abs=1e-15)
    assert len(js.atoms()) == 2


def test_bell_psi_needs_distinct_nodes():
    with pytest.raises(ValueError):
        bell_case1("psi+", 0.0, 0.0)


def test_bell_rejects_off_grid():
    with pytest.raises(ValueError):
        bell_case1("phi+", 0.01, 1.0)


def test_joint_from_atoms_accumulates():
    g = make_grid(1.0, 5)
    js = joint_from_atoms(g, [(0.0, 0.5, 1.0), (0.0, 0.5, 1.0)], normalize=False)
    assert js.values[2, 3] == 2.0


def test_normalizing_zero_spectrum_fails():
    g = make_grid(1.0, 5)
    with pytest.raises(ValueError):
        joint_from_matrix(g, np.zeros((5, 5)))


def test_joint_shape_checked():
    g = make_grid(1.0, 5)
    with pytest.raises(ValueError):
        JointSpectrum(g, Representation.CORRELATED, np.zeros((5, 5)))


def test_correlated_swap_is_reflection():
    g = make_grid(1.0, 5)
    js = correlated(g, np.arange(1, 6))
    assert np.array_equal(js.swapped(), js.values[::-1])


def test_spdc_type2_channels():
    pjs = spdc_type2(-1.0, 1.0, 1.0, 1.0, PhaseMatching.gaussian(1.0), theta=0.3)
    assert pjs.weights["aa"] == 0.0 and pjs.weights["bb"] == 0.0
    assert pjs.weights["ab"] == pytest.approx(0.5) and pjs.weights["ba"] == pytest.approx(0.5)
    # the ba channel is the ab channel with photons exchanged, times exp(i theta)
    assert np.allclose(pjs["ba"].values, np.exp(0.3j) * pjs["ab"].values.T, atol=1e-15)


def test_spdc_type2_delta_requires_balanced_centres():
    with pytest.raises(ValueError):
        spdc_type2(0.0, 1.0, 1.0, 1.0, PhaseMatching.delta())
    pjs = spdc_type2(-1.0, 1.0, 1.0, 1.0, PhaseMatching.delta())
    assert pjs.representation is Representation.CORRELATED


def test_two_mode_product_weights():
    a = gaussian_single(0.0, 1.0, weight=0.3)
    b = gaussian_single(0.0, 1.0, weight=0.7)
    pjs = two_mode_product(a, b, theta=1.0)
    assert pjs.weights["aa"] == pytest.approx(0.09)
    assert pjs.weights["bb"] == pytest.approx(0.49)
    assert pjs.weights["ab"] == pytest.approx(0.21)


def test_polarized_product_checks_weights():
    a = gaussian_single(weight=0.5)
    b = gaussian_single(weight=0.4)
    with pytest.raises(ValueError):
        polarized_product(a, b, a, a)


def test_polarized_needs_all_channels():
    g = make_grid(1.0, 5)
    js = joint_from_matrix(g, np.ones((5, 5)))
    with pytest.raises(ValueError):
        PolarizedJointSpectrum({"aa": js})
    zero = JointSpectrum(g, Representation.CONTINUUM, np.zeros((5, 5)))
    pjs = PolarizedJointSpectrum({"aa": js, "bb": zero, "ab": zero, "ba": zero})
    assert tuple(pjs.channels) == CHANNELS


def test_symmetry_decompose_sums_to_norm():
    rng = np.random.default_rng(3)
    g = make_grid(1.0, 7)
    js = joint_from_matrix(g, rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7)))
    s, a = symmetry_decompose(js)
    assert s + a == pytest.approx(1.0, abs=1e-12)


def test_time_domain_gaussian():
    # for a product of unit Gaussians the time amplitude is a product of Gaussians in tau
    js = product_spectrum(gaussian_single(), gaussian_single())
    psi = to_time_domain(js, (-2.0, 2.0), 5)
    amp = 1.0 / math.sqrt(math.sqrt(math.pi))
    one = lambda t: integrate.quad(lambda v: amp * math.exp(-v * v / 2) * math.cos(v * t), -np.inf, np.inf)[0]
    tau = np.linspace(-2, 2, 5)
    expected = np.outer([one(t) for t in tau], [one(t) for t in tau])
    assert np.allclose(psi, expected, atol=1e-8)


def test_time_domain_correlated_depends_on_difference():
    js = spdc_type1(0.0, 1.0, PhaseMatching.delta())
    psi = to_time_domain(js, (-1.0, 1.0), 3)
    assert psi[0, 0] == pytest.approx(psi[2, 2])
    assert psi[0, 1] == pytest.approx(psi[1, 2])


def test_time_domain_rejects_empty_window():
    js = spdc_type1(0.0, 1.0, PhaseMatching.flat())
    with pytest.raises(ValueError):
        to_time_domain(js, (1.0, 1.0), 5)
