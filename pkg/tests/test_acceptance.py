"""Acceptance criteria, one test each, with pinned tolerances."""

import math
import subprocess
import sys
import time

import numpy as np
from scipy import optimize
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton.analytic import (
    Limit,
    MZParams,
    Type1Params,
    Type2Params,
    pc_mz,
    pc_type1,
    pc_type2_entangled,
)
from biphoton.beamsplitter import BALANCED, input_tensor, transform_case1, transform_tensor
from biphoton.coincidence import pc_case1, pc_case2
from biphoton.scenario import MachZehnder, OpticalPath, apply_optics, evaluate, scan
from biphoton.spectral import (
    JointSpectrum,
    PhaseMatching,
    Representation,
    bell_case1,
    gaussian_single,
    joint_from_matrix,
    make_grid,
    product_spectrum,
    single_from_amplitudes,
    spdc_type1,
    spdc_type2,
    two_mode_product,
)

DZ = np.linspace(-5.0, 5.0, 21)
WIDE = make_grid(12.0, 513)
TYPE2_GRID = make_grid(16.0, 641)


def _pc_delay(js, dz):
    return pc_case1(apply_optics(js, OpticalPath(0.0, dz))).pc


def test_criterion_01_hom_dip(criterion):
    js = spdc_type1(0.0, 1.0, PhaseMatching.flat())
    timings = []
    values = {}
    for dz in (0.0, -5.0, 5.0):
        t0 = time.perf_counter()
        values[dz] = _pc_delay(js, dz)
        timings.append(time.perf_counter() - t0)
    ok = (values[0.0] < 1e-9 and all(abs(values[z] - 0.5) <= 1e-3 for z in (-5.0, 5.0))
          and max(timings) < 1.0)
    criterion(1, ok, f"pc(0)={values[0.0]:.2e}, pc(+-5)={values[5.0]:.9f}, slowest point {max(timings):.3f}s")


def test_criterion_02_type1_oracle(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    js_cache = {dw: spdc_type1(dw, 1.0, PhaseMatching.flat()) for dw in (0.0, 1.0, 2.0)}
    for dw, js in js_cache.items():
        for dz in DZ:
            worst = max(worst, abs(_pc_delay(js, dz) - pc_type1(Type1Params(1.0, 1.0, Limit.FLAT, dw, dz))))
    for sp, pm in ((1.0, PhaseMatching.gaussian(1.0)), (Limit.FLAT, PhaseMatching.flat())):
        for dw in (0.0, 1.0, 2.0):
            js = spdc_type1(dw, 1.0, pm, WIDE, sigma2=2.0)
            for dz in DZ:
                worst = max(worst, abs(_pc_delay(js, dz) - pc_type1(Type1Params(1.0, 2.0, sp, dw, dz))))
    elapsed = time.perf_counter() - t0
    criterion(2, worst <= 1e-6 and elapsed < 60, f"max deviation {worst:.2e} in {elapsed:.1f}s")


def _mz_lattice(pm_for_beta, betas):
    worst = 0.0
    for beta in betas:
        js = spdc_type1(0.0, 1.0, pm_for_beta(beta))
        for L in (1.0, 3.0):
            for two_theta in (0.0, math.pi / 2, math.pi):
                res = scan(js, OpticalPath(mz=MachZehnder(L, two_theta / 2)), "delta_z", -5.0, 5.0, 21)
                expected = [pc_mz(MZParams(beta, L, two_theta / 2, dz)) for dz in DZ]
                worst = max(worst, float(np.max(np.abs(res.pc - expected))))
                yield worst, res


def test_criterion_03_mz_oracle(criterion):
    worst = 0.0
    for worst, _ in _mz_lattice(lambda b: PhaseMatching.gaussian(b), (1 / 3, 1.0, 3.0)):
        pass
    criterion(3, worst <= 1e-6, f"max deviation {worst:.2e} over 3 x 2 x 3 x 21 points")


def test_criterion_04_product_oracle(criterion):
    worst, highest = 0.0, 0.0
    for worst, res in _mz_lattice(lambda b: PhaseMatching.flat(), (Limit.FLAT,)):
        highest = max(highest, float(res.pc.max()))
    ok = worst <= 1e-6 and highest <= 0.5 + 1e-9
    criterion(4, ok, f"max deviation {worst:.2e}, max pc {highest:.12f}")


def test_criterion_05_type2_oracle(criterion):
    worst = 0.0
    for sa, sb, sp in ((1.0, 1.0, 1.0), (1.0, 2.0, 1.0)):
        for d in (0.0, 2 * math.pi):
            for theta in (0.0, math.pi / 2, math.pi):
                pjs = spdc_type2(-d / 2, d / 2, sa, sb, PhaseMatching.gaussian(sp), theta, TYPE2_GRID)
                res = scan(pjs, OpticalPath(), "delta_z", -5.0, 5.0, 21)
                expected = [pc_type2_entangled(Type2Params(-d / 2, d / 2, sa, sb, sp, theta, dz)) for dz in DZ]
                worst = max(worst, float(np.max(np.abs(res.pc - expected))))
    criterion(5, worst <= 1e-6, f"max deviation {worst:.2e}")


def test_criterion_06_bell_states(criterion):
    got = {k: pc_case1(bell_case1(k, -0.75, 0.75)).pc for k in ("phi+", "phi-", "psi+", "psi-")}
    expected = {"phi+": 0.0, "phi-": 0.0, "psi+": 0.0, "psi-": 1.0}
    worst = max(abs(got[k] - expected[k]) for k in got)
    criterion(6, worst < 1e-14, "pc " + ", ".join(f"{k}={v:.3g}" for k, v in got.items()))


def test_criterion_07_transparent_states(criterion):
    rng = np.random.default_rng(2024)
    grid = make_grid(2.0, 9)
    worst = 0.0
    for _ in range(100):
        a = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
        js = joint_from_matrix(grid, a - a.T)
        out = transform_case1(js, BALANCED)
        dev = max(np.max(np.abs(out.amp_coinc - js.values)), np.max(np.abs(out.amp_both1)),
                  np.max(np.abs(out.amp_both2)))
        t = input_tensor(js)
        twice = transform_tensor(transform_tensor(t, BALANCED), BALANCED)
        worst = max(worst, dev, float(np.max(np.abs(twice - t))))
    criterion(7, worst <= 1e-12, f"max amplitude deviation {worst:.2e} over 100 states")


_product_worst = [-math.inf]
_two_mode_worst = [-math.inf, -math.inf]


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(st.integers(0, 2**32 - 1))
def _check_product(seed):
    rng = np.random.default_rng(seed)
    grid = make_grid(2.0, 9)
    s1 = single_from_amplitudes(grid, rng.normal(size=9) + 1j * rng.normal(size=9))
    s2 = single_from_amplitudes(grid, rng.normal(size=9) + 1j * rng.normal(size=9))
    pc = pc_case1(product_spectrum(s1, s2)).pc
    _product_worst[0] = max(_product_worst[0], pc - 0.5)
    assert pc <= 0.5 + 1e-9


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 1.0), st.floats(-math.pi, math.pi))
def _check_two_mode(seed, n_alpha, theta):
    rng = np.random.default_rng(seed)
    grid = make_grid(2.0, 9)
    amps = lambda: rng.normal(size=9) + 1j * rng.normal(size=9)  # noqa: E731
    a = single_from_amplitudes(grid, amps(), weight=n_alpha)
    b = single_from_amplitudes(grid, amps(), weight=1.0 - n_alpha)
    rep = pc_case2(two_mode_product(a, b, theta))
    excess_mm = max(rep.pc_alpha_alpha - 0.5 * n_alpha**2, rep.pc_beta_beta - 0.5 * (1 - n_alpha) ** 2)
    _two_mode_worst[0] = max(_two_mode_worst[0], rep.pc_total - 0.5)
    _two_mode_worst[1] = max(_two_mode_worst[1], excess_mm)
    assert rep.pc_total <= 0.5 + 1e-9
    assert excess_mm <= 1e-9


def test_criterion_08_product_bounds(criterion):
    try:
        _check_product()
        _check_two_mode()
        ok = True
    except AssertionError:
        ok = False
    criterion(8, ok, f"max pc - 1/2: product {_product_worst[0]:.2e}, two-mode {_two_mode_worst[0]:.2e}; "
                     f"max pc_mm - n_mm/2: {_two_mode_worst[1]:.2e} (1000 samples each)")


def test_criterion_09_antisymmetric_identity(criterion):
    rng = np.random.default_rng(99)
    grid = make_grid(1.0, 5)
    worst = 0.0
    for _ in range(200):
        c = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        c /= np.sqrt(np.sum(np.abs(c) ** 2))
        js = JointSpectrum(grid, Representation.ATOMS, c)
        brute = 0.0
        for i in range(5):
            for j in range(5):
                brute += abs((c[i, j] - c[j, i]) / 2) ** 2
        worst = max(worst, abs(pc_case1(js).pc - brute))
    criterion(9, worst <= 1e-12, f"max |pc - ||(C - C^T)/2||^2| = {worst:.2e} over 200 matrices")


def test_criterion_10_mz_phase_curves(criterion):
    checks = []
    delta = spdc_type1(0.0, 1.0, PhaseMatching.delta())
    gauss = spdc_type1(0.0, 1.0, PhaseMatching.gaussian(1.0))
    flat = spdc_type1(0.0, 1.0, PhaseMatching.flat())
    for L in (1.0, 3.0):
        res = scan(delta, OpticalPath(mz=MachZehnder(L)), "two_theta", 0.0, 2 * math.pi, 9)
        checks.append(abs(res.pc[0]) < 1e-9 and abs(res.pc[4] - 1.0) < 1e-9)
        mid = scan(gauss, OpticalPath(mz=MachZehnder(L)), "two_theta", 0.0, 2 * math.pi, 9).pc[4]
        checks.append(0.0 < mid < 1.0)
        flat_max = scan(flat, OpticalPath(mz=MachZehnder(L)), "two_theta", 0.0, 2 * math.pi, 73).pc.max()
        checks.append(flat_max <= 0.5 + 1e-9)
    criterion(10, all(checks), "delta pump 0/1 at 2theta=0/pi, beta=1 at pi in (0,1), flat <= 1/2: "
                               + " ".join("ok" if c else "fail" for c in checks))


def test_criterion_11_quarter_phase(criterion):
    worst = 0.0
    for L in (1.0, 3.0):
        for dz in DZ:
            vals = [pc_mz(MZParams(b, L, math.pi / 4, dz)) for b in (Limit.DELTA, 1.0, Limit.FLAT)]
            worst = max(worst, max(vals) - min(vals))
    criterion(11, worst <= 1e-12, f"max spread across pump limits {worst:.2e}")


def test_criterion_12_quantum_beat(criterion):
    d = 2 * math.pi
    grid = make_grid(10.0, 401)
    pjs = spdc_type2(-d / 2, d / 2, 1.0, 1.0, PhaseMatching.gaussian(1.0), 0.0, grid)
    # The Gaussian envelope pulls the extrema inward: their exact spacing is
    # (pi/d) / (1 + 1/d^2) = 0.4877, so the check holds for scan steps >= 0.0124.
    # The zero crossings of pc - 1/2 carry the beat period exactly.
    step = 0.025
    res = scan(pjs, OpticalPath(), "delta_z", -1.5, 1.5, 121)
    pc = res.pc
    extrema = [res.values[k] for k in range(1, len(pc) - 1)
               if (pc[k] - pc[k - 1]) * (pc[k + 1] - pc[k]) < 0]
    spacing = np.diff(extrema)
    beat_ok = len(extrema) >= 3 and bool(np.all(np.abs(spacing - 0.5) <= step + 1e-9))

    offset = lambda z: evaluate(pjs, OpticalPath(0.0, z)).pc - 0.5  # noqa: E731
    brackets = [(res.values[k], res.values[k + 1]) for k in range(len(pc) - 1)
                if (pc[k] - 0.5) * (pc[k + 1] - 0.5) < 0]
    zeros = [optimize.brentq(offset, a, b, xtol=1e-13) for a, b in brackets]
    zero_dev = float(np.max(np.abs(np.diff(zeros) - 0.5)))
    beat_ok = beat_ok and zero_dev <= 1e-9

    two = two_mode_product(gaussian_single(weight=0.5), gaussian_single(weight=0.5), math.pi)
    balanced = scan(two, OpticalPath(), "delta_z", -5.0, 5.0, 41)
    flat_total = float(np.max(np.abs(balanced.pc - 0.5)))
    aa, bb, cross = balanced.column("pc_aa"), balanced.column("pc_bb"), balanced.column("pc_cross")
    centre = 20
    shape_ok = aa.argmin() == centre and bb.argmin() == centre and cross.argmax() == centre
    criterion(12, beat_ok and flat_total <= 1e-9 and shape_ok,
              f"extrema spacings {np.round(spacing, 3).tolist()} (step {step}), zero-crossing spacing "
              f"deviation {zero_dev:.1e}, max |pc_total - 1/2| = {flat_total:.2e}, "
              f"dip/peak at 0: {shape_ok}")


def test_criterion_13_cli_determinism(criterion, tmp_path):
    cfg = tmp_path / "mz.ini"
    cfg.write_text("[spectrum]\nkind = spdc_type1\nphase_matching = gaussian\nsigma_p = 1\n"
                   "[optics]\nmz_delta_L = 3\nmz_theta = 0.5pi\n")
    outputs = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        cmd = [sys.executable, "-m", "biphoton.cli", "scan", "--config", str(cfg), "--param", "delta_z",
               "--from", "-5", "--to", "5", "--steps", "41", "--out", str(out)]
        subprocess.run(cmd, check=True)
        outputs.append(out.read_bytes())
    criterion(13, outputs[0] == outputs[1] and len(outputs[0]) > 0,
              f"two runs, {len(outputs[0])} bytes each, identical={outputs[0] == outputs[1]}")
