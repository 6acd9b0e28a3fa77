"""Scenario files: ``[section]`` headers with ``key = value`` lines.

Values are decimal numbers, bare identifiers, or ``<number>pi``.  ``#``
starts a comment.  Unknown sections or keys are errors, reported with
their line number.

Example::

    [grid]
    nu_max = 6
    points = 257

    [spectrum]
    kind = spdc_type1
    sigma = 1.0
    phase_matching = gaussian
    sigma_p = 1.0

    [optics]
    mz_delta_L = 1
    mz_theta = 0.5pi
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass, field

from .beamsplitter import BeamSplitter
from .scenario import MachZehnder, OpticalPath, Spectrum, WavePlate
from .spectral import (
    DEFAULT_NU_MAX,
    DEFAULT_POINTS,
    FrequencyGrid,
    PhaseMatching,
    bell_case1,
    gaussian_single,
    make_grid,
    product_spectrum,
    spdc_type1,
    spdc_type2,
    two_mode_product,
)

CASE1_KINDS = ("product_gaussian", "spdc_type1")
CASE2_KINDS = ("spdc_type2", "two_mode_product")
BELL_KINDS = ("bell_phi_plus", "bell_phi_minus", "bell_psi_plus", "bell_psi_minus")
KINDS = CASE1_KINDS + CASE2_KINDS + BELL_KINDS
PHASE_MATCHINGS = ("flat", "gaussian", "delta")

_SPECTRUM_KEYS = {
    "product_gaussian": {"sigma", "sigma1", "sigma2", "delta_omega"},
    "spdc_type1": {"sigma", "sigma1", "sigma2", "phase_matching", "sigma_p", "delta_omega"},
    "spdc_type2": {"sigma", "sigma_alpha", "sigma_beta", "phase_matching", "sigma_p",
                   "omega_alpha", "omega_beta", "theta"},
    "two_mode_product": {"sigma", "sigma_alpha", "sigma_beta", "omega_alpha", "omega_beta",
                         "n_alpha", "theta"},
}
for _k in BELL_KINDS:
    _SPECTRUM_KEYS[_k] = {"delta_omega"}

_SECTIONS = {
    "grid": ("nu_max", "points"),
    "spectrum": ("kind", "sigma", "sigma1", "sigma2", "sigma_alpha", "sigma_beta", "phase_matching",
                 "sigma_p", "delta_omega", "omega_alpha", "omega_beta", "n_alpha", "theta"),
    "optics": ("delta_z", "mz_delta_L", "mz_theta", "wave_plate_theta"),
    "beamsplitter": ("theta", "phi_tau", "phi_rho"),
}
_IDENT_KEYS = {"kind", "phase_matching"}

_PI_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?\s*pi$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class GridSection:
    nu_max: float = DEFAULT_NU_MAX
    points: int = DEFAULT_POINTS


@dataclass
class SpectrumSection:
    kind: str = "spdc_type1"
    sigma1: float | None = None
    sigma2: float | None = None
    sigma_alpha: float | None = None
    sigma_beta: float | None = None
    phase_matching: str | None = None
    sigma_p: float | None = None
    delta_omega: float | None = None
    omega_alpha: float | None = None
    omega_beta: float | None = None
    n_alpha: float | None = None
    theta: float | None = None


@dataclass
class OpticsSection:
    delta_z: float = 0.0
    mz_delta_L: float | None = None
    mz_theta: float | None = None
    wave_plate_theta: float | None = None


@dataclass
class BeamSplitterSection:
    theta: float = math.pi / 4
    phi_tau: float = 0.0
    phi_rho: float = 0.0


@dataclass
class ScenarioConfig:
    grid: GridSection = field(default_factory=GridSection)
    spectrum: SpectrumSection = field(default_factory=SpectrumSection)
    optics: OpticsSection = field(default_factory=OpticsSection)
    beamsplitter: BeamSplitterSection = field(default_factory=BeamSplitterSection)

    @property
    def polarized(self) -> bool:
        return self.spectrum.kind in CASE2_KINDS


def parse_value(raw: str, line: int | None = None) -> float:
    """A decimal number or ``<number>pi``."""
    text = raw.strip()
    m = _PI_RE.match(text)
    if m:
        coeff = m.group(1)
        value = (float(coeff) if coeff not in (None, "+", "-") else 1.0) * math.pi
    else:
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(f"malformed number {raw!r}", line) from None
    if not math.isfinite(value):
        raise ConfigError(f"number must be finite, got {raw!r}", line)
    return value


def _parse_lines(text: str) -> dict[str, dict[str, tuple[str, int]]]:
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {line!r}", lineno)
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(f"unknown section [{name}]", lineno)
            if name in sections:
                raise ConfigError(f"duplicate section [{name}]", lineno)
            current = sections[name] = {}
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        if current is None:
            raise ConfigError("key outside of any section", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        section = next(name for name, body in sections.items() if body is current)
        if key not in _SECTIONS[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno)
        if key in current:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno)
        current[key] = (value, lineno)
    return sections


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario, filling defaults."""
    raw = _parse_lines(text)
    numbers: dict[str, dict[str, tuple[float, int]]] = {}
    idents: dict[str, tuple[str, int]] = {}
    for section, body in raw.items():
        numbers[section] = {}
        for key, (value, lineno) in body.items():
            if section == "spectrum" and key in _IDENT_KEYS:
                if not _IDENT_RE.match(value):
                    raise ConfigError(f"{key} must be an identifier, got {value!r}", lineno)
                idents[key] = (value, lineno)
            else:
                numbers[section][key] = (parse_value(value, lineno), lineno)

    cfg = ScenarioConfig()
    _fill_grid(cfg, numbers.get("grid", {}), raw.get("grid", {}))
    _fill_spectrum(cfg, numbers.get("spectrum", {}), idents, "spectrum" in raw)
    _fill_optics(cfg, numbers.get("optics", {}))
    for key, (value, _) in numbers.get("beamsplitter", {}).items():
        setattr(cfg.beamsplitter, key, value)
    return cfg


def _fill_grid(cfg, nums, raw) -> None:
    if "nu_max" in nums:
        value, lineno = nums["nu_max"]
        if not value > 0:
            raise ConfigError(f"nu_max must be positive, got {value!r}", lineno)
        cfg.grid.nu_max = value
    if "points" in nums:
        value, lineno = nums["points"]
        text = raw["points"][0]
        if not re.fullmatch(r"[+-]?\d+", text):
            raise ConfigError(f"points must be an integer, got {text!r}", lineno)
        if value < 3 or int(value) % 2 == 0:
            raise ConfigError(f"points must be odd and at least 3, got {int(value)}", lineno)
        cfg.grid.points = int(value)


def _positive(nums, key) -> float | None:
    if key not in nums:
        return None
    value, lineno = nums[key]
    if not value > 0:
        raise ConfigError(f"{key} must be positive, got {value!r}", lineno)
    return value


def _fill_spectrum(cfg, nums, idents, present: bool) -> None:
    if not present:
        raise ConfigError("missing [spectrum] section")
    if "kind" not in idents:
        raise ConfigError("[spectrum] needs a kind")
    kind, kind_line = idents["kind"]
    if kind not in KINDS:
        raise ConfigError(f"unknown spectrum kind {kind!r}; expected one of {KINDS}", kind_line)
    spec = cfg.spectrum = SpectrumSection(kind=kind)
    allowed = _SPECTRUM_KEYS[kind]
    for key, (_, lineno) in list(nums.items()) + list(idents.items()):
        if key != "kind" and key not in allowed:
            raise ConfigError(f"key {key!r} does not apply to kind {kind}", lineno)

    sigma = _positive(nums, "sigma")
    pair = ("sigma1", "sigma2") if kind in CASE1_KINDS else ("sigma_alpha", "sigma_beta")
    if kind not in BELL_KINDS:
        for key in pair:
            value = _positive(nums, key)
            if value is not None and sigma is not None:
                raise ConfigError(f"give either sigma or {key}, not both", nums[key][1])
            setattr(spec, key, value if value is not None else (sigma or 1.0))

    if "phase_matching" in allowed:
        pm, pm_line = idents.get("phase_matching", ("flat", kind_line))
        if pm not in PHASE_MATCHINGS:
            raise ConfigError(f"unknown phase_matching {pm!r}; expected one of {PHASE_MATCHINGS}", pm_line)
        spec.phase_matching = pm
        spec.sigma_p = _positive(nums, "sigma_p")
        if pm == "gaussian" and spec.sigma_p is None:
            raise ConfigError("gaussian phase matching needs sigma_p", pm_line)
        if pm != "gaussian" and spec.sigma_p is not None:
            raise ConfigError("sigma_p only applies to gaussian phase matching", nums["sigma_p"][1])

    for key in ("delta_omega", "omega_alpha", "omega_beta", "theta"):
        if key in allowed:
            setattr(spec, key, nums.get(key, (0.0, 0))[0])

    if "n_alpha" in allowed:
        value, lineno = nums.get("n_alpha", (0.5, kind_line))
        if not 0 <= value <= 1:
            raise ConfigError(f"n_alpha must lie in [0, 1], got {value!r}", lineno)
        spec.n_alpha = value

    if kind in BELL_KINDS and kind.startswith("bell_psi") and spec.delta_omega == 0:
        raise ConfigError("psi Bell states need a nonzero delta_omega", nums.get("delta_omega", (0, kind_line))[1])
    if kind == "spdc_type2" and spec.phase_matching == "delta" and spec.omega_alpha + spec.omega_beta != 0:
        raise ConfigError("delta phase matching needs omega_alpha + omega_beta = 0", kind_line)
    if kind in BELL_KINDS:
        grid = make_grid(cfg.grid.nu_max, cfg.grid.points)
        for nu in (-0.5 * spec.delta_omega, 0.5 * spec.delta_omega):
            try:
                grid.index_of(nu)
            except ValueError as exc:
                raise ConfigError(str(exc), nums.get("delta_omega", (0, kind_line))[1]) from None


def _fill_optics(cfg, nums) -> None:
    optics = cfg.optics
    kind = cfg.spectrum.kind
    if "delta_z" in nums:
        optics.delta_z = nums["delta_z"][0]
    if "mz_delta_L" in nums:
        value, lineno = nums["mz_delta_L"]
        if kind not in CASE1_KINDS:
            raise ConfigError(f"a Mach-Zehnder does not apply to kind {kind}", lineno)
        if value < 0:
            raise ConfigError(f"mz_delta_L must be nonnegative, got {value!r}", lineno)
        optics.mz_delta_L = value
        optics.mz_theta = nums.get("mz_theta", (0.0, 0))[0]
    elif "mz_theta" in nums:
        raise ConfigError("mz_theta needs mz_delta_L", nums["mz_theta"][1])
    if "wave_plate_theta" in nums:
        value, lineno = nums["wave_plate_theta"]
        if kind not in CASE2_KINDS:
            raise ConfigError(f"a wave plate does not apply to kind {kind}", lineno)
        optics.wave_plate_theta = value


def render_config(cfg: ScenarioConfig) -> str:
    """Inverse of :func:`parse_config` for validated configs."""
    out = []
    for name in _SECTIONS:
        section = getattr(cfg, name)
        out.append(f"[{name}]")
        for f in dataclasses.fields(section):
            value = getattr(section, f.name)
            if value is None:
                continue
            if isinstance(value, str) or isinstance(value, int) and not isinstance(value, bool):
                out.append(f"{f.name} = {value}")
            else:
                out.append(f"{f.name} = {float(value)!r}")
        out.append("")
    return "\n".join(out)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# Building the scenario
# ---------------------------------------------------------------------------


def build_grid(cfg: ScenarioConfig) -> FrequencyGrid:
    return make_grid(cfg.grid.nu_max, cfg.grid.points)


def build_phase_matching(spec: SpectrumSection) -> PhaseMatching:
    if spec.phase_matching == "gaussian":
        return PhaseMatching.gaussian(spec.sigma_p)
    if spec.phase_matching == "delta":
        return PhaseMatching.delta()
    return PhaseMatching.flat()


def build_source(cfg: ScenarioConfig) -> Spectrum:
    """Spectrum at the source, before any optics."""
    grid = build_grid(cfg)
    s = cfg.spectrum
    if s.kind == "product_gaussian":
        return product_spectrum(
            gaussian_single(-0.5 * s.delta_omega, s.sigma1, grid=grid),
            gaussian_single(0.5 * s.delta_omega, s.sigma2, grid=grid),
        )
    if s.kind == "spdc_type1":
        return spdc_type1(s.delta_omega, s.sigma1, build_phase_matching(s), grid, sigma2=s.sigma2)
    if s.kind == "spdc_type2":
        return spdc_type2(s.omega_alpha, s.omega_beta, s.sigma_alpha, s.sigma_beta,
                          build_phase_matching(s), s.theta, grid)
    if s.kind == "two_mode_product":
        return two_mode_product(
            gaussian_single(s.omega_alpha, s.sigma_alpha, grid=grid, weight=s.n_alpha),
            gaussian_single(s.omega_beta, s.sigma_beta, grid=grid, weight=1.0 - s.n_alpha),
            s.theta,
        )
    bell = {"bell_phi_plus": "phi+", "bell_phi_minus": "phi-",
            "bell_psi_plus": "psi+", "bell_psi_minus": "psi-"}[s.kind]
    return bell_case1(bell, -0.5 * s.delta_omega, 0.5 * s.delta_omega, grid)


def build_path(cfg: ScenarioConfig) -> OpticalPath:
    o = cfg.optics
    mz = MachZehnder(o.mz_delta_L, o.mz_theta or 0.0) if o.mz_delta_L is not None else None
    wp = WavePlate(o.wave_plate_theta) if o.wave_plate_theta is not None else None
    return OpticalPath(z1=0.0, z2=o.delta_z, mz=mz, wave_plate=wp)


def build_beamsplitter(cfg: ScenarioConfig) -> BeamSplitter:
    b = cfg.beamsplitter
    return BeamSplitter(b.theta, b.phi_tau, b.phi_rho)
