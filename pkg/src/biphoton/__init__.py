"""Two-photon interference at a beam splitter, from joint spectra to coincidence rates."""

from .analytic import (
    IndependentType2,
    Limit,
    MZParams,
    Type1Params,
    Type2Params,
    effective_bandwidths,
    pc_mz,
    pc_mz_quarter,
    pc_type1,
    pc_type2_entangled,
    pc_type2_independent,
    type2_effective_bandwidth,
)
from .beamsplitter import (
    BALANCED,
    BeamSplitter,
    OutputStateCase1,
    OutputStateCase2,
    bs_inverse,
    bs_matrix,
    transform_case1,
    transform_case2,
)
from .coincidence import (
    ChannelReport,
    CoincidenceReport,
    Verdict,
    classify,
    interference_term,
    pc_case1,
    pc_case2,
)
from .config import ConfigError, ScenarioConfig, parse_config, render_config
from .scenario import (
    MachZehnder,
    OpticalPath,
    ScanResult,
    WavePlate,
    apply_mz,
    apply_optics,
    apply_path_delay,
    apply_wave_plate,
    contour_data,
    scan,
)
from .spectral import (
    BellState,
    FrequencyGrid,
    JointSpectrum,
    PhaseMatching,
    PolarizedJointSpectrum,
    Representation,
    SinglePhotonSpectrum,
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
