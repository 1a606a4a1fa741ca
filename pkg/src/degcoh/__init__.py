"""Generalized coherent states for degenerate spectra and their nonclassical observables."""

from .spectrum import (
    BOX2D_TABLE_LEVELS,
    DegenerateSpectrum,
    EmptySpectrum,
    EnergyLevel,
    MalformedLine,
    NonIncreasingEnergy,
    SpectrumError,
    ZeroDegeneracy,
    build_box2d,
    build_ho2d,
    build_ho3d,
    build_nondegenerate_ho,
    degeneracy_oracle_box2d,
    get_system,
    load_custom,
    serialize,
)
from .state import (
    NonFiniteInput,
    QuadratureReport,
    SpectrumTooShort,
    StateWeights,
    TruncationNotConverged,
    TruncationPolicy,
    ladder_expectations,
    make_state,
    mandel_q,
    mean_number,
    number_variance,
    quadrature_report,
    second_moment_number,
)
from .phase import (
    DegenerateCommutator,
    PhaseDistribution,
    PhaseGrid,
    SqueezingReport,
    number_phase_commutator,
    phase_distribution,
    phase_variance_series,
    squeezing_report,
)
from .entropic import LN_2PI, EntropyReport, entropy_report, number_entropy, phase_entropy
from .dynamics import (
    EvolutionGrid,
    gk_entropic_sum_sweep,
    gk_phase_distribution,
    gk_phase_entropy,
    gk_phase_variance,
)

__version__ = "0.1.0"
