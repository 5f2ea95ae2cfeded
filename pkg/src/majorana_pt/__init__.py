"""Finite PT-symmetric Kitaev/SSH chains at their exceptional points.

Builders for the Majorana ring and SSH chain matrices (:mod:`.model`),
a verified dense biorthogonal eigensolver and mode census (:mod:`.spectral`),
the closed-form zero mode and quantization-equation roots (:mod:`.bethe`),
cross-size projection and sweep analyses (:mod:`.analysis`), and a CLI
(:mod:`.cli`).
"""

from .model import (
    BLOCK_GRAM,
    BlockDecomposition,
    ModelParams,
    build_block_transform,
    build_majorana_ring,
    build_ssh,
    decompose_blocks,
    fit_block_scale,
    gamma_ep,
    parity_matrix,
    pt_deviation,
    staggered_signs,
)
from .spectral import (
    ClassificationError,
    Coalescence,
    EigenSystem,
    ModeCensus,
    ModeClass,
    ModeRecord,
    Tolerances,
    classify_modes,
    coalesced_eigenvalues,
    detect_coalescence,
    eig,
    match_multisets,
    pseudo_hermiticity_check,
)
from .bethe import (
    BetheRoot,
    RootScanError,
    UniformChainError,
    ZeroModeWavefunction,
    amplitude_ratio,
    bethe_wavefunction,
    epsilon_of_k,
    evanescent_modes,
    evanescent_residual,
    k_from_epsilon,
    match_spectrum_to_roots,
    omega_constant,
    omega_limit,
    quantization_residual,
    quantization_scale,
    solve_evanescent_pair,
    solve_real_k,
    zero_mode,
    zero_mode_root,
)
from .analysis import (
    DistributionProfile,
    SweepPoint,
    SweepResult,
    census_sweep,
    common_part_compare,
    dirac_distribution,
    edge_mode_count,
    gap_bound_check,
)

__version__ = "0.1.0"
