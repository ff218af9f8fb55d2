"""Casimir-Polder lateral potential and Bogoliubov spectroscopy of an elongated condensate.

Thin wrapper over the C++ core. All quantities are SI; energies are joules,
use ``energy_to_frequency`` for E / (2 pi hbar) in Hz.
"""

import math

from ._casimir_bec import (
    AtomSpecies,
    BdgBands,
    ConfigError,
    ContractError,
    DomainError,
    DsfSpectrum,
    Error,
    ExtrapolationError,
    GapReport,
    InstabilityError,
    LateralPotential,
    Quasi1DParams,
    RunConfig,
    UnsupportedConfiguration,
    benchmark_config,
    bogoliubov_dispersion,
    bragg_momentum,
    derive_quasi1d,
    dsf_homogeneous,
    dsf_lda,
    lateral_coefficients,
    linspace,
    near_surface_config,
    oracle_compare,
    parse_config,
    parse_config_text,
    perturbative_gaps,
    rubidium87,
    run_scenario,
    solve_bdg_bands,
    suppression_factor,
    validate_paper,
)

HBAR = 1.054571817e-34

__version__ = "0.1.0"


def energy_to_frequency(energy):
    return energy / (2.0 * math.pi * HBAR)
