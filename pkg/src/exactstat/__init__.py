"""Exact statistics of non-interacting bosons and fermions on integer energy grids."""

__version__ = "0.1.0"

from .canonical import CanonicalContext, ThermoReport, chargeless_thermo, series_thermo
from .compound import CompoundSystem, load_compound
from .duality import (
    FermiFromBose,
    IdentityReport,
    canonical_duality_suite,
    grand_duality_check,
    micro_duality_suite,
)
from .errors import BudgetExceeded, ConsistencyError, ConvergenceError
from .even_spaced import (
    fermi_band_weight,
    bose_band_weight,
    gaussian_partition_function,
    micro_identity_suite,
    occupancy_ladder_formal,
    occupancy_ladder_numeric,
    restricted_partition_count,
    unbounded_limit,
)
from .grand_canonical import GrandContext, grand_report, occupancy_grand
from .microcanonical import ChargelessWeightTable, WeightTable
from .oracle import BOSE, FERMI, enumerate_counts, enumerate_table
from .qseries import QSeries, RationalFunction, pochhammer
from .spectrum import EnergyLevel, Spectrum, evenly_spaced_band, harmonic_oscillator, load_spectrum, magnetic_example

__all__ = [name for name in dir() if not name.startswith("_")]
