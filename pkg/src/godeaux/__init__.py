"""Exact arithmetic for Godeaux surface degenerations and their exceptional bundles."""
from .fibrations import (FibrationConfig, canonical_multiple, correspondence_report, enumerate_configs,
                         godeaux_filter, k_two_divisible, orbifold_h1)
from .invariants import (BundleNumerics, DivisorNumerics, HJChain, WahlType, c2_exceptional, chi_end, chi_line,
                         destabilizer_obstruction, discrepancies, genus_adjunction, hj_expand, is_wahl,
                         ksq_drop_check, slope)
from .lattice import (INFINITE, AbelianGroup, GramLattice, is_divisible_mod, load_gram, mod2_quotient,
                      quotient_group, smith_normal_form, solve_in_span, sublattice_index)
from .recipes import run, verify_all

__version__ = "0.1.0"
