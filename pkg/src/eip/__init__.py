"""Edge-isoperimetric minimizers on the integer lattice: daisies, rearrangements,
defect surgery, extremal slabs, and fluctuation scaling around the Wulff cube."""
from .bounds import (BoxSet, ScalingParams, converse_threshold_met, padded_slab, scaling_exponent,
                     scaling_floor, slab)
from .daisy import (DaisyMatrix, DaisySpec, daisy_of_cardinality, daisy_perimeter, eip_value, from_matrix,
                    is_minimizer, materialize, phi, psi, to_matrix, value_change_position)
from .defects import (Defect, NormalForm, defect_contains_face, fill_defect, find_defect, find_defects,
                      height_bound_holds, normalize_minimizer)
from .errors import BudgetExceeded, EIPError, InvariantViolation, ValidationError
from .experiments import FluctuationRow, ScanConfig, fit_exponent, fluctuation_scan
from .lattice import (Box, Config, bond_count, edge_perimeter, min_translate_symdiff, minimal_rectangle,
                      section, wulff)
from .oracle import OracleReport, cross_validate, eip_bruteforce
from .order import Cmp, compare, initial_segment
from .rearrange import decreasing_rearrangement, sections_are_minimizers

__all__ = [name for name in dir() if not name.startswith("_")]
