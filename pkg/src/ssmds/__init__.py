"""Exact-arithmetic MDS array codes with small sub-packetization level and
near-optimal repair bandwidth."""

from .codec import (Codeword, HelperTap, RepairPlan, bandwidth_formula,
                    collect_tap, encode, plan_repair, reconstruct, repair)
from .codes import (Assignment, CodeSpec, ConstructedCode, build_c1, build_c2,
                    build_c3, build_c4, build_c4_r2, build_c5, build_iyb2,
                    build_long_c4p, build_yb1, build_yb2, load_code,
                    search_coefficients, transform)
from .gf import Fe, Field, field_new, rth_root_of_unity
from .linalg import Mat
from .verify import (VerifyReport, audit_bandwidth, check_assignment,
                     check_lemma1, check_mds, check_mds_by_reconstruction,
                     check_optimal_update, check_repair)

__version__ = "0.1.0"

__all__ = [
    "Assignment", "CodeSpec", "Codeword", "ConstructedCode", "Fe", "Field",
    "HelperTap", "Mat", "RepairPlan", "VerifyReport", "audit_bandwidth",
    "bandwidth_formula", "build_c1", "build_c2", "build_c3", "build_c4",
    "build_c4_r2", "build_c5", "build_iyb2", "build_long_c4p", "build_yb1",
    "build_yb2", "check_assignment", "check_lemma1", "check_mds",
    "check_mds_by_reconstruction", "check_optimal_update", "check_repair",
    "collect_tap", "encode", "field_new", "load_code", "plan_repair",
    "reconstruct", "repair", "rth_root_of_unity", "search_coefficients",
    "transform",
]
