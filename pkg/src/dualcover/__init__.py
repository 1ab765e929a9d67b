"""Covering numbers of finite semimetric spaces and of dual spaces built from a kernel."""

from .covering import (
    CoverSolution,
    CoveringProfile,
    certificate_holds,
    covering_profile,
    covering_radius,
    critical_radii,
    exact_diameter_cover,
    exact_intrinsic_cover,
    greedy_diameter_cover,
    greedy_net,
)
from .duality import (
    DualCoverPartition,
    PolyhedralSeminorm,
    bound_complex,
    bound_real,
    convex_case_bounds,
    disk_cover,
    grid_partition,
    interval_cover,
    verify_convex_bound,
)
from .errors import DualCoverError, PreconditionError, SizeCapError, StructureError
from .exact import ComplexPair, Surd
from .gallery import (
    adversary_witness,
    cube_cover_number,
    example_31,
    example_32_truncated,
    example_l1_identity,
    linf_recenter,
    recenter_counterexample_check,
)
from .schauder import (
    NormTag,
    OperatorInstance,
    adjoint,
    norming_check,
    operator_norm,
    schauder_bound,
    schauder_kernel,
    schauder_report,
)
from .semimetric import (
    DualityKernel,
    Field,
    FiniteSemimetricSpace,
    induced_dA,
    induced_dB,
    validate_space,
)

__version__ = "0.1.0"

__all__ = sorted(
    name
    for name, value in globals().items()
    if not name.startswith("_") and not isinstance(value, type(__import__("sys")))
)
