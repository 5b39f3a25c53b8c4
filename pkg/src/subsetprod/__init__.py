"""Short product representations in generic finite groups.

Given a sequence S of elements of a finite group and a target z, the
solvers here look for a subsequence of S whose ordered product equals z,
either by a meet-in-the-middle table (bsgs) or by a low-memory collision
walk with distinguished-points parallelism (rho).
"""

from .bsgs import BsgsConfig, BsgsResult, bsgs_solve, bsgs_solve_randomized
from .errors import (
    CapabilityError,
    InputError,
    InternalError,
    NotFoundError,
    SubsetProdError,
    UsageError,
)
from .groups import (
    ClassGroup,
    CurveGroup,
    GL2Group,
    GroupHandle,
    ZnGroup,
    curve_order,
    gl2_order,
    make_group,
)
from .parallel import (
    DistinguishedRecord,
    ParallelOptions,
    ParallelResult,
    rho_solve_parallel,
)
from .quadratic import (
    class_group_order_analytic,
    class_number,
    compose,
    prime_form,
    reduce_form,
)
from .rho import (
    CPoint,
    EtaSpec,
    PrecomputeTable,
    RhoOptions,
    RhoResult,
    WalkOutcome,
    build_precompute_table,
    eta,
    floyd_collide,
    phi,
    rho_solve,
    walk_value,
)
from .sequences import (
    Mask,
    Sequence,
    SubsetDescriptor,
    TargetSpec,
    assemble_answer,
    build_class_sequence,
    build_curve_sequence,
    build_random_sequence,
    build_sequence,
    build_toy_sequence,
    descriptor_product,
    mu_product,
    product,
)
from .stats import CostModel, RunAggregate, expected_stats, pushforward, tv_distance

__version__ = "0.1.0"
