"""Variational search for symmetric periodic orbits of the n-body problem."""

from .core import (
    MassSystem,
    grad_potential_mass,
    mass_inner,
    mass_norm,
    newton_residual,
    potential,
)
from .errors import (
    CapExceeded,
    ClassificationError,
    CollisionError,
    InitFailure,
    InvalidGenerator,
    ShapeError,
    SymmetryViolation,
    TruncationError,
    VarorbitError,
)
from .groups import (
    GroupElement,
    SymmetryGroup,
    TimeAction,
    act_on_config,
    boundary_involution,
    classify,
    close_group,
    group_from_dict,
    group_from_generators,
    is_coercive,
    kernel_projector,
    load_group_file,
    trivial_group,
)
from .paths import (
    ActionReport,
    FourierPath,
    QuadratureParams,
    acceleration,
    action_gradient,
    default_nu,
    discrete_action,
    discrete_potential,
    extend_to_full_period,
    kinetic_quadratic,
    sample,
    symmetrize,
    velocity,
)
from .optimize import (
    MinimizeConfig,
    MinimizeOutcome,
    continue_with,
    minimize,
    random_init,
    verify,
)
from .records import OrbitRecord, read_orbit, write_orbit

__version__ = "0.1.0"
