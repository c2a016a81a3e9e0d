"""levyhit: Levy processes observed at first hitting times of symmetric barriers.

Simulation of time-changed Levy processes sampled at barrier-crossing
times, closed-form and Monte Carlo oracles for the stable limit laws,
estimators of the time change and of the jump-activity index, and study
harnesses verifying the limit theorems at desk scale.
"""

__version__ = "0.1.0"

from .errors import (
    BarrierViolationError,
    EmptySeriesError,
    HorizonExceeded,
    InfiniteVariationError,
    InsufficientSignal,
    IntensityOverflow,
    LevyHitError,
    MonotonicityError,
    ParameterError,
    PreconditionError,
    QuadratureError,
    SchemaError,
    UnclassifiableError,
    UnsupportedLawError,
)
from .functionals import ONE, BoundedFunction, PowerCap, as_functional
from .models import (
    CGMY,
    NIG,
    VG,
    BrownianLimit,
    CompoundPoisson,
    DoubleExpJumpSize,
    DriftLimit,
    HolderVerdict,
    JumpSpec,
    LevyTriplet,
    LimitClassification,
    NoJumps,
    NormalJumpSize,
    PowerDensity,
    StableJumps,
    StableLimit,
    check_h_prime,
    classify,
    drift_constraint_residual,
    drift_gamma0,
    rescale,
    to_triplet,
)

__all__ = [name for name in dir() if not name.startswith("_")]
