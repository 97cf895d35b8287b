"""Source-IRS-destination association for IRS-aided terahertz networks."""
from .assignment import Association3D, validate
from .association import associate, solve_p1, solve_p2
from .baselines import (
    BaselineResult,
    exhaustive_search,
    greedy,
    partial_exhaustive,
    partial_random,
    random_assignment,
)
from .channel import (
    ChannelTensor,
    LinkEvaluator,
    PhaseConfig,
    build_channel_tensor,
    cophase,
    noise_power,
    rate,
    sinr,
    sum_rate,
)
from .kernels import BACKEND
from .matching import Matching, build_priorities, deferred_acceptance, is_stable
from .propagation import AtmosphereConfig, IrsPanel, RadioConfig, Scenario

__version__ = "0.1.0"
