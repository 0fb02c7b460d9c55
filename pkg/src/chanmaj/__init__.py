"""Majorization toolkit for probability vectors, dichotomies, joint
distributions and classical channels."""

__version__ = "0.1.0"

from .channel import Channel, channel_equivalent, channel_majorizes, predictability, standard_form
from .conditional import JointDist, conditional_entropy, conditionally_majorizes
from .entropy import EntropySpec, channel_entropy_max_ext, channel_entropy_min_ext, optimal_upper_bound
from .majorization import ProbVector, majorizes, renyi_entropy, shannon_entropy
from .numerics import DomainError, InternalConsistencyError, Tolerance
from .relative import beta_star, lower_lorenz, relatively_majorizes

__all__ = [
    "Channel",
    "DomainError",
    "EntropySpec",
    "InternalConsistencyError",
    "JointDist",
    "ProbVector",
    "Tolerance",
    "beta_star",
    "channel_entropy_max_ext",
    "channel_entropy_min_ext",
    "channel_equivalent",
    "channel_majorizes",
    "conditional_entropy",
    "conditionally_majorizes",
    "lower_lorenz",
    "majorizes",
    "optimal_upper_bound",
    "predictability",
    "relatively_majorizes",
    "renyi_entropy",
    "shannon_entropy",
    "standard_form",
    "__version__",
]
