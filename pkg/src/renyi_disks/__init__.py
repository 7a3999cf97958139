"""Expected features of random disk accretion via the Renyi parking process."""

from .chebyshev import ChebyshevBlock
from .exceptions import NonConvergence, OutOfDomain
from .geometry import Rot2, Vec2, circle_point, rotation
from .piecewise import PiecewiseFunction
from .report import ComparisonReport, HeadlineResults, compare, headline
from .simulator import FeatureSet, McEstimate, RenyiSample, estimate, features, sample_accretion, sample_renyi
from .solver import Solution, SolverConfig, g3_at, solve_all, solve_u1, solve_u2, solve_u3

__version__ = "0.1.0"
