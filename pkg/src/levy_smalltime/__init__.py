"""Almost-sure small-time behaviour of Levy processes relative to t^kappa.

Integral tests, critical constants and the resulting classifications of
limsup |X_t|/t^kappa, limsup X_t/t^kappa and lim X_t/t^kappa as t -> 0,
plus a Monte Carlo sampler that produces trend evidence.
"""
from .asymptotics import AsymptoticExponent
from .classifier import (Classification, QueryResult, classify_limit, classify_one_sided,
                         classify_query, classify_subordinator_liminf, classify_two_sided)
from .errors import (BvRequired, DomainError, EvaluationError, InconclusiveBracket,
                     InconclusiveClassification, InfiniteActivityRequired, LevyError,
                     NonMonotoneVerdict, SamplingUnsupported, SimulationError,
                     UnsupportedFunctional)
from .functionals import FunctionalKind, asymptotic_of, eval_functional
from .integral_tests import (CriticalConstant, IntegralVerdict, I_test, J_test, K_test,
                             classify_integral, critical_constant, d_K_star, lambda_I_star,
                             lambda_J_star, test_5_1, test_33b, test_condition_2)
from .measures import (CompoundPoissonAtoms, JumpMeasure, LevyProcessSpec, NegativeOf,
                       StableLike, SumOf, VProfileLogLog, WProfileCritical, bg_index,
                       centered_gamma, drift_delta, is_bv, load_spec, spec_from_dict,
                       tail_minus, tail_plus, two_sided_stable)
from .simulator import SimConfig, TrendReport, sample_path_grid, trend_statistic

__version__ = "0.1.0"
