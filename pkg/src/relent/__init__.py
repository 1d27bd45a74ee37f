"""Relative entropy as a functor on finite statistical inference.

Morphisms pair a measurement with a hypothesis about the hidden state;
relative entropy scores how far the hypothesis is from the truth and
adds up along composites.  A harness checks these laws on random and
hand-built morphisms.
"""

from relent.entropy import (
    DOMAIN_ENTROPY,
    FUNCTORS,
    G,
    GIBBS_TOL,
    GPRIME,
    INFO_LOSS,
    RE,
    EntropyFunctor,
    parse_functor,
    relative_entropy,
    scaled_sum_functor,
    shannon_entropy,
)
from relent.errors import *  # noqa: F403
from relent.extreal import INF, ZERO, ExtendedReal, deviation
from relent.finstat import (
    MORPH_TOL,
    POINT,
    FinStatMorphism,
    FinStatObject,
    Given,
    PointMass,
    Uniform,
    bang_morphism,
    compose_morphisms,
    convex_combine_morphisms,
    identity_morphism,
    is_optimal,
    make_morphism,
    optimal_hypothesis,
    prior,
    reduce_to_bang,
)
from relent.operad import (
    ConvexAlgebra,
    OperadOperation,
    check_algebra_axioms,
    extended_real_algebra,
    operad_compose,
    simplex_algebra,
    star,
    theta_pushforward,
)
from relent.stochastic import (
    DERIVED_TOL,
    NORM_TOL,
    SUPPORT_EPS,
    FiniteFunction,
    FiniteSet,
    ProbDist,
    StochasticMatrix,
    compose,
    pushforward,
)

__version__ = "0.1.0"
