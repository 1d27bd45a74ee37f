"""The categories FinStat and FP.

An object is a finite set with a probability distribution.  A morphism
``(f, s): (X, q) -> (Y, r)`` pairs a measure-preserving function ``f``
(a measurement) with a stochastic section ``s: Y ~> X`` (a hypothesis
about the state given the outcome).  The hypothesis is optimal when
``s ∘ r = q``; optimal morphisms form the subcategory FP.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Mapping

import numpy as np

from relent import kernels
from relent.errors import (
    FiberPolicyError,
    FiberSupportViolation,
    LengthMismatch,
    NotASection,
    NotMeasurePreserving,
    NotSurjective,
    ObjectMismatch,
    ParseError,
    ValidationError,
)
from relent.stochastic import (
    DERIVED_TOL,
    ONE,
    SUPPORT_EPS,
    FiniteFunction,
    FiniteSet,
    ProbDist,
    StochasticMatrix,
    compose,
    compose_functions,
    convex_combine_dists,
    direct_sum_functions,
    direct_sum_matrices,
    dist_from_json,
    dist_to_json,
    function_from_json,
    function_to_json,
    matrix_from_json,
    matrix_to_json,
    pushforward,
)

MORPH_TOL = 1e-8


class FinStatObject:
    """A finite probability measure space ``(X, q)``."""

    __slots__ = ("space", "dist")

    def __init__(self, space, dist: ProbDist):
        space = space if isinstance(space, FiniteSet) else FiniteSet(space)
        if dist.space != space:
            raise ValidationError("distribution lives on a different set")
        self.space = space
        self.dist = dist

    @classmethod
    def of(cls, dist: ProbDist) -> FinStatObject:
        return cls(dist.space, dist)

    @classmethod
    def from_weights(cls, labels, weights) -> FinStatObject:
        return cls.of(ProbDist(labels, weights))

    def matches(self, other: FinStatObject, tol: float = MORPH_TOL) -> bool:
        return self.space == other.space and self.dist.allclose(other.dist, tol)

    def __repr__(self) -> str:
        return f"FinStatObject({self.dist.as_dict()!r})"


POINT = FinStatObject(ONE, ProbDist(ONE, [1.0]))


class FinStatMorphism:
    """A validated morphism ``(f, s): (X, q) -> (Y, r)``.

    Build these through :func:`make_morphism`, which checks every law.
    """

    __slots__ = ("domain", "codomain", "f", "s")

    def __init__(self, domain, codomain, f, s, _validated=False):
        if not _validated:
            raise TypeError("use make_morphism() to construct morphisms")
        self.domain = domain
        self.codomain = codomain
        self.f = f
        self.s = s

    @property
    def q(self) -> ProbDist:
        return self.domain.dist

    @property
    def r(self) -> ProbDist:
        return self.codomain.dist

    def __repr__(self) -> str:
        return f"FinStatMorphism(f={self.f.mapping!r}, s={self.s.entries.tolist()!r})"


def make_morphism(
    dom: FinStatObject,
    cod: FinStatObject,
    f: FiniteFunction,
    s: StochasticMatrix,
    tol: float = MORPH_TOL,
) -> FinStatMorphism:
    """Check ``f ∘ q = r``, surjectivity, fiber support and ``f ∘ s = 1_Y``."""
    if f.domain != dom.space or f.codomain != cod.space:
        raise LengthMismatch("function does not go between the objects' sets")
    if s.domain != cod.space or s.codomain != dom.space:
        raise LengthMismatch("section does not go from the codomain set to the domain set")

    pushed = kernels.fiber_sums(f.image, dom.dist.weights, len(cod.space))
    dev = np.abs(pushed - cod.dist.weights)
    if not np.all(dev <= tol):
        y = int(np.argmax(dev))
        raise NotMeasurePreserving(
            f"f ∘ q = r fails at {cod.space.labels[y]!r}: "
            f"pushforward {float(pushed[y])!r} vs {float(cod.dist.weights[y])!r}"
        )
    if not f.is_surjective():
        raise NotSurjective(f"f misses {f.missed()[0]!r}")
    worst, x, y = kernels.off_fiber_max(f.image, s.entries)
    if worst > tol:
        xl, yl = dom.space.labels[x], cod.space.labels[y]
        raise FiberSupportViolation(
            f"s[{xl!r}, {yl!r}] = {float(worst)!r} but f({xl!r}) != {yl!r}", x=xl, y=yl
        )
    worst, y2, y = kernels.section_defect(f.image, s.entries, len(cod.space))
    if worst > tol:
        pair = (cod.space.labels[y2], cod.space.labels[y])
        raise NotASection(f"f ∘ s = 1_Y fails at {pair!r}", pair=pair)
    return FinStatMorphism(dom, cod, f, s, _validated=True)


def identity_morphism(obj: FinStatObject) -> FinStatMorphism:
    return make_morphism(
        obj, obj, FiniteFunction.identity(obj.space), StochasticMatrix.identity(obj.space)
    )


def compose_morphisms(second: FinStatMorphism, first: FinStatMorphism) -> FinStatMorphism:
    """``(g, t) ∘ (f, s) = (g ∘ f, s ∘ t)``."""
    if not first.codomain.matches(second.domain):
        raise ObjectMismatch("codomain of the first morphism differs from domain of the second")
    return make_morphism(
        first.domain,
        second.codomain,
        compose_functions(second.f, first.f),
        compose(first.s, second.s),
    )


def prior(m: FinStatMorphism) -> ProbDist:
    """``p_x = s_{x f(x)} r_{f(x)}``: what the hypothesis predicts for X."""
    w = kernels.prior(m.f.image, m.s.entries, m.r.weights)
    return ProbDist(m.domain.space, w, tol=DERIVED_TOL)


def is_optimal(m: FinStatMorphism, tol: float = 1e-9) -> bool:
    inferred = pushforward(m.s, m.r)
    return bool(np.max(np.abs(inferred.weights - m.q.weights)) <= tol)


# --------------------------------------------------------------------------
# Bayesian inversion
# --------------------------------------------------------------------------


class ZeroFiberPolicy:
    """How to fill the section over outcomes that have probability zero."""

    def column(self, fiber: list[str], outcome: str, space: FiniteSet) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(ZeroFiberPolicy):
    def column(self, fiber, outcome, space):
        col = np.zeros(len(space))
        for x in fiber:
            col[space.index(x)] = 1.0 / len(fiber)
        return col


@dataclass(frozen=True)
class PointMass(ZeroFiberPolicy):
    label: str

    def column(self, fiber, outcome, space):
        if self.label not in fiber:
            raise FiberPolicyError(
                f"point mass at {self.label!r} is not in the fiber over {outcome!r} {fiber!r}"
            )
        col = np.zeros(len(space))
        col[space.index(self.label)] = 1.0
        return col


@dataclass(frozen=True)
class Given(ZeroFiberPolicy):
    """Explicit columns, keyed by outcome label, each a mapping state -> weight."""

    columns: Mapping[str, Mapping[str, float]]

    def column(self, fiber, outcome, space):
        if outcome not in self.columns:
            raise FiberPolicyError(f"no column given for zero-mass outcome {outcome!r}")
        column = self.columns[outcome]
        stray = [x for x, w in column.items() if w != 0 and x not in fiber]
        if stray:
            raise FiberPolicyError(f"column for {outcome!r} puts mass on {stray[0]!r} outside its fiber")
        col = np.zeros(len(space))
        for x, w in column.items():
            col[space.index(x)] = float(w)
        return col


def parse_policy(text: str) -> ZeroFiberPolicy:
    """``"uniform"`` or ``"point:<label>"``."""
    if text == "uniform":
        return Uniform()
    if text.startswith("point:") and len(text) > len("point:"):
        return PointMass(text[len("point:"):])
    raise ValueError(f"unknown fiber policy {text!r}")


def optimal_hypothesis(
    f: FiniteFunction, q: ProbDist, fiber_policy: ZeroFiberPolicy | None = None
) -> FinStatMorphism:
    """The FP morphism over ``f``: ``s_{xy} = q_x / r_y`` on each fiber.

    The codomain distribution is the exact pushforward of ``q``.  Fibers
    over outcomes with ``r_y <= SUPPORT_EPS`` are filled by the policy
    (uniform by default).
    """
    policy = Uniform() if fiber_policy is None else fiber_policy
    if f.domain != q.space:
        raise LengthMismatch("distribution does not live on the function's domain")
    if not f.is_surjective():
        raise NotSurjective(f"f misses {f.missed()[0]!r}")
    r = pushforward(f, q)
    n, m = len(f.domain), len(f.codomain)
    s = np.zeros((n, m))
    rows = np.arange(n)
    rw = r.weights
    live = rw[f.image] > SUPPORT_EPS
    s[rows[live], f.image[live]] = q.weights[live] / rw[f.image[live]]
    for y in np.flatnonzero(rw <= SUPPORT_EPS).tolist():
        label = f.codomain.labels[y]
        s[:, y] = policy.column(f.fiber(label), label, f.domain)
    section = StochasticMatrix(f.codomain, f.domain, s, tol=DERIVED_TOL)
    return make_morphism(FinStatObject.of(q), FinStatObject.of(r), f, section)


def bang_morphism(dom: FinStatObject, hypothesis: ProbDist) -> FinStatMorphism:
    """The unique measurement ``X -> 1`` with ``hypothesis`` as its section."""
    if hypothesis.space != dom.space:
        raise ValidationError("hypothesis must live on the domain's set")
    return make_morphism(
        dom, POINT, FiniteFunction.constant(dom.space), hypothesis.as_kernel()
    )


def reduce_to_bang(m: FinStatMorphism) -> FinStatMorphism:
    """Replace ``m`` by ``!_X`` with the prior of ``m`` as hypothesis.

    Any functor that vanishes on FP and is functorial takes the same value
    on both, since ``m`` followed by ``!_Y`` (an FP morphism) is this one.
    """
    return bang_morphism(m.domain, prior(m))


def convex_combine_morphisms(
    lam: float, m1: FinStatMorphism, m2: FinStatMorphism
) -> FinStatMorphism:
    """``λ(f, s) ⊕ (1-λ)(g, t)`` with block-diagonal section ``s ⊕ t``."""
    dom = FinStatObject.of(convex_combine_dists(lam, m1.q, m2.q))
    cod = FinStatObject.of(convex_combine_dists(lam, m1.r, m2.r))
    return make_morphism(
        dom, cod, direct_sum_functions(m1.f, m2.f), direct_sum_matrices(m1.s, m2.s)
    )


def relabel(
    m: FinStatMorphism, domain_labels, codomain_labels
) -> FinStatMorphism:
    """Rename the points of both sets, keeping their order (an isomorphism)."""
    dom_set, cod_set = FiniteSet(domain_labels), FiniteSet(codomain_labels)
    dom = FinStatObject.of(ProbDist(dom_set, m.q.weights, tol=DERIVED_TOL))
    cod = FinStatObject.of(ProbDist(cod_set, m.r.weights, tol=DERIVED_TOL))
    f = FiniteFunction(dom_set, cod_set, m.f.image)
    s = StochasticMatrix(cod_set, dom_set, m.s.entries, tol=DERIVED_TOL)
    return make_morphism(dom, cod, f, s)


def morphisms_close(a: FinStatMorphism, b: FinStatMorphism, tol: float) -> bool:
    """Same function, same objects and sections equal entrywise within ``tol``."""
    return (
        a.f == b.f
        and a.domain.matches(b.domain, tol)
        and a.codomain.matches(b.codomain, tol)
        and a.s.allclose(b.s, tol)
    )


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def object_to_json(obj: FinStatObject) -> dict:
    return dist_to_json(obj.dist)


def object_from_json(data) -> FinStatObject:
    return FinStatObject.of(dist_from_json(data))


def morphism_to_json(m: FinStatMorphism) -> dict:
    return {
        "domain": object_to_json(m.domain),
        "codomain": object_to_json(m.codomain),
        "f": function_to_json(m.f),
        "s": matrix_to_json(m.s),
    }


def morphism_parts_from_json(data):
    """Parse without validating the morphism laws.

    Returns ``(domain, codomain, f, s)`` so callers can report which law
    fails.
    """
    if not isinstance(data, dict):
        raise ParseError("a morphism must be a JSON object")
    for key in ("domain", "codomain", "f", "s"):
        if key not in data:
            raise ParseError(f"morphism is missing {key!r}")
    dom = object_from_json(data["domain"])
    cod = object_from_json(data["codomain"])
    f = function_from_json(data["f"], dom.space, cod.space)
    s = matrix_from_json(data["s"])
    return dom, cod, f, s


def morphism_from_json(data, tol: float = MORPH_TOL) -> FinStatMorphism:
    return make_morphism(*morphism_parts_from_json(data), tol=tol)
