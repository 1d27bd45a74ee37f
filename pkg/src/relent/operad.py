"""The operad of convex combinations and its algebras.

An arity-n operation is a probability distribution on ``{1, ..., n}``.
Weights are kept as plain Python numbers so that an operation built from
:class:`fractions.Fraction` coefficients composes and acts exactly.

Binary operations use the convention ``x *_λ y = λ x + (1 - λ) y``, i.e.
``star(λ, x, y)`` applies the operation ``(λ, 1 - λ)`` to ``(x, y)``.  The
presentation of convex algebras then reads::

    x *_1 y = x
    x *_λ x = x
    x *_λ y = y *_{1-λ} x
    (x *_μ y) *_λ z = x *_{λμ} (y *_{λ(1-μ)/(1-λμ)} z)
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from relent.errors import (
    ArityMismatch,
    CoefficientOutOfRange,
    LengthMismatch,
    NegativeWeight,
    NotNormalized,
)
from relent.extreal import INF, ExtendedReal, deviation, ext
from relent.stochastic import NORM_TOL, FiniteSet, ProbDist


class OperadOperation:
    """An element of P_n."""

    __slots__ = ("weights",)

    def __init__(self, weights: Sequence, tol: float = NORM_TOL):
        w = tuple(weights)
        if not w:
            raise LengthMismatch("operations have arity at least 1")
        for v in w:
            if not v >= 0:
                raise NegativeWeight(f"operation weight {v!r}")
        total = sum(w)
        if abs(total - 1) > tol:
            raise NotNormalized(f"operation weights sum to {total!r}")
        self.weights = w

    @property
    def arity(self) -> int:
        return len(self.weights)

    def as_dist(self) -> ProbDist:
        return ProbDist(FiniteSet.range(self.arity, start=1), [float(v) for v in self.weights])

    def __eq__(self, other) -> bool:
        return isinstance(other, OperadOperation) and self.weights == other.weights

    def __hash__(self) -> int:
        return hash(self.weights)

    def __repr__(self) -> str:
        return f"OperadOperation({list(self.weights)!r})"


def unit() -> OperadOperation:
    return OperadOperation((1,))


def binary(lam) -> OperadOperation:
    if not 0 <= lam <= 1:
        raise CoefficientOutOfRange(f"convex coefficient {lam!r} not in [0, 1]")
    return OperadOperation((lam, 1 - lam))


def operad_compose(p: OperadOperation, rs: Sequence[OperadOperation]) -> OperadOperation:
    """``p ∘ (r_1, ..., r_n) = (p_1 r_11, ..., p_1 r_1k_1, ..., p_n r_nk_n)``."""
    if len(rs) != p.arity:
        raise ArityMismatch(f"{len(rs)} inputs for an operation of arity {p.arity}")
    out = [pi * rij for pi, r in zip(p.weights, rs) for rij in r.weights]
    return OperadOperation(out, tol=2 * NORM_TOL)


def theta_pushforward(theta: Sequence[int], p: OperadOperation, n: int | None = None) -> OperadOperation:
    """Push ``p`` along ``θ: {1..m} -> {1..n}`` (1-based images).

    ``n`` defaults to ``max(θ)``; pass it explicitly when θ is not onto.
    """
    theta = list(theta)
    if len(theta) != p.arity:
        raise ArityMismatch(f"θ has {len(theta)} entries for an operation of arity {p.arity}")
    n = max(theta) if n is None else n
    if min(theta) < 1 or max(theta) > n:
        raise ArityMismatch(f"θ values must lie in 1..{n}")
    out = [0 * p.weights[0]] * n
    for i, j in enumerate(theta):
        out[j - 1] = out[j - 1] + p.weights[i]
    return OperadOperation(out, tol=2 * NORM_TOL)


# --------------------------------------------------------------------------
# Convex algebras
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexAlgebra:
    """A carrier with an action of every operation.

    ``apply(op, xs)`` evaluates the convex combination, ``sample(rng)``
    draws a carrier value, ``distance`` measures disagreement, and
    ``scalars`` is the coefficient grid the axiom checker sweeps (it must
    contain 0 and 1).
    """

    name: str
    apply: Callable[[OperadOperation, Sequence[Any]], Any] = field(repr=False)
    sample: Callable[[np.random.Generator], Any] = field(repr=False)
    distance: Callable[[Any, Any], float] = field(repr=False)
    scalars: tuple = field(default=(), repr=False)

    def __call__(self, op: OperadOperation, xs: Sequence[Any]):
        if len(xs) != op.arity:
            raise ArityMismatch(f"{len(xs)} arguments for an operation of arity {op.arity}")
        return self.apply(op, xs)


def star(lam, x, y, alg: ConvexAlgebra):
    """``x *_λ y``, the action of ``(λ, 1 - λ)`` on ``(x, y)``."""
    return alg(binary(lam), [x, y])


def _float_grid(k: int = 11) -> tuple:
    return tuple(np.linspace(0.0, 1.0, k).tolist())


def simplex_algebra(vertices=((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))) -> ConvexAlgebra:
    """Points of the convex hull of ``vertices`` in R^d."""
    verts = np.asarray(vertices, dtype=np.float64)

    def apply(op, xs):
        acc = np.zeros(verts.shape[1])
        for w, x in zip(op.weights, xs):
            acc = acc + float(w) * np.asarray(x)
        return acc

    def sample(rng):
        return rng.dirichlet(np.ones(len(verts))) @ verts

    def distance(a, b):
        return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))

    return ConvexAlgebra("simplex", apply, sample, distance, _float_grid())


def extended_real_algebra(exact: bool = True) -> ConvexAlgebra:
    """[0, ∞] acted on with ``0 · ∞ = 0``.

    With ``exact=True`` finite samples and the coefficient grid are
    rationals, so every axiom can be compared with ``==``.
    """

    def apply(op, xs):
        total = ExtendedReal(0 * op.weights[0])
        for w, x in zip(op.weights, xs):
            total = total + ExtendedReal(w) * ext(x)
        return total

    if exact:
        finite = [Fraction(k, 4) for k in range(0, 13)]
        grid = tuple(Fraction(k, 8) for k in range(9)) + (Fraction(1, 3), Fraction(2, 3))

        def sample(rng):
            k = int(rng.integers(0, len(finite) + 3))
            return INF if k >= len(finite) else ExtendedReal(finite[k])

    else:
        grid = _float_grid()

        def sample(rng):
            return INF if rng.random() < 0.25 else ExtendedReal(float(rng.exponential(2.0)))

    return ConvexAlgebra("extended-reals", apply, sample, deviation, grid)


def broken_algebra() -> ConvexAlgebra:
    """``x *_λ y := x`` for every λ (fails the swap axiom)."""

    def apply(op, xs):
        return xs[0]

    def sample(rng):
        return float(rng.random())

    return ConvexAlgebra("broken", apply, sample, lambda a, b: abs(a - b), _float_grid())


AXIOMS = ("unit", "idempotence", "swap", "associativity")


@dataclass
class AxiomReport:
    algebra: str
    samples: int
    max_deviation: dict[str, float]
    witnesses: dict[str, tuple] = field(default_factory=dict)

    def holds(self, axiom: str, tol: float = 0.0) -> bool:
        return self.max_deviation[axiom] <= tol

    def violated(self, tol: float = 0.0) -> list[str]:
        return [a for a in AXIOMS if self.max_deviation[a] > tol]


def _mix_fraction(lam, mu, fill):
    denom = 1 - lam * mu
    if denom == 0:
        return fill
    return lam * (1 - mu) / denom


def check_algebra_axioms(
    alg: ConvexAlgebra, samples: int = 1000, seed: int = 0, degenerate_fills=None
) -> AxiomReport:
    """Largest deviation of each axiom over sampled triples and a λ, μ grid.

    Every sample also runs λ, μ at the endpoints 0 and 1.  For λ = μ = 1
    the associativity fraction is 0/0; 0 is substituted and the other
    ``degenerate_fills`` are spot-checked as well.
    """
    rng = np.random.default_rng(seed)
    grid = alg.scalars
    endpoints = [v for v in grid if v == 0 or v == 1]
    interior = [v for v in grid if 0 < v < 1]
    one = next(v for v in grid if v == 1)
    fills = [one * 0] + list(degenerate_fills if degenerate_fills is not None else (one / 2, one))
    worst = dict.fromkeys(AXIOMS, 0.0)
    witness: dict[str, tuple] = {}

    def record(axiom, dev, data):
        if dev > worst[axiom]:
            worst[axiom] = dev
            witness[axiom] = data

    for i in range(samples):
        x, y, z = alg.sample(rng), alg.sample(rng), alg.sample(rng)
        lam = interior[i % len(interior)] if interior else one
        mu = interior[(i * 7 + 3) % len(interior)] if interior else one
        lams = endpoints + [lam]
        mus = endpoints + [mu]

        record("unit", alg.distance(star(one, x, y, alg), x), (x, y))
        for lm in lams:
            record("idempotence", alg.distance(star(lm, x, x, alg), x), (lm, x))
            record("swap", alg.distance(star(lm, x, y, alg), star(one - lm, y, x, alg)), (lm, x, y))
            for m in mus:
                lhs = star(lm, star(m, x, y, alg), z, alg)
                for fill in fills if (lm == one and m == one) else fills[:1]:
                    nu = _mix_fraction(lm, m, fill)
                    rhs = star(lm * m, x, star(nu, y, z, alg), alg)
                    record("associativity", alg.distance(lhs, rhs), (lm, m, x, y, z))
    return AxiomReport(alg.name, samples, worst, witness)


# --------------------------------------------------------------------------
# Operad laws that the tests sweep exhaustively
# --------------------------------------------------------------------------


def all_functions(m: int, n: int):
    """Every ``θ: {1..m} -> {1..n}`` as a tuple of 1-based images."""
    return itertools.product(range(1, n + 1), repeat=m)


def block_map(theta: Sequence[int], arities: Sequence[int]) -> tuple[list[int], int]:
    """The map sending block ``i`` of ``p ∘ (r_θ(1), ...)`` onto block ``θ(i)``.

    ``arities[j-1]`` is the arity of ``r_j``.  Returns the 1-based images
    and the target arity.
    """
    offsets = np.concatenate([[0], np.cumsum(arities)]).astype(int).tolist()
    images = []
    for j in theta:
        images.extend(offsets[j - 1] + l + 1 for l in range(arities[j - 1]))
    return images, offsets[-1]
