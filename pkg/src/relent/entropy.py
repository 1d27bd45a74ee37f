"""Relative entropy and functors ``FinStat -> [0, ∞]``.

``RE`` sends ``(f, s): (X, q) -> (Y, r)`` to ``S(q, s ∘ r)``.  ``G`` and
``G'`` are the support-based functors that satisfy every hypothesis of
the characterisation except lower semicontinuity, so they are not
multiples of ``RE``.
"""

from __future__ import annotations

import math
import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from relent import kernels
from relent.errors import SpaceMismatch
from relent.extreal import INF, ZERO, ExtendedReal, ext
from relent.finstat import FinStatMorphism, prior
from relent.stochastic import ProbDist, support

GIBBS_TOL = 1e-10
# Float rounding can push an exactly-zero divergence a few ulps below zero.
_ROUNDING_FLOOR = -1e-12


def relative_entropy(q: ProbDist, p: ProbDist) -> ExtendedReal:
    """``S(q, p) = Σ_x q_x ln(q_x / p_x)`` in nats.

    A term with ``q_x = 0`` is 0 (even if ``p_x = 0``); a term with
    ``p_x = 0 < q_x`` is ∞.
    """
    if q.space != p.space:
        raise SpaceMismatch("relative entropy needs two distributions on the same set")
    total = kernels.re_sum(q.weights, p.weights)
    if math.isinf(total):
        return INF
    if total < 0.0:
        if total < _ROUNDING_FLOOR:
            raise ArithmeticError(f"relative entropy evaluated to {total!r}")
        total = 0.0
    return ExtendedReal(total)


def shannon_entropy(p: ProbDist) -> float:
    w = p.weights[p.weights > 0.0]
    return float(-np.sum(w * np.log(w)))


def re_functor(m: FinStatMorphism) -> ExtendedReal:
    return relative_entropy(m.q, prior(m))


def functor_G(m: FinStatMorphism) -> ExtendedReal:
    """0 if the true and predicted distributions have equal support, else ∞."""
    return ZERO if support(m.q) == support(prior(m)) else INF


def functor_Gprime(m: FinStatMorphism) -> ExtendedReal:
    p = prior(m)
    if support(m.q) != support(p):
        return INF
    return relative_entropy(m.q, p)


@dataclass(frozen=True)
class EntropyFunctor:
    """A named rule ``FinStatMorphism -> [0, ∞]``.

    ``tolerance`` is the deviation allowed when checking laws that hold
    exactly in real arithmetic; 0 for functors whose values are 0 or ∞.
    """

    name: str
    rule: Callable[[FinStatMorphism], ExtendedReal] = field(repr=False, compare=False)
    tolerance: float = 1e-8
    terms: tuple = field(default=(), repr=False, compare=False)

    def __call__(self, m: FinStatMorphism) -> ExtendedReal:
        return ext(self.rule(m))

    def __rmul__(self, c) -> EntropyFunctor:
        return scaled_sum_functor([(c, self)])

    def __add__(self, other: EntropyFunctor) -> EntropyFunctor:
        return scaled_sum_functor(_terms(self) + _terms(other))


def _terms(F: EntropyFunctor) -> list:
    return list(F.terms) if F.terms else [(ExtendedReal(1.0), F)]


RE = EntropyFunctor("RE", re_functor)
G = EntropyFunctor("G", functor_G, tolerance=0.0)
GPRIME = EntropyFunctor("Gprime", functor_Gprime)


def scaled_sum_functor(terms: Sequence[tuple]) -> EntropyFunctor:
    """``Σ c_i F_i`` evaluated with [0, ∞] arithmetic (so ``0 · ∞ = 0``)."""
    terms = tuple((ext(c), F) for c, F in terms)

    def rule(m):
        total = ZERO
        for c, F in terms:
            total = total + c * F(m)
        return total

    name = "+".join(f"{_fmt_coeff(c)}*{F.name}" for c, F in terms)
    tol = max((F.tolerance for c, F in terms if not c.is_zero), default=0.0)
    if any(c.is_inf for c, _ in terms):
        tol = 0.0
    elif tol:
        tol = tol * max(1.0, max(float(c) for c, _ in terms))
    return EntropyFunctor(name, rule, tolerance=tol, terms=terms)


def _fmt_coeff(c: ExtendedReal) -> str:
    if c.is_inf:
        return "inf"
    v = float(c)
    return repr(int(v)) if v.is_integer() else repr(v)


# --------------------------------------------------------------------------
# Fixtures that break the axioms (negative controls)
# --------------------------------------------------------------------------


def _domain_entropy(m: FinStatMorphism) -> ExtendedReal:
    return ExtendedReal(max(shannon_entropy(m.q), 0.0))


def _information_loss(m: FinStatMorphism) -> ExtendedReal:
    return ExtendedReal(max(shannon_entropy(m.q) - shannon_entropy(m.r), 0.0))


# Shannon entropy of the domain: not additive under composition.
DOMAIN_ENTROPY = EntropyFunctor("domain-entropy", _domain_entropy)
# H(q) - H(r): additive along composites, but nonzero on FP morphisms.
INFO_LOSS = EntropyFunctor("info-loss", _information_loss)

FUNCTORS = {
    "RE": RE,
    "G": G,
    "Gprime": GPRIME,
    "broken-fixture": DOMAIN_ENTROPY,
    "domain-entropy": DOMAIN_ENTROPY,
    "info-loss": INFO_LOSS,
}

_TERM = re.compile(r"^\s*(?:(inf|[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\*\s*)?([A-Za-z][\w-]*)\s*$")


def parse_functor(text: str) -> EntropyFunctor:
    """Parse ``"RE"``, ``"G"``, ``"2*RE+G"``, ``"inf*RE+0.5*Gprime"`` and so on."""
    if text in FUNCTORS:
        return FUNCTORS[text]
    terms = []
    for part in text.split("+"):
        match = _TERM.match(part)
        if not match or match.group(2) not in FUNCTORS:
            raise ValueError(f"cannot parse functor {text!r}")
        coeff, name = match.groups()
        c = INF if coeff == "inf" else ExtendedReal(float(coeff) if coeff else 1.0)
        terms.append((c, FUNCTORS[name]))
    return scaled_sum_functor(terms)
