"""Random generators and executable checks of the characterisation axioms.

Each check takes an :class:`~relent.entropy.EntropyFunctor` and returns a
:class:`LawReport`.  Randomness is derived per trial from
``(seed, stream, trial)`` so a report does not depend on the order in
which trials run.

Besides the axioms themselves and lower semicontinuity along explicit
families, the module rebuilds the finite commutative squares that pin
relative entropy down, such as the one giving the Cauchy equation for
``g(α)`` and the one behind the functional equation for ``h(α, β)``.
"""

from __future__ import annotations

import json
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from relent.entropy import GIBBS_TOL, RE, EntropyFunctor
from relent.errors import (
    AlphaTooLarge,
    FamilyShapeChanged,
    PreconditionError,
    RelentError,
)
from relent.extreal import INF, ExtendedReal, deviation, ext
from relent.finstat import (
    POINT,
    FinStatMorphism,
    FinStatObject,
    bang_morphism,
    compose_morphisms,
    convex_combine_morphisms,
    identity_morphism,
    is_optimal,
    make_morphism,
    morphism_to_json,
    optimal_hypothesis,
    relabel,
)
from relent.stochastic import (
    FiniteFunction,
    FiniteSet,
    ProbDist,
    StochasticMatrix,
    convex_combine_dists,
    disjoint_union,
)

SEMI_TOL = 1e-7
MAX_WITNESSES = 5
SURJECTION_DRAWS = 10_000

# stream ids keep the checks' random sequences independent
_STREAMS = {
    "object": 0,
    "morphism": 1,
    "functoriality": 2,
    "convex-linearity": 3,
    "fp-vanishing": 4,
    "distinguisher": 5,
    "entropy-square": 6,
}


@dataclass(frozen=True)
class GenConfig:
    seed: int = 1
    max_space_size: int = 6
    trials: int = 1000
    zero_mass_rate: float = 0.1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.max_space_size < 1:
            raise ValueError("max_space_size must be at least 1")
        if not 0.0 <= self.zero_mass_rate <= 1.0:
            raise ValueError("zero_mass_rate must lie in [0, 1]")

    def rng(self, trial: int, stream: str = "object") -> np.random.Generator:
        seed = int(self.seed) & 0xFFFF_FFFF_FFFF_FFFF
        return np.random.default_rng([seed, _STREAMS[stream], int(trial)])


# --------------------------------------------------------------------------
# Generators
# --------------------------------------------------------------------------


def labels(prefix: str, n: int) -> FiniteSet:
    return FiniteSet(f"{prefix}{i}" for i in range(n))


def gen_weights(rng: np.random.Generator, size: int, zero_rate: float) -> np.ndarray:
    """Uniform on the simplex, then some weights zeroed and the rest rescaled.

    At least one weight always survives.
    """
    w = rng.exponential(1.0, size)
    if zero_rate > 0.0:
        dead = rng.random(size) < zero_rate
        if dead.all():
            dead[rng.integers(size)] = False
        w[dead] = 0.0
    return w / w.sum()


def gen_dist(rng, space: FiniteSet, zero_rate: float) -> ProbDist:
    return ProbDist(space, gen_weights(rng, len(space), zero_rate))


def gen_object(cfg: GenConfig, size: int, rng=None, prefix: str = "x") -> FinStatObject:
    if not 1 <= size <= cfg.max_space_size:
        raise ValueError(f"size must lie in 1..{cfg.max_space_size}")
    rng = cfg.rng(0, "object") if rng is None else rng
    return FinStatObject.of(gen_dist(rng, labels(prefix, size), cfg.zero_mass_rate))


def random_surjection(rng, n: int, m: int) -> np.ndarray:
    """Uniform surjection ``n -> m`` by rejection, with a constructive fallback."""
    if m > n:
        raise ValueError("no surjection onto a larger set")
    for _ in range(SURJECTION_DRAWS):
        img = rng.integers(0, m, n)
        if len(np.unique(img)) == m:
            return img
    img = rng.integers(0, m, n)
    seeds = rng.permutation(n)[:m]
    img[seeds] = np.arange(m)
    return img


def random_section(rng, image: np.ndarray, m: int, zero_rate: float) -> np.ndarray:
    """A stochastic ``m -> n`` matrix supported on the fibers of ``image``."""
    n = image.shape[0]
    s = np.zeros((n, m))
    for y in range(m):
        fiber = np.flatnonzero(image == y)
        s[fiber, y] = gen_weights(rng, len(fiber), zero_rate)
    return s


def gen_morphism_from(
    rng, dom: FinStatObject, cod_size: int, zero_rate: float, prefix: str = "y"
) -> FinStatMorphism:
    n = len(dom.space)
    image = random_surjection(rng, n, cod_size)
    cod_set = labels(prefix, cod_size)
    f = FiniteFunction(dom.space, cod_set, image)
    r = ProbDist(cod_set, np.bincount(image, weights=dom.dist.weights, minlength=cod_size))
    s = StochasticMatrix(cod_set, dom.space, random_section(rng, image, cod_size, zero_rate))
    return make_morphism(dom, FinStatObject.of(r), f, s)


def gen_morphism(cfg: GenConfig, dom_size: int, cod_size: int, rng=None) -> FinStatMorphism:
    """A random morphism: surjective f, fiber-supported s, r the pushforward of q."""
    if cod_size > dom_size:
        raise ValueError("codomain cannot be larger than the domain")
    rng = cfg.rng(0, "morphism") if rng is None else rng
    dom = gen_object(cfg, dom_size, rng, prefix="x")
    return gen_morphism_from(rng, dom, cod_size, cfg.zero_mass_rate)


def _random_sizes(rng, cfg: GenConfig, k: int) -> list[int]:
    sizes = [int(rng.integers(1, cfg.max_space_size + 1))]
    for _ in range(k - 1):
        sizes.append(int(rng.integers(1, sizes[-1] + 1)))
    return sizes


def gen_composable_pair(cfg: GenConfig, rng) -> tuple[FinStatMorphism, FinStatMorphism]:
    nx, ny, nz = _random_sizes(rng, cfg, 3)
    dom = gen_object(cfg, nx, rng, prefix="x")
    m1 = gen_morphism_from(rng, dom, ny, cfg.zero_mass_rate, prefix="y")
    m2 = gen_morphism_from(rng, m1.codomain, nz, cfg.zero_mass_rate, prefix="z")
    return m1, m2


def gen_random_morphism(cfg: GenConfig, rng) -> FinStatMorphism:
    nx, ny = _random_sizes(rng, cfg, 2)
    return gen_morphism(cfg, nx, ny, rng)


def gen_fp_morphism(cfg: GenConfig, rng) -> FinStatMorphism:
    nx, ny = _random_sizes(rng, cfg, 2)
    q = gen_dist(rng, labels("x", nx), cfg.zero_mass_rate)
    f = FiniteFunction(q.space, labels("y", ny), random_surjection(rng, nx, ny))
    return optimal_hypothesis(f, q)


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------


def _num(x):
    if isinstance(x, ExtendedReal):
        return x.to_json()
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


@dataclass
class LawReport:
    law: str
    functor: str
    trials: int
    tolerance: float
    max_deviation: float = 0.0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def observe(self, dev: float, witness: Callable[[], dict] | None = None) -> None:
        if dev > self.max_deviation or dev != dev:
            self.max_deviation = math.inf if dev != dev else dev
        if not dev <= self.tolerance:
            self.violation_count += 1
            if len(self.violations) < MAX_WITNESSES:
                entry = {"deviation": _num(dev)}
                if witness is not None:
                    entry.update(witness())
                self.violations.append(entry)

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "functor": self.functor,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "max_deviation": _num(self.max_deviation),
            "passed": self.passed,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "notes": {k: _num(v) for k, v in self.notes.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.law} [{self.functor}] trials={self.trials} "
            f"max_dev={_num(self.max_deviation)} tol={self.tolerance}"
        )


def _default_tol(F: EntropyFunctor, tol):
    return F.tolerance if tol is None else tol


def _witness(trial, morphisms, **values):
    def build():
        return {
            "trial": trial,
            "morphisms": [morphism_to_json(m) for m in morphisms],
            "values": {k: _num(v) for k, v in values.items()},
        }

    return build


# --------------------------------------------------------------------------
# The three axioms
# --------------------------------------------------------------------------


def check_functoriality(F: EntropyFunctor, cfg: GenConfig, tol: float | None = None) -> LawReport:
    """``F((g,t) ∘ (f,s)) = F(f,s) + F(g,t)`` over random composable pairs."""
    report = LawReport("functoriality", F.name, cfg.trials, _default_tol(F, tol))
    infinite = 0
    for trial in range(cfg.trials):
        rng = cfg.rng(trial, "functoriality")
        try:
            m1, m2 = gen_composable_pair(cfg, rng)
            whole = F(compose_morphisms(m2, m1))
            parts = F(m1) + F(m2)
        except Exception as exc:  # reports never raise
            report.observe(math.inf, lambda: {"trial": trial, "error": repr(exc)})
            continue
        infinite += parts.is_inf
        report.observe(
            deviation(whole, parts),
            _witness(trial, [m1, m2], composite=whole, sum=parts),
        )
    report.notes["infinite_cases"] = infinite
    return report


def check_convex_linearity(F: EntropyFunctor, cfg: GenConfig, tol: float | None = None) -> LawReport:
    """``F(λm ⊕ (1-λ)n) = λF(m) + (1-λ)F(n)``; every tenth trial uses λ = 0 or 1."""
    report = LawReport("convex-linearity", F.name, cfg.trials, _default_tol(F, tol))
    endpoints = 0
    for trial in range(cfg.trials):
        rng = cfg.rng(trial, "convex-linearity")
        try:
            if trial % 10 == 0:
                lam = 0.0
            elif trial % 10 == 1:
                lam = 1.0
            else:
                lam = float(rng.random())
            endpoints += lam in (0.0, 1.0)
            m = gen_random_morphism(cfg, rng)
            n = gen_random_morphism(cfg, rng)
            lhs = F(convex_combine_morphisms(lam, m, n))
            rhs = lam * F(m) + (1.0 - lam) * F(n)
        except Exception as exc:
            report.observe(math.inf, lambda: {"trial": trial, "error": repr(exc)})
            continue
        report.observe(
            deviation(lhs, rhs), _witness(trial, [m, n], lam=lam, combined=lhs, mixed=rhs)
        )
    report.notes["endpoint_trials"] = endpoints
    return report


def check_fp_vanishing(F: EntropyFunctor, cfg: GenConfig, tol: float | None = None) -> LawReport:
    """``F`` is 0 on morphisms built by :func:`optimal_hypothesis`."""
    if tol is None:
        tol = min(F.tolerance, GIBBS_TOL)
    report = LawReport("fp-vanishing", F.name, cfg.trials, tol)
    for trial in range(cfg.trials):
        rng = cfg.rng(trial, "fp-vanishing")
        try:
            m = gen_fp_morphism(cfg, rng)
            value = F(m)
        except Exception as exc:
            report.observe(math.inf, lambda: {"trial": trial, "error": repr(exc)})
            continue
        report.observe(deviation(value, 0.0), _witness(trial, [m], value=value))
    return report


# --------------------------------------------------------------------------
# Lower semicontinuity
# --------------------------------------------------------------------------


def _same_shape(a: FinStatMorphism, b: FinStatMorphism) -> bool:
    return a.f == b.f


def tail_liminf(values: Sequence[ExtendedReal]) -> ExtendedReal:
    """Estimate ``liminf`` from the second half of a sampled sequence.

    The estimate is the tail minimum (∞ above every finite value), except
    that a finite tail that keeps climbing without its steps shrinking
    (last step at least half the first) is read as diverging to ∞.
    """
    tail = list(values[len(values) // 2:]) or list(values[-1:])
    finite = [float(v) for v in tail if not v.is_inf]
    if not finite:
        return INF
    if len(finite) == len(tail) and len(tail) >= 3:
        steps = np.diff(finite)
        if np.all(steps > 0.0) and steps[-1] >= 0.5 * steps[0]:
            return INF
    return ExtendedReal(min(finite))


def check_lower_semicontinuity(
    F: EntropyFunctor,
    family: Callable[[float], FinStatMorphism],
    t_sequence: Sequence[float],
    limit: float = 0.0,
    tol: float = SEMI_TOL,
    name: str = "family",
) -> LawReport:
    """``F(m(limit)) <= liminf F(m(t_i))`` along a path with fixed ``f``."""
    at_limit = family(limit)
    values = []
    for t in t_sequence:
        m = family(t)
        if not _same_shape(m, at_limit):
            raise FamilyShapeChanged(f"family changes its function or sets at t={t!r}")
        values.append(F(m))
    lim = F(at_limit)
    lower = tail_liminf(values)
    if lower.is_inf:
        dev = 0.0
    elif lim.is_inf:
        dev = math.inf
    else:
        dev = max(0.0, float(lim) - float(lower))
    report = LawReport(f"semicontinuity:{name}", F.name, len(values), tol)
    report.observe(dev, lambda: {"values": [_num(v) for v in values], "limit_value": _num(lim)})
    report.notes["limit_value"] = lim
    report.notes["liminf_estimate"] = lower
    report.notes["last_value"] = values[-1] if values else lim
    return report


def _two(weights) -> ProbDist:
    return ProbDist(("0", "1"), weights)


def q_of(alpha: float) -> ProbDist:
    """``q(α) = (α, 1 - α)`` on ``2 = {0, 1}``."""
    return _two([alpha, 1.0 - alpha])


def vanishing_hypothesis_family(t: float) -> FinStatMorphism:
    """Bang morphism with q = (1/2, 1/2) and hypothesis (t, 1 - t); F(limit) = ∞."""
    return bang_morphism(FinStatObject.of(_two([0.5, 0.5])), q_of(t))


def jump_down_family(t: float) -> FinStatMorphism:
    """q = (t, 1 - t) against hypothesis (0, 1): ∞ for t > 0, 0 at t = 0."""
    return bang_morphism(FinStatObject.of(_two([t, 1.0 - t])), _two([0.0, 1.0]))


_FOUR = FiniteSet(("0", "1", "2", "3"))
_AB = FiniteSet(("a", "b"))
_FOUR_TO_AB = FiniteFunction(_FOUR, _AB, [0, 0, 1, 1])
_FOUR_SECTION = StochasticMatrix(_AB, _FOUR, [[0.5, 0.0], [0.5, 0.0], [0.0, 0.0], [0.0, 1.0]])


def vanishing_outcome_family(t: float) -> FinStatMorphism:
    """An outcome whose probability t tends to 0 while its fiber is mispredicted.

    q = (0.3(1-t), 0.7(1-t), t, 0), f = 0,1 -> a; 2,3 -> b, and the
    hypothesis puts all of b's mass on 3.  Values are ∞ for t > 0 and
    finite at t = 0.
    """
    q = ProbDist(_FOUR, [0.3 * (1.0 - t), 0.7 * (1.0 - t), t, 0.0])
    r = ProbDist(_AB, [1.0 - t, t])
    return make_morphism(FinStatObject.of(q), FinStatObject.of(r), _FOUR_TO_AB, _FOUR_SECTION)


def constant_family(t: float) -> FinStatMorphism:
    return bang_morphism(FinStatObject.of(_two([0.3, 0.7])), _two([0.6, 0.4]))


DEFAULT_T_SEQUENCE = tuple(10.0 ** -k for k in range(1, 16))

SEMICONTINUITY_FAMILIES: dict[str, Callable[[float], FinStatMorphism]] = {
    "vanishing-hypothesis": vanishing_hypothesis_family,
    "jump-down": jump_down_family,
    "vanishing-outcome": vanishing_outcome_family,
}


def check_shipped_families(F: EntropyFunctor, tol: float = SEMI_TOL) -> list[LawReport]:
    return [
        check_lower_semicontinuity(F, fam, DEFAULT_T_SEQUENCE, 0.0, tol, name)
        for name, fam in SEMICONTINUITY_FAMILIES.items()
    ]


# --------------------------------------------------------------------------
# Diagrams from the uniqueness argument
# --------------------------------------------------------------------------


_THREE = FiniteSet(("0", "1", "2"))
_TWO = FiniteSet(("0", "1"))
_DELTA0 = _two([1.0, 0.0])


def g_value(F: EntropyFunctor, alpha: float) -> ExtendedReal:
    """``g(α) = F((2, (1, 0)) -> (1, 1))`` with hypothesis ``q(α)``."""
    return F(bang_morphism(FinStatObject.of(_DELTA0), q_of(alpha)))


def cauchy_square(alpha: float, beta: float) -> dict[str, FinStatMorphism]:
    """The commuting square on ``(3, (1, 0, 0))`` that yields ``g(αβ) = g(α) + g(β)``.

    The top edge is built as the convex combination
    ``1·(bang with hypothesis q(β)) ⊕ 0·identity(1, 1)`` and relabelled.
    """
    src = FinStatObject.of(ProbDist(_THREE, [1.0, 0.0, 0.0]))
    mid = FinStatObject.of(_DELTA0)
    combo = convex_combine_morphisms(
        1.0, bang_morphism(FinStatObject.of(_DELTA0), q_of(beta)), identity_morphism(POINT)
    )
    top = relabel(combo, _THREE.labels, _TWO.labels)
    denom = 1.0 - alpha * beta
    gamma = 0.0 if denom == 0.0 else alpha * (1.0 - beta) / denom
    left = make_morphism(
        src,
        mid,
        FiniteFunction(_THREE, _TWO, [0, 1, 1]),
        StochasticMatrix(_TWO, _THREE, [[1.0, 0.0], [0.0, gamma], [0.0, 1.0 - gamma]]),
    )
    right = bang_morphism(mid, q_of(alpha))
    bottom = bang_morphism(mid, q_of(alpha * beta))
    return {"top": top, "left": left, "right": right, "bottom": bottom, "top_combo": combo}


def _square_gap(sq) -> float:
    """Entrywise gap between the sections of the two composites."""
    a = compose_morphisms(sq["right"], sq["top"])
    b = compose_morphisms(sq["bottom"], sq["left"])
    if a.f != b.f:
        return math.inf
    return float(np.max(np.abs(a.s.entries - b.s.entries)))


def check_cauchy_equation(
    F: EntropyFunctor,
    alpha_grid: Sequence[float],
    beta_grid: Sequence[float],
    log_constant: float | None = None,
    tol: float = 1e-9,
) -> LawReport:
    """For each (α, β): the square commutes, its left edge is in FP, the
    values satisfy ``g(αβ) = g(α) + g(β)``, and (if ``log_constant`` is
    given) ``g(α) = -c ln α``.
    """
    report = LawReport("cauchy-equation", F.name, len(alpha_grid) * len(beta_grid), tol)
    worst = {"commute": 0.0, "equation": 0.0, "square_values": 0.0, "logarithm": 0.0}
    for a in alpha_grid:
        for b in beta_grid:
            try:
                sq = cauchy_square(a, b)
            except RelentError as exc:
                report.observe(math.inf, lambda: {"alpha": a, "beta": b, "error": repr(exc)})
                continue
            ga, gb, gab = g_value(F, a), g_value(F, b), g_value(F, a * b)
            devs = {
                "commute": max(_square_gap(sq), 0.0 if is_optimal(sq["left"], tol) else math.inf),
                "equation": deviation(gab, ga + gb),
                # the same equation read off the square via functoriality and convex linearity
                "square_values": max(
                    deviation(F(compose_morphisms(sq["right"], sq["top"])), ga + F(sq["top"])),
                    deviation(F(sq["top_combo"]), 1.0 * gb + 0.0 * F(identity_morphism(POINT))),
                    deviation(F(sq["left"]) + gab, ga + gb),
                ),
            }
            if log_constant is not None:
                devs["logarithm"] = deviation(ga, ext(log_constant) * ExtendedReal(-math.log(a)))
            for k, v in devs.items():
                worst[k] = max(worst[k], v)
            report.observe(
                max(devs.values()),
                lambda: {"alpha": a, "beta": b, "g": [_num(ga), _num(gb), _num(gab)],
                         "deviations": {k: _num(v) for k, v in devs.items()}},
            )
    report.notes.update(worst)
    return report


def entropy_square(p: ProbDist, r: ProbDist, alpha: float) -> dict[str, FinStatMorphism]:
    """The square on ``(X + X, p ⊕ 0)`` with the explicit sections s and t."""
    n = len(p.space)
    if p.space != r.space:
        raise PreconditionError("p and r must live on the same set")
    rw, pw = r.weights, p.weights
    if np.any(rw <= 0.0):
        raise PreconditionError("r must have full support")
    if not 0.0 < alpha < float(rw.min()):
        raise AlphaTooLarge(f"need 0 < α < min r = {float(rw.min())!r}, got {alpha!r}")
    X = p.space
    XX = disjoint_union(X, X)
    src = FinStatObject.of(convex_combine_dists(1.0, p, p))
    obj_p = FinStatObject.of(p)
    mid = FinStatObject.of(_DELTA0)

    ratio = alpha * pw / rw
    s = np.zeros((2 * n, n))
    s[np.arange(n), np.arange(n)] = ratio
    s[n + np.arange(n), np.arange(n)] = 1.0 - ratio
    top = make_morphism(
        src, obj_p, FiniteFunction(XX, X, np.tile(np.arange(n), 2)), StochasticMatrix(X, XX, s)
    )
    t = np.zeros((2 * n, 2))
    t[:n, 0] = pw
    t[n:, 1] = (rw - alpha * pw) / (1.0 - alpha)
    left = make_morphism(
        src, mid, FiniteFunction(XX, _TWO, np.repeat([0, 1], n)), StochasticMatrix(_TWO, XX, t)
    )
    right = bang_morphism(obj_p, r)
    bottom = bang_morphism(mid, q_of(alpha))
    return {"top": top, "left": left, "right": right, "bottom": bottom}


def direct_relative_entropy(p: Sequence[float], r: Sequence[float]) -> float:
    """Plain-Python ``Σ p_x ln(p_x / r_x)`` for full-support ``r`` (test oracle)."""
    total = 0.0
    for px, rx in zip(p, r):
        if px > 0.0:
            total += px * math.log(px / rx)
    return total


def replicate_entropy_square(
    p: ProbDist,
    r: ProbDist,
    alpha: float,
    F: EntropyFunctor = RE,
    log_constant: float = 1.0,
    tol: float = 1e-8,
    commute_tol: float = 1e-9,
) -> LawReport:
    """Rebuild the square and read ``F(bang(p; r))`` off it.

    Going right-then-down equals going down-then-right; the left edge is
    in FP and the bottom edge is ``g(α) = -c ln α``, while the top edge is
    a ``p``-weighted combination of ``g(α p_x / r_x)``.  Subtracting gives
    ``F(bang(p; r)) = c Σ p_x ln(p_x / r_x)``, compared with the direct sum.
    """
    sq = entropy_square(p, r, alpha)
    report = LawReport("entropy-square", F.name, 1, tol)
    gap = _square_gap(sq)
    fp_ok = is_optimal(sq["left"], commute_tol)
    diagonal = F(compose_morphisms(sq["right"], sq["top"]))
    other_way = F(compose_morphisms(sq["bottom"], sq["left"]))
    minus_log = ext(log_constant) * ExtendedReal(-math.log(alpha))
    top_value = F(sq["top"])
    # the top edge as a convex combination of g-type bang morphisms
    top_expected = ExtendedReal(0.0)
    for px, rx in zip(p.weights.tolist(), r.weights.tolist()):
        top_expected = top_expected + px * g_value(F, alpha * px / rx)
    oracle = log_constant * direct_relative_entropy(p.weights.tolist(), r.weights.tolist())
    derived = float(diagonal) - float(top_value) if not (diagonal.is_inf or top_value.is_inf) else math.inf
    devs = {
        "commute": gap if fp_ok else math.inf,
        "diagonal": max(deviation(diagonal, minus_log), deviation(diagonal, other_way)),
        "top_combination": deviation(top_value, top_expected),
        "derived_vs_direct": deviation(derived, oracle) if derived >= 0 else abs(derived - oracle),
        "functor_vs_direct": deviation(F(sq["right"]), oracle),
    }
    report.notes.update(devs)
    report.notes["derived"] = derived
    report.notes["direct"] = oracle
    commute_dev = 0.0 if devs["commute"] <= commute_tol else math.inf
    report.observe(
        max(commute_dev, *(v for k, v in devs.items() if k != "commute")),
        lambda: {"p": p.weights.tolist(), "r": r.weights.tolist(), "alpha": alpha,
                 "deviations": {k: _num(v) for k, v in devs.items()}},
    )
    return report


def compute_h(alpha: float, beta: float, F: EntropyFunctor = RE) -> ExtendedReal:
    """``h(α, β) = F((2, q(α)) -> (1, 1))`` with hypothesis ``q(β)``."""
    return F(bang_morphism(FinStatObject.of(q_of(alpha)), q_of(beta)))


def h_square(alpha: float, beta: float) -> dict[str, FinStatMorphism]:
    """The square on ``(4, ½q(α) ⊕ ½q(β))`` behind the h functional equation."""
    four = FiniteSet(("0", "1", "2", "3"))
    w = [alpha / 2, (1 - alpha) / 2, beta / 2, (1 - beta) / 2]
    src = FinStatObject.of(ProbDist(four, w))
    half = FinStatObject.of(q_of(0.5))
    mid = FinStatObject.of(q_of((alpha + beta) / 2))
    s = [[beta, 0.0], [1 - beta, 0.0], [0.0, beta], [0.0, 1 - beta]]
    t = [[0.5, 0.0], [0.0, 0.5], [0.5, 0.0], [0.0, 0.5]]
    top = make_morphism(src, half, FiniteFunction(four, _TWO, [0, 0, 1, 1]), StochasticMatrix(_TWO, four, s))
    left = make_morphism(src, mid, FiniteFunction(four, _TWO, [0, 1, 0, 1]), StochasticMatrix(_TWO, four, t))
    right = bang_morphism(half, q_of(0.5))
    bottom = bang_morphism(mid, q_of(beta))
    return {"top": top, "left": left, "right": right, "bottom": bottom}


def h_identity_sides(alpha: float, beta: float, F: EntropyFunctor = RE):
    ab = alpha + beta
    lhs = compute_h(alpha, beta, F)
    rhs = (
        ab * compute_h(alpha / ab, 0.5, F)
        + (2 - ab) * compute_h((1 - alpha) / (2 - ab), 0.5, F)
        + 2 * compute_h(ab / 2, beta, F)
    )
    return lhs, rhs


def check_h_identity(alpha: float, beta: float, F: EntropyFunctor = RE, tol: float = 1e-8) -> LawReport:
    """The square commutes and ``h(α, β)`` satisfies the functional equation."""
    if alpha == beta:
        raise PreconditionError("the h identity needs α != β")
    report = LawReport("h-identity", F.name, 1, tol)
    sq = h_square(alpha, beta)
    gap = _square_gap(sq)
    fp = is_optimal(sq["right"], 1e-9)
    lhs, rhs = h_identity_sides(alpha, beta, F)
    dev = max(deviation(lhs, rhs), gap if fp else math.inf)
    report.observe(dev, lambda: {"alpha": alpha, "beta": beta, "lhs": _num(lhs), "rhs": _num(rhs)})
    report.notes.update({"lhs": lhs, "rhs": rhs, "commute": gap})
    return report


def check_h_grid(alphas, betas, F: EntropyFunctor = RE, tol: float = 1e-8) -> LawReport:
    report = LawReport("h-identity-grid", F.name, 0, tol)
    for a in alphas:
        for b in betas:
            if a == b:
                continue
            sub = check_h_identity(a, b, F, tol)
            report.trials += 1
            report.observe(sub.max_deviation, lambda: {"alpha": a, "beta": b})
    return report


def check_h_symmetry(alphas, F: EntropyFunctor = RE, tol: float = 1e-10) -> LawReport:
    """``h(α, ½) = h(1 - α, ½)``."""
    report = LawReport("h-symmetry", F.name, len(alphas), tol)
    for a in alphas:
        lhs, rhs = compute_h(a, 0.5, F), compute_h(1 - a, 0.5, F)
        report.observe(deviation(lhs, rhs), lambda: {"alpha": a, "lhs": _num(lhs), "rhs": _num(rhs)})
    return report


# --------------------------------------------------------------------------
# Distinguishing functors
# --------------------------------------------------------------------------


@dataclass
class Distinguisher:
    """Morphisms on which no single ``c`` in [0, ∞] gives ``F1 = c · F2``."""

    witnesses: list
    values: list
    constraints: list

    def to_json(self) -> dict:
        return {
            "witnesses": [morphism_to_json(m) for m in self.witnesses],
            "values": [[_num(a), _num(b)] for a, b in self.values],
            "constraints": [_fmt_interval(iv) for iv in self.constraints],
        }


# Feasible c as (lo, hi, lo_open); None when empty.
_ALL = (0.0, math.inf, False)


def _feasible(a: ExtendedReal, b: ExtendedReal):
    if b.is_zero:
        return _ALL if a.is_zero else None
    if b.is_inf:
        if a.is_zero:
            return (0.0, 0.0, False)
        return (0.0, math.inf, True) if a.is_inf else None
    if a.is_inf:
        return (math.inf, math.inf, False)
    c = float(a) / float(b)
    return (c, c, False)


def _intersect(u, v, rtol=1e-6):
    if u is None or v is None:
        return None
    lo = max(u[0], v[0])
    hi = min(u[1], v[1])
    lo_open = (u[2] and u[0] == lo) or (v[2] and v[0] == lo)
    if lo > hi:
        # two point constraints that agree up to rounding
        if u[0] == u[1] and v[0] == v[1] and math.isfinite(lo) and lo - hi <= rtol * lo:
            return (hi, hi, False)
        return None
    if lo == hi and lo_open:
        return None
    return (lo, hi, lo_open)


def _fmt_interval(iv):
    if iv is None:
        return "empty"
    lo, hi, lo_open = iv
    return f"{'(' if lo_open else '['}{_num(lo)}, {_num(hi)}]"


def find_distinguisher(F1: EntropyFunctor, F2: EntropyFunctor, cfg: GenConfig) -> Distinguisher | None:
    """Search generated morphisms for a witness that ``F1`` is no multiple of ``F2``.

    Candidates cycle through FP morphisms, bang morphisms with random
    hypotheses and general random morphisms.
    """
    seen = []
    for trial in range(cfg.trials):
        rng = cfg.rng(trial, "distinguisher")
        kind = trial % 3
        if kind == 0:
            m = gen_fp_morphism(cfg, rng)
        elif kind == 1:
            n = int(rng.integers(1, cfg.max_space_size + 1))
            space = labels("x", n)
            m = bang_morphism(
                FinStatObject.of(gen_dist(rng, space, cfg.zero_mass_rate)),
                gen_dist(rng, space, cfg.zero_mass_rate),
            )
        else:
            m = gen_random_morphism(cfg, rng)
        a, b = F1(m), F2(m)
        iv = _feasible(a, b)
        if iv is None:
            return Distinguisher([m], [(a, b)], [iv])
        for m0, vals0, iv0 in seen:
            if _intersect(iv0, iv) is None:
                return Distinguisher([m0, m], [vals0, (a, b)], [iv0, iv])
        if iv != _ALL and all(_intersect(iv0, iv) != iv0 for _, _, iv0 in seen) or not seen:
            seen.append((m, (a, b), iv))
    return None


# --------------------------------------------------------------------------
# Suites
# --------------------------------------------------------------------------


def cauchy_grid(k: int = 20) -> list[float]:
    return [(i + 1) / k for i in range(k)]


def h_grid(k: int = 15) -> list[float]:
    return [(i + 1) / (k + 1) for i in range(k)]


def run_suite(F: EntropyFunctor, cfg: GenConfig, with_re_constructions: bool | None = None) -> dict:
    """Every law for ``F``; the diagram constructions run for RE-like functors.

    Returns ``{"reports": [...], "distinguisher": ...}`` where the
    distinguisher (against RE) is included for functors other than RE.
    """
    reports = [
        check_functoriality(F, cfg),
        check_convex_linearity(F, cfg),
        check_fp_vanishing(F, cfg),
    ]
    if with_re_constructions is None:
        with_re_constructions = F.name == "RE"
    if with_re_constructions:
        reports.extend(check_shipped_families(F))
        reports.append(check_cauchy_equation(F, cauchy_grid(), cauchy_grid(), log_constant=1.0))
        rng = cfg.rng(0, "entropy-square")
        sq = LawReport("entropy-square", F.name, 0, 1e-8)
        for i in range(100):
            n = int(rng.integers(1, cfg.max_space_size + 1))
            space = labels("x", n)
            p = gen_dist(rng, space, cfg.zero_mass_rate)
            r = gen_dist(rng, space, 0.0)
            alpha = float(rng.uniform(0.05, 0.95)) * float(r.weights.min())
            sub = replicate_entropy_square(p, r, alpha, F)
            sq.trials += 1
            sq.observe(sub.max_deviation, lambda: {"index": i, **sub.violations[0]} if sub.violations else {})
        reports.append(sq)
        reports.append(check_h_grid(h_grid(), h_grid(), F))
        reports.append(check_h_symmetry([(i + 0.5) / 50 for i in range(50)], F))
    distinguisher = None
    if F.name != "RE":
        distinguisher = find_distinguisher(F, RE, cfg)
    return {"reports": reports, "distinguisher": distinguisher}
