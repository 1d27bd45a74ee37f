"""Finite sets, probability distributions and stochastic maps.

A stochastic map X ~> Y is a column-stochastic matrix whose entry
``(y, x)`` is the probability of ``y`` given ``x``; composition is matrix
multiplication.  A probability distribution on X is the same thing as a
stochastic map from the one-point set, and a function is the stochastic
map whose columns are point masses.

All objects are immutable: numpy buffers are copied on construction and
marked read-only.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

import numpy as np

from relent import kernels
from relent.errors import (
    CoefficientOutOfRange,
    DomainMismatch,
    DuplicateLabel,
    EmptySet,
    LengthMismatch,
    NegativeWeight,
    NotNormalized,
    NotStochastic,
    ParseError,
    ValidationError,
)

NORM_TOL = 1e-9
SUPPORT_EPS = 1e-12
# Slack for values produced by composing already-validated inputs.
DERIVED_TOL = 10 * NORM_TOL

LEFT_TAG = "L:"
RIGHT_TAG = "R:"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class FiniteSet:
    """An ordered set of distinct string labels; order fixes indexing."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if not labels:
            raise EmptySet("finite sets must have at least one element")
        for lab in labels:
            if not isinstance(lab, str):
                raise ValidationError(f"labels must be strings, got {lab!r}")
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            dup = next(lab for lab in labels if labels.count(lab) > 1)
            raise DuplicateLabel(f"duplicate label {dup!r}")
        self.labels = labels
        self._index = index

    @classmethod
    def range(cls, n: int, start: int = 0) -> FiniteSet:
        return cls(str(i) for i in range(start, start + n))

    @classmethod
    def one(cls) -> FiniteSet:
        return ONE

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown label {label!r}") from None

    def __contains__(self, label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"FiniteSet({list(self.labels)!r})"


ONE = FiniteSet(("*",))


def _as_set(space) -> FiniteSet:
    return space if isinstance(space, FiniteSet) else FiniteSet(space)


class ProbDist:
    """A validated probability distribution on a finite set.

    Weights are stored exactly as given; nothing is renormalised.
    """

    __slots__ = ("space", "weights")

    def __init__(self, space, weights, tol: float = NORM_TOL):
        space = _as_set(space)
        w = np.array(weights, dtype=np.float64).reshape(-1)
        if w.shape[0] != len(space):
            raise LengthMismatch(f"{w.shape[0]} weights for a set of size {len(space)}")
        if not np.all(w >= 0.0):
            bad = int(np.argmin(np.where(np.isnan(w), -np.inf, w)))
            raise NegativeWeight(f"weight {float(w[bad])!r} at {space.labels[bad]!r}")
        total = float(w.sum())
        if not abs(total - 1.0) <= tol:
            raise NotNormalized(f"weights sum to {total!r}")
        self.space = space
        self.weights = _frozen(w)

    def __getitem__(self, label: str) -> float:
        return float(self.weights[self.space.index(label)])

    def __len__(self) -> int:
        return len(self.space)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.space.labels, self.weights.tolist()))

    def as_kernel(self) -> StochasticMatrix:
        """The same distribution viewed as a stochastic map 1 ~> X."""
        return StochasticMatrix(ONE, self.space, self.weights.reshape(-1, 1))

    def allclose(self, other: ProbDist, atol: float) -> bool:
        return self.space == other.space and bool(
            np.max(np.abs(self.weights - other.weights)) <= atol
        )

    def __repr__(self) -> str:
        return f"ProbDist({self.as_dict()!r})"


def make_dist(space, weights) -> ProbDist:
    """Validate ``weights`` as a distribution on ``space``."""
    return ProbDist(space, weights)


def normalized(weights) -> np.ndarray:
    """Clip negatives to zero and rescale to unit mass (explicit repair)."""
    w = np.clip(np.asarray(weights, dtype=np.float64), 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise NotNormalized("cannot normalise a vector with no positive mass")
    return w / total


def point_mass(space, label: str) -> ProbDist:
    space = _as_set(space)
    w = np.zeros(len(space))
    w[space.index(label)] = 1.0
    return ProbDist(space, w)


def uniform(space) -> ProbDist:
    space = _as_set(space)
    return ProbDist(space, np.full(len(space), 1.0 / len(space)))


class StochasticMatrix:
    """A stochastic map ``domain ~> codomain``.

    ``entries`` has shape ``(len(codomain), len(domain))`` and every column
    is a probability distribution.
    """

    __slots__ = ("domain", "codomain", "entries")

    def __init__(self, domain, codomain, entries, tol: float = NORM_TOL):
        domain = _as_set(domain)
        codomain = _as_set(codomain)
        a = np.array(entries, dtype=np.float64)
        if a.ndim == 1 and len(domain) == 1:
            a = a.reshape(-1, 1)
        if a.shape != (len(codomain), len(domain)):
            raise LengthMismatch(
                f"entries have shape {a.shape}, expected {(len(codomain), len(domain))}"
            )
        if not np.all(a >= 0.0):
            raise NotStochastic("stochastic matrices must have nonnegative entries")
        sums = a.sum(axis=0)
        dev = np.abs(sums - 1.0)
        if not np.all(dev <= tol):
            j = int(np.argmax(np.where(np.isnan(dev), np.inf, dev)))
            raise NotStochastic(f"column {domain.labels[j]!r} sums to {float(sums[j])!r}")
        self.domain = domain
        self.codomain = codomain
        self.entries = _frozen(a)

    @classmethod
    def identity(cls, space) -> StochasticMatrix:
        space = _as_set(space)
        return cls(space, space, np.eye(len(space)))

    def column(self, label: str) -> ProbDist:
        j = self.domain.index(label)
        return ProbDist(self.codomain, self.entries[:, j], tol=DERIVED_TOL)

    def allclose(self, other: StochasticMatrix, atol: float) -> bool:
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and bool(np.max(np.abs(self.entries - other.entries)) <= atol)
        )

    def __repr__(self) -> str:
        return (
            f"StochasticMatrix({list(self.domain.labels)} ~> "
            f"{list(self.codomain.labels)}, {self.entries.tolist()})"
        )


class FiniteFunction:
    """A total function between finite sets, stored as an index array."""

    __slots__ = ("domain", "codomain", "image")

    def __init__(self, domain, codomain, image: Sequence[int]):
        domain = _as_set(domain)
        codomain = _as_set(codomain)
        img = np.array(image, dtype=np.int64).reshape(-1)
        if img.shape[0] != len(domain):
            raise LengthMismatch(f"function image has {img.shape[0]} entries for {len(domain)} points")
        if img.size and (img.min() < 0 or img.max() >= len(codomain)):
            raise ValidationError("function image outside codomain")
        self.domain = domain
        self.codomain = codomain
        self.image = _frozen(img)

    @classmethod
    def from_mapping(cls, domain, codomain, mapping: Mapping[str, str]) -> FiniteFunction:
        domain = _as_set(domain)
        codomain = _as_set(codomain)
        missing = [x for x in domain if x not in mapping]
        if missing:
            raise ValidationError(f"function undefined on {missing[0]!r}")
        extra = [x for x in mapping if x not in domain]
        if extra:
            raise ValidationError(f"function defined on unknown label {extra[0]!r}")
        return cls(domain, codomain, [codomain.index(mapping[x]) for x in domain])

    @classmethod
    def identity(cls, space) -> FiniteFunction:
        space = _as_set(space)
        return cls(space, space, np.arange(len(space)))

    @classmethod
    def constant(cls, domain, codomain=ONE, label: str | None = None) -> FiniteFunction:
        domain = _as_set(domain)
        codomain = _as_set(codomain)
        j = 0 if label is None else codomain.index(label)
        return cls(domain, codomain, np.full(len(domain), j))

    def __call__(self, label: str) -> str:
        return self.codomain.labels[self.image[self.domain.index(label)]]

    @property
    def mapping(self) -> dict[str, str]:
        cod = self.codomain.labels
        return {x: cod[j] for x, j in zip(self.domain.labels, self.image.tolist())}

    def fiber(self, label: str) -> list[str]:
        j = self.codomain.index(label)
        return [x for x, k in zip(self.domain.labels, self.image.tolist()) if k == j]

    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == len(self.codomain)

    def missed(self) -> list[str]:
        hit = set(self.image.tolist())
        return [y for j, y in enumerate(self.codomain.labels) if j not in hit]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteFunction)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.image, other.image)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"FiniteFunction({self.mapping!r})"


def compose_functions(g: FiniteFunction, f: FiniteFunction) -> FiniteFunction:
    """``g ∘ f``: first f, then g."""
    if f.codomain != g.domain:
        raise DomainMismatch("codomain of f differs from domain of g")
    return FiniteFunction(f.domain, g.codomain, g.image[f.image])


def compose(g: StochasticMatrix, f: StochasticMatrix) -> StochasticMatrix:
    """``(g ∘ f)_{zx} = Σ_y g_{zy} f_{yx}``."""
    if f.codomain != g.domain:
        raise DomainMismatch(
            f"cannot compose: {list(f.codomain.labels)} != {list(g.domain.labels)}"
        )
    return StochasticMatrix(f.domain, g.codomain, g.entries @ f.entries, tol=DERIVED_TOL)


def from_function(f: FiniteFunction) -> StochasticMatrix:
    """Embed a function as the matrix ``δ_{y f(x)}``."""
    a = np.zeros((len(f.codomain), len(f.domain)))
    a[f.image, np.arange(len(f.domain))] = 1.0
    return StochasticMatrix(f.domain, f.codomain, a)


def pushforward(k: StochasticMatrix | FiniteFunction, q: ProbDist) -> ProbDist:
    """Push ``q`` forward along a stochastic map or a function.

    For a function this is the fiber sum ``r_y = Σ_{f(x)=y} q_x``.
    """
    if k.domain != q.space:
        raise DomainMismatch("distribution does not live on the map's domain")
    if isinstance(k, FiniteFunction):
        w = kernels.fiber_sums(k.image, q.weights, len(k.codomain))
    else:
        w = k.entries @ q.weights
    return ProbDist(k.codomain, w, tol=DERIVED_TOL)


def support(p: ProbDist) -> frozenset[str]:
    """Labels carrying weight above :data:`SUPPORT_EPS`."""
    return frozenset(lab for lab, w in zip(p.space.labels, p.weights.tolist()) if w > SUPPORT_EPS)


def disjoint_union(x: FiniteSet, y: FiniteSet) -> FiniteSet:
    return FiniteSet([LEFT_TAG + a for a in x] + [RIGHT_TAG + b for b in y])


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise CoefficientOutOfRange(f"convex coefficient {lam!r} not in [0, 1]")
    return lam


def convex_combine_dists(lam: float, p: ProbDist, q: ProbDist) -> ProbDist:
    """``λp ⊕ (1-λ)q`` on the tagged disjoint union of the two spaces."""
    lam = _check_lambda(lam)
    w = np.concatenate([lam * p.weights, (1.0 - lam) * q.weights])
    return ProbDist(disjoint_union(p.space, q.space), w, tol=DERIVED_TOL)


def direct_sum_functions(f: FiniteFunction, g: FiniteFunction) -> FiniteFunction:
    """The function on X + Y restricting to f on X and g on Y."""
    img = np.concatenate([f.image, g.image + len(f.codomain)])
    return FiniteFunction(
        disjoint_union(f.domain, g.domain), disjoint_union(f.codomain, g.codomain), img
    )


def direct_sum_matrices(s: StochasticMatrix, t: StochasticMatrix) -> StochasticMatrix:
    """Block-diagonal ``s ⊕ t``."""
    m1, n1 = s.entries.shape
    m2, n2 = t.entries.shape
    a = np.zeros((m1 + m2, n1 + n2))
    a[:m1, :n1] = s.entries
    a[m1:, n1:] = t.entries
    return StochasticMatrix(
        disjoint_union(s.domain, t.domain), disjoint_union(s.codomain, t.codomain), a, tol=DERIVED_TOL
    )


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def _require(data, key, kind):
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"missing field {key!r}")
    val = data[key]
    if not isinstance(val, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return val


def dist_to_json(p: ProbDist) -> dict:
    return {"space": list(p.space.labels), "weights": p.weights.tolist()}


def dist_from_json(data) -> ProbDist:
    space = _require(data, "space", list)
    weights = _require(data, "weights", list)
    _check_numbers(weights, "weights")
    return ProbDist(space, weights)


def matrix_to_json(k: StochasticMatrix) -> dict:
    return {
        "domain": list(k.domain.labels),
        "codomain": list(k.codomain.labels),
        "entries": k.entries.tolist(),
    }


def matrix_from_json(data) -> StochasticMatrix:
    domain = _require(data, "domain", list)
    codomain = _require(data, "codomain", list)
    entries = _require(data, "entries", list)
    for row in entries:
        if not isinstance(row, list):
            raise ParseError("matrix entries must be a list of rows")
        _check_numbers(row, "entries")
    if entries and len({len(row) for row in entries}) != 1:
        raise ParseError("matrix rows have different lengths")
    return StochasticMatrix(domain, codomain, entries if entries else np.zeros((0, 0)))


def function_to_json(f: FiniteFunction) -> dict:
    return {"mapping": f.mapping}


def function_from_json(data, domain: FiniteSet, codomain: FiniteSet) -> FiniteFunction:
    mapping = _require(data, "mapping", dict)
    for k, v in mapping.items():
        if not isinstance(v, str):
            raise ParseError(f"mapping value for {k!r} must be a label string")
    return FiniteFunction.from_mapping(domain, codomain, mapping)


def _check_numbers(values, field):
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"non-numeric value {v!r} in {field!r}")
