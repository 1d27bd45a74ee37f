"""Hot numeric kernels.

Every kernel has two implementations with identical semantics: a loop
version compiled by numba and a vectorised numpy version.  The public
names at the bottom of the module point at one or the other depending on
:data:`relent._accel.NUMBA_ENABLED`.  Both are importable directly
(``numba_kernels`` / ``numpy_kernels``) so tests and the benchmark can
compare them.

Index conventions: a finite function is an ``int64`` array ``image`` with
``image[x]`` the index of f(x); a stochastic matrix Y ~> X is stored as an
``(|X|, |Y|)`` array with columns summing to one.
"""

from types import SimpleNamespace

import numpy as np

from relent._accel import HAS_NUMBA, NUMBA_ENABLED, njit


# --------------------------------------------------------------------------
# numba loop versions
# --------------------------------------------------------------------------


def _re_sum_loop(q, p):
    order = np.argsort(-q, kind="mergesort")
    total = 0.0
    for k in range(order.shape[0]):
        i = order[k]
        qi = q[i]
        if qi == 0.0:
            continue
        pi = p[i]
        if pi == 0.0:
            return np.inf
        total += qi * np.log(qi / pi)
    return total


def _fiber_sums_loop(image, weights, m):
    out = np.zeros(m)
    for x in range(image.shape[0]):
        out[image[x]] += weights[x]
    return out


def _prior_loop(image, s, r):
    n = image.shape[0]
    out = np.empty(n)
    for x in range(n):
        y = image[x]
        out[x] = s[x, y] * r[y]
    return out


def _off_fiber_max_loop(image, s):
    best = 0.0
    bx = -1
    by = -1
    for x in range(s.shape[0]):
        for y in range(s.shape[1]):
            if image[x] != y and s[x, y] > best:
                best = s[x, y]
                bx = x
                by = y
    return best, bx, by


def _section_defect_loop(image, s, m):
    # (f o s)[y', y] - delta(y', y); returns the worst entry and its position
    comp = np.zeros((m, s.shape[1]))
    for x in range(s.shape[0]):
        for y in range(s.shape[1]):
            comp[image[x], y] += s[x, y]
    best = 0.0
    by2 = -1
    by = -1
    for i in range(m):
        for j in range(s.shape[1]):
            target = 1.0 if i == j else 0.0
            d = abs(comp[i, j] - target)
            if d > best:
                best = d
                by2 = i
                by = j
    return best, by2, by


# --------------------------------------------------------------------------
# numpy versions
# --------------------------------------------------------------------------


def _re_sum_np(q, p):
    order = np.argsort(-q, kind="mergesort")
    q = q[order]
    p = p[order]
    live = q > 0.0
    if np.any(p[live] == 0.0):
        return np.inf
    ql = q[live]
    terms = ql * np.log(ql / p[live])
    # same summation order as the loop kernel; only log() rounding may differ
    total = 0.0
    for t in terms.tolist():
        total += t
    return total


def _fiber_sums_np(image, weights, m):
    out = np.zeros(m)
    np.add.at(out, image, weights)
    return out


def _prior_np(image, s, r):
    return s[np.arange(image.shape[0]), image] * r[image]


def _off_fiber_max_np(image, s):
    masked = s.copy()
    masked[np.arange(image.shape[0]), image] = 0.0
    flat = int(np.argmax(masked))
    best = float(masked.flat[flat])
    if best <= 0.0:
        return 0.0, -1, -1
    bx, by = divmod(flat, s.shape[1])
    return best, bx, by


def _section_defect_np(image, s, m):
    comp = np.zeros((m, s.shape[1]))
    np.add.at(comp, image, s)
    dev = np.abs(comp - np.eye(m, s.shape[1]))
    flat = int(np.argmax(dev))
    best = float(dev.flat[flat])
    if best <= 0.0:
        return 0.0, -1, -1
    i, j = divmod(flat, s.shape[1])
    return best, i, j


numpy_kernels = SimpleNamespace(
    re_sum=_re_sum_np,
    fiber_sums=_fiber_sums_np,
    prior=_prior_np,
    off_fiber_max=_off_fiber_max_np,
    section_defect=_section_defect_np,
)

if HAS_NUMBA:
    numba_kernels = SimpleNamespace(
        re_sum=njit(_re_sum_loop),
        fiber_sums=njit(_fiber_sums_loop),
        prior=njit(_prior_loop),
        off_fiber_max=njit(_off_fiber_max_loop),
        section_defect=njit(_section_defect_loop),
    )
else:  # pragma: no cover
    numba_kernels = None

active = numba_kernels if NUMBA_ENABLED else numpy_kernels
BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def re_sum(q: np.ndarray, p: np.ndarray) -> float:
    """Sum of q_x ln(q_x/p_x) with 0 ln(0/p) = 0 and q ln(q/0) = inf.

    Terms are accumulated in descending order of q_x (stable on ties).
    """
    return float(active.re_sum(q, p))


def fiber_sums(image: np.ndarray, weights: np.ndarray, m: int) -> np.ndarray:
    return active.fiber_sums(image, weights, m)


def prior(image: np.ndarray, s: np.ndarray, r: np.ndarray) -> np.ndarray:
    return active.prior(image, s, r)


def off_fiber_max(image: np.ndarray, s: np.ndarray) -> tuple[float, int, int]:
    best, x, y = active.off_fiber_max(image, s)
    return float(best), int(x), int(y)


def section_defect(image: np.ndarray, s: np.ndarray, m: int) -> tuple[float, int, int]:
    best, i, j = active.section_defect(image, s, m)
    return float(best), int(i), int(j)


def warmup() -> None:
    """Trigger JIT compilation so later timings measure steady state."""
    img = np.array([0, 0, 1], dtype=np.int64)
    w = np.array([0.2, 0.3, 0.5])
    s = np.array([[0.4, 0.0], [0.6, 0.0], [0.0, 1.0]])
    re_sum(w, w)
    fiber_sums(img, w, 2)
    prior(img, s, np.array([0.5, 0.5]))
    off_fiber_max(img, s)
    section_defect(img, s, 2)
