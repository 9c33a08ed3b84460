"""Solid quasi-norms: weighted and mixed l^p, Lorentz, Wiener amalgam.

Every functional here acts on magnitudes only, so all of them are solid.
Exponents may be ``math.inf``; an exponent of infinity replaces the
corresponding sum by a maximum.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.ndimage import maximum_filter

from .errors import InvalidExponent, LengthMismatch, RadiusTooLarge, ShapeMismatch

__all__ = [
    "QuasiNormSpec",
    "y_norm",
    "control_function",
    "amalgam_norm",
    "Rearrangement",
    "rearrange",
    "lorentz_star_norm",
    "lorentz_maximal_norm",
    "pileup",
    "sequence_norm",
    "parse_exponent",
]

inf = math.inf


def parse_exponent(value):
    """Accept a positive number or the strings "inf"/"infinity"."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf"):
            return inf
        value = float(value)
    value = float(value)
    if not value > 0:
        raise InvalidExponent(f"exponents must be positive, got {value}")
    return value


def _weighted_magnitude(x, weight):
    a = np.abs(x)
    if weight is None:
        return a
    return a * weight


def _check_weight_shape(x, weight):
    if weight is not None and np.shape(weight) != np.shape(x):
        raise ShapeMismatch(f"weight shape {np.shape(weight)} does not match data shape {np.shape(x)}")


def _lp(a, p, axis=None):
    """l^p sum of a nonnegative array; rescaled by the max to keep |x|^p finite."""
    if a.size == 0:
        return 0.0 if axis is None else np.zeros(np.delete(a.shape, axis))
    if p == inf:
        return np.max(a, axis=axis)
    top = np.max(a, axis=axis, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    s = np.sum((a / safe) ** p, axis=axis, keepdims=True) ** (1.0 / p) * top
    return s.item() if axis is None else np.squeeze(s, axis=axis)


@dataclass(frozen=True, eq=False)
class QuasiNormSpec:
    """Descriptor of a solid quasi-norm Y.

    kind
        ``"lp"``: weighted l^p over all entries.
        ``"mixed"``: l^{p,q}_m on an (N, M) grid, inner p-sum over axis 0
        (time), outer q-sum over axis 1 (frequency).
        ``"lorentz"``: Lorentz (p, q) functional of the weighted entries;
        the rearrangement form ``||.||*_{p,q}`` when ``r`` is None, the
        maximal-function form ``||.||^{(r)}_{p,q}`` otherwise.
    """

    kind: str
    p: float
    q: float = inf
    weight: np.ndarray = field(default=None, repr=False)
    r: float = None

    def __post_init__(self):
        if self.kind not in ("lp", "mixed", "lorentz"):
            raise ValueError(f"unknown quasi-norm kind {self.kind!r}")
        object.__setattr__(self, "p", parse_exponent(self.p))
        object.__setattr__(self, "q", parse_exponent(self.q))
        if self.weight is not None:
            w = np.asarray(self.weight, dtype=float)
            if np.any(~(w > 0)):
                raise InvalidExponent("weights must be strictly positive")
            object.__setattr__(self, "weight", w)
        if self.kind == "lorentz":
            if self.p == inf:
                raise InvalidExponent("Lorentz spaces need finite p")
            if self.r is not None:
                _check_r(self.p, self.q, float(self.r))
                object.__setattr__(self, "r", float(self.r))

    @classmethod
    def lp(cls, p, weight=None):
        return cls("lp", p, inf, weight)

    @classmethod
    def mixed(cls, p, q, weight=None):
        return cls("mixed", p, q, weight)

    @classmethod
    def lorentz(cls, p, q, weight=None, r=None):
        return cls("lorentz", p, q, weight, r)

    @property
    def r_exponent(self):
        """Exponent r of the r-triangle inequality, or None if there is none.

        The rearrangement form of the Lorentz functional is a quasi-norm
        but not an r-norm for any r, so it reports None.
        """
        if self.kind == "lp":
            return min(1.0, self.p)
        if self.kind == "mixed":
            return min(1.0, self.p, self.q)
        return self.r

    def with_weight(self, weight):
        return QuasiNormSpec(self.kind, self.p, self.q, weight, self.r)

    def __call__(self, x):
        return y_norm(x, self)

    def to_dict(self, weight_ref="one"):
        d = {"kind": "mixed" if self.kind == "mixed" else self.kind,
             "p": _exp_json(self.p), "q": _exp_json(self.q),
             "weight": weight_ref if self.weight is not None else "one"}
        if self.r is not None:
            d["r"] = self.r
        return d

    @classmethod
    def from_dict(cls, d, load_weight=None):
        """Build from the JSON form; ``load_weight(path)`` resolves weight paths."""
        kind = d["kind"]
        weight = d.get("weight", "one")
        if weight in (None, "one"):
            weight = None
        else:
            if load_weight is None:
                raise ValueError("spec refers to a weight file but no loader was given")
            weight = load_weight(weight)
        return cls(kind, d.get("p", 2), d.get("q", "inf"), weight, d.get("r"))


def _exp_json(v):
    return "inf" if v == inf else v


def y_norm(x, spec):
    """Evaluate the quasi-norm described by ``spec`` on the array ``x``."""
    x = np.asarray(x)
    _check_weight_shape(x, spec.weight)
    a = _weighted_magnitude(x, spec.weight)
    if spec.kind == "lp":
        return float(_lp(a.ravel(), spec.p))
    if spec.kind == "mixed":
        if a.ndim != 2:
            raise ShapeMismatch(f"mixed norm needs a 2-D (time, frequency) grid, got shape {a.shape}")
        if a.size == 0:
            return 0.0
        inner = _lp(a, spec.p, axis=0)
        return float(_lp(np.atleast_1d(inner), spec.q))
    if spec.r is None:
        return lorentz_star_norm(a.ravel(), spec.p, spec.q)
    return lorentz_maximal_norm(a.ravel(), spec.p, spec.q, spec.r)


def _radii(radius, ndim):
    if np.ndim(radius) == 0:
        return (int(radius),) * ndim
    radius = tuple(int(r) for r in radius)
    if len(radius) != ndim:
        raise ShapeMismatch(f"need one radius per axis ({ndim}), got {radius}")
    return radius


def control_function(F, radius):
    """Local maximum of |F| over the periodic box x + Q, Q = [-r, r]^d.

    ``radius`` is an int (same on every axis) or one int per axis.
    """
    a = np.abs(np.asarray(F))
    radii = _radii(radius, a.ndim)
    for r, n in zip(radii, a.shape):
        if r < 0:
            raise RadiusTooLarge(f"radius must be nonnegative, got {r}")
        if 2 * r + 1 > n:
            raise RadiusTooLarge(f"neighbourhood of radius {r} does not fit in length {n}")
    if all(r == 0 for r in radii):
        return a
    return maximum_filter(a, size=tuple(2 * r + 1 for r in radii), mode="wrap")


def amalgam_norm(F, radius, spec):
    """Wiener amalgam quasi-norm ``||K(F, Q)|Y||`` with local component l^inf."""
    return y_norm(control_function(F, radius), spec)


@dataclass(frozen=True, eq=False)
class Rearrangement:
    values: np.ndarray
    permutation: np.ndarray


def rearrange(lam, m=None):
    """Nonincreasing rearrangement of ``|lam| * m``; ties keep original order."""
    lam = np.asarray(lam).ravel()
    if m is not None:
        m = np.asarray(m, dtype=float).ravel()
        if m.shape != lam.shape:
            raise LengthMismatch(f"{lam.size} coefficients but {m.size} weights")
    a = _weighted_magnitude(lam, m)
    perm = np.argsort(-a, kind="stable")
    return Rearrangement(a[perm], perm)


def _increments(n, e):
    """n^e - (n-1)^e for n = 1, 2, ..., computed without cancellation."""
    n = np.asarray(n, dtype=float)
    out = np.ones_like(n)
    big = n > 1
    nb = n[big]
    out[big] = nb ** e * -np.expm1(e * np.log1p(-1.0 / nb))
    return out


def _check_p(p, q):
    p = parse_exponent(p)
    q = parse_exponent(q)
    if p == inf:
        raise InvalidExponent("Lorentz functionals need finite p")
    return p, q


def _check_r(p, q, r):
    if not (0 < r <= 1 and r < p and r <= q):
        raise InvalidExponent(f"need 0 < r <= 1, r < p, r <= q; got r={r}, p={p}, q={q}")


def _lorentz_sum(profile, p, q):
    n = np.arange(1, profile.size + 1, dtype=float)
    if q == inf:
        return float(np.max(n ** (1.0 / p) * profile))
    top = profile.max()
    if top == 0:
        return 0.0
    s = np.sum((profile / top) ** q * _increments(n, q / p))
    return float(s ** (1.0 / q) * top)


def lorentz_star_norm(lam, p, q, m=None):
    """Rearrangement form of the Lorentz (p, q) quasi-norm for sequences.

    The defining integral over ``dt/t`` is evaluated exactly for the step
    function ``t -> (lam m)^*(ceil t)``, which gives increments
    ``n^(q/p) - (n-1)^(q/p)``; with q = p this is exactly the l^p norm.
    """
    p, q = _check_p(p, q)
    s = rearrange(lam, m).values
    if s.size == 0:
        return 0.0
    return _lorentz_sum(s, p, q)


def lorentz_maximal_norm(lam, p, q, r, m=None):
    """Maximal-function form ``||.||^{(r)}_{p,q}`` on the counting measure.

    ``F**(n, r)`` is the largest r-mean of |lam m| over index sets with more
    than ``n - 1`` elements. Those sets are the top-N sets, so the value is
    a running maximum of top-N r-means over N >= n.
    """
    p, q = _check_p(p, q)
    r = float(r)
    _check_r(p, q, r)
    s = rearrange(lam, m).values
    if s.size == 0:
        return 0.0
    top = s[0]
    if top == 0:
        return 0.0
    N = np.arange(1, s.size + 1, dtype=float)
    means = (np.cumsum((s / top) ** r) / N) ** (1.0 / r)
    fss = np.maximum.accumulate(means[::-1])[::-1] * top
    return _lorentz_sum(fss, p, q)


def pileup(lam, points, radius, L):
    """P[y] = sum_i |lam_i| 1{y in x_i + Q}."""
    lam = np.abs(np.asarray(lam)).ravel()
    points = np.asarray(points, dtype=int).ravel()
    if lam.size != points.size:
        raise LengthMismatch(f"{lam.size} coefficients for {points.size} points")
    if 2 * radius + 1 > L:
        raise RadiusTooLarge(f"neighbourhood of radius {radius} does not fit in Z_{L}")
    P = np.zeros(L)
    offsets = np.arange(-radius, radius + 1)
    for li, xi in zip(lam, points):
        P[(xi + offsets) % L] += li
    return P


def sequence_norm(lam, points, radius, spec, L):
    """Norm of ``lam`` in the discrete space Y_d(X, Q) on Z_L."""
    return y_norm(pileup(lam, points, radius, L), spec)
