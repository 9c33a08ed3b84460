"""Signals on the cyclic group Z_L.

A signal is a plain 1-D numpy array; its length is the group order. The
group law is addition mod L, the Haar measure is counting measure and the
modular function is identically one, so left and right translations agree
and every involution reduces to reflection (plus conjugation).
"""
from dataclasses import dataclass

import numpy as np

from .errors import GroupMismatch, NonPositiveWeight

__all__ = [
    "GridGroup",
    "as_signal",
    "translate",
    "modulate",
    "convolve",
    "involution",
    "polynomial_weight",
    "WeightReport",
    "check_weight",
]

# exhaustive pair checks up to this order, sampled pairs above it
EXHAUSTIVE_LIMIT = 4096
SAMPLED_PAIRS = 1_000_000
SAMPLE_SEED = 20071
_DENSE_CONVOLVE_LIMIT = 1024


@dataclass(frozen=True)
class GridGroup:
    """The cyclic group Z_L with circular distance to the identity."""

    L: int

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2:
            raise ValueError(f"group order must be an integer >= 2, got {self.L!r}")

    def reduce(self, x):
        return np.mod(x, self.L)

    def distance(self, x):
        """Circular distance d(x, 0) = min(|x mod L|, L - |x mod L|)."""
        x = np.mod(x, self.L)
        return np.minimum(x, self.L - x)

    def elements(self):
        return np.arange(self.L)


def as_signal(values, dtype=None):
    """Validate and return ``values`` as a finite 1-D array."""
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError(f"signal must be one-dimensional, got shape {arr.shape}")
    if arr.size < 2:
        raise ValueError("signal must have length >= 2")
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal contains non-finite entries")
    return arr


def _same_group(F, G):
    if F.shape != G.shape:
        raise GroupMismatch(f"signals live on different groups: Z_{F.size} vs Z_{G.size}")


def translate(f, x):
    """result[y] = f[(y - x) mod L]."""
    f = as_signal(f)
    return np.roll(f, int(x) % f.size)


def modulate(f, m):
    """result[t] = exp(2 pi i m t / L) f[t]."""
    f = as_signal(f)
    L = f.size
    # reduce m*t mod L before forming the phase so large indices stay exact
    phase = np.mod(int(m) * np.arange(L), L)
    return np.exp(2j * np.pi * phase / L) * f


def convolve(F, G):
    """Group convolution ``(F*G)[x] = sum_y F[y] G[x - y]``.

    Evaluated as an explicit sum (no FFT, no BLAS) so that exact zeros stay
    zero and results do not depend on thread count.
    """
    F = as_signal(F)
    G = as_signal(G)
    _same_group(F, G)
    L = F.size
    if L <= _DENSE_CONVOLVE_LIMIT:
        x = np.arange(L)
        circ = G[(x[:, None] - x[None, :]) % L]
        return (circ * F[None, :]).sum(axis=1)
    out = np.zeros(L, dtype=np.result_type(F, G, float))
    for y in range(L):
        if F[y] != 0:
            out += F[y] * np.roll(G, y)
    return out


def involution(F):
    """F^nabla[x] = conj(F[-x mod L])."""
    F = as_signal(F)
    return np.conj(np.roll(F[::-1], 1))


def polynomial_weight(L, s, scale=1.0):
    """w(x) = (1 + d(x, 0)/scale)^s, submultiplicative for s >= 0."""
    d = GridGroup(L).distance(np.arange(L))
    return (1.0 + d / scale) ** s


@dataclass(frozen=True)
class WeightReport:
    ok: bool
    worst_ratio: float
    witness: tuple
    pairs_checked: int
    exhaustive: bool


def check_weight(w, partner=None):
    """Check submultiplicativity of ``w`` or ``partner``-moderateness of ``w``.

    With ``partner=None`` the ratio ``w(x+y) / (w(x) w(y))`` is examined;
    otherwise ``w`` plays the role of the moderate weight m and ``partner``
    the submultiplicative v, and the ratio is ``m(x+y) / (v(x) m(y))``.
    The weight passes when the worst ratio is at most ``1 + 1e-12``.
    """
    m = np.asarray(w, dtype=float)
    v = m if partner is None else np.asarray(partner, dtype=float)
    if m.shape != v.shape or m.ndim != 1:
        raise GroupMismatch("weight and partner must be 1-D arrays of equal length")
    if np.any(~(m > 0)) or np.any(~(v > 0)):
        raise NonPositiveWeight("weights must be strictly positive")
    L = m.size

    worst, witness = -np.inf, (0, 0)
    if L <= EXHAUSTIVE_LIMIT:
        y = np.arange(L)
        rows = max(1, (1 << 22) // L)
        for start in range(0, L, rows):
            x = np.arange(start, min(L, start + rows))
            ratio = m[(x[:, None] + y[None, :]) % L] / (v[x][:, None] * m[None, :])
            k = int(np.argmax(ratio))
            if ratio.flat[k] > worst:
                worst = float(ratio.flat[k])
                witness = (int(x[k // L]), int(k % L))
        checked, exhaustive = L * L, True
    else:
        rng = np.random.default_rng(SAMPLE_SEED)
        x = rng.integers(0, L, SAMPLED_PAIRS)
        y = rng.integers(0, L, SAMPLED_PAIRS)
        ratio = m[(x + y) % L] / (v[x] * m[y])
        k = int(np.argmax(ratio))
        worst, witness = float(ratio[k]), (int(x[k]), int(y[k]))
        checked, exhaustive = SAMPLED_PAIRS, False
    return WeightReport(worst <= 1.0 + 1e-12, worst, witness, checked, exhaustive)
