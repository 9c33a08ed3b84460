"""Discretized reproducing formulas on Z_L.

Point sets, partitions of unity subordinate to them, the Riemann-sum
operator ``T_Psi F = sum_i <F, psi_i> T_{x_i} G`` that approximates
``F -> F * G``, and its inversion by a Neumann series, which produces
atomic decompositions.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GroupMismatch, MaxIterExceeded, NotContractive, NotDense
from .grid import GridGroup, as_signal, check_weight, convolve
from .norms import QuasiNormSpec, amalgam_norm, pileup, sequence_norm, y_norm

__all__ = [
    "PointSet",
    "regular_points",
    "random_dense_points",
    "BUPU",
    "build_bupu",
    "oscillation",
    "apply_tpsi",
    "gap_bound",
    "band_kernel",
    "AtomicDecomposition",
    "atomic_decompose",
    "synthesize",
    "sampled_norm",
    "analysis_constant",
    "synthesis_constant",
]

# a residual ratio above this counts as "not decaying"
STALL_RATIO = 0.999
STALL_STEPS = 5


@dataclass(frozen=True, eq=False)
class PointSet:
    """Distinct points of Z_L, stored sorted."""

    points: np.ndarray
    L: int

    def __post_init__(self):
        GridGroup(self.L)
        pts = np.unique(np.mod(np.asarray(self.points, dtype=int).ravel(), self.L))
        if pts.size == 0:
            raise ValueError("point set is empty")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def _distances(self):
        x = np.arange(self.L)
        d = np.abs(x[None, :] - self.points[:, None])
        return np.minimum(d, self.L - d)

    @cached_property
    def density_radius(self):
        """Smallest V with the union of x_i + [-V, V] covering Z_L."""
        return int(self._distances().min(axis=0).max())

    def separation(self, radius):
        """max_j #{i : (x_i + Q) meets (x_j + Q)} for Q = [-radius, radius]."""
        x = self.points
        d = np.abs(x[:, None] - x[None, :])
        d = np.minimum(d, self.L - d)
        return int((d <= 2 * radius).sum(axis=1).max())


def regular_points(L, step, offset=0):
    return PointSet(np.arange(offset, L, step), L)


def random_dense_points(L, radius, rng):
    """Random point set whose gaps never exceed 2*radius + 1."""
    pts, x = [], int(rng.integers(0, radius + 1))
    while x < L:
        pts.append(x)
        x += int(rng.integers(1, 2 * radius + 2))
    if (pts[0] + L - pts[-1]) > 2 * radius + 1:
        pts.append((pts[-1] + radius + 1) % L)
    return PointSet(pts, L)


@dataclass(frozen=True, eq=False)
class BUPU:
    """Indicator partition of unity: ``weights[i]`` is psi_i on Z_L."""

    points: PointSet
    radius: int
    owner: np.ndarray
    weights: np.ndarray

    @property
    def L(self):
        return self.points.L


def build_bupu(points, radius):
    """Nearest-point partition subordinate to ``points`` of size ``radius``.

    Each x goes to the circularly nearest point; a tie between the two
    neighbours of x goes to the one preceding x on the circle.
    """
    if points.density_radius > radius:
        raise NotDense(
            f"points are only {points.density_radius}-dense, BUPU size {radius} requested")
    L = points.L
    x = np.arange(L)
    fwd = (x[None, :] - points.points[:, None]) % L
    dist = np.minimum(fwd, L - fwd)
    behind = (fwd != dist).astype(int)
    key = dist * 2 + behind
    owner = np.argmin(key, axis=0)
    weights = np.zeros((len(points), L))
    weights[owner, x] = 1.0
    return BUPU(points, int(radius), owner, weights)


def oscillation(G, radius):
    """G#_U[x] = max_{|u| <= radius} |G[x + u] - G[x]|."""
    G = as_signal(G)
    out = np.zeros(G.size)
    for u in range(-int(radius), int(radius) + 1):
        np.maximum(out, np.abs(np.roll(G, -u) - G), out=out)
    return out


def synthesize(lam, points, G):
    """sum_i lam_i T_{x_i} G, accumulated in point order."""
    G = as_signal(G)
    out = np.zeros(G.size, dtype=np.result_type(np.asarray(lam), G, float))
    for li, xi in zip(np.asarray(lam), points.points):
        out += li * np.roll(G, xi)
    return out


def apply_tpsi(F, G, bupu):
    """T_Psi F = sum_i <F, psi_i> T_{x_i} G."""
    F = as_signal(F)
    G = as_signal(G)
    if F.size != G.size or F.size != bupu.L:
        raise GroupMismatch("F, G and the BUPU must live on the same Z_L")
    return synthesize(bupu.weights @ F, bupu.points, G)


def _require_submultiplicative_lp(spec):
    if spec.kind != "lp" or spec.p > 1:
        raise ValueError("gap and boundedness constants need an l^p_w spec with p <= 1")
    if spec.weight is not None and not check_weight(spec.weight).ok:
        raise ValueError("quasi-norm weight is not submultiplicative")


def gap_bound(G, radius, spec, q_radius):
    """Bound on the W(l^inf, Y)-operator quasi-norm of T - T_Psi for BUPUs of this size.

    Pointwise |T F - T_Psi F| <= |F| * G#_U, and for p <= 1 with a
    submultiplicative weight the discrete convolution relation holds with
    constant one, so the bound is the amalgam norm of the oscillation.
    """
    _require_submultiplicative_lp(spec)
    return amalgam_norm(oscillation(G, radius), q_radius, spec)


def band_kernel(L, bandwidth):
    """Real reproducing kernel of the band |xi| <= bandwidth: G * G = G."""
    if not 0 <= bandwidth < L // 2:
        raise ValueError(f"bandwidth must lie in [0, {L // 2}), got {bandwidth}")
    spectrum = np.zeros(L)
    spectrum[: bandwidth + 1] = 1.0
    if bandwidth:
        spectrum[-bandwidth:] = 1.0
    return np.real(np.fft.ifft(spectrum))


@dataclass(frozen=True, eq=False)
class AtomicDecomposition:
    coefficients: np.ndarray
    residual_history: np.ndarray
    iterations: int

    @property
    def ratios(self):
        h = self.residual_history
        return h[1:] / h[:-1] if h.size > 1 else np.array([])

    @property
    def measured_ratio(self):
        """Worst residual ratio once past the second iteration."""
        r = self.ratios
        if r.size == 0:
            return 0.0
        return float(r[2:].max() if r.size > 2 else r.max())


def atomic_decompose(F, G, bupu, tol=1e-10, max_iter=500):
    """Coefficients lambda_i = <H, psi_i> with T_Psi H = F, by Neumann iteration.

    ``F`` must already lie in the range of convolution by the reproducing
    kernel ``G``; this is not checked. Iterates ``H <- H + (F - T_Psi H)``
    starting from ``H = F`` until ``||F - T_Psi H||_inf <= tol``, which is
    also the reconstruction error of ``sum_i lambda_i T_{x_i} G``.
    """
    F = as_signal(F)
    G = as_signal(G)
    H = F.copy()
    history = []
    slow = 0
    for k in range(max_iter + 1):
        r = F - apply_tpsi(H, G, bupu)
        err = float(np.max(np.abs(r)))
        history.append(err)
        if err <= tol:
            return AtomicDecomposition(bupu.weights @ H, np.array(history), k)
        if k > 0:
            slow = slow + 1 if err >= STALL_RATIO * history[-2] else 0
            if slow >= STALL_STEPS:
                raise NotContractive(
                    f"residual not decaying (ratio {err / history[-2]:.4f} at iteration {k})")
        H = H + r
    raise MaxIterExceeded(f"residual {history[-1]:.3e} above tol={tol} after {max_iter} iterations")


def sampled_norm(F, points, q_radius, spec):
    """Norm of the samples (F[x_i]) in Y_d(X, Q)."""
    F = as_signal(F)
    return sequence_norm(F[points.points], points.points, q_radius, spec, points.L)


def analysis_constant(bupu, q_radius, spec):
    """C with ||(<F, psi_i>)|Y_d|| <= C ||F|W(l^inf, Y)||.

    The pileup of the coefficients is dominated by |F| * 1_{U+Q}; for
    p <= 1 the convolution relation then gives C = ||1_{U+Q}|l^p_w||.
    """
    _require_submultiplicative_lp(spec)
    L = bupu.L
    chi = pileup([1.0], [0], min(bupu.radius + q_radius, (L - 1) // 2), L)
    return y_norm(chi, spec)


def synthesis_constant(G, q_radius, spec):
    """C with ||sum lam_i T_{x_i} G|W(l^inf, Y)|| <= C ||lam|Y_d||, namely ||G|W(l^inf, Y)||."""
    _require_submultiplicative_lp(spec)
    return amalgam_norm(G, q_radius, spec)


def convolution_operator(G):
    """F -> F * G, for comparison with :func:`apply_tpsi`."""
    return lambda F: convolve(F, G)
