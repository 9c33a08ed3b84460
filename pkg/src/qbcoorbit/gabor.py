"""Discrete Gabor analysis and synthesis on Z_L.

Coefficients are plain inner products

    c[n, m] = <f, M_{m L/M} T_{n a} g> = sum_l f[l] conj(g[l - n a]) exp(-2 pi i m l / M)

with modulation applied after translation. The Heisenberg phase factor
of the continuous voice transform is dropped: every norm below sees only
|c|, and the moduli agree.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import MaxIterExceeded, NeumannStalled, NotAFrame, ShapeMismatch, GroupMismatch
from .grid import GridGroup, as_signal
from .norms import QuasiNormSpec, control_function, y_norm

__all__ = [
    "gaussian_window",
    "raised_cosine_window",
    "box_window",
    "GaborSystem",
    "FrameData",
    "dgt",
    "idgt",
    "frame_operator",
    "canonical_dual",
    "tight_window",
    "lattice_weight",
    "modulation_norm",
    "AmalgamComparison",
    "amalgam_comparison",
]

NOT_A_FRAME_RATIO = 1e-10
# working-set cap for the (N, L) slice arrays, in complex entries
_CHUNK_ENTRIES = 1 << 21


def gaussian_window(L):
    """Periodized Gaussian exp(-pi (l - L/2)^2 / L), unit l^2 norm."""
    l = np.arange(L) - L / 2
    g = sum(np.exp(-np.pi * (l + k * L) ** 2 / L) for k in (-2, -1, 0, 1, 2))
    return g / np.linalg.norm(g)


def raised_cosine_window(L, width=None):
    """Hann bump of the given support width centred at L/2, unit l^2 norm."""
    width = L // 4 if width is None else int(width)
    if not 2 <= width <= L:
        raise ValueError(f"width must lie in [2, {L}], got {width}")
    t = np.arange(L) - L / 2
    g = np.where(np.abs(t) < width / 2, np.cos(np.pi * t / width) ** 2, 0.0)
    return g / np.linalg.norm(g)


def box_window(L, width):
    """Normalized indicator of [0, width); with a = M = width it gives an orthonormal basis."""
    g = np.zeros(L)
    g[:width] = 1.0
    return g / np.sqrt(width)


@dataclass(frozen=True)
class FrameData:
    S: np.ndarray
    A: float
    B: float

    @property
    def condition(self):
        return self.B / self.A


@dataclass(frozen=True, eq=False)
class GaborSystem:
    """Window plus separable lattice: time step ``a``, ``M`` frequency channels."""

    window: np.ndarray
    a: int
    M: int

    def __post_init__(self):
        g = as_signal(self.window).astype(complex)
        object.__setattr__(self, "window", g)
        L = g.size
        a, M = int(self.a), int(self.M)
        if a < 1 or M < 1 or L % a or L % M:
            raise ValueError(f"lattice (a={self.a}, M={self.M}) must divide L={L}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "M", M)
        if not np.linalg.norm(g) > 0:
            raise ValueError("window has zero energy")

    @property
    def L(self):
        return self.window.size

    @property
    def N(self):
        return self.L // self.a

    @property
    def b(self):
        return self.L // self.M

    @property
    def group(self):
        return GridGroup(self.L)

    @property
    def redundancy(self):
        return self.M / self.a

    @property
    def shape(self):
        return (self.N, self.M)

    def with_window(self, window):
        return GaborSystem(window, self.a, self.M)

    def lattice(self):
        return {"L": self.L, "a": self.a, "M": self.M}

    @cached_property
    def frame(self):
        return frame_operator(self)

    @cached_property
    def dual_window(self):
        return canonical_dual(self)

    @cached_property
    def dual(self):
        return self.with_window(self.dual_window)


def _slice_index(L, a, rows):
    return (np.arange(L)[None, :] - a * rows[:, None]) % L


def _row_chunks(N, L):
    step = max(1, _CHUNK_ENTRIES // L)
    for start in range(0, N, step):
        yield np.arange(start, min(N, start + step))


def dgt(f, system, window=None):
    """Analysis coefficients, shape (N, M), via windowed slices folded to length M."""
    f = as_signal(f)
    g = system.window if window is None else as_signal(window)
    L, a, M, N = system.L, system.a, system.M, system.N
    if f.size != L or g.size != L:
        raise GroupMismatch(f"signal of length {f.size} / window {g.size} on a system over Z_{L}")
    c = np.empty((N, M), dtype=complex)
    for rows in _row_chunks(N, L):
        slices = f[None, :] * np.conj(g[_slice_index(L, a, rows)])
        folded = slices.reshape(rows.size, L // M, M).sum(axis=1)
        c[rows] = np.fft.fft(folded, axis=1)
    return c


def idgt(c, system, window=None):
    """Synthesis ``sum_{n,m} c[n,m] M_{m L/M} T_{n a} window``; adjoint of :func:`dgt`."""
    c = np.asarray(c)
    g = system.window if window is None else as_signal(window)
    L, a, M, N = system.L, system.a, system.M, system.N
    if c.shape != (N, M):
        raise ShapeMismatch(f"coefficient grid {c.shape} does not match system shape {(N, M)}")
    f = np.zeros(L, dtype=complex)
    for rows in _row_chunks(N, L):
        u = np.fft.ifft(c[rows], axis=1) * M
        f += np.sum(np.tile(u, (1, L // M)) * g[_slice_index(L, a, rows)], axis=0)
    return f


def frame_operator(system):
    """Dense frame operator and its extreme eigenvalues.

    Only entries with l = k (mod M) survive the sum over channels, so
    S[l, k] = M [l = k mod M] sum_n g[l - n a] conj(g[k - n a]).
    """
    L, a, M, N = system.L, system.a, system.M, system.N
    if L > 4096:
        raise ValueError(f"dense frame operator limited to L <= 4096, got {L}")
    g = system.window
    Gn = g[_slice_index(L, a, np.arange(N))]
    P = Gn.T @ np.conj(Gn)
    idx = np.arange(L)
    mask = (idx[:, None] - idx[None, :]) % M == 0
    S = M * np.where(mask, P, 0)
    S = 0.5 * (S + S.conj().T)
    ev = np.linalg.eigvalsh(S)
    A, B = float(ev[0]), float(ev[-1])
    if A <= NOT_A_FRAME_RATIO * B:
        raise NotAFrame(A, B)
    return FrameData(S, A, B)


def canonical_dual(system, method="dense", max_iter=10_000, tol=1e-10):
    """Canonical dual window gamma = S^{-1} g.

    ``method="neumann"`` runs the relaxed iteration
    gamma <- gamma + 2/(A+B) (g - S gamma), whose residual contracts by at
    least (B-A)/(B+A) per step.
    """
    fd = system.frame
    g = system.window
    if method == "dense":
        return scipy.linalg.solve(fd.S, g, assume_a="pos")
    if method != "neumann":
        raise ValueError(f"unknown dual method {method!r}")

    omega = 2.0 / (fd.A + fd.B)
    rho = (fd.B - fd.A) / (fd.B + fd.A)
    gnorm = np.linalg.norm(g)
    gamma = np.zeros_like(g)
    res = g.copy()
    prev = np.linalg.norm(res)
    slow = 0
    for _ in range(max_iter):
        if prev <= tol * gnorm:
            return gamma
        gamma = gamma + omega * res
        res = g - fd.S @ gamma
        cur = np.linalg.norm(res)
        slow = slow + 1 if cur > 1.1 * rho * prev else 0
        if slow >= 10:
            raise NeumannStalled(
                f"residual stopped contracting at {cur:.3e} (predicted factor {rho:.4f})")
        prev = cur
    if prev <= tol * gnorm:
        return gamma
    raise MaxIterExceeded(f"Neumann dual did not reach tol={tol} in {max_iter} iterations")


def tight_window(system):
    """S^{-1/2} g, the window of the canonical tight frame."""
    w, V = np.linalg.eigh(system.frame.S)
    return V @ ((V.conj().T @ system.window) / np.sqrt(w))


def lattice_weight(system, s):
    """m_s(n a, m b) = (1 + d(n a)^2 + d(m b)^2)^(s/2), circular distances on Z_L."""
    grp = system.group
    dt = grp.distance(system.a * np.arange(system.N)).astype(float)
    df = grp.distance(system.b * np.arange(system.M)).astype(float)
    return (1.0 + dt[:, None] ** 2 + df[None, :] ** 2) ** (s / 2.0)


def _coefficients(f, system, side):
    if side == "window":
        return dgt(f, system)
    if side == "dual":
        return dgt(f, system, system.dual_window)
    raise ValueError(f"side must be 'window' or 'dual', got {side!r}")


def modulation_norm(f, system, p, q, m=None, side="window"):
    """Mixed l^{p,q}_m norm of the Gabor coefficients of ``f``.

    ``side="dual"`` analyses with the canonical dual window, which gives
    the coefficients of the expansion f = sum c[n,m] M T g.
    """
    c = _coefficients(f, system, side)
    return y_norm(c, QuasiNormSpec.mixed(p, q, m))


@dataclass(frozen=True)
class AmalgamComparison:
    plain: float
    amalgam: float
    ratio: float


def amalgam_comparison(f, system, p, q, m=None, radius=(1, 1), side="window"):
    """Mixed norm of the coefficients versus that of their periodic box maximum."""
    c = _coefficients(f, system, side)
    spec = QuasiNormSpec.mixed(p, q, m)
    plain = y_norm(c, spec)
    amalgam = y_norm(control_function(c, radius), spec)
    ratio = amalgam / plain if plain > 0 else 1.0
    return AmalgamComparison(plain, amalgam, ratio)
