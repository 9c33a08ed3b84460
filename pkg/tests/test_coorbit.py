import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from qbcoorbit.coorbit import (PointSet, analysis_constant, apply_tpsi, atomic_decompose,
                               band_kernel, build_bupu, gap_bound, oscillation,
                               random_dense_points, regular_points, sampled_norm,
                               synthesis_constant, synthesize)
from qbcoorbit.errors import GroupMismatch, MaxIterExceeded, NotContractive, NotDense
from qbcoorbit.gabor import gaussian_window
from qbcoorbit.grid import convolve, involution, polynomial_weight, translate
from qbcoorbit.norms import QuasiNormSpec, amalgam_norm, sequence_norm

# l^0.8 amalgam norm (Q radius 2) of the U-oscillation of the bandwidth-2 kernel on Z_256,
# evaluated with the loop oracles on the closed-form kernel (1 + 2 cos + 2 cos) / L
BAND_GAP = {1: 0.28652268002849873, 2: 0.584539397788823, 3: 0.893321046495225, 4: 1.2121954175011111}
# same quantity for the Gaussian autocorrelation with w = (1 + d)^1, U radii 8, 4, 2, 1
GAUSS_OSC = [976.1637970421208, 413.27590472129106, 187.73910811356308, 89.12587314072312]


def indicator(L, idx):
    v = np.zeros(L)
    v[list(idx)] = 1
    return v


def test_point_set_basics():
    X = PointSet([5, 1, 1, 9], 10)
    assert list(X.points) == [1, 5, 9] and len(X) == 3
    assert X.density_radius == 2
    assert regular_points(12, 4).density_radius == 2
    assert regular_points(12, 4).separation(1) == 1
    assert regular_points(12, 2).separation(1) == 3
    with pytest.raises(ValueError):
        PointSet([], 5)


def test_random_dense_points_are_dense():
    rng = np.random.default_rng(0)
    for _ in range(30):
        assert random_dense_points(64, 3, rng).density_radius <= 3


def test_bupu_examples():
    L = 9
    b = build_bupu(PointSet(np.arange(L), L), 0)
    assert np.array_equal(b.weights, np.eye(L))
    b = build_bupu(PointSet([0, 4], 8), 2)
    assert np.array_equal(b.weights[0], indicator(8, [7, 0, 1, 2]))
    assert np.array_equal(b.weights[1], indicator(8, [3, 4, 5, 6]))
    with pytest.raises(NotDense):
        build_bupu(PointSet([0, 4], 8), 1)


def test_bupu_random_partitions():
    rng = np.random.default_rng(1)
    for _ in range(20):
        X = random_dense_points(64, 3, rng)
        b = build_bupu(X, 3)
        assert np.array_equal(b.weights.sum(axis=0), np.ones(64))
        for i, x in enumerate(X.points):
            for y in np.nonzero(b.weights[i])[0]:
                assert oracles.circ_dist(int(y) - int(x), 64) <= 3


def test_oscillation_examples():
    rng = np.random.default_rng(2)
    G = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    assert np.array_equal(oscillation(G, 0), np.zeros(20))
    assert np.array_equal(oscillation(np.full(20, 3.0), 4), np.zeros(20))
    assert np.allclose(oscillation(G, 2), oracles.oscillation(list(G), 2), rtol=1e-15, atol=0)
    R = G.real
    assert np.array_equal(oscillation(R, 2), oracles.oscillation(list(R), 2))


def test_apply_tpsi_examples():
    rng = np.random.default_rng(3)
    L = 24
    F, G = rng.standard_normal(L), rng.standard_normal(L)
    full = build_bupu(PointSet(np.arange(L), L), 0)
    assert np.allclose(apply_tpsi(F, G, full), convolve(F, G), atol=1e-13)
    assert np.array_equal(apply_tpsi(np.zeros(L), G, full), np.zeros(L))
    coarse = build_bupu(regular_points(L, 6), 3)
    ref = np.zeros(L)
    for i, x in enumerate(coarse.points.points):
        inner = sum(F[y] * coarse.weights[i][y] for y in range(L))
        ref += inner * np.array([G[(t - x) % L] for t in range(L)])
    assert np.allclose(apply_tpsi(F, G, coarse), ref, rtol=0, atol=1e-12 * np.abs(ref).max())
    with pytest.raises(GroupMismatch):
        apply_tpsi(np.ones(L + 1), np.ones(L + 1), coarse)


def test_gap_bound_examples():
    L = 64
    G = np.real(convolve(gaussian_window(L), involution(gaussian_window(L))))
    spec = QuasiNormSpec.lp(0.8, polynomial_weight(L, 1))
    assert gap_bound(G, 0, spec, 2) == 0
    bounds = [gap_bound(G, u, spec, 2) for u in (8, 4, 2, 1, 0)]
    assert all(a >= b for a, b in zip(bounds, bounds[1:]))
    with pytest.raises(ValueError):
        gap_bound(G, 1, QuasiNormSpec.lp(2), 1)
    with pytest.raises(ValueError):
        gap_bound(G, 1, QuasiNormSpec.lp(0.5, np.exp(np.arange(L) ** 2 / 100.0)), 1)


def test_gap_bound_frozen_values():
    G = band_kernel(256, 2)
    spec = QuasiNormSpec.lp(0.8)
    for u, ref in BAND_GAP.items():
        assert gap_bound(G, u, spec, 2) == pytest.approx(ref, rel=1e-12)
    L = 256
    Gg = np.real(convolve(gaussian_window(L), involution(gaussian_window(L))))
    spec = QuasiNormSpec.lp(0.8, polynomial_weight(L, 1))
    for u, ref in zip((8, 4, 2, 1), GAUSS_OSC):
        assert gap_bound(Gg, u, spec, 2) == pytest.approx(ref, rel=1e-12)


def test_empirical_gap_below_bound():
    rng = np.random.default_rng(4)
    L = 64
    G = np.real(convolve(gaussian_window(L), involution(gaussian_window(L))))
    spec = QuasiNormSpec.lp(0.8, polynomial_weight(L, 1))
    b = build_bupu(random_dense_points(L, 2, rng), 2)
    gb = gap_bound(G, 2, spec, 2)
    for _ in range(100):
        F = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        gap = amalgam_norm(convolve(F, G) - apply_tpsi(F, G, b), 2, spec) / amalgam_norm(F, 2, spec)
        assert gap <= gb


def test_band_kernel_reproduces():
    G = band_kernel(64, 3)
    assert np.allclose(convolve(G, G), G, atol=1e-15)
    closed = [(1 + 2 * sum(math.cos(2 * math.pi * k * x / 64) for k in (1, 2, 3))) / 64 for x in range(64)]
    assert np.allclose(G, closed, atol=1e-15)
    with pytest.raises(ValueError):
        band_kernel(16, 8)


def test_atomic_decompose_full_sampling_is_immediate():
    L = 32
    G = band_kernel(L, 4)
    F = convolve(np.random.default_rng(5).standard_normal(L), G)
    full = build_bupu(PointSet(np.arange(L), L), 0)
    dec = atomic_decompose(F, G, full)
    assert dec.iterations <= 1
    assert np.allclose(synthesize(dec.coefficients, full.points, G), F, atol=1e-10)


def test_atomic_decompose_converges_on_band_limited_range():
    rng = np.random.default_rng(6)
    L = 256
    G = band_kernel(L, 2)
    b = build_bupu(regular_points(L, 7), 3)
    for _ in range(5):
        F = translate(convolve(rng.standard_normal(L), G), int(rng.integers(L)))
        F /= np.abs(F).max()
        dec = atomic_decompose(F, G, b)
        assert np.abs(synthesize(dec.coefficients, b.points, G) - F).max() <= 1e-8
        assert dec.measured_ratio <= BAND_GAP[3] + 0.05
        assert dec.coefficients.shape == (len(b.points),)


def test_atomic_decompose_coarse_bupu_is_not_contractive():
    L = 256
    G = band_kernel(L, 2)
    F = convolve(np.random.default_rng(7).standard_normal(L), G)
    with pytest.raises(NotContractive):
        atomic_decompose(F, G, build_bupu(regular_points(L, 128), 64))


def test_atomic_decompose_iteration_cap():
    L = 256
    G = band_kernel(L, 2)
    F = convolve(np.random.default_rng(8).standard_normal(L), G)
    with pytest.raises(MaxIterExceeded):
        atomic_decompose(F, G, build_bupu(regular_points(L, 7), 3), tol=1e-14, max_iter=2)


def test_sampled_norm_examples():
    L = 20
    spec = QuasiNormSpec.lp(0.7, polynomial_weight(L, 1))
    X = regular_points(L, 5)
    d = np.zeros(L)
    d[0] = 1
    chi = np.zeros(L)
    chi[[19, 0, 1]] = 1
    assert sampled_norm(d, X, 1, spec) == pytest.approx(amalgam_norm(chi, 0, spec))
    off = np.zeros(L)
    off[[2, 7]] = 1
    assert sampled_norm(off, X, 1, spec) == 0 < amalgam_norm(off, 1, spec)


@given(st.integers(0, 2**32 - 1))
def test_sampled_norm_below_amalgam(seed):
    rng = np.random.default_rng(seed)
    L = 40
    spec = QuasiNormSpec.lp(0.6, polynomial_weight(L, 2))
    X = random_dense_points(L, 2, rng)
    F = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    assert sampled_norm(F, X, 1, spec) <= amalgam_norm(F, 1, spec) * (1 + 1e-12)


@given(st.integers(0, 2**32 - 1))
def test_analysis_and_synthesis_bounds(seed):
    rng = np.random.default_rng(seed)
    L = 48
    spec = QuasiNormSpec.lp(0.7, polynomial_weight(L, 1))
    G = np.real(convolve(gaussian_window(L), involution(gaussian_window(L))))
    b = build_bupu(random_dense_points(L, 2, rng), 2)
    F = rng.standard_normal(L)
    lam = b.weights @ F
    X = b.points.points
    assert sequence_norm(lam, X, 1, spec, L) <= analysis_constant(b, 1, spec) * amalgam_norm(F, 1, spec) * (1 + 1e-12)
    mu = rng.standard_normal(len(X))
    lhs = amalgam_norm(synthesize(mu, b.points, G), 1, spec)
    assert lhs <= synthesis_constant(G, 1, spec) * sequence_norm(mu, X, 1, spec, L) * (1 + 1e-12)
