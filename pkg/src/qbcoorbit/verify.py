"""Property and acceptance checks, runnable from the CLI or from pytest.

Each check draws from its own generator seeded by ``(seed, check id)``, so
a suite is reproducible and checks do not perturb each other. Oracles in
this module are written independently of the code they check: direct sums,
brute-force subset searches and explicit loops.
"""
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from itertools import combinations
import math
import time
import zlib

import numpy as np

from . import norms
from .coorbit import (apply_tpsi, atomic_decompose, band_kernel, build_bupu, gap_bound,
                      oscillation, random_dense_points, regular_points, synthesize,
                      analysis_constant, synthesis_constant, sampled_norm)
from .gabor import (GaborSystem, canonical_dual, dgt, gaussian_window, idgt,
                    raised_cosine_window, modulation_norm, amalgam_comparison)
from .grid import check_weight, convolve, involution, modulate, polynomial_weight, translate
from .norms import (QuasiNormSpec, amalgam_norm, control_function, lorentz_maximal_norm,
                    lorentz_star_norm, sequence_norm, y_norm)
from .nterm import decay_curve_from_coefficients, greedy_select, power_law_grid, tail_errors, weak_norm

inf = math.inf
SUITES = ("norms", "frames", "coorbit", "nterm")


@dataclass
class Check:
    name: str
    passed: bool
    trials: int
    worst: float
    bound: float
    details: dict = field(default_factory=dict)

    @property
    def margin(self):
        return self.worst - self.bound

    def to_dict(self):
        d = asdict(self)
        d["margin"] = self.margin
        return _jsonable(d)

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: worst={self.worst:.3e} bound={self.bound:.3e} trials={self.trials}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _rng(seed, name):
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _rough(rng, n):
    """Random complex vector with heavy-tailed magnitudes and some exact zeros."""
    v = _crandn(rng, n) * rng.exponential(size=n) ** 2
    v[rng.random(n) < 0.2] = 0
    return v


# ---------------------------------------------------------------- oracles

def direct_lp(x, p, w=None):
    a = np.abs(np.ravel(x)).astype(float)
    if w is not None:
        a = a * np.ravel(w)
    if p == inf:
        return float(a.max()) if a.size else 0.0
    total = 0.0
    for v in a:
        total += v ** p
    return total ** (1.0 / p)


def direct_convolution(F, G):
    L = len(F)
    return np.array([sum(F[y] * G[(x - y) % L] for y in range(L)) for x in range(L)])


def direct_dgt(f, g, a, M):
    L = len(f)
    N = L // a
    l = np.arange(L)
    E = np.exp(-2j * np.pi * ((np.arange(M)[:, None] * l[None, :]) % M) / M)
    W = np.array([f * np.conj(g[(l - n * a) % L]) for n in range(N)])
    return W @ E.T


def brute_maximal(lam, p, q, r):
    """Lorentz maximal functional with F** taken over every index subset."""
    a = np.abs(np.asarray(lam, dtype=complex))
    n = a.size
    best = np.zeros(n + 1)
    for size in range(1, n + 1):
        for E in combinations(range(n), size):
            best[size] = max(best[size], np.mean(a[list(E)] ** r) ** (1.0 / r))
    # F** on [k-1, k) is the best over sets with more than k-1 elements
    fss = np.array([best[k:].max() for k in range(1, n + 1)])
    k = np.arange(1, n + 1, dtype=float)
    if q == inf:
        return float(np.max(k ** (1.0 / p) * fss))
    return float(np.sum(fss ** q * (k ** (q / p) - (k - 1) ** (q / p))) ** (1.0 / q))


# ---------------------------------------------------------- acceptance

def criterion_reconstruction(seed=0):
    rng = _rng(seed, "reconstruction")
    t0 = time.perf_counter()
    system = GaborSystem(gaussian_window(128), 4, 16)
    gamma = canonical_dual(system)
    worst = 0.0
    for _ in range(100):
        f = _crandn(rng, 128)
        c = dgt(f, system)
        err = np.linalg.norm(idgt(c, system, gamma) - f) / np.linalg.norm(f)
        worst = max(worst, err)
    fast = time.perf_counter() - t0 < 1.0
    return Check("C1 reconstruction L=128 a=4 M=16", worst <= 1e-10 and fast, 100, worst, 1e-10,
                 {"runtime_under_1s": fast})


def criterion_convolution_relation(seed=0):
    rng = _rng(seed, "convolution")
    L = 64
    worst, trials = 0.0, 0
    for s in (0, 2):
        w = polynomial_weight(L, s)
        for p in (0.5, 0.8, 1.0):
            spec = QuasiNormSpec.lp(p, w)
            for _ in range(1000):
                F, G = _rough(rng, L), _rough(rng, L)
                rhs = y_norm(F, spec) * y_norm(G, spec)
                if rhs == 0:
                    continue
                worst = max(worst, y_norm(convolve(F, G), spec) / rhs)
                trials += 1
    return Check("C2 convolution relation l^p_w, p<=1", worst <= 1 + 1e-10, trials, worst, 1 + 1e-10)


def gaussian_autocorrelation(L):
    g = gaussian_window(L)
    return np.real(convolve(g, involution(g)))


def criterion_oscillation_decay(seed=0):
    L = 256
    G = gaussian_autocorrelation(L)
    spec = QuasiNormSpec.lp(0.8, polynomial_weight(L, 1))
    radii = (8, 4, 2, 1, 0)
    values = [amalgam_norm(oscillation(G, u), 2, spec) for u in radii]
    steps = [b - a for a, b in zip(values, values[1:])]
    ok = all(d <= 0 for d in steps) and values[-1] == 0.0
    return Check("C3 oscillation decay U=8,4,2,1,0", ok, len(radii), max(steps), 0.0,
                 {"radii": list(radii), "norms": values})


def neumann_setup(L=256, bandwidth=2, q_radius=2, p=0.8, limit=0.9):
    """Band kernel and the largest BUPU size whose gap bound stays below ``limit``."""
    G = band_kernel(L, bandwidth)
    spec = QuasiNormSpec.lp(p)
    best = None
    for u in range(1, L // 8):
        gb = gap_bound(G, u, spec, q_radius)
        if gb >= limit:
            break
        best = (u, gb)
    if best is None:
        raise RuntimeError("no BUPU size with gap bound below the limit")
    return G, spec, best[0], best[1]


def criterion_neumann(seed=0):
    rng = _rng(seed, "neumann")
    L = 256
    G, spec, u, gb = neumann_setup(L)
    points = regular_points(L, 2 * u + 1)
    bupu = build_bupu(points, u)
    worst_ratio, worst_res = 0.0, 0.0
    for _ in range(20):
        F = translate(convolve(rng.standard_normal(L), G), int(rng.integers(L)))
        F = F / np.max(np.abs(F))
        dec = atomic_decompose(F, G, bupu, tol=1e-10)
        worst_ratio = max(worst_ratio, dec.measured_ratio)
        res = np.max(np.abs(F - synthesize(dec.coefficients, points, G)))
        worst_res = max(worst_res, res)
    ok = worst_ratio <= gb + 0.05 and worst_res <= 1e-8 and gb < 0.9
    return Check("C4 operator gap and Neumann convergence", ok, 20, worst_ratio, gb + 0.05,
                 {"U_radius": u, "gap_bound": gb, "worst_reconstruction": worst_res,
                  "bandwidth": 2, "spec": "l^0.8, Q radius 2"})


def criterion_nterm_rate(seed=0):
    rng = _rng(seed, "nterm")
    p, q = 0.5, 2.0
    c = power_law_grid((32, 16), p, rng)
    curve = decay_curve_from_coefficients(c, p, q)
    bound = 3 ** -0.5 + 1e-10
    n = np.arange(1, c.size + 1)
    scaled = tail_errors(c, q)[1:] * n ** 1.5
    slope_ok = -1.6 <= curve.fitted_slope <= -1.4
    ok = slope_ok and float(scaled.max()) <= bound
    return Check("C5 n-term rate p=0.5 q=2", ok, int(c.size), float(scaled.max()), bound,
                 {"slope": curve.fitted_slope, "fit_window": list(curve.fit_window),
                  "weak_norm": curve.weak_norm})


def criterion_lorentz_identity(seed=0):
    rng = _rng(seed, "lorentz-identity")
    worst = 0.0
    for p in (0.5, 1.0, 2.0):
        for _ in range(1000):
            n = int(rng.integers(1, 65))
            lam = _rough(rng, n)
            lam[0] = 1 + rng.random()
            m = rng.uniform(0.5, 3.0, n)
            ref = direct_lp(lam, p, m)
            worst = max(worst, abs(lorentz_star_norm(lam, p, p, m) - ref) / ref)
    return Check("C6 Lorentz L(p,p) = l^p", worst <= 1e-12, 3000, worst, 1e-12)


def criterion_hunt(seed=0):
    rng = _rng(seed, "hunt")
    p, r, q = 2.0, 1.0, inf
    const = (p / (p - r)) ** (1 / r)
    worst = 0.0
    for _ in range(1000):
        lam = _rough(rng, int(rng.integers(1, 65)))
        s = lorentz_star_norm(lam, p, q)
        mx = lorentz_maximal_norm(lam, p, q, r)
        if s == 0:
            continue
        worst = max(worst, s / mx - 1.0, mx / (const * s) - 1.0)
    brute = 0.0
    for _ in range(100):
        lam = _rough(rng, int(rng.integers(1, 9)))
        ref = brute_maximal(lam, p, q, r)
        if ref > 0:
            brute = max(brute, abs(lorentz_maximal_norm(lam, p, q, r) - ref) / ref)
    ok = worst <= 1e-12 and brute <= 1e-12
    return Check("C7 Hunt sandwich p=2 r=1 q=inf", ok, 1100, max(worst, brute), 1e-12,
                 {"sandwich_excess": worst, "brute_force_rel_error": brute})


def r_norm_configs(rng):
    """(label, r, functional, sampler) for every implemented r-normed functional."""
    L = 48
    out = []
    w = polynomial_weight(L, 1.5)
    for p in (0.3, 0.5, 0.8, 1.0, 2.0, inf):
        spec = QuasiNormSpec.lp(p, w)
        out.append((f"lp p={p}", spec.r_exponent, spec, lambda: _rough(rng, L)))
    shape = (6, 8)
    m = rng.uniform(0.5, 2.0, shape)
    for p, q in ((0.5, 0.5), (0.5, 2.0), (1.0, inf), (2.0, 1.0), (inf, 0.7), (0.7, 0.4)):
        spec = QuasiNormSpec.mixed(p, q, m)
        out.append((f"mixed p={p} q={q}", spec.r_exponent, spec,
                    lambda: _rough(rng, 48).reshape(shape)))
    for p, q in ((2.0, inf), (2.0, 1.0), (1.5, 2.0), (3.0, 0.8), (0.8, 0.5)):
        r = min(1.0, p, q)
        spec = QuasiNormSpec.lorentz(p, q, w, r=r)
        out.append((f"lorentz-maximal p={p} q={q} r={r}", r, spec, lambda: _rough(rng, L)))
    spec = QuasiNormSpec.lp(0.5, w)
    out.append(("amalgam l^0.5_w radius 2", 0.5, lambda x: amalgam_norm(x, 2, spec),
                lambda: _rough(rng, L)))
    mspec = QuasiNormSpec.mixed(0.6, 1.5, m)
    out.append(("amalgam mixed p=0.6 q=1.5 radius (1,2)", 0.6,
                lambda x: amalgam_norm(x, (1, 2), mspec), lambda: _rough(rng, 48).reshape(shape)))
    pts = np.arange(0, L, 3)
    out.append(("sequence l^0.7_w radius 1", 0.7,
                lambda x: sequence_norm(x, pts, 1, QuasiNormSpec.lp(0.7, w), L),
                lambda: _rough(rng, pts.size)))
    return out


def criterion_r_triangle(seed=0):
    rng = _rng(seed, "r-triangle")
    worst, trials, per = 0.0, 0, {}
    for label, r, N, sample in r_norm_configs(rng):
        cw = 0.0
        for _ in range(1000):
            f, g = sample(), sample()
            if rng.random() < 0.3:
                g = g * (rng.random(g.shape) < 0.5)
            rhs = N(f) ** r + N(g) ** r
            if rhs == 0:
                continue
            cw = max(cw, N(f + g) ** r / rhs)
            trials += 1
        per[label] = cw
        worst = max(worst, cw)
    return Check("C8 r-triangle inequality suite", worst <= 1 + 1e-10, trials, worst, 1 + 1e-10,
                 {"per_config": per})


def criterion_window_independence(seed=0):
    rng = _rng(seed, "window-independence")
    L = 128
    s1 = GaborSystem(gaussian_window(L), 4, 16)
    s2 = GaborSystem(raised_cosine_window(L), 4, 16)
    signals = [_crandn(rng, L) for _ in range(100)]
    brackets, worst = {}, 0.0
    for p, q in ((0.5, 0.5), (1.0, 2.0), (2.0, inf)):
        ratios = [modulation_norm(f, s1, p, q) / modulation_norm(f, s2, p, q) for f in signals]
        lo, hi = min(ratios), max(ratios)
        brackets[f"p={p},q={q}"] = [lo, hi]
        worst = max(worst, hi / lo)
    return Check("C9 window independence Gaussian vs raised cosine", worst <= 50, 300, worst, 50.0,
                 {"brackets": brackets})


def criterion_two_path_dgt(seed=0):
    rng = _rng(seed, "two-path")
    worst, trials = 0.0, 0
    for L in (12, 30, 64, 256):
        divisors = [d for d in range(1, L + 1) if L % d == 0]
        f = _crandn(rng, L)
        g = _crandn(rng, L)
        for a in divisors:
            for M in divisors:
                system = GaborSystem(g, a, M)
                ref = direct_dgt(f, g, a, M)
                err = np.linalg.norm(dgt(f, system) - ref) / np.linalg.norm(ref)
                worst = max(worst, err)
                trials += 1
    return Check("C10 FFT-factored vs direct DGT", worst <= 1e-10, trials, worst, 1e-10)


ACCEPTANCE = {
    1: criterion_reconstruction,
    2: criterion_convolution_relation,
    3: criterion_oscillation_decay,
    4: criterion_neumann,
    5: criterion_nterm_rate,
    6: criterion_lorentz_identity,
    7: criterion_hunt,
    8: criterion_r_triangle,
    9: criterion_window_independence,
    10: criterion_two_path_dgt,
}


# ------------------------------------------------------- property checks

def check_weighted_lp_oracle(seed=0):
    rng = _rng(seed, "lp-oracle")
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 40))
        x = _rough(rng, n)
        x[0] = 1.0
        w = rng.uniform(0.2, 5.0, n)
        for p in (0.25, 0.5, 1.0, 2.0, inf):
            ref = direct_lp(x, p, w)
            worst = max(worst, abs(y_norm(x, QuasiNormSpec.lp(p, w)) - ref) / ref)
    return Check("weighted l^p vs direct sum", worst <= 1e-12, 1000, worst, 1e-12)


def check_solidity_homogeneity(seed=0):
    rng = _rng(seed, "solid")
    L = 40
    w = polynomial_weight(L, 1)
    funcs = [
        ("lp0.5", lambda x: y_norm(x, QuasiNormSpec.lp(0.5, w))),
        ("amalgam", lambda x: amalgam_norm(x, 2, QuasiNormSpec.lp(0.7, w))),
        ("lorentz*", lambda x: lorentz_star_norm(x, 1.5, 0.7, w)),
        ("mixed", lambda x: y_norm(x.reshape(5, 8), QuasiNormSpec.mixed(0.5, 3.0))),
    ]
    worst_solid, worst_hom = 0.0, 0.0
    for _ in range(200):
        F = _rough(rng, L)
        Gs = F * rng.random(L) * np.exp(2j * np.pi * rng.random(L))
        c = complex(_crandn(rng, 1)[0])
        for _, N in funcs:
            nf = N(F)
            if nf == 0:
                continue
            worst_solid = max(worst_solid, N(Gs) / nf - 1.0)
            worst_hom = max(worst_hom, abs(N(c * F) / (abs(c) * nf) - 1.0))
    worst = max(worst_solid, worst_hom)
    return Check("solidity and homogeneity", worst <= 1e-12, 800, worst, 1e-12,
                 {"solidity_excess": worst_solid, "homogeneity_error": worst_hom})


def check_amalgam_structure(seed=0):
    """Q-monotonicity, Q-equivalence, translation bound, involution symmetry."""
    rng = _rng(seed, "amalgam")
    L = 64
    p = 0.7
    w = polynomial_weight(L, 2)
    spec = QuasiNormSpec.lp(p, w)
    q1, q2 = 1, 3
    eq_bound = 10 * (2 * q2 + 1) ** (1 / p)
    worst_mono, worst_eq, worst_tr, worst_inv = 0.0, 0.0, 0.0, 0.0
    for _ in range(1000):
        F = _rough(rng, L)
        if not np.any(F):
            continue
        vals = [amalgam_norm(F, q, spec) for q in range(0, 5)]
        worst_mono = max(worst_mono, max(a - b for a, b in zip(vals, vals[1:])))
        worst_eq = max(worst_eq, vals[q2] / vals[q1])
        x = int(rng.integers(L))
        worst_tr = max(worst_tr, amalgam_norm(translate(F, x), 2, spec) / (w[(-x) % L] * vals[2]))
        worst_inv = max(worst_inv, abs(amalgam_norm(involution(F), 2, spec) / vals[2] - 1))
    ok = worst_mono <= 0 and worst_eq < eq_bound and worst_tr <= 1 + 1e-10 and worst_inv <= 1e-12
    return Check("amalgam Q-monotone / Q-equivalent / translation / involution", ok, 1000,
                 worst_eq, eq_bound,
                 {"monotonicity_excess": worst_mono, "equivalence_ratio": worst_eq,
                  "translation_ratio": worst_tr, "involution_error": worst_inv})


def check_grid_identities(seed=0):
    rng = _rng(seed, "grid")
    L = 32
    worst = 0.0
    for _ in range(100):
        F, G = _crandn(rng, L), _crandn(rng, L)
        x, y = (int(v) for v in rng.integers(0, 3 * L, 2))
        assert np.array_equal(translate(translate(F, x), y), translate(F, x + y))
        assert np.array_equal(involution(involution(F)), F)
        ref = direct_convolution(F, G)
        worst = max(worst, np.linalg.norm(convolve(F, G) - ref) / np.linalg.norm(ref))
        lhs = convolve(translate(F, x), G)
        worst = max(worst, np.linalg.norm(lhs - translate(convolve(F, G), x)) / np.linalg.norm(lhs))
    return Check("translation / involution / convolution identities", worst <= 1e-12, 100, worst, 1e-12)


def check_weights(seed=0):
    L = 16
    d = np.minimum(np.arange(L), L - np.arange(L))
    good = check_weight((1 + d) ** 2.0)
    bad = check_weight(np.exp(d.astype(float) ** 2))
    ok = good.ok and not bad.ok and bad.worst_ratio > 1
    return Check("weight validation", ok, 2, good.worst_ratio, 1 + 1e-12,
                 {"bad_witness": list(bad.witness), "bad_ratio": bad.worst_ratio})


def check_frame_identities(seed=0):
    rng = _rng(seed, "frames")
    L = 96
    system = GaborSystem(gaussian_window(L), 4, 12)
    gamma = system.dual_window
    worst_adj, worst_rec, worst_cov = 0.0, 0.0, 0.0
    for _ in range(50):
        f = _crandn(rng, L)
        c = _crandn(rng, *system.shape)
        lhs = np.vdot(c, dgt(f, system))       # <dgt f, c> with c conjugated
        rhs = np.vdot(idgt(c, system), f)
        worst_adj = max(worst_adj, abs(lhs - rhs) / (np.linalg.norm(f) * np.linalg.norm(c)))
        for ga, gs in ((None, gamma), (gamma, None)):
            rec = idgt(dgt(f, system, ga), system, gs)
            worst_rec = max(worst_rec, np.linalg.norm(rec - f) / np.linalg.norm(f))
        n0, m0 = (int(v) for v in rng.integers(0, 12, 2))
        shifted = modulate(translate(f, system.a * n0), m0 * system.b)
        a0 = np.abs(dgt(shifted, system))
        a1 = np.roll(np.abs(dgt(f, system)), (n0, m0), axis=(0, 1))
        worst_cov = max(worst_cov, np.max(np.abs(a0 - a1)) / np.max(a1))
    gn = canonical_dual(system, "neumann")
    cross = np.linalg.norm(gn - gamma) / np.linalg.norm(gamma)
    worst = max(worst_adj, worst_rec, worst_cov)
    ok = worst_adj <= 1e-10 and worst_rec <= 1e-10 and worst_cov <= 1e-12 and cross <= 1e-8
    return Check("adjointness / dual reconstruction / covariance / Neumann dual", ok, 50, worst, 1e-10,
                 {"adjoint": worst_adj, "reconstruction": worst_rec, "covariance": worst_cov,
                  "neumann_vs_dense": cross})


def check_amalgam_comparison(seed=0):
    rng = _rng(seed, "tf-amalgam")
    system = GaborSystem(gaussian_window(64), 4, 8)
    p = q = 0.8
    box = (1, 1)
    bound = 9 ** (1 / 0.8)
    worst = 0.0
    for _ in range(100):
        f = _crandn(rng, 64)
        cmp = amalgam_comparison(f, system, p, q, radius=box)
        assert cmp.amalgam >= cmp.plain
        worst = max(worst, cmp.ratio)
    return Check("TF amalgam vs plain ratio <= |box|^(1/r)", worst <= bound, 100, worst, bound)


def check_coorbit_structure(seed=0):
    rng = _rng(seed, "coorbit")
    L = 64
    worst_part = 0.0
    for _ in range(20):
        pts = random_dense_points(L, 3, rng)
        b = build_bupu(pts, 3)
        worst_part = max(worst_part, float(np.max(np.abs(b.weights.sum(axis=0) - 1))))
        for i, x in enumerate(pts.points):
            d = np.minimum((np.nonzero(b.weights[i])[0] - x) % L, (x - np.nonzero(b.weights[i])[0]) % L)
            assert d.size == 0 or d.max() <= 3
    # pointwise domination |T_y G - T_x G| <= T_y G#_U for y in x + U
    Lz, U = 32, 2
    G = _crandn(rng, Lz)
    osc = oscillation(G, U)
    worst_dom = 0.0
    for x in range(Lz):
        for u in range(-U, U + 1):
            y = x + u
            worst_dom = max(worst_dom, np.max(np.abs(translate(G, y) - translate(G, x))
                                             - translate(osc, y)))
    # empirical operator gap versus its bound
    G = gaussian_autocorrelation(L)
    spec = QuasiNormSpec.lp(0.8, polynomial_weight(L, 1))
    u = 2
    b = build_bupu(regular_points(L, 2 * u + 1), u)
    gb = gap_bound(G, u, spec, 1)
    ca = analysis_constant(b, 1, spec)
    cs = synthesis_constant(G, 1, spec)
    worst_gap, worst_an, worst_syn, worst_samp = 0.0, 0.0, 0.0, 0.0
    for _ in range(100):
        F = _rough(rng, L)
        if not np.any(F):
            continue
        nf = amalgam_norm(F, 1, spec)
        diff = convolve(F, G) - apply_tpsi(F, G, b)
        worst_gap = max(worst_gap, amalgam_norm(diff, 1, spec) / nf / gb)
        coeffs = b.weights @ F
        worst_an = max(worst_an, sequence_norm(coeffs, b.points.points, 1, spec, L) / (ca * nf))
        lam = _rough(rng, len(b.points))
        sn = sequence_norm(lam, b.points.points, 1, spec, L)
        if sn > 0:
            worst_syn = max(worst_syn, amalgam_norm(synthesize(lam, b.points, G), 1, spec) / (cs * sn))
        worst_samp = max(worst_samp, sampled_norm(F, b.points, 1, spec) / nf)
    worst = max(worst_gap, worst_an, worst_syn, worst_samp)
    ok = worst_part == 0 and worst_dom <= 1e-12 and worst <= 1 + 1e-10
    return Check("BUPU / oscillation domination / gap / analysis / synthesis / sampling", ok, 100,
                 worst, 1 + 1e-10,
                 {"partition_error": worst_part, "domination_excess": worst_dom,
                  "gap_ratio": worst_gap, "analysis_ratio": worst_an,
                  "synthesis_ratio": worst_syn, "sampling_ratio": worst_samp, "gap_bound": gb})


def check_nterm_properties(seed=0):
    rng = _rng(seed, "nterm-props")
    worst_mono, worst_weak, opt_fail = -inf, 0.0, 0
    for _ in range(50):
        c = _rough(rng, 24).reshape(4, 6)
        m = rng.uniform(0.5, 2.0, c.shape)
        for q in (0.5, 1.0, 2.0, inf):
            e = tail_errors(c, q, m)
            worst_mono = max(worst_mono, float(np.max(np.diff(e))))
        for p in (0.5, 1.0):
            lp = direct_lp(c, p, m)
            if lp > 0:
                worst_weak = max(worst_weak, weak_norm(c, p, m) / lp - 1)
    for _ in range(20):
        c = _rough(rng, 12).reshape(3, 4)
        m = rng.uniform(0.5, 2.0, c.shape)
        a = (np.abs(c) * m).ravel()
        for q in (0.5, 2.0):
            e = tail_errors(c, q, m)
            for n in range(0, 13):
                keep = greedy_select(c, m, n)
                best = min(direct_lp(np.delete(a, list(E)), q) if n < 12 else 0.0
                           for E in combinations(range(12), n))
                if e[n] > best * (1 + 1e-12) + 1e-300:
                    opt_fail += 1
                assert len(keep) == n
    ok = worst_mono <= 0 and worst_weak <= 1e-12 and opt_fail == 0
    return Check("n-term monotone / greedy optimal / weak <= l^p", ok, 70, max(worst_mono, worst_weak),
                 1e-12, {"greedy_failures": opt_fail})


SUITE_CHECKS = {
    "norms": [check_weighted_lp_oracle, check_solidity_homogeneity, check_amalgam_structure,
              check_grid_identities, check_weights,
              criterion_convolution_relation, criterion_lorentz_identity, criterion_hunt,
              criterion_r_triangle],
    "frames": [check_frame_identities, check_amalgam_comparison, criterion_reconstruction,
               criterion_window_independence, criterion_two_path_dgt],
    "coorbit": [check_coorbit_structure, criterion_oscillation_decay, criterion_neumann],
    "nterm": [check_nterm_properties, criterion_nterm_rate],
}


@contextmanager
def inject_fault(kind):
    """Deliberately break the library to confirm the suites notice."""
    if kind in (None, "none"):
        yield
        return
    if kind != "dropped-weight":
        raise ValueError(f"unknown fault {kind!r}")
    original = norms._weighted_magnitude
    norms._weighted_magnitude = lambda x, weight: np.abs(x)
    try:
        yield
    finally:
        norms._weighted_magnitude = original


def run_suite(suite="all", seed=0, fault=None):
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITE_CHECKS:
            raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    results = {}
    with inject_fault(fault):
        for name in names:
            out = []
            for fn in SUITE_CHECKS[name]:
                try:
                    out.append(fn(seed))
                except AssertionError as exc:
                    out.append(Check(fn.__name__, False, 0, inf, 0.0, {"assertion": str(exc)}))
            results[name] = out
    return results
