"""Greedy n-term approximation in the coefficient quasi-norm.

For a fixed expansion f = sum c[k,j] M T g the error of keeping the n
largest weighted coefficients is the weighted l^q norm of the discarded
tail. If the coefficients lie in weak-l^p with p < q, that tail decays like
n^{-(1/p - 1/q)}.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import CountTooLarge, InvalidFitWindow, ShapeMismatch
from .norms import lorentz_star_norm, parse_exponent

__all__ = [
    "greedy_select",
    "tail_errors",
    "n_term_error",
    "weak_norm",
    "rate_constant",
    "NTermCurve",
    "decay_curve",
    "decay_curve_from_coefficients",
    "power_law_grid",
]

inf = math.inf
# errors below this fraction of the n=0 error count as numerically zero
FLOOR = 1e-13


def _weighted(c, m):
    a = np.abs(np.asarray(c))
    if m is None:
        return a
    m = np.asarray(m, dtype=float)
    if m.shape != a.shape:
        raise ShapeMismatch(f"weight shape {m.shape} does not match grid {a.shape}")
    return a * m


def _order(c, m):
    """Flat indices by decreasing |c| m; ties by frequency index j, then time index k."""
    a = _weighted(c, m)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a (time, frequency) grid, got shape {a.shape}")
    k, j = np.indices(a.shape)
    return np.lexsort((k.ravel(), j.ravel(), -a.ravel())), a


def greedy_select(c, m, n):
    """(k, j) index pairs of the ``n`` largest weighted coefficients, best first."""
    order, a = _order(c, m)
    n = int(n)
    if n < 0 or n > a.size:
        raise CountTooLarge(f"cannot select {n} of {a.size} coefficients")
    return np.column_stack(np.unravel_index(order[:n], a.shape))


def tail_errors(c, q, m=None):
    """Array e with e[n] = weighted l^q norm of all but the n largest, n = 0..size."""
    q = parse_exponent(q)
    order, a = _order(c, m)
    s = a.ravel()[order]
    if q == inf:
        return np.append(s, 0.0)
    top = s[0] if s.size and s[0] > 0 else 1.0
    # suffix sums from the small end; fixed order, no cancellation
    tails = np.cumsum(((s / top) ** q)[::-1])[::-1]
    return np.append(tails ** (1.0 / q) * top, 0.0)


def n_term_error(f, system, n, q, m=None):
    """Coefficient-metric n-term error of ``f`` in the dual-frame expansion over ``system``."""
    from .gabor import dgt

    c = dgt(f, system, system.dual_window)
    if not 0 <= n <= c.size:
        raise CountTooLarge(f"cannot keep {n} of {c.size} coefficients")
    return float(tail_errors(c, q, m)[n])


def weak_norm(c, p, m=None):
    """sup_n n^{1/p} (c m)^*(n)."""
    return lorentz_star_norm(np.asarray(c).ravel(), p, inf,
                             None if m is None else np.asarray(m).ravel())


def rate_constant(p, q):
    """C with sum_{k>n} k^{-q/p} <= C^q n^{1 - q/p}, i.e. (q/p - 1)^{-1/q}; 1 for q = inf."""
    p, q = parse_exponent(p), parse_exponent(q)
    if q == inf:
        return 1.0
    return (q / p - 1.0) ** (-1.0 / q)


@dataclass(frozen=True, eq=False)
class NTermCurve:
    n_values: np.ndarray
    errors: np.ndarray
    fitted_slope: float
    reference_alpha: float
    weak_norm: float
    rate_constant: float
    fit_window: tuple
    fit_count: int = 0
    bound_ok: bool = True
    worst_bound_ratio: float = 0.0
    config: dict = field(default_factory=dict)

    def summary(self):
        return {
            "alpha_ref": self.reference_alpha,
            "slope": self.fitted_slope,
            "C_impl": self.rate_constant,
            "weak_norm": self.weak_norm,
            "fit_window": list(self.fit_window),
            "fit_points": self.fit_count,
            "bound_ok": self.bound_ok,
            "worst_bound_ratio": self.worst_bound_ratio,
        }

    def csv_rows(self):
        return [(int(n), float(e)) for n, e in zip(self.n_values, self.errors)]


def decay_curve_from_coefficients(c, p, q, m=None, n_values=None, fit_window=None):
    """n-term error curve of a coefficient grid plus a log-log slope fit.

    The default fit window is [4, size/4]; inside it, errors at the
    numerical floor are dropped. ``bound_ok`` records whether
    err_n * n^alpha <= C * weak_norm held for every n >= 1 on the curve.
    """
    p, q = parse_exponent(p), parse_exponent(q)
    if not p < q:
        raise InvalidFitWindow(f"need p < q for a positive rate, got p={p}, q={q}")
    c = np.asarray(c)
    size = c.size
    alpha = 1.0 / p - (0.0 if q == inf else 1.0 / q)
    if n_values is None:
        n_values = np.arange(0, size + 1)
    n_values = np.unique(np.asarray(n_values, dtype=int))
    if n_values.size == 0 or n_values[0] < 0 or n_values[-1] > size:
        raise InvalidFitWindow(f"n values must lie in [0, {size}]")
    lo, hi = fit_window if fit_window is not None else (4, size // 4)
    if lo < 1 or hi < lo:
        raise InvalidFitWindow(f"bad fit window [{lo}, {hi}]")

    all_err = tail_errors(c, q, m)
    errors = all_err[n_values]
    wn = weak_norm(c, p, m)
    C = rate_constant(p, q)

    floor = FLOOR * all_err[0]
    sel = (n_values >= lo) & (n_values <= hi) & (errors > floor)
    if sel.sum() >= 2:
        slope = float(np.polyfit(np.log(n_values[sel]), np.log(errors[sel]), 1)[0])
    else:
        slope = math.nan

    pos = n_values >= 1
    ratios = errors[pos] * n_values[pos] ** alpha / wn if wn > 0 else np.zeros(pos.sum())
    worst = float(ratios.max()) if ratios.size else 0.0
    return NTermCurve(n_values, errors, slope, alpha, wn, C, (int(lo), int(hi)),
                      int(sel.sum()), worst <= C * (1 + 1e-10), worst)


def decay_curve(f, system, p, q, m=None, n_values=None, fit_window=None):
    """Curve for the dual-frame coefficients of a signal."""
    from .gabor import dgt

    c = dgt(f, system, system.dual_window)
    return decay_curve_from_coefficients(c, p, q, m, n_values, fit_window)


def power_law_grid(shape, p, rng=None):
    """Grid whose nonincreasing rearrangement is exactly k^{-1/p}, k = 1..size.

    Positions are a random permutation when ``rng`` is given, row-major
    otherwise; phases are random unimodular when ``rng`` is given.
    """
    size = int(np.prod(shape))
    vals = np.arange(1, size + 1, dtype=float) ** (-1.0 / parse_exponent(p))
    if rng is None:
        return vals.reshape(shape).astype(complex)
    flat = np.empty(size, dtype=complex)
    flat[rng.permutation(size)] = vals * np.exp(2j * np.pi * rng.random(size))
    return flat.reshape(shape)
