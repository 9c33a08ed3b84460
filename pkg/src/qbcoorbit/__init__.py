"""Quasi-Banach coorbit machinery on finite cyclic groups."""
from .errors import *  # noqa: F401,F403
from .grid import (GridGroup, as_signal, check_weight, convolve, involution, modulate,
                   polynomial_weight, translate)
from .norms import (QuasiNormSpec, amalgam_norm, control_function, lorentz_maximal_norm,
                    lorentz_star_norm, rearrange, sequence_norm, y_norm)
from .gabor import (GaborSystem, amalgam_comparison, canonical_dual, dgt, frame_operator,
                    gaussian_window, idgt, lattice_weight, modulation_norm, raised_cosine_window)
from .coorbit import (PointSet, apply_tpsi, atomic_decompose, band_kernel, build_bupu, gap_bound,
                      oscillation, sampled_norm)
from .nterm import decay_curve, decay_curve_from_coefficients, greedy_select, n_term_error, weak_norm

__version__ = "0.1.0"
