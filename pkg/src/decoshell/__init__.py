"""Motion-activated correlated decoherence of two boundaries sharing a
structured medium.

Two parallel plates couple to the same screened bosonic environment; relative
motion Doppler-shifts the spectral lines of the moving plate and opens a
correlated noise channel only above the kinematic threshold v > 2 u_phi.
This package computes the threshold kinematics, the dressed inter-plate
propagator, the boundary noise kernels, the associated decoherence-rate
integrals, and the standard parameter scans.
"""

from .dispersion import (MomentumPoint, SpectralLine, WidthError,
                         lorentzian_pm, omega_k, spectral_pm)
from .dynamics import History, NegativeDampingError, coherence, damping
from .kernels import (KernelMatrix2, ZeroFrequencyError, hadamard,
                      noise_matrix, retarded_matrix, spectral_rho_h)
from .params import (ConfigError, DerivedParams, ModelParams, PhaseError,
                     QuasiStaticWarning, VelocityWarning, derive_condensate,
                     load_config, params_from_config, validate_regime)
from .propagator import (Branches, EvanescenceError, KernelPoint,
                         g_bulk_symmetric, g_inter, g_same, kernel_point,
                         solve_branches)
from .rates import (QuadratureError, RateResult, im_gamma_cross,
                    im_gamma_symmetric, overlap_weight, rate_regularized,
                    rate_resonant)
from .resonance import (ShellPoint, ThresholdError, above_threshold,
                        jacobian_check, shell_point)
from .sweep import (Axis, Grid, NoPeakError, PLATFORM_PRESETS, PlatformPreset,
                    peak_over_v, platform_curves, run_grid, write_csv)

__version__ = "0.1.0"

__all__ = [
    "Axis", "Branches", "ConfigError", "DerivedParams", "EvanescenceError",
    "Grid", "History", "KernelMatrix2", "KernelPoint", "ModelParams",
    "MomentumPoint", "NegativeDampingError", "NoPeakError",
    "PLATFORM_PRESETS", "PhaseError", "PlatformPreset", "QuadratureError",
    "QuasiStaticWarning", "RateResult", "ShellPoint", "SpectralLine",
    "ThresholdError", "VelocityWarning", "WidthError", "ZeroFrequencyError",
    "above_threshold", "coherence", "damping", "derive_condensate",
    "g_bulk_symmetric", "g_inter", "g_same", "hadamard", "im_gamma_cross",
    "im_gamma_symmetric", "jacobian_check", "kernel_point", "load_config",
    "lorentzian_pm", "noise_matrix", "omega_k", "overlap_weight",
    "params_from_config", "peak_over_v", "platform_curves", "rate_regularized",
    "rate_resonant", "retarded_matrix", "run_grid", "shell_point",
    "solve_branches", "spectral_pm", "spectral_rho_h", "validate_regime",
    "write_csv",
]
