"""Dyadic harmonic analysis on the half-line.

Haar expansions, homogeneous Haar multipliers, the dyadic fractional
Laplacian with its partial derivatives and gradient, exact nonlocal
energies, and the l2-valued kernel of the gradient transform.
"""

from .dyadic import (
    ButterflyClass,
    DyadicInterval,
    DyadicPoint,
    ancestor,
    cell_at,
    classify,
    delta,
    dilate,
    min_common_interval,
)
from .energy import (
    EnergyReport,
    bilinear_energy,
    energy_constant,
    energy_integral,
    energy_report,
    gradient_energy,
    spectral_energy,
)
from .errors import (
    DyadicError,
    EqualPoints,
    GridTooCoarse,
    InvalidOrder,
    InvalidP,
    SupportsNotSeparated,
    UnknownSuite,
    WindowTooSmall,
)
from .haar import HaarExpansion, StepFunction, analyze, haar_eval, inner_product, synthesize
from .harness import SweepConfig, SweepReport, cz_pairing, lp_norm, lp_ratio, ratio_sweep
from .multipliers import (
    CZReport,
    KernelVector,
    Multiplier,
    canonical_partial,
    check_cz_hypotheses,
    kernel_component,
    kernel_vector,
    multiplier_eval,
    omega_eval,
)
from .operators import (
    GradientField,
    apply_multiplier,
    dilate_expansion,
    directional,
    frac_laplacian,
    gradient,
    inv_frac_laplacian,
    partial,
    project,
)
from .suites import run_suite

__version__ = "0.1.0"
