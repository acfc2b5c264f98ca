"""Complex dilation of one-dimensional Schrodinger operators and numerical
checks of Lieb-Thirring-type estimates for their eigenvalues.

Modules
-------
potentials  dilation-analytic potential families and dilated L^p norms
operators   finite-difference matrices of H(i phi) and H~(i phi)
spectra     eigensolves, classification and eigenvalue trajectories
regions     sectors, quadrants and half-planes of the complex plane
bounds      both sides of the eigenvalue estimates
cli         config-driven command-line front end
"""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .potentials import (  # noqa: E402
    Analytic,
    ComplexAngle,
    FiniteWell,
    Gaussian,
    Potential,
    QuadraticGaussian,
    Rational,
    Sech2,
    Tabulated,
    cphi_condition,
    critical_angle,
    evaluate_dilated,
    gaussian_norm_closed_form,
    lp_integral,
    lp_norm_quadrature,
    norm_monotonicity_scan,
    zero_potential,
)
from .operators import DilatedHamiltonian, Grid, assemble, dump_matrix, laplacian_matrix, load_matrix  # noqa: E402
from .regions import contains, parse_region, rotate_region  # noqa: E402
from .spectra import (  # noqa: E402
    EigenPair,
    SpectrumClassification,
    Tolerances,
    classify,
    eigenvalues,
    rotate_spectrum,
    spectrum_at,
    trajectory,
)
from .bounds import (  # noqa: E402
    THEOREMS,
    BoundReport,
    LTConstants,
    alpha_required,
    lhs_sum,
    negative_part,
    rhs,
    verify,
    verify_suite,
)
