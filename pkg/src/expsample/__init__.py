"""Exponential sampling operators on the multiplicative half-line.

Evaluation of convolution-sampling (and Kantorovich) series built from
compactly supported log-domain kernels, the moment machinery that fixes
their asymptotic error constants, convergence-accelerating linear
combinations, and instruments for error tables and empirical rates.
"""

__version__ = "0.1.0"

from .errors import (
    EvaluationError,
    ExpSampleError,
    KernelError,
    ParseError,
    SamplingError,
)
from .quadrature import (
    DEFAULT_CONFIG,
    LogInterval,
    MellinPoint,
    QuadratureConfig,
    default_step,
    integrate_log,
    mellin_derivative,
    mellin_transform,
)
from .functions import RealFunction, builtin, function_from_spec, parse_function
from .kernels import (
    AssumptionReport,
    Kernel,
    MomentReport,
    absolute_moment,
    bspline_eval,
    characteristic,
    continuous_moment,
    discrete_moment,
    make_translate_combination,
    mellin_bspline,
    moment_report,
    parse_kernel,
    poisson_moment,
    verify_kernel,
)
from .operators import (
    OperatorSpec,
    SampleAccessor,
    batch_eval,
    durrmeyer_eval,
    kantorovich_eval,
    mellin_convolution,
    sampling_eval,
    write_batch_csv,
)
from .combinations import (
    CombinationSpec,
    combined_eval,
    combined_moment,
    pair_moment,
    residuals,
    solve_coefficients,
)
from .analysis import (
    AsymptoticCheck,
    Column,
    ErrorTable,
    RateReport,
    config_digest,
    empirical_order,
    error_table,
    richardson,
    voronovskaya_check,
)
