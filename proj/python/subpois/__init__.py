from ._core import (
    ConfigError,
    DomainError,
    Error,
    NumericalError,
    __version__,
    additive_functional,
    airy_ai,
    airy_ai_prime,
    bessel_j,
    bound_report,
    count_pmf,
    exp_moment_sq,
    gauss_legendre,
    kernel,
    pfaffian,
    run_cli,
    sample,
    spectrum,
    tail_log_bound,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "NumericalError",
    "__version__",
    "additive_functional",
    "airy_ai",
    "airy_ai_prime",
    "bessel_j",
    "bound_report",
    "count_pmf",
    "exp_moment_sq",
    "gauss_legendre",
    "kernel",
    "pfaffian",
    "run_cli",
    "sample",
    "spectrum",
    "tail_log_bound",
]
