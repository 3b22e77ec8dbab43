"""Python bindings for the cdturing library."""

from ._cdturing import (
    BlowUpError,
    BracketError,
    ConditionViolated,
    DomainError,
    Error,
    IoError,
    ModelParams,
    ParseError,
    StepSizeError,
    ValidationError,
    __version__,
    admissible_wavenumbers,
    char_coeffs,
    check_existence,
    det_cubic,
    integrate_ode,
    max_real_eigenvalue,
    normalize_config,
    paper_params,
    pattern_metrics,
    positive_equilibrium,
    reaction,
    routh_hurwitz_stable,
    simulate,
    turing_threshold,
    unstable_mu_interval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
