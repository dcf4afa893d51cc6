"""Exact state-vector OTOCs for kicked transverse-field Ising rings."""

from floq_otoc.config import EPS, ModelConfig, Variant, parse_tau
from floq_otoc.errors import (
    ConfigError,
    DomainError,
    FitDomainError,
    InsufficientDataError,
    UnsupportedCaseError,
)

__version__ = "0.1.0"

__all__ = [
    "EPS",
    "ModelConfig",
    "Variant",
    "parse_tau",
    "ConfigError",
    "DomainError",
    "FitDomainError",
    "InsufficientDataError",
    "UnsupportedCaseError",
    "__version__",
]
