class ConfigError(ValueError):
    """Invalid physical or run configuration."""


class DomainError(ValueError):
    """Closed-form evaluation outside its domain (e.g. complex quasi-energy)."""


class FitDomainError(ValueError):
    """Fit window contains values the model cannot take (e.g. C <= 0 in a log fit)."""


class InsufficientDataError(ValueError):
    pass


class UnsupportedCaseError(ValueError):
    pass
