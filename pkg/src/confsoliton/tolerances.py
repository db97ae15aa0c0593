"""Numerical thresholds, overridable from the command line (``--tol name=value``)."""

from dataclasses import asdict, dataclass, fields, replace

from .errors import ConfigError


@dataclass(frozen=True)
class Tolerances:
    soliton: float = 1e-8  # normalised residual accepted as a soliton
    borderline: float = 1e-4  # above this the chart is not a soliton
    identity: float = 1e-9  # pointwise tensor identities (relative to |g|)
    minimal: float = 1e-10  # |tr A| below this counts as minimal
    certificate: float = 1e-8  # classification certificates
    lambda_rel: float = 1e-7  # support-function band: lambda_rel * (1 + max|x|)
    alpha: float = 1e-8  # |alpha| below this selects the hyperplane branch
    jordan: float = 1e-7  # eigenvalue clustering for shape-operator types

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and v > 0):
                raise ConfigError(f"tolerance {f.name} must be positive, got {v!r}")

    def with_overrides(self, overrides):
        known = {f.name for f in fields(self)}
        for name in overrides:
            if name not in known:
                raise ConfigError(f"unknown tolerance {name!r}; known: {', '.join(sorted(known))}")
        try:
            vals = {k: float(v) for k, v in overrides.items()}
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value: {exc}") from None
        return replace(self, **vals)

    def as_dict(self):
        return asdict(self)
