from .enums import (  # noqa: F401
    Command,
    DerivativeMode,
    DerivativeTarget,
    EulerEquation,
    GammaPathKind,
    OutputFormat,
    PriceResponse,
    PricingModel,
    ShockKind,
)
