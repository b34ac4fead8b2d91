from enum import Enum


class PriceResponse(str, Enum):
    FALLS = "Falls"
    RISES = "Rises"
    UNCHANGED = "Unchanged"


class PricingModel(str, Enum):
    CCAPM = "CCAPM"
    EPSTEIN_ZIN = "EpsteinZin"


class GammaPathKind(str, Enum):
    CONSTANT = "constant"
    PERMANENT_STEP = "permanent"
    TRANSITORY_PULSE = "transitory"
    CUSTOM = "custom"


class ShockKind(str, Enum):
    PERMANENT = "permanent"
    TRANSITORY = "transitory"


class EulerEquation(str, Enum):
    RISKY_STATIC = "10a"
    RISKLESS_STATIC = "10b"
    RISKY_DYNAMIC = "20a"
    RISKLESS_DYNAMIC = "20b"

    @property
    def prices_riskless_bill(self) -> bool:
        return self in (EulerEquation.RISKLESS_STATIC, EulerEquation.RISKLESS_DYNAMIC)


class DerivativeTarget(str, Enum):
    LN_ER = "LnER"
    LN_RF = "LnRF"
    PREMIUM = "Premium"
    C = "C"


class DerivativeMode(str, Enum):
    GAMMA_ONLY = "GammaOnly"
    GAMMA_RHO_DIAGONAL = "GammaRhoDiagonal"


class Command(str, Enum):
    EQUILIBRIUM = "equilibrium"
    STATICS = "statics"
    DYNAMICS = "dynamics"
    SIMULATE = "simulate"
    VERIFY = "verify"
    SWEEP = "sweep"


class OutputFormat(str, Enum):
    TABLE = "table"
    CSV = "csv"
