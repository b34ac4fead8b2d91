"""
Error Types

Every error carries the process exit code the CLI reports for it.
"""

from typing import Optional


class PricingError(Exception):
    """Base class for model and scenario errors"""

    exit_code: int = 1


class ScenarioParseError(PricingError):
    """Scenario text is not well-formed"""

    exit_code = 2

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{prefix}{message}")


class ScenarioValidationError(PricingError):
    """Scenario values violate a model invariant"""

    exit_code = 2


class ModelMismatch(PricingError):
    """Expected-utility derivative requested outside gamma == rho"""

    exit_code = 2


class LengthMismatch(PricingError):
    """Series lengths are inconsistent with the solution horizon"""

    exit_code = 2


class StepCrossesSingularity(PricingError):
    """Finite-difference step leaves the admissible parameter domain"""

    exit_code = 2


class NoEquilibrium(PricingError):
    """h >= 1: no finite positive price-dividend ratio exists"""

    exit_code = 3

    def __init__(self, h: float, context: str = ""):
        self.h = h
        where = f" ({context})" if context else ""
        super().__init__(
            f"no equilibrium{where}: h = {h!r} >= 1, the forward sum of discounted dividends diverges"
        )


class VerificationFailure(PricingError):
    """At least one verification check failed"""

    exit_code = 4


class NumericalOverflow(PricingError):
    """An Euler integrand evaluated to a non-finite value"""

    exit_code = 1

    def __init__(self, draw_index: int, equation: str):
        self.draw_index = draw_index
        super().__init__(
            f"non-finite Euler integrand for equation {equation} at draw {draw_index}; parameters are too extreme"
        )


class BracketingFailure(PricingError):
    """Bisection bracket shows no sign change"""

    exit_code = 1
