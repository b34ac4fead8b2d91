from typing import List, Optional

from pydantic import BaseModel, ConfigDict


class VerificationRecord(BaseModel):
    """One check; records with gated=False are reported but never fail a run."""

    model_config = ConfigDict(frozen=True)

    check: str
    rho: float
    gamma: float
    period: Optional[int] = None
    statistic: float
    threshold: float
    passed: bool
    gated: bool = True


class VerificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: List[VerificationRecord]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def failures(self) -> List[VerificationRecord]:
        return [record for record in self.records if record.gated and not record.passed]

    @property
    def informational(self) -> List[VerificationRecord]:
        return [record for record in self.records if not record.gated]
