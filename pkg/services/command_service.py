"""
Command Service Module

Routes a CLI subcommand to its handler, renders the report and maps every
failure onto the exit-code contract: 0 success, 2 validation, 3 no
equilibrium, 4 verification failure, 1 anything unexpected.
"""

from typing import Dict, NamedTuple, Optional, Union

from pydantic import ValidationError

from core.config.logging_config import get_logger
from core.errors import PricingError, VerificationFailure
from data_types import Command, OutputFormat
from schemas.scenario import Scenario
from services.command_handling.command_handlers import (
    BaseCommandHandler,
    DynamicsCommandHandler,
    EquilibriumCommandHandler,
    SimulateCommandHandler,
    StaticsCommandHandler,
    SweepCommandHandler,
    VerifyCommandHandler,
)
from services.reporting.report_renderer import ReportRenderer

logger = get_logger(__name__)


class CommandOutcome(NamedTuple):
    exit_code: int
    output: str
    error: Optional[str] = None


class CommandService:
    """Dispatches subcommands to their handlers"""

    def __init__(self):
        self.renderer = ReportRenderer()
        self.command_handlers: Dict[Command, BaseCommandHandler] = {}
        self._setup_command_handlers()

    def _setup_command_handlers(self) -> None:
        self.command_handlers = {
            Command.EQUILIBRIUM: EquilibriumCommandHandler(),
            Command.STATICS: StaticsCommandHandler(),
            Command.DYNAMICS: DynamicsCommandHandler(),
            Command.SIMULATE: SimulateCommandHandler(),
            Command.VERIFY: VerifyCommandHandler(),
            Command.SWEEP: SweepCommandHandler(),
        }

    def run_command(
        self,
        command: Union[Command, str],
        scenario: Scenario,
        output_format: Union[OutputFormat, str] = OutputFormat.TABLE,
    ) -> CommandOutcome:
        """Run one subcommand; output is empty when the command failed before producing a report."""
        command = Command(command)
        output_format = OutputFormat(output_format)
        logger.info(f"🚀 Running {command.value}")

        try:
            result = self.command_handlers[command].handle(scenario)
            output = self.renderer.render(result.report, output_format)
        except PricingError as e:
            logger.error(f"❌ {command.value} failed: {e}")
            return CommandOutcome(e.exit_code, "", str(e))
        except ValidationError as e:
            logger.error(f"❌ {command.value} failed validation: {e}")
            return CommandOutcome(2, "", str(e))
        except Exception as e:
            logger.exception(f"❌ Unexpected error in {command.value}")
            return CommandOutcome(1, "", f"internal error: {e}")

        error = None
        if result.exit_code == VerificationFailure.exit_code:
            error = "verification failed: " + "; ".join(result.report.notes)
        logger.info(f"✅ {command.value} finished with exit code {result.exit_code}")
        return CommandOutcome(result.exit_code, output, error)


# Factory function for creating services
def create_command_service() -> CommandService:
    """Factory function to create a command service"""
    return CommandService()
