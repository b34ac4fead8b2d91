"""
Scenario Data Processor Module

Reads and writes scenario files: `key = value` lines under [section]
headers. Syntax problems become ScenarioParseError with the offending line
number; value problems become ScenarioValidationError naming the rule that
was broken.
"""

import configparser
import io
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

from marshmallow import ValidationError as SchemaValidationError
from pydantic import ValidationError as ModelValidationError

from core.config.logging_config import get_logger
from core.errors import ScenarioParseError, ScenarioValidationError
from data_types import GammaPathKind
from data_types.scenario import FloatList, ScenarioFileSchema
from schemas.scenario import Scenario

logger = get_logger(__name__)


def _flatten_messages(messages: Any, prefix: str = "") -> Iterable[str]:
    if isinstance(messages, dict):
        for key, value in messages.items():
            where = prefix if key == "_schema" else (f"{prefix}.{key}" if prefix else str(key))
            yield from _flatten_messages(value, where)
    elif isinstance(messages, (list, tuple)):
        for message in messages:
            yield from _flatten_messages(message, prefix)
    else:
        yield f"{prefix}: {messages}" if prefix else str(messages)


def _model_messages(error: ModelValidationError) -> List[str]:
    messages = []
    for item in error.errors():
        text = item["msg"].removeprefix("Value error, ")
        where = ".".join(str(part) for part in item.get("loc", ()))
        messages.append(f"{where}: {text}" if where else text)
    return messages


def _parse_error_line(error: configparser.Error) -> Union[int, None]:
    lineno = getattr(error, "lineno", None)
    if lineno is None and isinstance(error, configparser.ParsingError):
        errors = getattr(error, "errors", None)
        if errors:
            return errors[0][0]
    return lineno


class ScenarioProcessor:
    """Parses scenario text into a validated Scenario and writes it back"""

    def __init__(self):
        self.schema = ScenarioFileSchema()

    def _new_parser(self) -> configparser.ConfigParser:
        return configparser.ConfigParser(
            strict=True,
            interpolation=None,
            default_section="__defaults__",
            inline_comment_prefixes=("#", ";"),
        )

    def read_sections(self, text: str) -> Dict[str, Dict[str, str]]:
        parser = self._new_parser()
        try:
            parser.read_string(text, source="<scenario>")
        except configparser.Error as e:
            message = getattr(e, "message", str(e)).splitlines()[0]
            raise ScenarioParseError(message, _parse_error_line(e)) from e
        return {name: dict(parser.items(name)) for name in parser.sections()}

    def parse_scenario(self, text: str) -> Scenario:
        sections = self.read_sections(text)
        try:
            scenario = self.schema.load(sections)
        except SchemaValidationError as e:
            message = "; ".join(_flatten_messages(e.messages))
            logger.error(f"❌ Scenario validation failed: {message}")
            raise ScenarioValidationError(message) from e
        except ModelValidationError as e:
            message = "; ".join(_model_messages(e))
            logger.error(f"❌ Scenario validation failed: {message}")
            raise ScenarioValidationError(message) from e

        logger.info(f"✅ Scenario parsed with sections: {', '.join(sections)}")
        return scenario

    def load_file(self, path: Union[str, Path]) -> Scenario:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise ScenarioParseError(f"scenario file is not UTF-8: {e.reason}") from e
        return self.parse_scenario(text)

    def dump_scenario(self, scenario: Scenario) -> str:
        """Scenario text using shortest round-trip float representations."""
        sections: Dict[str, Dict[str, str]] = {}
        prefs = scenario.preferences
        sections["preferences"] = {
            "delta": repr(prefs.delta),
            "rho": repr(prefs.rho),
            "gamma": repr(prefs.gamma),
        }
        sections["growth"] = {
            "mu": repr(scenario.growth.mu),
            "sigma2": repr(scenario.growth.sigma2),
        }

        path = scenario.gamma_path
        if path is not None:
            shock = {
                "kind": path.kind.value,
                "base_gamma": repr(path.base_gamma),
                "shock_delta": repr(path.shock_delta),
                "shock_time": str(path.shock_time),
            }
            if path.kind is GammaPathKind.CUSTOM:
                if path.custom_values:
                    shock["custom_values"] = FloatList()._serialize(path.custom_values, None, None)
                shock["terminal_gamma"] = repr(path.terminal_gamma)
            sections["shock"] = shock

        if scenario.simulation is not None:
            sections["simulation"] = {
                key: repr(value) for key, value in scenario.simulation.model_dump().items()
            }
        if scenario.sweep is not None:
            sections["sweep"] = {
                key: (value if isinstance(value, str) else repr(value))
                for key, value in scenario.sweep.model_dump().items()
            }

        parser = self._new_parser()
        parser.read_dict(sections)
        buffer = io.StringIO()
        parser.write(buffer)
        return buffer.getvalue()


_processor = ScenarioProcessor()


def parse_scenario(text: str) -> Scenario:
    return _processor.parse_scenario(text)


def dump_scenario(scenario: Scenario) -> str:
    return _processor.dump_scenario(scenario)


def load_scenario_file(path: Union[str, Path]) -> Scenario:
    return _processor.load_file(path)
