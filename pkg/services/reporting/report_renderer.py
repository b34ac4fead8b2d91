"""
Report Renderer Module

Renders command reports as aligned text tables (jinja2 templates) or as
CSV. Floats are written with their shortest round-trip representation so
that CSV output parses back to the exact values.
"""

import csv
import io
import math
from enum import Enum
from typing import Any, List

import jinja2

from core.config.logging_config import get_logger
from data_types import OutputFormat
from schemas.report import Report

logger = get_logger(__name__)


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


class ReportRenderer:
    """Renders Report objects to text"""

    def __init__(self):
        self.templates = {
            'table': (
                "{{ title }}\n"
                "{{ header }}\n"
                "{{ rule }}\n"
                "{% for line in lines %}{{ line }}\n{% endfor %}"
                "{% if notes %}\n{% for note in notes %}note: {{ note }}\n{% endfor %}{% endif %}"
            ),
        }
        self.template_env = jinja2.Environment(
            loader=jinja2.DictLoader(self.templates),
            keep_trailing_newline=True,
            autoescape=False,
        )

    def _align(self, cells: List[str], widths: List[int]) -> str:
        return "  ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()

    def render_table(self, report: Report) -> str:
        header = list(report.columns)
        body = [[format_value(value) for value in row] for row in report.rows]
        widths = [
            max([len(header[i])] + [len(row[i]) for row in body])
            for i in range(len(header))
        ]
        template = self.template_env.get_template('table')
        return template.render(
            title=report.title,
            header=self._align(header, widths),
            rule="  ".join("-" * width for width in widths),
            lines=[self._align(row, widths) for row in body],
            notes=report.notes,
        )

    def render_csv(self, report: Report) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            if len(row) != len(report.columns):
                raise ValueError(
                    f"row has {len(row)} cells but report '{report.title}' has {len(report.columns)} columns"
                )
            writer.writerow([format_value(value) for value in row])
        return buffer.getvalue()

    def render(self, report: Report, output_format: OutputFormat) -> str:
        output_format = OutputFormat(output_format)
        logger.debug(f"Rendering '{report.title}' as {output_format.value} ({len(report.rows)} rows)")
        if output_format is OutputFormat.CSV:
            return self.render_csv(report)
        return self.render_table(report)
