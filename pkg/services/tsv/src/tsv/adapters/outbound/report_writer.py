# Copyright 2021 - 2024 Universität Tübingen, DKFZ, EMBL, and Universität zu Köln
# for the German Human Genome-Phenome Archive (GHGA)
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""JSON report writer validating against the schema of the report model"""

import asyncio
import json
import logging
from pathlib import Path
from typing import Any

import jsonschema
from pydantic import Field
from pydantic_settings import BaseSettings

from tsv.core.models import SuiteReport
from tsv.ports.outbound.report import ReportWriterPort

log = logging.getLogger(__name__)


def report_schema() -> dict[str, Any]:
    """JSON schema of serialized suite reports."""
    return SuiteReport.model_json_schema(mode="serialization")


class ReportWriterConfig(BaseSettings):
    """Config for serializing suite reports."""

    report_indent: int = Field(
        default=2,
        ge=0,
        description="Indentation of the JSON reports, 0 writes a single line.",
        examples=[0, 2],
    )
    validate_reports: bool = Field(
        default=True,
        description=(
            "Validate every report against the report schema before it is written."
        ),
    )


class JsonReportWriter(ReportWriterPort):
    """Serializes suite reports to JSON documents."""

    def __init__(self, *, config: ReportWriterConfig):
        """Initialize with the writer config."""
        self._config = config
        self._schema = report_schema()

    def render(self, *, report: SuiteReport) -> str:
        """Serialize a report to a JSON document."""
        text = report.model_dump_json(indent=self._config.report_indent or None)
        if self._config.validate_reports:
            try:
                jsonschema.validate(json.loads(text), self._schema)
            except jsonschema.ValidationError as err:
                error = self.ReportValidationError(
                    geometry=report.geometry, reason=err.message
                )
                log.error(error, extra={"geometry": report.geometry})
                raise error from err
        return text

    async def write(self, *, report: SuiteReport, path: Path | None = None) -> str:
        """Serialize a report and write it to a path, or return it when no path is given."""
        text = self.render(report=report)
        if path is not None:
            await asyncio.to_thread(path.write_text, text + "\n", encoding="utf-8")
            log.info(
                "Wrote report for '%s' to %s.",
                report.geometry,
                path,
                extra={"geometry": report.geometry, "passed": report.passed},
            )
        return text
