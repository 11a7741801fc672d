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

"""Interface for adapters that persist suite reports"""

from abc import ABC, abstractmethod
from pathlib import Path

from tsv.core.models import SuiteReport


class ReportWriterPort(ABC):
    """An interface for an adapter that serializes suite reports."""

    class ReportValidationError(RuntimeError):
        """Raised when a serialized report violates the report schema."""

        def __init__(self, *, geometry: str, reason: str):
            message = f"Report for '{geometry}' does not match the report schema: {reason}"
            super().__init__(message)

    @abstractmethod
    def render(self, *, report: SuiteReport) -> str:
        """Serialize a report to a JSON document."""
        ...

    @abstractmethod
    async def write(self, *, report: SuiteReport, path: Path | None = None) -> str:
        """Serialize a report and write it to a path, or return it when no path is given."""
        ...
