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

"""Collection of check records for one suite subject"""

import logging
import math
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field

from tsv.core.exceptions import (
    CliffordError,
    GeometryError,
    ModelGeometryError,
    SpinGeometryError,
    SpinorInvariantError,
)
from tsv.core.models import CheckRecord, IdentityReport

log = logging.getLogger(__name__)

DOMAIN_ERRORS = (
    CliffordError,
    SpinorInvariantError,
    GeometryError,
    SpinGeometryError,
    ModelGeometryError,
)


@dataclass
class RecordBook:
    """Check records of a subject, with an optional global tolerance override"""

    subject: str
    override: float | None = None
    records: list[CheckRecord] = field(default_factory=list)

    def tolerance(self, default: float) -> float:
        """The override if one is set, the check's own default otherwise."""
        return default if self.override is None else self.override

    @property
    def passed(self) -> bool:
        """Whether every record passed."""
        return all(record.passed for record in self.records)

    def add(
        self,
        module: str,
        op: str,
        identity: str,
        residual: float,
        tolerance: float,
        *,
        expected_failure: bool = False,
    ) -> CheckRecord:
        """Record a residual; a negative control passes when it exceeds the tolerance."""
        residual = float(residual)
        within = math.isfinite(residual) and residual <= tolerance
        record = CheckRecord(
            subject=self.subject,
            module=module,
            op=op,
            identity=identity,
            residual=residual if math.isfinite(residual) else None,
            tolerance=tolerance,
            passed=within != expected_failure,
            expected_failure=expected_failure,
        )
        self.records.append(record)
        if not record.passed:
            log.warning(
                "Check %s.%s (%s) failed for %s with residual %.3e.",
                module,
                op,
                identity,
                self.subject,
                residual,
                extra={"subject": self.subject, "tolerance": tolerance},
            )
        return record

    def add_report(
        self,
        module: str,
        op: str,
        report: IdentityReport,
        *,
        negative_controls: tuple[str, ...] = (),
    ) -> None:
        """Record every identity of a report under one operation."""
        for item in report.records:
            self.add(
                module,
                op,
                item.name,
                item.residual,
                item.tolerance,
                expected_failure=item.name in negative_controls,
            )

    def add_verdict(
        self, module: str, op: str, identity: str, observed: object, expected: object
    ) -> CheckRecord:
        """Record a discrete verdict as residual 0 on agreement and 1 otherwise."""
        if observed != expected:
            log.info(
                "Observed %s for %s, expected %s.",
                observed,
                identity,
                expected,
                extra={"subject": self.subject},
            )
        return self.add(module, op, identity, 0.0 if observed == expected else 1.0, 0.5)

    @contextmanager
    def guard(self, module: str, op: str) -> Iterator[None]:
        """Turn a domain error raised inside the block into a failed record."""
        try:
            yield
        except DOMAIN_ERRORS as error:
            self.records.append(
                CheckRecord(
                    subject=self.subject,
                    module=module,
                    op=op,
                    identity="raised",
                    residual=None,
                    tolerance=0.0,
                    passed=False,
                    error=f"{type(error).__name__}: {error}",
                )
            )
            log.warning(
                "Check %s.%s raised for %s: %s",
                module,
                op,
                self.subject,
                error,
                extra={"subject": self.subject},
            )
