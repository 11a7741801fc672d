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

"""Report models shared by the verification core, the CLI and the report writer"""

from typing import Any, Literal

from pydantic import BaseModel, Field, computed_field


class IdentityRecord(BaseModel):
    """Residual of a single identity; passes iff the residual is within tolerance."""

    name: str
    residual: float = Field(..., description="Nonnegative residual of the identity.")
    tolerance: float
    passed: bool


class IdentityReport(BaseModel):
    """A list of identity residuals evaluated with one tolerance"""

    tolerance: float
    records: list[IdentityRecord] = Field(default_factory=list)

    @classmethod
    def from_residuals(
        cls, residuals: dict[str, float], *, tolerance: float
    ) -> "IdentityReport":
        """Build a report, marking each residual against the shared tolerance."""
        return cls(
            tolerance=tolerance,
            records=[
                IdentityRecord(
                    name=name,
                    residual=float(residual),
                    tolerance=tolerance,
                    passed=bool(float(residual) <= tolerance),
                )
                for name, residual in residuals.items()
            ],
        )

    @computed_field  # type: ignore [prop-decorator]
    @property
    def passed(self) -> bool:
        """Whether every identity passed."""
        return all(record.passed for record in self.records)

    def residual(self, name: str) -> float:
        """Look up the residual of a named identity."""
        for record in self.records:
            if record.name == name:
                return record.residual
        raise KeyError(name)


class SpecialSpinorVerdict(BaseModel):
    """Outcome of a parallel, Killing or twistor test over a sample grid"""

    kind: Literal["parallel", "killing", "twistor"]
    killing_number: tuple[float, float] | None = Field(
        default=None, description="Real and imaginary part of the Killing number."
    )
    max_residual: float
    tolerance: float
    passed: bool
    degenerate: bool = Field(
        default=False, description="Set when the field vanishes on the whole grid."
    )


class CheckRecord(BaseModel):
    """One checked expectation inside a suite report"""

    subject: str = Field(..., description="Geometry name or algebra dimension.")
    module: str
    op: str
    identity: str
    residual: float | None = Field(
        ..., description="Measured residual, null when the check raised."
    )
    tolerance: float
    passed: bool
    expected_failure: bool = Field(
        default=False, description="Set for negative controls that must exceed the tolerance."
    )
    error: str | None = None


class SuiteReport(BaseModel):
    """Machine-readable outcome of a verification run"""

    artifact_version: str
    geometry: str
    parameters: dict[str, Any] = Field(default_factory=dict)
    seed: int
    records: list[CheckRecord] = Field(default_factory=list)
    passed: bool
    measurements: dict[str, Any] = Field(
        default_factory=dict, description="Measured constants such as epsilon."
    )
    wall_time: float = Field(..., description="Wall clock seconds of the run.")


class GeometryRequest(BaseModel):
    """Content of a parameter file: a registry name and its parameter block"""

    name: str
    params: dict[str, Any] = Field(default_factory=dict)
