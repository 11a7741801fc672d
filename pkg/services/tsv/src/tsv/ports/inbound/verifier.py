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

"""Interface for running verification suites and single point evaluations"""

from abc import ABC, abstractmethod
from typing import Any

from tsv.core.models import SuiteReport


class VerifierPort(ABC):
    """The interface of a service that checks algebraic and geometric identities."""

    class UnknownGeometryError(RuntimeError):
        """Raised when a geometry name is not in the registry."""

        def __init__(self, *, name: str, known: list[str]):
            message = f"Unknown geometry '{name}', known geometries: {', '.join(known)}."
            super().__init__(message)

    class MalformedParametersError(RuntimeError):
        """Raised when a parameter block does not validate for its geometry."""

        def __init__(self, *, name: str, reason: str):
            message = f"Parameters for geometry '{name}' are malformed: {reason}"
            super().__init__(message)

    class PointOutsideDomainError(RuntimeError):
        """Raised when an evaluation point lies outside the chart domain."""

        def __init__(self, *, name: str, point: list[float]):
            message = f"Point {point} lies outside the domain of geometry '{name}'."
            super().__init__(message)

    class UnknownQuantityError(RuntimeError):
        """Raised when a point evaluation asks for an unsupported quantity."""

        def __init__(self, *, quantity: str, known: list[str]):
            message = f"Unknown quantity '{quantity}', choose one of: {', '.join(known)}."
            super().__init__(message)

    @abstractmethod
    async def run_algebra(self, *, n: int) -> SuiteReport:
        """Check the Clifford and spinor identities in dimension n."""

    @abstractmethod
    async def run_geometry(self, *, name: str, params: dict[str, Any]) -> SuiteReport:
        """Build a registry geometry and check every expectation it carries."""

    @abstractmethod
    async def evaluate_point(
        self, *, name: str, params: dict[str, Any], point: list[float], quantity: str
    ) -> dict[str, Any]:
        """Evaluate one named quantity of a registry geometry at a point."""

    @abstractmethod
    async def run_all(self) -> SuiteReport:
        """Run the algebra suites for every dimension and every geometry suite."""
