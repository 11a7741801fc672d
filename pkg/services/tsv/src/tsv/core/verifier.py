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

"""Suite runner: algebra and geometry suites, point evaluations and the full sweep"""

import asyncio
import logging
import time
import zlib
from collections.abc import Callable
from dataclasses import replace
from typing import Any

import numpy as np
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings

from tsv import __version__
from tsv.core.algebra_checks import check_algebra
from tsv.core.charts import SampleGrid
from tsv.core.clifford import MAX_DIMENSION, MIN_DIMENSION
from tsv.core.curvature import christoffel, curvature_pack
from tsv.core.exceptions import DimensionRangeError
from tsv.core.geometries import GeometrySpec, build_geometry, geometry_names
from tsv.core.geometry_checks import check_geometry
from tsv.core.killing import lightlike_killing_analysis
from tsv.core.models import CheckRecord, SuiteReport
from tsv.core.records import RecordBook
from tsv.core.spin_geometry import dirac_operator, twistor_residual
from tsv.ports.inbound.verifier import VerifierPort

log = logging.getLogger(__name__)

QUANTITIES = [
    "curvature",
    "christoffel",
    "dirac",
    "twistor-residual",
    "killing-analysis",
]

# geometry cases of the full sweep, in registry order
SWEEP_CASES: list[tuple[str, dict[str, Any]]] = [
    ("minkowski", {}),
    ("minkowski", {"n": 3}),
    ("pp-wave", {}),
    ("pp-wave", {"n": 6}),
    ("cahen-wallach", {}),
    ("einstein-sasaki", {}),
    ("cone", {}),
    ("product", {}),
    ("product", {"k": 2}),
    ("product", {"k": 2, "base": "hyperbolic_pair"}),
    ("fefferman-heisenberg", {}),
    ("warped-product", {}),
    ("warped-product", {"profile": "cosh"}),
]


class VerifierConfig(BaseSettings):
    """Config specific to the suite runner"""

    seed: int = Field(
        default=0,
        description="Seed of the random samples and spot points. Every subject derives"
        + " its own generator from it, so results do not depend on scheduling.",
    )
    tolerance: float | None = Field(
        default=None,
        gt=0,
        description="Global override of every per-check tolerance.",
    )
    grid_size: int = Field(
        default=5,
        ge=2,
        description="Lattice points per axis; the lattice spans the first min(n, 4) axes.",
    )
    spot_points: int = Field(
        default=3,
        ge=1,
        description="Random points for the expensive checks such as integrability,"
        + " Cotton-York and the second Bianchi identity.",
    )
    random_samples: int = Field(
        default=100,
        ge=1,
        description="Random spinors and vectors per dimension in the algebra suite.",
    )
    fd_step: float = Field(
        default=1e-4,
        gt=0,
        description="Base step of the central differences; nested levels multiply it by ten.",
    )
    max_workers: int = Field(
        default=4,
        ge=1,
        description="Number of suites that run concurrently in worker threads.",
    )


def _complex_pairs(array: np.ndarray) -> list:
    return np.stack([np.real(array), np.imag(array)], axis=-1).tolist()


def _with_step(spec: GeometrySpec, fd_step: float) -> GeometrySpec:
    if spec.chart.fd_step == fd_step:
        return spec
    chart = spec.chart.with_step(fd_step)
    frame = None if spec.frame is None else replace(spec.frame, chart=chart)
    return replace(spec, chart=chart, frame=frame)


class Verifier(VerifierPort):
    """Runs the algebra and geometry suites and evaluates single points."""

    def __init__(self, *, config: VerifierConfig):
        """Initialize with the suite config."""
        self._config = config

    def _rng(self, subject: str) -> np.random.Generator:
        return np.random.default_rng([self._config.seed, zlib.crc32(subject.encode())])

    def _build(self, name: str, params: dict[str, Any]) -> GeometrySpec:
        """Build a registry geometry, translating registry and validation errors."""
        try:
            spec = build_geometry(name, params)
        except KeyError as err:
            error = self.UnknownGeometryError(name=name, known=geometry_names())
            log.error(error, extra={"geometry": name})
            raise error from err
        except ValidationError as err:
            error = self.MalformedParametersError(name=name, reason=str(err))
            log.error(error, extra={"geometry": name, "params": params})
            raise error from err
        return _with_step(spec, self._config.fd_step)

    def _report(
        self,
        *,
        subject: str,
        parameters: dict[str, Any],
        records: list[CheckRecord],
        started: float,
        measurements: dict[str, Any] | None = None,
    ) -> SuiteReport:
        return SuiteReport(
            artifact_version=__version__,
            geometry=subject,
            parameters=parameters,
            seed=self._config.seed,
            records=records,
            passed=all(record.passed for record in records),
            measurements=measurements or {},
            wall_time=time.perf_counter() - started,
        )

    def _algebra(self, n: int) -> SuiteReport:
        started = time.perf_counter()
        subject = f"algebra-n{n}"
        book = RecordBook(subject=subject, override=self._config.tolerance)
        check_algebra(n, book, self._rng(subject), self._config.random_samples)
        log.info(
            "Algebra suite for n = %s finished with %d records.",
            n,
            len(book.records),
            extra={"n": n, "passed": book.passed},
        )
        return self._report(
            subject=subject, parameters={"n": n}, records=book.records, started=started
        )

    def _geometry(self, spec: GeometrySpec, subject: str) -> SuiteReport:
        started = time.perf_counter()
        rng = self._rng(subject)
        grid = SampleGrid.build(
            spec.chart,
            size=self._config.grid_size,
            spot_count=self._config.spot_points,
            rng=rng,
        )
        book = RecordBook(subject=subject, override=self._config.tolerance)
        measurements = check_geometry(spec, grid, book, rng)
        return self._report(
            subject=subject,
            parameters=spec.parameters,
            records=book.records,
            started=started,
            measurements=measurements,
        )

    async def run_algebra(self, *, n: int) -> SuiteReport:
        """Check the Clifford and spinor identities in dimension n."""
        if not MIN_DIMENSION <= n <= MAX_DIMENSION:
            error = DimensionRangeError(
                n=n, minimum=MIN_DIMENSION, maximum=MAX_DIMENSION
            )
            log.error(error, extra={"n": n})
            raise error
        return await asyncio.to_thread(self._algebra, n)

    async def run_geometry(self, *, name: str, params: dict[str, Any]) -> SuiteReport:
        """Build a registry geometry and check every expectation it carries."""
        spec = self._build(name, params)
        return await asyncio.to_thread(self._geometry, spec, name)

    async def evaluate_point(
        self, *, name: str, params: dict[str, Any], point: list[float], quantity: str
    ) -> dict[str, Any]:
        """Evaluate one named quantity of a registry geometry at a point."""
        if quantity not in QUANTITIES:
            error = self.UnknownQuantityError(quantity=quantity, known=QUANTITIES)
            log.error(error, extra={"quantity": quantity})
            raise error
        spec = self._build(name, params)
        x = np.asarray(point, dtype=float)
        if x.shape != (spec.chart.dim,) or not spec.chart.contains(x):
            error = self.PointOutsideDomainError(name=name, point=list(point))
            log.error(error, extra={"geometry": name, "point": list(point)})
            raise error
        evaluators: dict[str, Callable[[GeometrySpec, np.ndarray], dict[str, Any]]] = {
            "curvature": lambda s, y: curvature_pack(s.chart, y).to_dict(),
            "christoffel": lambda s, y: {
                "christoffel": christoffel(s.chart, y).tolist()
            },
            "dirac": self._dirac_values,
            "twistor-residual": self._twistor_values,
            "killing-analysis": self._killing_values,
        }
        values = await asyncio.to_thread(evaluators[quantity], spec, x)
        header = {"geometry": name, "parameters": spec.parameters, "point": x.tolist()}
        return header | values

    def _require_spinors(self, spec: GeometrySpec, quantity: str) -> None:
        if spec.frame is None or not spec.spinors:
            error = self.UnknownQuantityError(
                quantity=f"{quantity} on {spec.name}",
                known=["curvature", "christoffel"],
            )
            log.error(error, extra={"geometry": spec.name, "quantity": quantity})
            raise error

    def _dirac_values(self, spec: GeometrySpec, x: np.ndarray) -> dict[str, Any]:
        self._require_spinors(spec, "dirac")
        frame = spec.frame
        assert frame is not None
        return {
            "dirac": {
                name: _complex_pairs(dirac_operator(frame, b.field, x))
                for name, b in spec.spinors.items()
            }
        }

    def _twistor_values(self, spec: GeometrySpec, x: np.ndarray) -> dict[str, Any]:
        self._require_spinors(spec, "twistor-residual")
        frame = spec.frame
        assert frame is not None
        return {
            "twistor_residual": {
                name: twistor_residual(frame, b.field, x)
                for name, b in spec.spinors.items()
            }
        }

    def _killing_values(self, spec: GeometrySpec, x: np.ndarray) -> dict[str, Any]:
        expect = spec.expectations
        field_name = expect.killing_field or expect.parallel_field
        if field_name is None:
            error = self.UnknownQuantityError(
                quantity=f"killing-analysis on {spec.name}",
                known=["curvature", "christoffel", "dirac", "twistor-residual"],
            )
            log.error(error, extra={"geometry": spec.name})
            raise error
        analysis = lightlike_killing_analysis(
            spec.chart, spec.vector_fields[field_name], np.array([x])
        )
        return {"killing_analysis": analysis.to_dict()}

    async def run_all(self) -> SuiteReport:
        """Run the algebra suites for every dimension and every geometry suite."""
        started = time.perf_counter()
        semaphore = asyncio.Semaphore(self._config.max_workers)

        async def bounded(func: Callable[..., SuiteReport], *args: Any) -> SuiteReport:
            async with semaphore:
                return await asyncio.to_thread(func, *args)

        jobs = [
            bounded(self._algebra, n) for n in range(MIN_DIMENSION, MAX_DIMENSION + 1)
        ]
        for index, (name, params) in enumerate(SWEEP_CASES):
            spec = self._build(name, params)
            jobs.append(bounded(self._geometry, spec, f"{name}#{index}"))
        reports = await asyncio.gather(*jobs)
        records = [record for report in reports for record in report.records]
        log.info(
            "Full sweep finished: %d suites, %d records.",
            len(reports),
            len(records),
            extra={"passed": all(report.passed for report in reports)},
        )
        return self._report(
            subject="all",
            parameters={
                "suites": [
                    {
                        "subject": r.geometry,
                        "parameters": r.parameters,
                        "passed": r.passed,
                    }
                    for r in reports
                ]
            },
            records=records,
            started=started,
            measurements={
                r.geometry: r.measurements for r in reports if r.measurements
            },
        )
