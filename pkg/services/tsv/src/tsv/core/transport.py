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

"""Parallel transport of vectors and spinors along polylines"""

import logging
from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

from tsv.core.charts import FrameField, MetricChart
from tsv.core.clifford import CliffordRep
from tsv.core.curvature import christoffel
from tsv.core.exceptions import TransportStepError
from tsv.core.spin_geometry import spinor_terms

log = logging.getLogger(__name__)

Rhs = Callable[[NDArray, NDArray, NDArray], NDArray]

INITIAL_STEPS = 8
MAX_REFINEMENTS = 10


def _rk4(rhs: Rhs, start: NDArray, end: NDArray, y: NDArray, steps: int) -> NDArray:
    """Classical Runge-Kutta on the straight segment from start to end."""
    velocity = end - start
    h = 1.0 / steps
    for k in range(steps):
        tau = k * h
        p0 = start + tau * velocity
        p_half = start + (tau + 0.5 * h) * velocity
        p1 = start + (tau + h) * velocity
        k1 = rhs(p0, velocity, y)
        k2 = rhs(p_half, velocity, y + 0.5 * h * k1)
        k3 = rhs(p_half, velocity, y + 0.5 * h * k2)
        k4 = rhs(p1, velocity, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def _segment(
    rhs: Rhs,
    start: NDArray,
    end: NDArray,
    y: NDArray,
    *,
    tolerance: float,
    max_refinements: int,
) -> NDArray:
    """Integrate one segment, doubling the step count until two runs agree."""
    steps = INITIAL_STEPS
    coarse = _rk4(rhs, start, end, y, steps)
    error = np.inf
    for _ in range(max_refinements):
        fine = _rk4(rhs, start, end, y, 2 * steps)
        error = float(np.max(np.abs(fine - coarse)))
        if error <= tolerance * (1 + float(np.max(np.abs(fine)))):
            return fine
        coarse, steps = fine, 2 * steps
    transport_error = TransportStepError(refinements=max_refinements, error=error)
    log.error(
        transport_error,
        extra={"start": start.tolist(), "end": end.tolist(), "steps": steps},
    )
    raise transport_error


def _transport(
    rhs: Rhs,
    chart: MetricChart,
    path: NDArray,
    y: NDArray,
    tolerance: float,
    max_refinements: int,
) -> NDArray:
    path = np.asarray(path, dtype=float)
    for x in path:
        chart.check_point(x)
    for start, end in zip(path[:-1], path[1:]):
        y = _segment(
            rhs, start, end, y, tolerance=tolerance, max_refinements=max_refinements
        )
    return y


def transport_vector(
    chart: MetricChart,
    path: NDArray,
    vector: NDArray,
    *,
    tolerance: float = 1e-10,
    max_refinements: int = MAX_REFINEMENTS,
) -> NDArray[np.float64]:
    """Coordinate components of the vector transported along the polyline."""

    def rhs(x: NDArray, velocity: NDArray, v: NDArray) -> NDArray:
        return -np.einsum("kij,i,j->k", christoffel(chart, x), velocity, v)

    return _transport(
        rhs, chart, path, np.asarray(vector, dtype=float), tolerance, max_refinements
    )


def transport_spinor(
    frame: FrameField,
    rep: CliffordRep,
    path: NDArray,
    spinor: NDArray,
    *,
    tolerance: float = 1e-10,
    max_refinements: int = MAX_REFINEMENTS,
) -> NDArray[np.complex128]:
    """Frame components of the spinor transported along the polyline."""

    def rhs(x: NDArray, velocity: NDArray, phi: NDArray) -> NDArray:
        weights = frame.coframe(x) @ velocity
        return -np.einsum("c,cik,k->i", weights, spinor_terms(rep, frame, x), phi)

    return _transport(
        rhs,
        frame.chart,
        path,
        np.asarray(spinor, dtype=complex),
        tolerance,
        max_refinements,
    )


def parallel_transport(
    chart: MetricChart,
    path: NDArray,
    obj: NDArray,
    *,
    frame: FrameField | None = None,
    rep: CliffordRep | None = None,
    tolerance: float = 1e-10,
) -> NDArray:
    """Transport a vector, or a spinor when a frame and representation are given."""
    if frame is not None and rep is not None:
        return transport_spinor(frame, rep, path, obj, tolerance=tolerance)
    return transport_vector(chart, path, obj, tolerance=tolerance)


def closed_path(loop: NDArray) -> NDArray[np.float64]:
    """Append the first vertex when the polyline is open."""
    loop = np.asarray(loop, dtype=float)
    if np.allclose(loop[0], loop[-1]):
        return loop
    return np.vstack([loop, loop[:1]])


def loop_holonomy(
    chart: MetricChart, loop: NDArray, *, tolerance: float = 1e-10
) -> NDArray[np.float64]:
    """Matrix whose columns are the coordinate vectors transported around the loop."""
    path = closed_path(loop)
    columns = [
        transport_vector(chart, path, basis, tolerance=tolerance)
        for basis in np.eye(chart.dim)
    ]
    return np.column_stack(columns)


def square_loop(
    center: NDArray, first: int, second: int, size: float
) -> NDArray[np.float64]:
    """Closed coordinate square in the plane of two axes."""
    center = np.asarray(center, dtype=float)
    corners = []
    for a, b in ((-1, -1), (1, -1), (1, 1), (-1, 1), (-1, -1)):
        corner = center.copy()
        corner[first] += a * size / 2
        corner[second] += b * size / 2
        corners.append(corner)
    return np.array(corners)
