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

"""Tests for parallel transport of vectors and spinors"""

import numpy as np
import pytest

from tsv.core.exceptions import OutsideDomainError, TransportStepError
from tsv.core.geometries import build_geometry, hyperbolic_pair_chart
from tsv.core.transport import (
    closed_path,
    loop_holonomy,
    parallel_transport,
    square_loop,
    transport_spinor,
    transport_vector,
)


def test_flat_transport_is_trivial():
    """In Minkowski space transported vectors keep their components."""
    chart = build_geometry("minkowski").chart
    path = np.array(
        [[0.0, 0.0, 0.0, 0.0], [0.5, 0.2, -0.3, 0.1], [-0.2, 0.4, 0.0, 0.3]]
    )
    vector = np.array([1.0, -2.0, 0.5, 0.3])

    assert np.allclose(transport_vector(chart, path, vector), vector)
    loop = square_loop(np.zeros(4), 0, 1, 0.4)
    assert np.allclose(loop_holonomy(chart, loop), np.eye(4))


def test_transport_preserves_the_metric(rng: np.random.Generator):
    """Parallel transport is an isometry between tangent spaces."""
    chart = hyperbolic_pair_chart()
    path = np.array(
        [[0.0, 0.7, 0.0, 1.2], [0.3, 1.1, -0.2, 0.8], [-0.1, 1.3, 0.2, 1.0]]
    )
    first, second = rng.normal(size=4), rng.normal(size=4)

    moved_first = transport_vector(chart, path, first)
    moved_second = transport_vector(chart, path, second)

    before = first @ chart.g(path[0]) @ second
    after = moved_first @ chart.g(path[-1]) @ moved_second
    assert after == pytest.approx(before, abs=1e-8)


def test_curved_holonomy():
    """Holonomy on H^2 x H^2 rotates, and keeps the metric."""
    chart = hyperbolic_pair_chart()
    center = chart.midpoint()

    holonomy = loop_holonomy(chart, square_loop(center, 0, 1, 0.4))

    assert not np.allclose(holonomy, np.eye(4), atol=1e-3)
    g = chart.g(center - np.array([0.2, 0.2, 0.0, 0.0]))
    assert np.allclose(holonomy.T @ g @ holonomy, g, atol=1e-8)


def test_pp_wave_holonomy_fixes_null_field():
    """The parallel null field of a pp-wave is fixed by every loop."""
    spec = build_geometry("pp-wave")
    loop = square_loop(spec.chart.midpoint(), 1, 2, 0.4)

    holonomy = loop_holonomy(spec.chart, loop)
    null = spec.vector_fields["null"](loop[0])

    assert np.allclose(holonomy @ null, null, atol=1e-8)


def test_parallel_spinor_loop_invariance():
    """A parallel spinor returns to itself after transport around a loop."""
    spec = build_geometry("pp-wave")
    frame, rep = spec.frame, spec.rep
    assert frame is not None and rep is not None
    loop = closed_path(square_loop(spec.chart.midpoint(), 1, 2, 0.4))
    phi = spec.spinors["parallel_0"].field(loop[0])

    moved = transport_spinor(frame, rep, loop, phi)

    assert np.allclose(moved, phi, atol=1e-6)
    transported = parallel_transport(spec.chart, loop, phi, frame=frame, rep=rep)
    assert np.allclose(transported, moved)


def test_closed_path():
    """Open polylines are closed by repeating the first vertex."""
    loop = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])

    closed = closed_path(loop)

    assert closed.shape == (4, 2)
    assert np.allclose(closed[-1], closed[0])
    assert closed_path(closed).shape == (4, 2)


def test_path_outside_domain():
    """Paths that leave the chart are refused."""
    chart = build_geometry("minkowski").chart
    path = np.array([[0.0, 0.0, 0.0, 0.0], [2.0, 0.0, 0.0, 0.0]])

    with pytest.raises(OutsideDomainError):
        transport_vector(chart, path, np.ones(4))


def test_transport_step_error():
    """Transport gives up when the refinement budget is exhausted."""
    chart = hyperbolic_pair_chart()
    path = np.array([[0.0, 0.7, 0.0, 1.2], [0.3, 1.1, -0.2, 0.8]])

    with pytest.raises(TransportStepError):
        transport_vector(chart, path, np.ones(4), max_refinements=0)
