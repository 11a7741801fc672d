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

"""Tests for lightlike Killing fields, the Killing decomposition and the Kaehler flag"""

import numpy as np
import pytest

from tsv.core.charts import SampleGrid, VectorField
from tsv.core.exceptions import (
    NotKillingError,
    NotLightlikeFieldError,
    NotParallelError,
    VanishingScalarCurvatureError,
)
from tsv.core.geometries import build_geometry
from tsv.core.killing import (
    kaehler_flag_check,
    killing_decompose,
    lightlike_killing_analysis,
)


def _points(name: str, params: dict | None = None, seed: int = 11) -> np.ndarray:
    chart = build_geometry(name, params).chart
    rng = np.random.default_rng(seed)
    grid = SampleGrid.build(chart, size=2, spot_count=3, rng=rng)
    return grid.spot_points


def test_brinkmann_type_pp_wave(caplog):
    """The null field of a pp-wave has epsilon 0 and does not twist."""
    spec = build_geometry("pp-wave")
    points = _points("pp-wave")

    with caplog.at_level("INFO"):
        analysis = lightlike_killing_analysis(
            spec.chart,
            spec.vector_fields["null"],
            points,
            frame=spec.frame,
            spinor=spec.spinors["parallel_0"].field,
        )

    assert analysis.epsilon == 0
    assert analysis.verdict == "brinkmann_type"
    assert analysis.twist_max < 1e-8
    assert analysis.report.passed, analysis.report.records
    assert analysis.report.residual("current_alignment") < 1e-8
    assert analysis.report.residual("square_identity") < 1e-8
    assert any("brinkmann_type" in message for message in caplog.messages)
    assert analysis.to_dict()["verdict"] == "brinkmann_type"


def test_fefferman_type_fiber():
    """The fiber field of the Fefferman space has epsilon 1 and twists."""
    spec = build_geometry("fefferman-heisenberg")
    points = _points("fefferman-heisenberg")

    fiber = spec.vector_fields["fiber"]
    analysis = lightlike_killing_analysis(spec.chart, fiber, points)

    assert analysis.epsilon == 1
    assert analysis.verdict == "fefferman_type"
    assert analysis.ric_vv > 0
    assert analysis.scaled_ric_vv == pytest.approx(-2 * analysis.ric_vv)
    assert analysis.twist_min > 1e-3
    assert analysis.report.passed, analysis.report.records


def test_parallel_null_field_without_spinor():
    """On R^{1,1} x H^2 x H^2 the parallel null field passes without the twistor
    current identities, which need a bundled spinor.
    """
    params = {"k": 2, "base": "hyperbolic_pair"}
    spec = build_geometry("product", params)
    points = _points("product", params)

    analysis = lightlike_killing_analysis(
        spec.chart, spec.vector_fields["null"], points
    )

    assert analysis.epsilon == 0
    assert analysis.verdict == "brinkmann_type"
    assert analysis.report.passed, analysis.report.records
    names = {record.name for record in analysis.report.records}
    assert not names & {"square_identity", "pairing_t_v", "exterior_derivative"}


def test_analysis_rejects_non_killing_fields():
    """Only lightlike Killing fields can be analysed."""
    spec = build_geometry("minkowski")
    points = _points("minkowski")
    position = VectorField(name="position", components=lambda x: x)
    time = VectorField(name="time", components=lambda x: np.eye(4)[0])

    with pytest.raises(NotKillingError):
        lightlike_killing_analysis(spec.chart, position, points)
    with pytest.raises(NotLightlikeFieldError):
        lightlike_killing_analysis(spec.chart, time, points)


def test_killing_decomposition():
    """The twistor spinor on the Einstein-Sasaki chart splits into Killing spinors
    with Killing numbers i/2 and -i/2.
    """
    spec = build_geometry("einstein-sasaki")
    points = np.array([[0.1, 0.2, -0.1], [-0.2, -0.1, 0.15]])

    assert spec.frame is not None
    decomposition = killing_decompose(
        spec.frame, spec.spinors["phi"].field, points, tolerance=1e-5
    )

    assert decomposition.report.passed, decomposition.report.records
    assert decomposition.scalar_curvature == pytest.approx(-6.0, abs=1e-5)
    numbers = sorted(
        [decomposition.killing_plus.imag, decomposition.killing_minus.imag]
    )
    assert numbers == pytest.approx([-0.5, 0.5], abs=1e-5)
    assert abs(decomposition.killing_plus.real) < 1e-12


def test_decomposition_needs_scalar_curvature():
    """Flat space has no Killing decomposition."""
    spec = build_geometry("minkowski")

    assert spec.frame is not None
    field = spec.spinors["twistor_v0"].field

    with pytest.raises(VanishingScalarCurvatureError):
        killing_decompose(spec.frame, field, _points("minkowski"))


def test_kaehler_flag_on_pp_wave():
    """The flat screen of a pp-wave carries a parallel complex structure."""
    spec = build_geometry("pp-wave")

    report = kaehler_flag_check(
        spec.chart,
        spec.vector_fields["null"],
        spec.complex_structure,  # type: ignore [arg-type]
        spec.transverse,
        _points("pp-wave"),
    )

    assert report.passed, report.records


def test_kaehler_flag_fails_on_hyperbolic_base():
    """On R^{1,1} x H^2 x H^2 the curvature trace condition fails."""
    params = {"k": 2, "base": "hyperbolic_pair"}
    spec = build_geometry("product", params)

    report = kaehler_flag_check(
        spec.chart,
        spec.vector_fields["null"],
        spec.complex_structure,  # type: ignore [arg-type]
        spec.transverse,
        _points("product", params),
    )

    assert not report.passed
    assert report.residual("curvature_trace") > 0.1
    assert report.residual("parallel_structure") < 1e-6


def test_kaehler_flag_needs_parallel_field():
    """The flag check starts from a parallel vector field."""
    spec = build_geometry("pp-wave")
    position = VectorField(name="position", components=lambda x: x)

    with pytest.raises(NotParallelError):
        kaehler_flag_check(
            spec.chart,
            position,
            spec.complex_structure,  # type: ignore [arg-type]
            spec.transverse,
            _points("pp-wave"),
        )
