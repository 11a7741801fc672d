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

"""Tests for finite differences, charts, frames and the curvature stack"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from tsv.core.charts import (
    MetricChart,
    SampleGrid,
    VectorField,
    conformal_rescale,
    gram_schmidt_frame,
    orthonormal_frame,
    polynomial_scalar,
)
from tsv.core.curvature import (
    christoffel,
    conformal_killing_residual,
    curvature_pack,
    killing_residual,
    metric_compatibility_residual,
    pp_curvature_check,
    riemann_symmetry_residuals,
    second_bianchi_residual,
    twist_measure,
    weyl_trace_residual,
    without_analytic_derivatives,
)
from tsv.core.differentiation import central_difference
from tsv.core.exceptions import (
    OutsideDomainError,
    SignatureError,
    SingularMetricError,
    StepUnderflowError,
)
from tsv.core.geometries import (
    PolynomialProfile,
    build_geometry,
    default_profile,
    flat_chart,
    hyperbolic_pair_chart,
)


def test_central_difference_accuracy():
    """Richardson extrapolated central differences recover analytic derivatives."""

    def func(x):
        return np.array([np.sin(x[0]) * x[1], np.exp(x[1])])

    x = np.array([0.3, -0.7])
    expected = np.array(
        [[np.cos(x[0]) * x[1], 0.0], [np.sin(x[0]), np.exp(x[1])]]
    )

    assert np.allclose(central_difference(func, x, 1e-3), expected, atol=1e-10)


def test_step_underflow():
    """Steps below machine resolution are refused."""
    with pytest.raises(StepUnderflowError):
        central_difference(lambda x: x, np.zeros(2), 1e-14)


def test_hyperbolic_pair_curvature():
    """H^2 x H^2 has Ric = -g and scalar curvature -4."""
    chart = hyperbolic_pair_chart()
    x = np.array([0.1, 0.8, -0.2, 1.2])

    pack = curvature_pack(chart, x)

    assert np.allclose(pack.ricci, -chart.g(x), atol=1e-9)
    assert pack.scalar == pytest.approx(-4.0, abs=1e-9)
    assert max(riemann_symmetry_residuals(pack).values()) < 1e-9
    assert weyl_trace_residual(chart, pack) < 1e-9


def test_finite_difference_curvature_matches_analytic():
    """Dropping the analytic metric derivatives leaves the curvature unchanged."""
    chart = hyperbolic_pair_chart()
    numeric = without_analytic_derivatives(chart)
    x = np.array([-0.1, 1.1, 0.3, 0.9])

    assert numeric.derivative_depth == 2
    assert np.allclose(christoffel(numeric, x), christoffel(chart, x), atol=1e-8)
    assert np.allclose(
        curvature_pack(numeric, x, with_cotton=False).riemann,
        curvature_pack(chart, x, with_cotton=False).riemann,
        atol=1e-5,
    )


def test_flat_chart_has_no_curvature():
    """Minkowski space has vanishing Riemann, Weyl and Cotton-York tensors."""
    chart = build_geometry("minkowski", {"n": 5}).chart
    pack = curvature_pack(chart, chart.midpoint())

    assert np.allclose(pack.riemann, 0.0)
    assert np.allclose(pack.weyl, 0.0)
    assert np.allclose(pack.cotton, 0.0)
    assert pack.scalar == 0.0


def test_einstein_sasaki_curvature():
    """The Sasaki chart is Einstein with negative scalar curvature and satisfies
    the Riemann symmetries, metric compatibility and the second Bianchi identity.
    """
    chart = build_geometry("einstein-sasaki").chart
    x = np.array([0.1, 0.2, -0.1])

    pack = curvature_pack(chart, x)
    g = chart.g(x)

    assert pack.scalar < 0
    assert np.allclose(pack.ricci, pack.scalar / 3 * g, atol=1e-6)
    assert max(riemann_symmetry_residuals(pack).values()) < 1e-6
    assert metric_compatibility_residual(chart, x) < 1e-9
    assert second_bianchi_residual(chart, x) < 1e-4
    assert np.max(np.abs(pack.cotton)) < 1e-4


def test_pp_wave_curvature_condition():
    """The pp-wave satisfies the trace condition on R (x) R on its lattice."""
    chart = build_geometry("pp-wave").chart
    grid = SampleGrid.build(chart, size=3, spot_count=2, rng=np.random.default_rng(1))

    assert pp_curvature_check(chart, grid.all_points) < 1e-10


def test_pp_wave_closed_forms():
    """Christoffel symbols and Ricci of 2 dt ds + f ds^2 + dx^2 follow from f."""
    chart = build_geometry("pp-wave").chart
    profile = PolynomialProfile.from_terms(default_profile(4))
    x = np.array([0.1, 0.2, 0.3, -0.1])
    df = profile.gradient(x[1:])

    gamma = christoffel(chart, x)
    pack = curvature_pack(chart, x)

    assert chart.g(x)[0, 1] == 1.0
    assert gamma[0, 1, 1] == pytest.approx(0.5 * df[0], abs=1e-10)
    for i in (2, 3):
        assert gamma[0, 1, i] == pytest.approx(0.5 * df[i - 1], abs=1e-10)
        assert gamma[i, 1, 1] == pytest.approx(-0.5 * df[i - 1], abs=1e-10)
    expected = np.zeros((4, 4))
    expected[1, 1] = -0.5 * profile.transverse_laplacian(x[1:])
    assert np.allclose(pack.ricci, expected, atol=1e-7)
    assert pack.scalar == pytest.approx(0.0, abs=1e-7)


def test_cahen_wallach_ricci():
    """f = x^2 in dimension three gives Ric = -ds^2."""
    chart = build_geometry("cahen-wallach", {"lambdas": [1.0]}).chart
    x = np.array([0.2, -0.3, 0.4])

    pack = curvature_pack(chart, x)

    assert pack.ricci[1, 1] == pytest.approx(-1.0, abs=1e-7)
    assert np.allclose(np.delete(pack.ricci.ravel(), 4), 0.0, atol=1e-7)
    assert pack.scalar == pytest.approx(0.0, abs=1e-7)


def test_chart_domain_and_signature():
    """Charts reject points outside the box, wrong signatures and singular metrics."""
    chart = flat_chart("euclidean", ("a", "b"), np.ones(2))
    lorentzian_claim = MetricChart(
        name="claim",
        coordinates=("a", "b"),
        lower=chart.lower,
        upper=chart.upper,
        metric=chart.metric,
        negative_directions=1,
    )
    singular = MetricChart(
        name="singular",
        coordinates=("a", "b"),
        lower=chart.lower,
        upper=chart.upper,
        metric=lambda x: np.diag([1.0, 1e-14]),
    )

    with pytest.raises(OutsideDomainError):
        chart.check_point(np.array([0.0, 3.0]))
    with pytest.raises(OutsideDomainError):
        chart.check_point(np.zeros(3))
    with pytest.raises(SignatureError):
        lorentzian_claim.check_signature(np.zeros(2))
    with pytest.raises(SingularMetricError):
        singular.inverse(np.zeros(2))


def test_sample_grid():
    """The lattice spans the first four axes and every point lies in the chart."""
    chart = build_geometry("pp-wave", {"n": 6}).chart
    grid = SampleGrid.build(chart, size=3, spot_count=5, rng=np.random.default_rng(3))

    assert grid.points.shape == (81, 6)
    assert grid.spot_points.shape == (5, 6)
    assert np.allclose(grid.points[:, 4:], chart.midpoint()[4:])
    assert all(chart.contains(x) for x in grid.all_points)


@pytest.mark.parametrize("name", ["pp-wave", "einstein-sasaki", "fefferman-heisenberg"])
def test_orthonormal_frames(name: str):
    """Gram-Schmidt frames are orthonormal with the timelike vector first."""
    chart = build_geometry(name).chart
    grid = SampleGrid.build(chart, size=2, spot_count=2, rng=np.random.default_rng(5))

    frame = orthonormal_frame(chart, grid.all_points)

    assert frame.signature[0] == -1.0
    assert np.all(frame.signature[1:] == 1.0)
    for x in grid.all_points:
        assert frame.orthonormality_residual(x) < 1e-9


def test_frame_cache_across_threads():
    """Concurrent frame lookups past the cache bound return the uncached vectors."""
    chart = build_geometry("pp-wave").chart
    frame = orthonormal_frame(chart)
    points = np.random.default_rng(9).uniform(-0.9, 0.9, size=(5000, 4))

    with ThreadPoolExecutor(max_workers=8) as pool:
        cached = list(pool.map(frame.vectors, points))

    for x, vectors in zip(points[::250], cached[::250]):
        assert np.array_equal(vectors, gram_schmidt_frame(chart, x)[0])
    assert len(frame._cache) <= 4097


def test_conformal_rescale_derivatives():
    """The chain ruled derivatives of a rescaled metric match finite differences."""
    chart = hyperbolic_pair_chart()
    hessian = np.diag([0.1, 0.2, -0.1, 0.0])
    sigma = polynomial_scalar(0.1, [0.2, -0.1, 0.0, 0.3], hessian)
    rescaled = conformal_rescale(chart, sigma)
    x = np.array([0.1, 0.9, -0.2, 1.1])

    numeric = without_analytic_derivatives(rescaled)

    assert np.allclose(rescaled.g(x), np.exp(2 * sigma.value(x)) * chart.g(x))
    assert np.allclose(rescaled.dg(x), numeric.dg(x), atol=1e-8)
    assert np.allclose(rescaled.d2g(x), numeric.d2g(x), atol=1e-5)


def test_killing_and_conformal_killing_fields():
    """Translations are Killing, the position field is conformal Killing only."""
    chart = build_geometry("minkowski").chart
    x = np.array([0.2, -0.3, 0.1, 0.4])
    translation = VectorField(name="d_t", components=lambda y: np.eye(4)[0])
    position = VectorField(name="position", components=lambda y: y)

    assert killing_residual(chart, translation, x) < 1e-9
    assert killing_residual(chart, position, x) == pytest.approx(2.0)
    assert conformal_killing_residual(chart, position, x) < 1e-9


def test_twist_measure():
    """A rotation field twists, a translation does not."""
    chart = build_geometry("minkowski").chart
    x = np.array([0.2, -0.3, 0.1, 0.4])
    translation = VectorField(name="d_t", components=lambda y: np.eye(4)[0])
    rotation = VectorField(
        name="rotation", components=lambda y: np.array([0.0, -y[2], y[1], 1.0])
    )

    assert twist_measure(chart, translation, x) < 1e-12
    assert twist_measure(chart, rotation, x) > 0.1
