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

"""Coordinate charts, scalar and vector fields, sample grids and orthonormal frames"""

import itertools
import logging
import threading
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import NDArray

from tsv.core.differentiation import central_difference
from tsv.core.exceptions import (
    FrameError,
    OutsideDomainError,
    SignatureError,
    SingularMetricError,
)

log = logging.getLogger(__name__)

PointFunction = Callable[[NDArray[np.float64]], NDArray]

MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class MetricChart:
    """A coordinate box with metric components and optional analytic derivatives.

    `metric_derivative(x)[k, i, j]` is d_k g_ij and
    `metric_second_derivative(x)[k, l, i, j]` is d_k d_l g_ij. Missing derivatives
    are obtained by central differences; every nested level multiplies the step
    by ten.
    """

    name: str
    coordinates: tuple[str, ...]
    lower: NDArray[np.float64]
    upper: NDArray[np.float64]
    metric: PointFunction
    metric_derivative: PointFunction | None = None
    metric_second_derivative: PointFunction | None = None
    negative_directions: int = 1
    fd_step: float = 1e-4

    @property
    def dim(self) -> int:
        """Number of coordinates."""
        return len(self.coordinates)

    @property
    def derivative_depth(self) -> int:
        """Number of finite difference levels behind the second derivatives."""
        if self.metric_second_derivative is not None:
            return 0
        return 1 if self.metric_derivative is not None else 2

    def with_step(self, fd_step: float) -> "MetricChart":
        """Copy of the chart with another finite difference step."""
        return replace(self, fd_step=fd_step)

    def contains(self, x: NDArray) -> bool:
        """Whether x lies in the closed coordinate box."""
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - 1e-12) and np.all(x <= self.upper + 1e-12))

    def check_point(self, x: NDArray) -> NDArray[np.float64]:
        """Return x as float array or raise if it lies outside of the box."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,) or not self.contains(x):
            error = OutsideDomainError(point=x.tolist(), chart=self.name)
            log.error(error, extra={"chart": self.name, "point": x.tolist()})
            raise error
        return x

    def g(self, x: NDArray) -> NDArray[np.float64]:
        """Metric components at x."""
        return np.asarray(self.metric(np.asarray(x, dtype=float)), dtype=float)

    def dg(self, x: NDArray) -> NDArray[np.float64]:
        """First derivatives d_k g_ij."""
        x = np.asarray(x, dtype=float)
        if self.metric_derivative is not None:
            return np.asarray(self.metric_derivative(x), dtype=float)
        return central_difference(self.g, x, self.fd_step)

    def d2g(self, x: NDArray) -> NDArray[np.float64]:
        """Second derivatives d_k d_l g_ij."""
        x = np.asarray(x, dtype=float)
        if self.metric_second_derivative is not None:
            return np.asarray(self.metric_second_derivative(x), dtype=float)
        exponent = 0 if self.metric_derivative is not None else 1
        return central_difference(self.dg, x, self.fd_step * 10**exponent)

    def inverse(self, x: NDArray) -> NDArray[np.float64]:
        """Inverse metric, rejecting near singular matrices."""
        g = self.g(x)
        condition = float(np.linalg.cond(g))
        if not np.isfinite(condition) or condition > MAX_CONDITION:
            point = np.asarray(x).tolist()
            error = SingularMetricError(point=point, condition=condition)
            log.error(error, extra={"chart": self.name, "point": point})
            raise error
        return np.linalg.inv(g)

    def check_signature(self, x: NDArray) -> None:
        """Raise unless the metric at x has the declared negative directions."""
        eigenvalues = np.linalg.eigvalsh(self.g(x))
        negative = int(np.sum(eigenvalues < 0))
        if negative != self.negative_directions or np.min(np.abs(eigenvalues)) < 1e-12:
            error = SignatureError(
                point=np.asarray(x).tolist(),
                expected=self.negative_directions,
                actual=negative,
            )
            log.error(error, extra={"chart": self.name})
            raise error

    def midpoint(self) -> NDArray[np.float64]:
        """Center of the coordinate box."""
        return (self.lower + self.upper) / 2


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    """A smooth function with gradient and Hessian, used as conformal factor"""

    value: Callable[[NDArray[np.float64]], float]
    gradient: PointFunction
    hessian: PointFunction


def polynomial_scalar(
    constant: float = 0.0,
    linear: NDArray | None = None,
    quadratic: NDArray | None = None,
) -> ScalarFunction:
    """sigma(x) = c + b.x + 1/2 x^T H x with H symmetrized."""
    b = None if linear is None else np.asarray(linear, dtype=float)
    h = None if quadratic is None else np.asarray(quadratic, dtype=float)
    if h is not None:
        h = (h + h.T) / 2

    def value(x: NDArray) -> float:
        result = constant
        if b is not None:
            result += float(b @ x)
        if h is not None:
            result += 0.5 * float(x @ h @ x)
        return result

    def gradient(x: NDArray) -> NDArray:
        result = np.zeros_like(x, dtype=float)
        if b is not None:
            result = result + b
        if h is not None:
            result = result + h @ x
        return result

    def hessian(x: NDArray) -> NDArray:
        return np.zeros((x.shape[0],) * 2) if h is None else h

    return ScalarFunction(value=value, gradient=gradient, hessian=hessian)


def random_polynomial_scalar(
    dim: int, rng: np.random.Generator, scale: float = 0.1
) -> ScalarFunction:
    """A small random quadratic polynomial."""
    return polynomial_scalar(
        constant=float(rng.normal(scale=scale)),
        linear=rng.normal(scale=scale, size=dim),
        quadratic=rng.normal(scale=scale, size=(dim, dim)),
    )


def conformal_rescale(chart: MetricChart, sigma: ScalarFunction) -> MetricChart:
    """The chart with metric exp(2 sigma) g and chain-ruled derivatives."""

    def metric(x: NDArray) -> NDArray:
        return np.exp(2 * sigma.value(x)) * chart.g(x)

    def derivative(x: NDArray) -> NDArray:
        s = sigma.gradient(x)
        return np.exp(2 * sigma.value(x)) * (
            2 * np.einsum("k,ij->kij", s, chart.g(x)) + chart.dg(x)
        )

    def second_derivative(x: NDArray) -> NDArray:
        s = sigma.gradient(x)
        hess = sigma.hessian(x)
        g = chart.g(x)
        dg = chart.dg(x)
        return np.exp(2 * sigma.value(x)) * (
            4 * np.einsum("k,l,ij->klij", s, s, g)
            + 2 * np.einsum("kl,ij->klij", hess, g)
            + 2 * np.einsum("k,lij->klij", s, dg)
            + 2 * np.einsum("l,kij->klij", s, dg)
            + chart.d2g(x)
        )

    return replace(
        chart,
        name=f"{chart.name}-rescaled",
        metric=metric,
        metric_derivative=derivative,
        metric_second_derivative=second_derivative,
    )


@dataclass(frozen=True, eq=False)
class VectorField:
    """Coordinate components of a vector field with optional analytic Jacobian.

    `derivative(x)[k, i]` is d_k V^i.
    """

    name: str
    components: PointFunction
    derivative: PointFunction | None = None

    def __call__(self, x: NDArray) -> NDArray[np.float64]:
        return np.asarray(self.components(np.asarray(x, dtype=float)), dtype=float)

    def jacobian(self, x: NDArray, step: float) -> NDArray[np.float64]:
        """d_k V^i, analytic when available."""
        x = np.asarray(x, dtype=float)
        if self.derivative is not None:
            return np.asarray(self.derivative(x), dtype=float)
        return central_difference(self, x, step)


def coordinate_field(dim: int, index: int, name: str | None = None) -> VectorField:
    """The constant coordinate vector field d/dx^index."""
    vector = np.zeros(dim)
    vector[index] = 1.0
    return VectorField(
        name=name or f"d{index}",
        components=lambda x: vector,
        derivative=lambda x: np.zeros((dim, dim)),
    )


def constant_field(components: NDArray, name: str) -> VectorField:
    """A vector field with constant coordinate components."""
    vector = np.asarray(components, dtype=float)
    return VectorField(
        name=name,
        components=lambda x: vector,
        derivative=lambda x: np.zeros((vector.shape[0],) * 2),
    )


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """Deterministic lattice plus seeded random spot points inside a chart"""

    points: NDArray[np.float64]
    spot_points: NDArray[np.float64]

    @classmethod
    def build(
        cls,
        chart: MetricChart,
        *,
        size: int,
        spot_count: int,
        rng: np.random.Generator,
        margin: float = 0.1,
    ) -> "SampleGrid":
        """Lattice over the first min(n, 4) axes, remaining axes at the midpoint."""
        width = chart.upper - chart.lower
        low = chart.lower + margin * width
        high = chart.upper - margin * width
        axes = min(chart.dim, 4)
        center = chart.midpoint()
        ticks = [np.linspace(low[k], high[k], max(size, 1)) for k in range(axes)]
        points = []
        for values in itertools.product(*ticks):
            point = center.copy()
            point[:axes] = values
            points.append(point)
        spots = rng.uniform(low, high, size=(spot_count, chart.dim))
        return cls(points=np.array(points), spot_points=spots)

    @property
    def all_points(self) -> NDArray[np.float64]:
        """Lattice and spot points stacked."""
        return np.vstack([self.points, self.spot_points])


@dataclass(frozen=True, eq=False)
class FrameField:
    """Orthonormal frame with columns e_a in coordinate components.

    `signature` holds g(e_a, e_a). Spinor fields carry the `gauge` tag of the frame
    they are expressed in.
    """

    chart: MetricChart
    vector_function: PointFunction
    signature: NDArray[np.float64]
    gauge: str = "gram-schmidt"
    _cache: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False
    )

    def vectors(self, x: NDArray) -> NDArray[np.float64]:
        """Frame matrix E[mu, a] = e_a^mu, cached per point and safe across threads."""
        x = np.asarray(x, dtype=float)
        key = x.tobytes()
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = np.asarray(self.vector_function(x), dtype=float)
        with self._lock:
            if len(self._cache) > 4096:
                self._cache.clear()
            self._cache[key] = value
        return value

    def derivative(self, x: NDArray) -> NDArray[np.float64]:
        """dE[mu, nu, a] = d_mu e_a^nu."""
        x = np.asarray(x, dtype=float)
        return central_difference(self.vectors, x, self.chart.fd_step)

    def coframe(self, x: NDArray) -> NDArray[np.float64]:
        """Dual coframe, rows are e^a."""
        return np.linalg.inv(self.vectors(x))

    def orthonormality_residual(self, x: NDArray) -> float:
        """max |E^T g E - diag(signature)|."""
        e = self.vectors(x)
        gram = e.T @ self.chart.g(x) @ e
        return float(np.max(np.abs(gram - np.diag(self.signature))))


def _gram_schmidt(
    g: NDArray, start: list[NDArray], point: NDArray
) -> tuple[list, list]:
    """Complete `start` by orthogonalizing the coordinate vectors in order."""
    dim = g.shape[0]
    frame = list(start)
    signs = [float(np.sign(v @ g @ v)) for v in frame]
    scale = 1.0 + float(np.max(np.abs(g)))
    for index in range(dim):
        if len(frame) == dim:
            break
        w = np.zeros(dim)
        w[index] = 1.0
        for e, sign in zip(frame, signs):
            w = w - sign * (w @ g @ e) * e
        norm = float(w @ g @ w)
        if abs(norm) <= 1e-8 * scale:
            continue
        frame.append(w / np.sqrt(abs(norm)))
        signs.append(float(np.sign(norm)))
    if len(frame) < dim:
        raise FrameError(point=point.tolist(), reason="Gram-Schmidt broke down.")
    return frame, signs


def _lorentzian_pivot(g: NDArray, point: NDArray, tol: float) -> list[NDArray]:
    """Timelike start vectors: a light-cone pair or a timelike coordinate vector.

    Null coordinate vectors are paired first, diagonal timelike entries second.
    """
    dim = g.shape[0]
    basis = np.eye(dim)
    for p in range(dim):
        if abs(g[p, p]) > tol:
            continue
        for q in range(dim):
            if q == p or abs(g[p, q]) <= tol:
                continue
            partner = basis[q] - g[q, q] / (2 * g[p, q]) * basis[p]
            if g[p, q] < 0:
                partner = -partner
            pairing = float(basis[p] @ g @ partner)
            p_hat = basis[p] / np.sqrt(pairing)
            q_hat = partner / np.sqrt(pairing)
            return [(p_hat - q_hat) / np.sqrt(2), (p_hat + q_hat) / np.sqrt(2)]
    for i in range(dim):
        if g[i, i] < -tol:
            return [basis[i] / np.sqrt(-g[i, i])]
    for i, k in itertools.combinations(range(dim), 2):
        for sign in (1.0, -1.0):
            w = basis[i] + sign * basis[k]
            norm = float(w @ g @ w)
            if norm < -tol:
                return [w / np.sqrt(-norm)]
    raise FrameError(point=point.tolist(), reason="no timelike pivot found.")


def gram_schmidt_frame(chart: MetricChart, x: NDArray, tol: float = 1e-10) -> tuple:
    """Frame vectors and signs at a single point."""
    x = np.asarray(x, dtype=float)
    g = chart.g(x)
    start = _lorentzian_pivot(g, x, tol) if chart.negative_directions == 1 else []
    frame, signs = _gram_schmidt(g, start, x)
    return np.column_stack(frame), np.array(signs)


def orthonormal_frame(
    chart: MetricChart, region: NDArray | None = None, tol: float = 1e-9
) -> FrameField:
    """Deterministic Gram-Schmidt frame, timelike vector first.

    When a region is given the frame is checked for orthonormality at every point.
    """
    reference = chart.midpoint() if region is None or not len(region) else region[0]
    try:
        _, signature = gram_schmidt_frame(chart, reference)
    except FrameError as error:
        log.error(error, extra={"chart": chart.name})
        raise
    frame = FrameField(
        chart=chart,
        vector_function=lambda x: gram_schmidt_frame(chart, x)[0],
        signature=signature,
    )
    for point in [] if region is None else region:
        residual = frame.orthonormality_residual(point)
        if residual > tol:
            error = FrameError(
                point=np.asarray(point).tolist(),
                reason=f"orthonormality residual {residual:.2e}.",
            )
            log.error(error, extra={"chart": chart.name})
            raise error
    return frame


def transformed_frame(
    frame: FrameField, transform: Callable[[NDArray], NDArray], gauge: str
) -> FrameField:
    """Frame with columns E(x) L(x) for a pointwise Lorentz matrix L."""
    return FrameField(
        chart=frame.chart,
        vector_function=lambda x: frame.vectors(x) @ transform(x),
        signature=frame.signature,
        gauge=gauge,
    )
