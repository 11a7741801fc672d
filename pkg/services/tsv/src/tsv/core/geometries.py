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

"""Catalogue of model geometries with their bundled fields and expected verdicts"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from typing import Any, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from tsv.core.charts import (
    FrameField,
    MetricChart,
    VectorField,
    constant_field,
    coordinate_field,
    orthonormal_frame,
)
from tsv.core.clifford import (
    CliffordRep,
    build_rep,
    standard_basis_spinor,
    vector_action,
)
from tsv.core.curvature import christoffel
from tsv.core.exceptions import (
    DegenerateGeometryError,
    MissingSasakiDataError,
    UnsupportedBaseError,
)
from tsv.core.heisenberg import CRHeisenberg
from tsv.core.spin_geometry import SpinorField, combined_field
from tsv.core.spinors import lightlike_spinor

log = logging.getLogger(__name__)

SpinorKind = Literal["parallel", "killing", "twistor"]
PRODUCT_BASES = ["flat_R4", "flat_R6", "hyperbolic_pair"]
WARPED_BASES = ["flat_R4", "flat_R6"]
COMPLEX_PLANE = np.array([[0.0, -1.0], [1.0, 0.0]])


class Expectations(BaseModel):
    """Verdicts a geometry must reproduce; None means not checked."""

    model_config = ConfigDict(frozen=True)

    integrability: bool = True
    einstein: bool | None = None
    scalar_sign: int | None = None
    ricci_flat: bool | None = None
    pp_condition: bool | None = None
    symmetric: bool | None = None
    parallel_field: str | None = None
    killing_field: str | None = None
    killing_current: str | None = None
    epsilon: int | None = None
    twisting: bool | None = None
    sasaki: bool = False
    cone_kaehler: bool = False
    kaehler_flag: bool | None = None
    tanaka_webster: bool = False
    length_invariant_zero: bool = False
    killing_decomposition: str | None = None
    fiber_constant: str | None = None
    current_properties: str | None = None


@dataclass(frozen=True, eq=False)
class BundledSpinor:
    """A spinor field of a model together with the special kind it must have"""

    field: SpinorField
    kind: SpinorKind
    killing_number: complex = 0.0


@dataclass(frozen=True, eq=False)
class GeometrySpec:
    """A chart with named fields, optional complex structures and expectations.

    Spinor fields are expressed in the gauge of `frame`. `complex_structure` acts
    on the coordinate directions listed in `transverse`.
    """

    name: str
    chart: MetricChart
    parameters: dict[str, Any]
    expectations: Expectations
    frame: FrameField | None = None
    rep: CliffordRep | None = None
    vector_fields: dict[str, VectorField] = field(default_factory=dict)
    spinors: dict[str, BundledSpinor] = field(default_factory=dict)
    complex_structure: NDArray | None = None
    transverse: tuple[int, ...] = ()
    sasaki_field: str | None = None
    cone_structure: Callable[[NDArray], NDArray] | None = None
    cr_structure: CRHeisenberg | None = None


def _box(dim: int, lower: float, upper: float) -> tuple[NDArray, NDArray]:
    return np.full(dim, float(lower)), np.full(dim, float(upper))


def flat_chart(
    name: str, coordinates: tuple[str, ...], diagonal: NDArray, extent: float = 1.0
) -> MetricChart:
    """Chart with a constant diagonal metric."""
    g = np.diag(np.asarray(diagonal, dtype=float))
    dim = g.shape[0]
    lower, upper = _box(dim, -extent, extent)
    return MetricChart(
        name=name,
        coordinates=coordinates,
        lower=lower,
        upper=upper,
        metric=lambda x: g,
        metric_derivative=lambda x: np.zeros((dim, dim, dim)),
        metric_second_derivative=lambda x: np.zeros((dim, dim, dim, dim)),
        negative_directions=int(np.sum(g.diagonal() < 0)),
    )


def hyperbolic_pair_chart() -> MetricChart:
    """H^2 x H^2 in upper half plane coordinates (x1, y1, x2, y2)."""

    def metric(p: NDArray) -> NDArray:
        return np.diag([p[1] ** -2, p[1] ** -2, p[3] ** -2, p[3] ** -2])

    def derivative(p: NDArray) -> NDArray:
        d = np.zeros((4, 4, 4))
        for y_index, block in ((1, (0, 1)), (3, (2, 3))):
            for i in block:
                d[y_index, i, i] = -2 * p[y_index] ** -3
        return d

    def second_derivative(p: NDArray) -> NDArray:
        d = np.zeros((4, 4, 4, 4))
        for y_index, block in ((1, (0, 1)), (3, (2, 3))):
            for i in block:
                d[y_index, y_index, i, i] = 6 * p[y_index] ** -4
        return d

    return MetricChart(
        name="hyperbolic_pair",
        coordinates=("x1", "y1", "x2", "y2"),
        lower=np.array([-0.5, 0.5, -0.5, 0.5]),
        upper=np.array([0.5, 1.5, 0.5, 1.5]),
        metric=metric,
        metric_derivative=derivative,
        metric_second_derivative=second_derivative,
        negative_directions=0,
    )


def product_chart(first: MetricChart, second: MetricChart, name: str) -> MetricChart:
    """Block diagonal product of two charts with analytic derivatives."""
    a, b = first.dim, second.dim
    dim = a + b

    def metric(x: NDArray) -> NDArray:
        g = np.zeros((dim, dim))
        g[:a, :a] = first.g(x[:a])
        g[a:, a:] = second.g(x[a:])
        return g

    def derivative(x: NDArray) -> NDArray:
        d = np.zeros((dim, dim, dim))
        d[:a, :a, :a] = first.dg(x[:a])
        d[a:, a:, a:] = second.dg(x[a:])
        return d

    def second_derivative(x: NDArray) -> NDArray:
        d = np.zeros((dim, dim, dim, dim))
        d[:a, :a, :a, :a] = first.d2g(x[:a])
        d[a:, a:, a:, a:] = second.d2g(x[a:])
        return d

    return MetricChart(
        name=name,
        coordinates=first.coordinates + second.coordinates,
        lower=np.concatenate([first.lower, second.lower]),
        upper=np.concatenate([first.upper, second.upper]),
        metric=metric,
        metric_derivative=derivative,
        metric_second_derivative=second_derivative,
        negative_directions=first.negative_directions + second.negative_directions,
    )


def constant_spinor(
    rep: CliffordRep, value: NDArray, name: str, gauge: str = "gram-schmidt"
) -> SpinorField:
    """A spinor field with constant frame components."""
    value = np.asarray(value, dtype=complex)
    dim = rep.n
    return SpinorField(
        rep=rep,
        values=lambda x: value,
        gauge=gauge,
        derivative=lambda x: np.zeros((dim, rep.spinor_dim), dtype=complex),
        name=name,
    )


class ProfileTerm(BaseModel):
    """One monomial c s^p0 x_1^p1 ... of a pp-wave profile"""

    coefficient: float
    powers: list[int] = Field(
        ..., description="Exponents of (s, x_1, ..., x_{n-2}).", examples=[[0, 2, 0]]
    )


@dataclass(frozen=True)
class PolynomialProfile:
    """Polynomial f(s, x_1, ..., x_k) with exact derivatives"""

    terms: tuple[tuple[float, tuple[int, ...]], ...]

    @classmethod
    def from_terms(cls, terms: list[ProfileTerm]) -> "PolynomialProfile":
        return cls(terms=tuple((t.coefficient, tuple(t.powers)) for t in terms))

    @staticmethod
    def _monomial(y: NDArray, powers: tuple[int, ...], wrt: tuple[int, ...]) -> float:
        exponents = np.array(powers)
        factor = 1.0
        for k in wrt:
            factor *= exponents[k]
            exponents[k] -= 1
        if factor == 0.0:
            return 0.0
        return factor * float(np.prod(y**exponents))

    def value(self, y: NDArray) -> float:
        return sum(c * self._monomial(y, p, ()) for c, p in self.terms)

    def gradient(self, y: NDArray) -> NDArray[np.float64]:
        return np.array(
            [
                sum(c * self._monomial(y, p, (k,)) for c, p in self.terms)
                for k in range(len(y))
            ]
        )

    def hessian(self, y: NDArray) -> NDArray[np.float64]:
        k = len(y)
        return np.array(
            [
                [
                    sum(c * self._monomial(y, p, (i, j)) for c, p in self.terms)
                    for j in range(k)
                ]
                for i in range(k)
            ]
        )

    def transverse_laplacian(self, y: NDArray) -> float:
        """Laplacian in the x directions."""
        return float(np.trace(self.hessian(y)[1:, 1:]))

    def is_zero(self) -> bool:
        return all(c == 0.0 for c, _ in self.terms)


def default_profile(n: int) -> list[ProfileTerm]:
    """f = x_1^2 + 0.3 s x_1^3, minus x_2^2 / 2 when n >= 4."""
    width = n - 1

    def powers(**entries: int) -> list[int]:
        p = [0] * width
        for key, value in entries.items():
            p[0 if key == "s" else int(key[1:])] = value
        return p

    terms = [
        ProfileTerm(coefficient=1.0, powers=powers(x1=2)),
        ProfileTerm(coefficient=0.3, powers=powers(s=1, x1=3)),
    ]
    if n >= 4:
        terms.append(ProfileTerm(coefficient=-0.5, powers=powers(x2=2)))
    return terms


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MinkowskiParams(_Params):
    """Parameters of flat space"""

    n: int = Field(default=4, ge=2, le=8, description="Dimension.")


class PpWaveParams(_Params):
    """Parameters of a pp-wave dt ds + f ds^2 + sum dx_i^2"""

    n: int = Field(default=4, ge=3, le=8, description="Dimension.")
    profile: list[ProfileTerm] | None = Field(
        default=None, description="Monomials of f; a generic cubic profile if omitted."
    )

    @model_validator(mode="after")
    def check_powers(self) -> "PpWaveParams":
        """Every monomial needs one exponent per profile variable."""
        for term in self.profile or []:
            if len(term.powers) != self.n - 1 or min(term.powers) < 0:
                raise ValueError(
                    f"Profile term {term.powers} needs {self.n - 1} nonnegative exponents."
                )
        return self


class CahenWallachParams(_Params):
    """Coefficients of f = sum lambda_i x_i^2"""

    lambdas: list[float] = Field(
        default_factory=lambda: [1.0, -0.5], min_length=1, max_length=6
    )


class EinsteinSasakiParams(_Params):
    """The three dimensional model has no parameters"""


class ConeParams(_Params):
    """Cone -dt^2 + t^2 g over a registered Lorentzian base"""

    base: str = Field(
        default="einstein-sasaki", description="Registered base geometry."
    )
    base_params: dict[str, Any] = Field(default_factory=dict)
    kaehler: bool = Field(
        default=True, description="Build the cone complex structure from Sasaki data."
    )


class ProductParams(_Params):
    """Flat Lorentzian factor of dimension k times a Kaehler base"""

    k: int = Field(default=1, ge=1, le=4)
    base: str = Field(default="flat_R4", examples=PRODUCT_BASES)


class FeffermanParams(_Params):
    """The Heisenberg Fefferman space has no parameters"""


class WarpedParams(_Params):
    """-dt^2 + f(t)^2 h over a flat base"""

    profile: Literal["exp", "cosh"] = "exp"
    sign: Literal[1, -1] = 1
    scale: float = Field(default=1.0, gt=0)
    shift: float = 0.0
    base: str = Field(default="flat_R6", examples=WARPED_BASES)


def minkowski(n: int = 4) -> GeometrySpec:
    """Flat space with the twistor spinors u + x . v for all basis spinors u, v."""
    rep = build_rep(n)
    coordinates = ("t",) + tuple(f"x{i}" for i in range(1, n))
    diagonal = np.concatenate([[-1.0], np.ones(n - 1)])
    chart = flat_chart("minkowski", coordinates, diagonal)
    spinors: dict[str, BundledSpinor] = {}
    for k, value in enumerate(np.eye(rep.spinor_dim, dtype=complex)):
        spinors[f"parallel_u{k}"] = BundledSpinor(
            field=constant_spinor(rep, value, f"parallel_u{k}"), kind="parallel"
        )
        spinors[f"twistor_v{k}"] = BundledSpinor(
            field=SpinorField(
                rep=rep,
                values=lambda x, v=value: vector_action(rep, x, v),
                derivative=lambda x, v=value: np.einsum("mij,j->mi", rep.gammas, v),
                name=f"twistor_v{k}",
            ),
            kind="twistor",
        )
    null = np.zeros(n)
    null[:2] = 1.0
    return GeometrySpec(
        name="minkowski",
        chart=chart,
        parameters={"n": n},
        frame=orthonormal_frame(chart),
        rep=rep,
        vector_fields={"null": constant_field(null, "null")},
        spinors=spinors,
        expectations=Expectations(
            einstein=True,
            scalar_sign=0,
            ricci_flat=True,
            pp_condition=True,
            parallel_field="null",
            killing_field="null",
            epsilon=0,
            twisting=False,
        ),
    )


def pp_wave(
    n: int = 4, profile: list[ProfileTerm] | None = None, name: str = "pp-wave"
) -> GeometrySpec:
    """pp-wave with parallel lightlike d_t and the parallel spinors a (x) u(1)."""
    terms = default_profile(n) if profile is None else profile
    f = PolynomialProfile.from_terms(terms)
    dim = n

    def metric(x: NDArray) -> NDArray:
        g = np.eye(dim)
        g[0, 0] = 0.0
        g[0, 1] = g[1, 0] = 1.0
        g[1, 1] = f.value(x[1:])
        return g

    def derivative(x: NDArray) -> NDArray:
        d = np.zeros((dim, dim, dim))
        d[1:, 1, 1] = f.gradient(x[1:])
        return d

    def second_derivative(x: NDArray) -> NDArray:
        d = np.zeros((dim, dim, dim, dim))
        d[1:, 1:, 1, 1] = f.hessian(x[1:])
        return d

    lower, upper = _box(dim, -1.0, 1.0)
    chart = MetricChart(
        name=name,
        coordinates=("t", "s") + tuple(f"x{i}" for i in range(1, n - 1)),
        lower=lower,
        upper=upper,
        metric=metric,
        metric_derivative=derivative,
        metric_second_derivative=second_derivative,
    )
    rep = build_rep(n)
    spinors = {
        f"parallel_{k}": BundledSpinor(
            field=constant_spinor(rep, lightlike_spinor(rep, a), f"parallel_{k}"),
            kind="parallel",
        )
        for k, a in enumerate(np.eye(rep.spinor_dim // 2, dtype=complex))
    }
    transverse = tuple(range(2, n))
    complex_structure = None
    if len(transverse) % 2 == 0:
        complex_structure = np.kron(np.eye(len(transverse) // 2), COMPLEX_PLANE)
    return GeometrySpec(
        name=name,
        chart=chart,
        parameters={"n": n, "profile": [t.model_dump() for t in terms]},
        frame=orthonormal_frame(chart),
        rep=rep,
        vector_fields={"null": coordinate_field(n, 0, "null")},
        spinors=spinors,
        complex_structure=complex_structure,
        transverse=transverse if complex_structure is not None else (),
        expectations=Expectations(
            ricci_flat=True if f.is_zero() else None,
            pp_condition=True,
            parallel_field="null",
            killing_field="null",
            killing_current="parallel_0",
            epsilon=0,
            twisting=False,
            kaehler_flag=True if complex_structure is not None else None,
        ),
    )


def cahen_wallach(lambdas: list[float]) -> GeometrySpec:
    """pp-wave with f = sum lambda_i x_i^2, a symmetric space."""
    if all(value == 0.0 for value in lambdas):
        error = DegenerateGeometryError(
            geometry="cahen-wallach", reason="all lambda_i vanish, the metric is flat."
        )
        log.error(error, extra={"lambdas": lambdas})
        raise error
    n = len(lambdas) + 2
    terms = []
    for i, value in enumerate(lambdas, start=1):
        powers = [0] * (n - 1)
        powers[i] = 2
        terms.append(ProfileTerm(coefficient=value, powers=powers))
    spec = pp_wave(n, terms, name="cahen-wallach")
    return replace(
        spec,
        parameters={"lambdas": list(lambdas)},
        expectations=spec.expectations.model_copy(update={"symmetric": True}),
    )


def _sasaki_data(p: NDArray) -> tuple[float, NDArray, NDArray, NDArray]:
    """Q, the connection form a = du + Q (x dy - y dx) and its x, y derivatives."""
    _, x, y = p
    q = 1.0 / (1.0 - x**2 - y**2)
    dq_x, dq_y = 2 * x * q**2, 2 * y * q**2
    a = np.array([1.0, -y * q, x * q])
    da_x = np.array([0.0, -y * dq_x, q + x * dq_x])
    da_y = np.array([0.0, -q - y * dq_y, x * dq_y])
    return q, a, da_x, da_y


def einstein_sasaki_h2() -> GeometrySpec:
    """Circle bundle over the hyperbolic disk of curvature -4 with g = pi* h - a (x) a.

    Coordinates (u, x, y); xi = d_u is a unit timelike Killing field, Ric = -2 g.
    Bundles the Killing spinors for lambda = i/2 and -i/2 and their sum.
    """
    horizontal = np.diag([0.0, 1.0, 1.0])

    def metric(p: NDArray) -> NDArray:
        q, a, _, _ = _sasaki_data(p)
        return q**2 * horizontal - np.outer(a, a)

    def derivative(p: NDArray) -> NDArray:
        q, a, da_x, da_y = _sasaki_data(p)
        _, x, y = p
        d = np.zeros((3, 3, 3))
        for k, da, dq in ((1, da_x, 2 * x * q**2), (2, da_y, 2 * y * q**2)):
            d[k] = 2 * q * dq * horizontal - np.outer(da, a) - np.outer(a, da)
        return d

    chart = MetricChart(
        name="einstein-sasaki",
        coordinates=("u", "x", "y"),
        lower=np.array([-0.5, -0.4, -0.4]),
        upper=np.array([0.5, 0.4, 0.4]),
        metric=metric,
        metric_derivative=derivative,
    )
    rep = build_rep(3)
    a0 = np.array([1.0, 0.0], dtype=complex)
    b0 = np.array([1.0, 0.0], dtype=complex)
    flip = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    twist = np.array([[0.0, -1j], [1j, 0.0]])

    def plus(p: NDArray) -> NDArray:
        return np.array([np.exp(-1j * p[0]), np.exp(1j * p[0])]) * a0

    def plus_derivative(p: NDArray) -> NDArray:
        d = np.zeros((3, 2), dtype=complex)
        d[0] = np.array([-1j * np.exp(-1j * p[0]), 1j * np.exp(1j * p[0])]) * a0
        return d

    def mixing(p: NDArray) -> NDArray:
        _, x, y = p
        return np.array([[1.0, x - 1j * y], [x + 1j * y, 1.0]])

    def minus(p: NDArray) -> NDArray:
        q = _sasaki_data(p)[0]
        return np.sqrt(q) * mixing(p) @ b0

    def minus_derivative(p: NDArray) -> NDArray:
        q = _sasaki_data(p)[0]
        _, x, y = p
        d = np.zeros((3, 2), dtype=complex)
        d[1] = x * q**1.5 * mixing(p) @ b0 + np.sqrt(q) * flip @ b0
        d[2] = y * q**1.5 * mixing(p) @ b0 + np.sqrt(q) * twist @ b0
        return d

    psi_plus = SpinorField(
        rep=rep, values=plus, derivative=plus_derivative, name="psi_plus"
    )
    psi_minus = SpinorField(
        rep=rep, values=minus, derivative=minus_derivative, name="psi_minus"
    )
    phi = combined_field([psi_plus, psi_minus], [1.0, 1.0], name="phi")
    return GeometrySpec(
        name="einstein-sasaki",
        chart=chart,
        parameters={},
        frame=orthonormal_frame(chart),
        rep=rep,
        vector_fields={"reeb": coordinate_field(3, 0, "reeb")},
        spinors={
            "psi_plus": BundledSpinor(
                field=psi_plus, kind="killing", killing_number=0.5j
            ),
            "psi_minus": BundledSpinor(
                field=psi_minus, kind="killing", killing_number=-0.5j
            ),
            "phi": BundledSpinor(field=phi, kind="twistor"),
        },
        sasaki_field="reeb",
        expectations=Expectations(
            einstein=True,
            scalar_sign=-1,
            sasaki=True,
            killing_decomposition="phi",
            current_properties="psi_plus",
        ),
    )


def cone_over(base: GeometrySpec, *, kaehler: bool = True) -> GeometrySpec:
    """Cone -dt^2 + t^2 g over a Lorentzian base, t in [0.5, 2].

    Over a Sasaki base the complex structure J d_t = xi / t,
    J Y = nabla_Y xi + g(Y, xi) t d_t is bundled.
    """
    if kaehler and base.sasaki_field is None:
        error = MissingSasakiDataError(base=base.name)
        log.error(error, extra={"base": base.name})
        raise error
    inner = base.chart
    dim = inner.dim + 1

    def metric(p: NDArray) -> NDArray:
        g = np.zeros((dim, dim))
        g[0, 0] = -1.0
        g[1:, 1:] = p[0] ** 2 * inner.g(p[1:])
        return g

    def derivative(p: NDArray) -> NDArray:
        d = np.zeros((dim, dim, dim))
        d[0, 1:, 1:] = 2 * p[0] * inner.g(p[1:])
        d[1:, 1:, 1:] = p[0] ** 2 * inner.dg(p[1:])
        return d

    chart = MetricChart(
        name=f"cone-{inner.name}",
        coordinates=("t",) + inner.coordinates,
        lower=np.concatenate([[0.5], inner.lower]),
        upper=np.concatenate([[2.0], inner.upper]),
        metric=metric,
        metric_derivative=derivative,
        negative_directions=inner.negative_directions + 1,
        fd_step=inner.fd_step,
    )
    cone_structure = None
    if kaehler:
        xi = base.vector_fields[base.sasaki_field]  # type: ignore [index]

        def cone_structure(p: NDArray) -> NDArray:
            t, x = p[0], p[1:]
            j = np.zeros((dim, dim))
            j[1:, 0] = xi(x) / t
            nabla_xi = xi.jacobian(x, inner.fd_step) + np.einsum(
                "kij,j->ik", christoffel(inner, x), xi(x)
            )
            j[0, 1:] = t * (inner.g(x) @ xi(x))
            j[1:, 1:] = nabla_xi.T
            return j

    return GeometrySpec(
        name="cone",
        chart=chart,
        parameters={
            "base": base.name,
            "base_params": base.parameters,
            "kaehler": kaehler,
        },
        cone_structure=cone_structure,
        expectations=Expectations(
            integrability=False,
            ricci_flat=True if base.expectations.sasaki else None,
            cone_kaehler=kaehler,
        ),
    )


def _lightcone_factor(k: int) -> MetricChart:
    """2 dt ds + sum dz_i^2 for k >= 2, -dt^2 for k = 1."""
    if k == 1:
        return flat_chart("line", ("t",), np.array([-1.0]))
    g = np.eye(k)
    g[0, 0] = g[1, 1] = 0.0
    g[0, 1] = g[1, 0] = 1.0
    lower, upper = _box(k, -1.0, 1.0)
    return MetricChart(
        name="lightcone",
        coordinates=("t", "s") + tuple(f"z{i}" for i in range(1, k - 1)),
        lower=lower,
        upper=upper,
        metric=lambda x: g,
        metric_derivative=lambda x: np.zeros((k, k, k)),
        metric_second_derivative=lambda x: np.zeros((k, k, k, k)),
    )


def _kaehler_base(base: str, supported: list[str]) -> MetricChart:
    if base not in supported:
        error = UnsupportedBaseError(base=base, supported=supported)
        log.error(error, extra={"base": base})
        raise error
    if base == "hyperbolic_pair":
        return hyperbolic_pair_chart()
    dim = int(base.removeprefix("flat_R"))
    return flat_chart(base, tuple(f"y{i}" for i in range(1, dim + 1)), np.ones(dim))


def product_geometry(k: int = 1, base: str = "flat_R4") -> GeometrySpec:
    """R^{1,k-1} x N for a flat Kaehler N or the non Ricci flat H^2 x H^2."""
    base_chart = _kaehler_base(base, PRODUCT_BASES)
    rep = build_rep(k + base_chart.dim)
    chart = product_chart(_lightcone_factor(k), base_chart, name=f"product-{k}-{base}")
    flat = base != "hyperbolic_pair"
    spinors: dict[str, BundledSpinor] = {}
    if flat:
        first = np.zeros(rep.spinor_dim // 2, dtype=complex)
        first[0] = 1.0
        timelike = np.zeros(rep.spinor_dim, dtype=complex)
        timelike[0] = 1.0
        spinors = {
            "parallel_timelike": BundledSpinor(
                field=constant_spinor(rep, timelike, "parallel_timelike"),
                kind="parallel",
            ),
            "parallel_lightlike": BundledSpinor(
                field=constant_spinor(
                    rep, lightlike_spinor(rep, first), "parallel_lightlike"
                ),
                kind="parallel",
            ),
        }
    brinkmann = k >= 2
    field_name = "null" if brinkmann else "time"
    transverse = tuple(range(2, chart.dim)) if brinkmann else ()
    complex_structure = None
    if brinkmann and len(transverse) % 2 == 0:
        complex_structure = np.kron(np.eye(len(transverse) // 2), COMPLEX_PLANE)
    return GeometrySpec(
        name="product",
        chart=chart,
        parameters={"k": k, "base": base},
        frame=orthonormal_frame(chart),
        rep=rep,
        vector_fields={field_name: coordinate_field(chart.dim, 0, field_name)},
        spinors=spinors,
        complex_structure=complex_structure,
        transverse=transverse if complex_structure is not None else (),
        expectations=Expectations(
            integrability=flat,
            ricci_flat=flat,
            pp_condition=flat if brinkmann else None,
            parallel_field=field_name,
            killing_field=field_name if brinkmann else None,
            killing_current="parallel_lightlike" if brinkmann and flat else None,
            epsilon=0 if brinkmann else None,
            twisting=False if brinkmann else None,
            kaehler_flag=flat if complex_structure is not None else None,
        ),
    )


def fefferman_frame(chart: MetricChart, cr: CRHeisenberg) -> FrameField:
    """e1, e2 = (T -+ S) / sqrt(2 k), e3 = X1 / sqrt(2), e4 = X2 / sqrt(2)."""
    kappa = cr.fefferman_factor

    def vectors(p: NDArray) -> NDArray:
        e = np.zeros((4, 4))
        e[2, 0], e[3, 0] = 1.0, -1.0
        e[2, 1], e[3, 1] = 1.0, 1.0
        e[:, :2] /= np.sqrt(2 * kappa)
        e[:3, 2:] = cr.frame(p[:3])[:, :2] / np.sqrt(2)
        return e

    return FrameField(
        chart=chart,
        vector_function=vectors,
        signature=np.array([-1.0, 1.0, 1.0, 1.0]),
        gauge="fefferman",
    )


def fefferman_heisenberg() -> GeometrySpec:
    """Fefferman space of the Heisenberg group on (x, y, u, s) with the fiber field d_s.

    Bundles the twistor spinor exp(i c s) u(1, -1) with the phase c = -3 k / 4 along d_s.
    """
    cr = CRHeisenberg()
    chart = MetricChart(
        name="fefferman-heisenberg",
        coordinates=("x", "y", "u", "s"),
        lower=np.array([-0.5, -0.5, -0.5, -1.0]),
        upper=np.array([0.5, 0.5, 0.5, 1.0]),
        metric=cr.fefferman_metric,
        metric_derivative=cr.fefferman_metric_derivative,
        metric_second_derivative=lambda p: np.zeros((4, 4, 4, 4)),
    )
    rep = build_rep(4)
    c = -0.75 * cr.fefferman_factor
    base = standard_basis_spinor(rep, (1, -1))

    def derivative(p: NDArray) -> NDArray:
        d = np.zeros((4, 4), dtype=complex)
        d[3] = 1j * c * np.exp(1j * c * p[3]) * base
        return d

    phi = SpinorField(
        rep=rep,
        values=lambda p: np.exp(1j * c * p[3]) * base,
        gauge="fefferman",
        derivative=derivative,
        name="phi",
    )
    return GeometrySpec(
        name="fefferman-heisenberg",
        chart=chart,
        parameters={"fefferman_factor": cr.fefferman_factor, "fiber_phase": c},
        frame=fefferman_frame(chart, cr),
        rep=rep,
        vector_fields={"fiber": coordinate_field(4, 3, "fiber")},
        spinors={"phi": BundledSpinor(field=phi, kind="twistor")},
        cr_structure=cr,
        expectations=Expectations(
            killing_field="fiber",
            killing_current="phi",
            epsilon=1,
            twisting=True,
            tanaka_webster=True,
            fiber_constant="phi",
        ),
    )


def warped_product(
    profile: Literal["exp", "cosh"] = "exp",
    *,
    sign: int = 1,
    scale: float = 1.0,
    shift: float = 0.0,
    base: str = "flat_R6",
) -> GeometrySpec:
    """-dt^2 + f(t)^2 h with f = scale exp(sign t) or scale cosh(t + shift).

    The exponential profile bundles the Killing spinors exp(sign t / 2) phi_0 with
    Gamma_1 phi_0 = +-phi_0 and Killing numbers +-sign / 2.
    """
    base_chart = _kaehler_base(base, WARPED_BASES)
    k = base_chart.dim
    dim = k + 1

    def warp(t: float) -> tuple[float, float, float]:
        if profile == "exp":
            value = scale * np.exp(sign * t)
            return value, sign * value, value
        value = scale * np.cosh(t + shift)
        return value, scale * np.sinh(t + shift), value

    def metric(p: NDArray) -> NDArray:
        f, _, _ = warp(p[0])
        return np.diag(np.concatenate([[-1.0], np.full(k, f**2)]))

    def derivative(p: NDArray) -> NDArray:
        f, df, _ = warp(p[0])
        d = np.zeros((dim, dim, dim))
        d[0, 1:, 1:] = 2 * f * df * np.eye(k)
        return d

    def second_derivative(p: NDArray) -> NDArray:
        f, df, ddf = warp(p[0])
        d = np.zeros((dim, dim, dim, dim))
        d[0, 0, 1:, 1:] = 2 * (df**2 + f * ddf) * np.eye(k)
        return d

    chart = MetricChart(
        name=f"warped-{profile}-{base}",
        coordinates=("t",) + base_chart.coordinates,
        lower=np.concatenate([[-0.5], base_chart.lower]),
        upper=np.concatenate([[0.5], base_chart.upper]),
        metric=metric,
        metric_derivative=derivative,
        metric_second_derivative=second_derivative,
    )
    rep = build_rep(dim)
    spinors: dict[str, BundledSpinor] = {}
    if profile == "exp":
        diagonal = np.diag(rep.gammas[0]).real
        for label, eigen in (("plus", 1.0), ("minus", -1.0)):
            phi0 = np.zeros(rep.spinor_dim, dtype=complex)
            phi0[int(np.flatnonzero(np.isclose(diagonal, eigen))[0])] = 1.0

            def values(p: NDArray, phi0: NDArray = phi0) -> NDArray:
                return np.exp(sign * p[0] / 2) * phi0

            def jacobian(p: NDArray, phi0: NDArray = phi0) -> NDArray:
                d = np.zeros((dim, rep.spinor_dim), dtype=complex)
                d[0] = sign / 2 * np.exp(sign * p[0] / 2) * phi0
                return d

            spinors[f"killing_{label}"] = BundledSpinor(
                field=SpinorField(
                    rep=rep, values=values, derivative=jacobian, name=f"killing_{label}"
                ),
                kind="killing",
                killing_number=eigen * sign / 2,
            )
    return GeometrySpec(
        name="warped-product",
        chart=chart,
        parameters={
            "profile": profile,
            "sign": sign,
            "scale": scale,
            "shift": shift,
            "base": base,
        },
        frame=orthonormal_frame(chart),
        rep=rep,
        spinors=spinors,
        expectations=Expectations(
            integrability=profile == "exp",
            einstein=True if profile == "exp" else None,
            scalar_sign=1 if profile == "exp" else None,
            length_invariant_zero=profile == "exp",
        ),
    )


Builder = Callable[[Any], GeometrySpec]

GEOMETRY_REGISTRY: dict[str, tuple[type[BaseModel], Builder]] = {
    "minkowski": (MinkowskiParams, lambda p: minkowski(p.n)),
    "pp-wave": (PpWaveParams, lambda p: pp_wave(p.n, p.profile)),
    "cahen-wallach": (CahenWallachParams, lambda p: cahen_wallach(p.lambdas)),
    "einstein-sasaki": (EinsteinSasakiParams, lambda p: einstein_sasaki_h2()),
    "cone": (
        ConeParams,
        lambda p: cone_over(build_geometry(p.base, p.base_params), kaehler=p.kaehler),
    ),
    "product": (ProductParams, lambda p: product_geometry(p.k, p.base)),
    "fefferman-heisenberg": (FeffermanParams, lambda p: fefferman_heisenberg()),
    "warped-product": (
        WarpedParams,
        lambda p: warped_product(
            p.profile, sign=p.sign, scale=p.scale, shift=p.shift, base=p.base
        ),
    ),
}


def geometry_names() -> list[str]:
    """Registered geometry names in registry order."""
    return list(GEOMETRY_REGISTRY)


def build_geometry(name: str, params: dict[str, Any] | None = None) -> GeometrySpec:
    """Validate the parameter block and build the named geometry.

    Raises KeyError for unknown names and pydantic's ValidationError for malformed
    parameters.
    """
    model, builder = GEOMETRY_REGISTRY[name]
    validated = model.model_validate(params or {})
    spec = builder(validated)
    log.debug(
        "Built geometry '%s'", name, extra={"geometry": name, "dim": spec.chart.dim}
    )
    return spec
