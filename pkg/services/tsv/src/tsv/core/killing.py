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

"""Lightlike Killing fields, the Killing spinor split and the special Kaehler flag"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from numpy.typing import NDArray

from tsv.core.charts import FrameField, MetricChart, VectorField
from tsv.core.clifford import indefinite_inner
from tsv.core.curvature import (
    christoffel,
    covariant_derivative_vector,
    curvature_pack,
    exterior_derivative_dual,
    killing_residual,
    riemann_up,
    twist_measure,
)
from tsv.core.differentiation import central_difference
from tsv.core.exceptions import (
    NonConstantScalarCurvatureError,
    NotKillingError,
    NotLightlikeFieldError,
    NotParallelError,
    VanishingScalarCurvatureError,
)
from tsv.core.models import IdentityReport
from tsv.core.spin_geometry import (
    SpinorField,
    current_frame_components,
    dirac_operator,
    killing_spinor_residual,
    twistor_residual,
)
from tsv.core.spinors import length_invariant

log = logging.getLogger(__name__)

Verdict = Literal["fefferman_type", "brinkmann_type", "invalid"]


@dataclass(frozen=True, eq=False)
class LightlikeKillingAnalysis:
    """Structure of a lightlike Killing field V, evaluated at the first sample point.

    `endomorphism[k, i]` is (nabla_{d_i} V)^k after normalizing V so that
    eta(V) = K(V, V) is -1, 0 or +1. `epsilon` is the sign of Ric(V, V), which
    drives the verdict.
    """

    point: NDArray[np.float64]
    endomorphism: NDArray[np.float64]
    theta: NDArray[np.float64]
    eta: NDArray[np.float64]
    t_vector: NDArray[np.float64]
    eta_v: float
    ric_vv: float
    scaled_ric_vv: float
    epsilon: int
    ric_vv_variation: float
    twist_min: float
    twist_max: float
    verdict: Verdict
    report: IdentityReport

    def to_dict(self) -> dict[str, Any]:
        """JSON friendly dump."""
        return {
            "point": self.point.tolist(),
            "endomorphism": self.endomorphism.tolist(),
            "theta": self.theta.tolist(),
            "eta": self.eta.tolist(),
            "t_vector": self.t_vector.tolist(),
            "eta_v": self.eta_v,
            "ric_vv": self.ric_vv,
            "scaled_ric_vv": self.scaled_ric_vv,
            "epsilon": self.epsilon,
            "ric_vv_variation": self.ric_vv_variation,
            "twist_min": self.twist_min,
            "twist_max": self.twist_max,
            "verdict": self.verdict,
            "report": self.report.model_dump(),
        }


@dataclass
class _PointStructure:
    endomorphism: NDArray
    theta: NDArray
    eta: NDArray
    t_vector: NDArray
    eta_v: float
    ric_vv: float
    residuals: dict[str, float] = field(default_factory=dict)
    # identities that hold when V is the current of a twistor spinor
    current_residuals: dict[str, float] = field(default_factory=dict)


def _point_structure(
    chart: MetricChart, vector: VectorField, x: NDArray, tolerance: float
) -> _PointStructure:
    g = chart.g(x)
    ginv = chart.inverse(x)
    pack = curvature_pack(chart, x, with_cotton=False)
    v = vector(x)
    j = covariant_derivative_vector(chart, vector, x).T
    theta = g @ v
    eta = pack.rho @ v
    eta_v = float(eta @ v)
    ric_vv = float(v @ pack.ricci @ v)
    dtheta = exterior_derivative_dual(chart, vector, x)

    scale = 1.0 / np.sqrt(abs(eta_v)) if abs(eta_v) > tolerance else 1.0
    v_n, j_n, theta_n, eta_n = scale * v, scale * j, scale * theta, scale * eta
    dtheta_n = scale * dtheta
    eps_n = scale**2 * eta_v
    t_n = ginv @ eta_n
    identity = np.eye(chart.dim)
    current_residuals = {
        "square_identity": float(
            np.max(
                np.abs(
                    j_n @ j_n
                    - eps_n * identity
                    + np.outer(t_n, theta_n)
                    + np.outer(v_n, eta_n)
                )
            )
        ),
        "pairing_t_v": abs(float(t_n @ g @ v_n) - eps_n),
        "exterior_derivative": float(np.max(np.abs(dtheta_n - 2 * (g @ j_n).T))),
    }
    residuals = {
        "null_v": abs(float(v_n @ g @ v_n)),
        "null_t": abs(float(t_n @ g @ t_n)),
        "annihilates_v": float(np.max(np.abs(j_n @ v_n))),
        "annihilates_t": float(np.max(np.abs(j_n @ t_n))),
        "skew_adjoint": float(np.max(np.abs(g @ j_n + (g @ j_n).T))),
    }
    return _PointStructure(
        endomorphism=j_n,
        theta=theta_n,
        eta=eta_n,
        t_vector=t_n,
        eta_v=eps_n,
        ric_vv=ric_vv,
        residuals=residuals,
        current_residuals=current_residuals,
    )


def lightlike_killing_analysis(
    chart: MetricChart,
    vector: VectorField,
    points: NDArray,
    *,
    tolerance: float = 1e-6,
    frame: FrameField | None = None,
    spinor: SpinorField | None = None,
) -> LightlikeKillingAnalysis:
    """Compute J = nabla V, theta, eta, T and the epsilon classification of V.

    V must be a lightlike Killing field on the sample points. When a spinor field
    is supplied its current is compared with V, and the identities that hold for the
    current of a twistor spinor (J^2, g(T, V) and d theta) are checked as well.
    """
    killing = max(killing_residual(chart, vector, x) for x in points)
    if killing > tolerance:
        error = NotKillingError(residual=killing, tolerance=tolerance)
        log.error(error, extra={"chart": chart.name, "field": vector.name})
        raise error
    null = max(abs(float(vector(x) @ chart.g(x) @ vector(x))) for x in points)
    if null > tolerance:
        error = NotLightlikeFieldError(norm=null)
        log.error(error, extra={"chart": chart.name, "field": vector.name})
        raise error

    structures = [_point_structure(chart, vector, x, tolerance) for x in points]
    residuals: dict[str, float] = {}
    for structure in structures:
        for name, value in structure.residuals.items():
            residuals[name] = max(residuals.get(name, 0.0), value)
    residuals["killing"] = killing

    ric_values = np.array([s.ric_vv for s in structures])
    variation = float(np.ptp(ric_values)) / (1.0 + float(np.mean(np.abs(ric_values))))
    residuals["ric_vv_constant"] = variation

    if frame is not None and spinor is not None:
        for structure in structures:
            for name, value in structure.current_residuals.items():
                residuals[name] = max(residuals.get(name, 0.0), value)
        alignment = 0.0
        for x in points:
            current = frame.vectors(x) @ current_frame_components(spinor, x)
            v = vector(x)
            wedge = np.outer(current, v) - np.outer(v, current)
            size = np.linalg.norm(current) * np.linalg.norm(v)
            alignment = max(alignment, float(np.max(np.abs(wedge))) / max(size, 1e-300))
        residuals["current_alignment"] = alignment

    twists = [twist_measure(chart, vector, x) for x in points]
    first = structures[0]
    ric_vv = float(np.mean(ric_values))
    epsilon = 0 if abs(ric_vv) <= tolerance else int(np.sign(ric_vv))
    verdict: Verdict = {1: "fefferman_type", 0: "brinkmann_type"}.get(
        epsilon, "invalid"
    )  # type: ignore [assignment]
    extra = {"chart": chart.name, "epsilon": epsilon, "verdict": verdict}
    log.info(
        "Lightlike Killing field on '%s' has epsilon %s: %s",
        chart.name,
        epsilon,
        verdict,
        extra=extra,
    )
    return LightlikeKillingAnalysis(
        point=np.asarray(points[0], dtype=float),
        endomorphism=first.endomorphism,
        theta=first.theta,
        eta=first.eta,
        t_vector=first.t_vector,
        eta_v=first.eta_v,
        ric_vv=ric_vv,
        scaled_ric_vv=-(chart.dim - 2) * ric_vv,
        epsilon=epsilon,
        ric_vv_variation=variation,
        twist_min=float(min(twists)),
        twist_max=float(max(twists)),
        verdict=verdict,
        report=IdentityReport.from_residuals(residuals, tolerance=tolerance),
    )


def dirac_field(frame: FrameField, spinor: SpinorField) -> SpinorField:
    """D phi as a spinor field, differentiated one finite difference level higher."""
    step = frame.chart.fd_step * 10

    def values(x: NDArray) -> NDArray:
        return dirac_operator(frame, spinor, x)

    return SpinorField(
        rep=spinor.rep,
        values=values,
        gauge=spinor.gauge,
        derivative=lambda x: central_difference(values, x, step),
        name=f"D{spinor.name}",
    )


@dataclass(frozen=True, eq=False)
class KillingDecomposition:
    """Killing spinors psi_plus, psi_minus with phi = psi_plus + psi_minus"""

    psi_plus: SpinorField
    psi_minus: SpinorField
    killing_plus: complex
    killing_minus: complex
    scalar_curvature: float
    report: IdentityReport


def killing_decompose(
    frame: FrameField,
    spinor: SpinorField,
    points: NDArray,
    *,
    tolerance: float = 1e-6,
) -> KillingDecomposition:
    """Split a twistor spinor on an Einstein chart into two Killing spinors.

    psi_pm = phi / 2 pm c D phi with c = sqrt((n - 1) / (n R)) and Killing numbers
    -+ 1 / (2 n c). The Einstein scalar relation is only reported when <phi, phi> is
    constant on the points.
    """
    chart = frame.chart
    rep = spinor.rep
    n = rep.n
    scalars = np.array(
        [curvature_pack(chart, x, with_cotton=False).scalar for x in points]
    )
    scalar = float(np.mean(scalars))
    if abs(scalar) <= tolerance:
        error = VanishingScalarCurvatureError(scalar=scalar)
        log.error(error, extra={"chart": chart.name})
        raise error
    spread = float(np.ptp(scalars))
    if spread > tolerance * (1 + abs(scalar)):
        error = NonConstantScalarCurvatureError(spread=spread)
        log.error(error, extra={"chart": chart.name})
        raise error

    c = np.sqrt(complex((n - 1) / (n * scalar)))
    dirac = dirac_field(frame, spinor)
    psi_plus = SpinorField(
        rep=rep,
        values=lambda x: 0.5 * spinor(x) + c * dirac(x),
        gauge=spinor.gauge,
        name=f"{spinor.name}+",
    )
    psi_minus = SpinorField(
        rep=rep,
        values=lambda x: 0.5 * spinor(x) - c * dirac(x),
        gauge=spinor.gauge,
        name=f"{spinor.name}-",
    )
    killing_plus = -1 / (2 * n * c)
    killing_minus = 1 / (2 * n * c)

    lengths = np.array(
        [indefinite_inner(rep, spinor(x), spinor(x)).real for x in points]
    )
    invariants = np.array([length_invariant(rep, spinor(x)) for x in points])
    residuals = {
        "twistor": max(twistor_residual(frame, spinor, x) for x in points),
        "killing_plus": max(
            killing_spinor_residual(frame, psi_plus, killing_plus, x) for x in points
        ),
        "killing_minus": max(
            killing_spinor_residual(frame, psi_minus, killing_minus, x) for x in points
        ),
        "length_invariant_constant": float(np.ptp(invariants)),
    }
    if np.ptp(lengths) <= tolerance:
        relations = []
        for x, length in zip(points, lengths):
            d_phi = dirac(x)
            ratio = indefinite_inner(rep, d_phi, d_phi).real / length
            relations.append(abs(scalar + 4 * (n - 1) / n * ratio))
        residuals["einstein_scalar_relation"] = max(relations)
    return KillingDecomposition(
        psi_plus=psi_plus,
        psi_minus=psi_minus,
        killing_plus=complex(killing_plus),
        killing_minus=complex(killing_minus),
        scalar_curvature=scalar,
        report=IdentityReport.from_residuals(residuals, tolerance=tolerance),
    )


def endomorphism_covariant_derivative(
    chart: MetricChart,
    endomorphism: Callable[[NDArray], NDArray],
    x: NDArray,
    step: float | None = None,
) -> NDArray[np.float64]:
    """(nabla_i A)^k_l = d_i A^k_l + Gamma^k_im A^m_l - A^k_m Gamma^m_il."""
    x = np.asarray(x, dtype=float)
    gamma = christoffel(chart, x)
    a = endomorphism(x)
    da = central_difference(endomorphism, x, step or chart.fd_step)
    return (
        da
        + np.einsum("kim,ml->ikl", gamma, a)
        - np.einsum("km,mil->ikl", a, gamma)
    )


def kaehler_flag_check(
    chart: MetricChart,
    vector: VectorField,
    complex_structure: NDArray,
    transverse: tuple[int, ...],
    points: NDArray,
    *,
    tolerance: float = 1e-6,
) -> IdentityReport:
    """Check a constant complex structure transverse to a Brinkmann field.

    Orthogonality, J^2 = -1, parallelity for the induced connection and the trace
    condition tr(J R(d_i, d_j)) = 0 on the quotient spanned by `transverse`.
    """
    parallel = max(
        float(np.max(np.abs(covariant_derivative_vector(chart, vector, x))))
        for x in points
    )
    if parallel > tolerance:
        error = NotParallelError(residual=parallel)
        log.error(error, extra={"chart": chart.name, "field": vector.name})
        raise error
    block = np.ix_(transverse, transverse)
    j = np.asarray(complex_structure, dtype=float)
    orthogonal = 0.0
    induced = 0.0
    trace = 0.0
    for x in points:
        h = chart.g(x)[block]
        orthogonal = max(orthogonal, float(np.max(np.abs(j.T @ h @ j - h))))
        gamma = christoffel(chart, x)
        for i in range(chart.dim):
            gamma_i = gamma[np.ix_(transverse, [i], transverse)][:, 0, :]
            induced = max(induced, float(np.max(np.abs(gamma_i @ j - j @ gamma_i))))
        rup = riemann_up(chart, x)
        for i in range(chart.dim):
            for k in range(chart.dim):
                curvature = rup[np.ix_(transverse, transverse, [i], [k])][:, :, 0, 0]
                trace = max(trace, abs(float(np.trace(j @ curvature))))
    residuals = {
        "parallel_vector": parallel,
        "orthogonal": orthogonal,
        "complex_square": float(np.max(np.abs(j @ j + np.eye(len(transverse))))),
        "parallel_structure": induced,
        "curvature_trace": trace,
    }
    return IdentityReport.from_residuals(residuals, tolerance=tolerance)
