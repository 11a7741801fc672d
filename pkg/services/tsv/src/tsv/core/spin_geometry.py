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

"""Spinor fields on charts: spin connection, Dirac and twistor operators.

Spinor fields are expressed in the components of an orthonormal frame and carry that
frame's gauge tag. The spinor derivative is the lift
nabla_{e_a} phi = e_a(phi) + 1/4 sum_bc eps_b eps_c omega_bc(e_a) Gamma_b Gamma_c phi
with omega_bc(X) = g(nabla_X e_b, e_c).
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from tsv.core.charts import (
    FrameField,
    MetricChart,
    ScalarFunction,
    VectorField,
    conformal_rescale,
    orthonormal_frame,
)
from tsv.core.clifford import CliffordRep, hermitian_product, indefinite_inner
from tsv.core.curvature import (
    christoffel,
    covariant_derivative_vector,
    curvature_pack,
)
from tsv.core.differentiation import central_difference
from tsv.core.exceptions import (
    FrameNotOrthonormalError,
    GaugeMismatchError,
    NotTwistorError,
)
from tsv.core.models import IdentityReport, SpecialSpinorVerdict
from tsv.core.spinors import current_components

log = logging.getLogger(__name__)

ORTHONORMALITY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Spinor valued function in the components of a frame gauge.

    `derivative(x)[mu, alpha]` is d_mu phi^alpha when supplied.
    """

    rep: CliffordRep
    values: Callable[[NDArray[np.float64]], NDArray]
    gauge: str = "gram-schmidt"
    derivative: Callable[[NDArray[np.float64]], NDArray] | None = None
    name: str = "phi"

    def __call__(self, x: NDArray) -> NDArray[np.complex128]:
        return np.asarray(self.values(np.asarray(x, dtype=float)), dtype=complex)

    def jacobian(self, x: NDArray, step: float) -> NDArray[np.complex128]:
        """d_mu phi, analytic when available."""
        x = np.asarray(x, dtype=float)
        if self.derivative is not None:
            return np.asarray(self.derivative(x), dtype=complex)
        return central_difference(self, x, step)


def scaled_field(
    field: SpinorField, factor: Callable[[NDArray], complex], name: str | None = None
) -> SpinorField:
    """The field x -> factor(x) phi(x)."""
    return SpinorField(
        rep=field.rep,
        values=lambda x: factor(x) * field(x),
        gauge=field.gauge,
        name=name or f"scaled-{field.name}",
    )


def combined_field(
    fields: list[SpinorField], coefficients: list[complex], name: str
) -> SpinorField:
    """Constant coefficient linear combination of fields in one gauge."""

    def summed_derivative(x: NDArray) -> NDArray:
        return sum(c * f.jacobian(x, 0.0) for c, f in zip(coefficients, fields))

    analytic = all(f.derivative is not None for f in fields)
    return SpinorField(
        rep=fields[0].rep,
        values=lambda x: sum(c * f(x) for c, f in zip(coefficients, fields)),
        gauge=fields[0].gauge,
        derivative=summed_derivative if analytic else None,
        name=name,
    )


def regauged_field(
    field: SpinorField,
    spin_transform: Callable[[NDArray], NDArray],
    gauge: str,
) -> SpinorField:
    """Components S(x)^-1 phi(x) in the frame rotated by the Lorentz image of S."""
    return SpinorField(
        rep=field.rep,
        values=lambda x: np.linalg.solve(spin_transform(x), field(x)),
        gauge=gauge,
        name=f"{field.name}-{gauge}",
    )


def _check_gauge(frame: FrameField, field: SpinorField) -> None:
    if frame.gauge != field.gauge:
        error = GaugeMismatchError(expected=field.gauge, actual=frame.gauge)
        log.error(error, extra={"field": field.name})
        raise error


def frame_covariant_derivative(frame: FrameField, x: NDArray) -> NDArray[np.float64]:
    """nabla[c, nu, a] = (nabla_{e_c} e_a)^nu."""
    x = np.asarray(x, dtype=float)
    e = frame.vectors(x)
    de = frame.derivative(x)
    gamma = christoffel(frame.chart, x)
    return np.einsum("mc,mna->cna", e, de) + np.einsum(
        "mc,nml,la->cna", e, gamma, e
    )


def spin_connection(frame: FrameField, x: NDArray) -> NDArray[np.float64]:
    """omega[c, a, b] = g(nabla_{e_c} e_a, e_b)."""
    x = np.asarray(x, dtype=float)
    residual = frame.orthonormality_residual(x)
    if residual > ORTHONORMALITY_TOLERANCE:
        error = FrameNotOrthonormalError(point=x.tolist(), residual=residual)
        log.error(error, extra={"chart": frame.chart.name})
        raise error
    nabla = frame_covariant_derivative(frame, x)
    return np.einsum(
        "cna,nr,rb->cab", nabla, frame.chart.g(x), frame.vectors(x)
    )


def connection_reassembly_residual(frame: FrameField, x: NDArray) -> float:
    """max |nabla_{e_c} e_a - sum_b eps_b omega_cab e_b|."""
    omega = spin_connection(frame, x)
    rebuilt = np.einsum("b,cab,nb->cna", frame.signature, omega, frame.vectors(x))
    return float(np.max(np.abs(rebuilt - frame_covariant_derivative(frame, x))))


def spinor_terms(
    rep: CliffordRep, frame: FrameField, x: NDArray
) -> NDArray[np.complex128]:
    """rho[c] = 1/4 sum_ab eps_a eps_b omega_ab(e_c) Gamma_a Gamma_b."""
    omega = spin_connection(frame, x)
    eps = frame.signature
    return 0.25 * np.einsum(
        "a,b,cab,aij,bjk->cik", eps, eps, omega, rep.gammas, rep.gammas
    )


def spinor_derivatives(
    frame: FrameField, field: SpinorField, x: NDArray
) -> NDArray[np.complex128]:
    """All frame derivatives, row a is nabla_{e_a} phi."""
    _check_gauge(frame, field)
    x = np.asarray(x, dtype=float)
    e = frame.vectors(x)
    directional = np.einsum("ma,mk->ak", e, field.jacobian(x, frame.chart.fd_step))
    return directional + np.einsum(
        "cik,k->ci", spinor_terms(field.rep, frame, x), field(x)
    )


def spinor_derivative(
    frame: FrameField, field: SpinorField, a: int, x: NDArray
) -> NDArray[np.complex128]:
    """nabla_{e_a} phi at x."""
    return spinor_derivatives(frame, field, x)[a]


def directional_spinor_derivative(
    frame: FrameField, field: SpinorField, v: NDArray, x: NDArray
) -> NDArray[np.complex128]:
    """nabla_V phi for a vector with frame components v."""
    return np.einsum("a,ak->k", np.asarray(v), spinor_derivatives(frame, field, x))


def _dirac_from(rep: CliffordRep, frame: FrameField, nabla: NDArray) -> NDArray:
    return np.einsum("a,aij,aj->i", frame.signature, rep.gammas, nabla)


def dirac_operator(
    frame: FrameField, field: SpinorField, x: NDArray
) -> NDArray[np.complex128]:
    """D phi = sum_a eps_a e_a . nabla_{e_a} phi."""
    return _dirac_from(field.rep, frame, spinor_derivatives(frame, field, x))


def twistor_components(
    frame: FrameField, field: SpinorField, x: NDArray
) -> NDArray[np.complex128]:
    """P_a phi = nabla_{e_a} phi + 1/n e_a . D phi, one row per frame index."""
    rep = field.rep
    nabla = spinor_derivatives(frame, field, x)
    dirac = _dirac_from(rep, frame, nabla)
    return nabla + np.einsum("aij,j->ai", rep.gammas, dirac) / rep.n


def twistor_residual(frame: FrameField, field: SpinorField, x: NDArray) -> float:
    """max_a |P_a phi|."""
    return float(np.max(np.linalg.norm(twistor_components(frame, field, x), axis=1)))


def killing_spinor_residual(
    frame: FrameField, field: SpinorField, killing_number: complex, x: NDArray
) -> float:
    """max_a |nabla_{e_a} phi - lambda e_a . phi|."""
    nabla = spinor_derivatives(frame, field, x)
    clifford = np.einsum("aij,j->ai", field.rep.gammas, field(x))
    return float(np.max(np.linalg.norm(nabla - killing_number * clifford, axis=1)))


def special_spinor_check(
    frame: FrameField,
    field: SpinorField,
    kind: str,
    points: NDArray,
    *,
    tolerance: float,
    killing_number: complex = 0.0,
) -> SpecialSpinorVerdict:
    """Largest defining residual of a special spinor over the points."""
    residuals = []
    sizes = []
    for x in points:
        sizes.append(float(np.linalg.norm(field(x))))
        if kind == "twistor":
            residuals.append(twistor_residual(frame, field, x))
        else:
            number = 0.0 if kind == "parallel" else killing_number
            residuals.append(killing_spinor_residual(frame, field, number, x))
    max_residual = max(residuals)
    return SpecialSpinorVerdict(
        kind=kind,  # type: ignore [arg-type]
        killing_number=None
        if kind != "killing"
        else (float(np.real(killing_number)), float(np.imag(killing_number))),
        max_residual=max_residual,
        tolerance=tolerance,
        passed=bool(max_residual <= tolerance),
        degenerate=bool(max(sizes) <= 1e-12),
    )


def current_frame_components(field: SpinorField, x: NDArray) -> NDArray[np.float64]:
    """Frame components of V_phi at x."""
    return current_components(field.rep, field(x)).real


def current_field(frame: FrameField, field: SpinorField) -> VectorField:
    """V_phi as coordinate vector field."""
    return VectorField(
        name=f"V[{field.name}]",
        components=lambda x: frame.vectors(x) @ current_frame_components(field, x),
    )


def inner_product_compatibility_residual(
    frame: FrameField, phi: SpinorField, psi: SpinorField, x: NDArray
) -> float:
    """max_a |e_a <phi, psi> - <nabla_a phi, psi> - <phi, nabla_a psi>|."""
    x = np.asarray(x, dtype=float)
    rep = phi.rep
    gradient = central_difference(
        lambda y: np.array([indefinite_inner(rep, phi(y), psi(y))]),
        x,
        frame.chart.fd_step,
    )[:, 0]
    along = frame.vectors(x).T @ gradient
    nabla_phi = spinor_derivatives(frame, phi, x)
    nabla_psi = spinor_derivatives(frame, psi, x)
    rhs = np.array(
        [
            indefinite_inner(rep, nabla_phi[a], psi(x))
            + indefinite_inner(rep, phi(x), nabla_psi[a])
            for a in range(rep.n)
        ]
    )
    return float(np.max(np.abs(along - rhs)))


def clifford_product_rule_residual(
    frame: FrameField, vector: VectorField, field: SpinorField, x: NDArray
) -> float:
    """max_a |nabla_a(X . phi) - (nabla_a X) . phi - X . nabla_a phi|."""
    x = np.asarray(x, dtype=float)
    rep = field.rep

    def frame_components(y: NDArray) -> NDArray:
        return frame.coframe(y) @ vector(y)

    product = SpinorField(
        rep=rep,
        values=lambda y: np.einsum(
            "j,jab,b->a", frame_components(y), rep.gammas, field(y)
        ),
        gauge=field.gauge,
    )
    lhs = spinor_derivatives(frame, product, x)
    nabla_x = covariant_derivative_vector(frame.chart, vector, x)
    coframe = frame.coframe(x)
    e = frame.vectors(x)
    nabla_frame = np.einsum("ia,ik,bk->ab", e, nabla_x, coframe)
    phi = field(x)
    nabla_phi = spinor_derivatives(frame, field, x)
    rhs = np.einsum("ab,bij,j->ai", nabla_frame, rep.gammas, phi) + np.einsum(
        "b,bij,aj->ai", frame_components(x), rep.gammas, nabla_phi
    )
    return float(np.max(np.abs(lhs - rhs)))


def _frame_tensor(tensor: NDArray, e: NDArray) -> NDArray:
    for _ in range(tensor.ndim):
        tensor = np.tensordot(tensor, e, axes=([0], [0]))
    return tensor


def weyl_spinor_action(rep: CliffordRep, weyl_frame: NDArray, eps: NDArray) -> NDArray:
    """W(e_c ^ e_d) = sum_{a<b} eps_a eps_b W(e_c, e_d, e_a, e_b) Gamma_a Gamma_b."""
    return 0.5 * np.einsum(
        "a,b,cdab,aij,bjk->cdik", eps, eps, weyl_frame, rep.gammas, rep.gammas
    )


def integrability_check(
    frame: FrameField,
    field: SpinorField,
    x: NDArray,
    *,
    tolerance: float,
    twistor_tolerance: float | None = None,
) -> IdentityReport:
    """Weyl and Cotton-York conditions on a twistor spinor at x.

    W(e_c ^ e_d) . phi = 0, W(e_c ^ e_d) . D phi = n C(e_c, e_d) . phi,
    V_phi contracted into the last slot of C and into the first slot of W.
    """
    x = np.asarray(x, dtype=float)
    rep = field.rep
    twistor = twistor_residual(frame, field, x)
    limit = tolerance if twistor_tolerance is None else twistor_tolerance
    if twistor > limit:
        error = NotTwistorError(residual=twistor, tolerance=limit)
        log.error(error, extra={"field": field.name, "point": x.tolist()})
        raise error

    pack = curvature_pack(frame.chart, x)
    e = frame.vectors(x)
    eps = frame.signature
    weyl_frame = _frame_tensor(pack.weyl, e)
    cotton_frame = _frame_tensor(pack.cotton, e)
    action = weyl_spinor_action(rep, weyl_frame, eps)
    phi = field(x)
    dirac = dirac_operator(frame, field, x)
    cotton_vectors = np.einsum("e,cde->cde", eps, cotton_frame)
    cotton_action = np.einsum("cde,eij,j->cdi", cotton_vectors, rep.gammas, phi)
    scale = 1.0 + float(np.linalg.norm(phi))
    current = current_frame_components(field, x)
    residuals = {
        "weyl_annihilates": float(np.max(np.abs(np.einsum("cdij,j->cdi", action, phi))))
        / scale,
        "weyl_cotton_relation": float(
            np.max(
                np.abs(np.einsum("cdij,j->cdi", action, dirac) - rep.n * cotton_action)
            )
        )
        / scale,
        "current_cotton_contraction": float(
            np.max(np.abs(np.einsum("cde,e->cd", cotton_frame, current)))
        )
        / scale**2,
        "current_weyl_contraction": float(
            np.max(np.abs(np.einsum("abcd,a->bcd", weyl_frame, current)))
        )
        / scale**2,
    }
    return IdentityReport.from_residuals(residuals, tolerance=tolerance)


def conformal_covariance_check(
    chart: MetricChart,
    sigma: ScalarFunction,
    field: SpinorField,
    points: NDArray,
    *,
    tolerance: float,
) -> IdentityReport:
    """Both conformal laws and the weight of twistor spinors under g -> exp(2 sigma) g.

    In frame components: D~ psi = exp(-(n+1) sigma / 2) D(exp((n-1) sigma / 2) psi),
    P~_a psi = exp(-sigma / 2) P_a(exp(-sigma / 2) psi), and for a twistor spinor phi
    of g the field exp(sigma / 2) phi is twistor for the rescaled metric.
    """
    n = field.rep.n
    frame = orthonormal_frame(chart)
    rescaled = conformal_rescale(chart, sigma)
    rescaled_frame = orthonormal_frame(rescaled)

    def weight(power: float) -> SpinorField:
        return scaled_field(field, lambda x: np.exp(power * sigma.value(x)))

    dirac_inner = weight((n - 1) / 2)
    twistor_inner = weight(-0.5)
    lifted = weight(0.5)
    dirac_law = 0.0
    twistor_law = 0.0
    weight_law = 0.0
    for x in points:
        factor = sigma.value(x)
        lhs = dirac_operator(rescaled_frame, field, x)
        rhs = np.exp(-(n + 1) * factor / 2) * dirac_operator(frame, dirac_inner, x)
        dirac_law = max(dirac_law, float(np.max(np.abs(lhs - rhs))))
        lhs_p = twistor_components(rescaled_frame, field, x)
        rhs_p = np.exp(-factor / 2) * twistor_components(frame, twistor_inner, x)
        twistor_law = max(twistor_law, float(np.max(np.abs(lhs_p - rhs_p))))
        weight_law = max(
            weight_law,
            twistor_residual(rescaled_frame, lifted, x)
            - np.exp(-factor / 2) * twistor_residual(frame, field, x),
        )
    residuals = {
        "dirac_conformal_law": dirac_law,
        "twistor_conformal_law": twistor_law,
        "twistor_weight": max(weight_law, 0.0),
    }
    return IdentityReport.from_residuals(residuals, tolerance=tolerance)


def conformal_normalization(
    chart: MetricChart, field: SpinorField
) -> tuple[MetricChart, SpinorField]:
    """Rescale to constant length: g~ = <phi, phi>^-2 g and |<phi, phi>|^-1/2 phi.

    Requires a timelike current so that <phi, phi> does not vanish.
    """
    rep = field.rep

    def length(x: NDArray) -> float:
        return indefinite_inner(rep, field(x), field(x)).real

    def value(x: NDArray) -> float:
        return -float(np.log(abs(length(x))))

    def gradient(x: NDArray) -> NDArray:
        column = central_difference(lambda y: np.array([value(y)]), x, chart.fd_step)
        return column[:, 0]

    def hessian(x: NDArray) -> NDArray:
        return central_difference(gradient, x, chart.fd_step * 10)

    sigma = ScalarFunction(value=value, gradient=gradient, hessian=hessian)
    normalized = scaled_field(
        field, lambda x: abs(length(x)) ** -0.5, name=f"normalized-{field.name}"
    )
    return conformal_rescale(chart, sigma), normalized


def zero_set_residual(field: SpinorField, points: NDArray) -> float:
    """max |V^1 - |phi|^2|, the time component of the current is the Hermitian norm."""
    return max(
        abs(
            current_frame_components(field, x)[0]
            - float(np.vdot(field(x), field(x)).real)
        )
        for x in points
    )


def measure_fiber_constant(
    frame: FrameField, field: SpinorField, x: NDArray
) -> tuple[float, float]:
    """c with nabla_{V_phi} phi = i c phi, and the residual of that relation."""
    phi = field(x)
    derivative = directional_spinor_derivative(
        frame, field, current_frame_components(field, x), x
    )
    c = (hermitian_product(phi, derivative) / (1j * np.vdot(phi, phi).real)).real
    return float(c), float(np.linalg.norm(derivative - 1j * c * phi))
