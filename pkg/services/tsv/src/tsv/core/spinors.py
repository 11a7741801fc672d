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

"""Pointwise spinor invariants: Dirac current, causal type and orbit identities"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from tsv.core.clifford import (
    CliffordRep,
    StructureMap,
    build_rep,
    half_spinor_projector,
    hermitian_product,
    indefinite_inner,
    standard_basis_spinor,
    vector_matrix,
)
from tsv.core.exceptions import (
    CurrentNotRealError,
    DimensionMismatchError,
    DimensionRangeError,
    MissingStructureMapError,
    NotLightlikeError,
)
from tsv.core.models import IdentityReport

log = logging.getLogger(__name__)

CausalType = Literal["zero", "lightlike", "timelike", "spacelike"]

LIGHTLIKE_TOLERANCE = 1e-9
REALITY_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class DiracCurrentVector:
    """Frame components of a Dirac current with its causal classification"""

    components: NDArray[np.float64]
    causal_type: CausalType
    future_directed: bool


def minkowski_square(v: NDArray) -> float:
    """g(v, v) for frame components in signature (-, +, ..., +)."""
    v = np.asarray(v, dtype=float)
    return float(-v[0] ** 2 + np.sum(v[1:] ** 2))


def causal_type(
    v: NDArray, tol: float = LIGHTLIKE_TOLERANCE
) -> tuple[CausalType, bool]:
    """Classify v by the sign of g(v, v) with a scale-aware lightlike band."""
    v = np.asarray(v, dtype=float)
    size = float(np.dot(v, v))
    future = bool(v[0] > 0)
    if np.sqrt(size) <= tol:
        return "zero", False
    square = minkowski_square(v)
    if abs(square) <= tol * (1 + size):
        return "lightlike", future
    return ("timelike" if square < 0 else "spacelike"), future


def current_components(rep: CliffordRep, phi: NDArray) -> NDArray[np.complex128]:
    """Complex components V^j = -eps_j <Gamma_j phi, phi> before the reality check."""
    phi = rep.check_spinor(phi)
    values = np.array(
        [indefinite_inner(rep, gamma @ phi, phi) for gamma in rep.gammas]
    )
    return -rep.signature * values


def dirac_current(
    rep: CliffordRep, phi: NDArray, tol: float = REALITY_TOLERANCE
) -> DiracCurrentVector:
    """The Dirac current of phi, defined by g(V, X) = -<X . phi, phi>."""
    raw = current_components(rep, phi)
    scale = 1.0 + float(np.vdot(phi, phi).real)
    for component, value in enumerate(raw):
        if abs(value.imag) > tol * scale:
            error = CurrentNotRealError(component=component, imaginary_part=value.imag)
            log.error(error, extra={"n": rep.n, "component": component})
            raise error
    components = raw.real.copy()
    kind, future = causal_type(components)
    return DiracCurrentVector(
        components=components, causal_type=kind, future_directed=future
    )


def _scale(phi: NDArray) -> float:
    return 1.0 + float(np.vdot(phi, phi).real)


def lightlike_identity_check(
    rep: CliffordRep, phi: NDArray, tolerance: float = 1e-10
) -> IdentityReport:
    """Residuals of V . phi = 0 and <phi, phi> = 0 for spinors with null current."""
    current = dirac_current(rep, phi)
    if current.causal_type not in ("lightlike", "zero"):
        error = NotLightlikeError(norm=minkowski_square(current.components))
        log.error(error, extra={"n": rep.n, "causal_type": current.causal_type})
        raise error
    scale = _scale(phi)
    residuals = {
        "clifford_annihilation": float(
            np.linalg.norm(vector_matrix(rep, current.components) @ phi)
        )
        / scale,
        "null_length": abs(indefinite_inner(rep, phi, phi)) / scale,
    }
    return IdentityReport.from_residuals(residuals, tolerance=tolerance)


def _even_dimension_residuals(rep: CliffordRep, phi: NDArray) -> dict[str, float]:
    """Half-spinor parts of phi each satisfy V . phi = 0 and <phi, phi> = 0."""
    residuals: dict[str, float] = {}
    for parity, label in ((1, "plus"), (-1, "minus")):
        part = half_spinor_projector(rep, parity) @ phi
        current = dirac_current(rep, part).components
        scale = _scale(part)
        residuals[f"half_spinor_{label}_annihilation"] = (
            float(np.linalg.norm(vector_matrix(rep, current) @ part)) / scale
        )
        residuals[f"half_spinor_{label}_null_length"] = (
            abs(indefinite_inner(rep, part, part)) / scale
        )
        residuals[f"half_spinor_{label}_null_current"] = (
            abs(minkowski_square(current)) / scale**2
        )
    return residuals


def orbit_identity_check(
    rep: CliffordRep,
    phi: NDArray,
    structure: StructureMap | None = None,
    tolerance: float = 1e-9,
) -> IdentityReport:
    """Check the dimension dependent identity between phi and its Dirac current.

    n = 3, 5: V . phi = <phi, phi> phi and g(V, V) = -<phi, phi>^2.
    n = 7: V . phi = <phi, phi> phi + beta J phi with |beta| = |<phi, J phi>| and
    <phi, phi>^2 + |<phi, J phi>|^2 = -g(V, V).
    n = 2, 4, 6: both half-spinor parts have null currents annihilating them.
    """
    if not 2 <= rep.n <= 7:
        error = DimensionRangeError(n=rep.n, minimum=2, maximum=7)
        log.error(error, extra={"n": rep.n})
        raise error
    phi = rep.check_spinor(phi)
    if rep.n % 2 == 0:
        return IdentityReport.from_residuals(
            _even_dimension_residuals(rep, phi), tolerance=tolerance
        )

    scale = _scale(phi)
    current = dirac_current(rep, phi).components
    v_phi = vector_matrix(rep, current) @ phi
    length = indefinite_inner(rep, phi, phi).real
    square = minkowski_square(current)
    if rep.n in (3, 5):
        residuals = {
            "current_action": float(np.linalg.norm(v_phi - length * phi)) / scale,
            "norm_identity": abs(square + length**2) / scale**2,
        }
        return IdentityReport.from_residuals(residuals, tolerance=tolerance)

    if structure is None:
        error = MissingStructureMapError(n=rep.n)
        log.error(error, extra={"n": rep.n})
        raise error
    j_phi = structure.apply(phi)
    norm_sq = float(np.vdot(phi, phi).real) or 1.0
    beta = hermitian_product(j_phi, v_phi) / norm_sq
    cross = indefinite_inner(rep, phi, j_phi)
    residuals = {
        "current_action": float(np.linalg.norm(v_phi - length * phi - beta * j_phi))
        / scale,
        "structure_coefficient": abs(beta - np.conj(cross)) / scale,
        "norm_identity": abs(square + length**2 + abs(cross) ** 2) / scale**2,
    }
    return IdentityReport.from_residuals(residuals, tolerance=tolerance)


def length_invariant(rep: CliffordRep, phi: NDArray) -> float:
    """Q = <phi, phi>^2 + g(V, V)."""
    current = dirac_current(rep, phi).components
    return indefinite_inner(rep, phi, phi).real ** 2 + minkowski_square(current)


def lightlike_spinor(rep: CliffordRep, a: NDArray) -> NDArray[np.complex128]:
    """The spinor a (x) u(1), whose current lies on the ray of e_1 + e_2."""
    a = np.asarray(a, dtype=complex)
    expected = rep.spinor_dim // 2
    if a.shape != (expected,):
        error = DimensionMismatchError(
            expected=expected, actual=a.shape[0], what="factor"
        )
        log.error(error, extra={"n": rep.n})
        raise error
    return np.kron(a, standard_basis_spinor(build_rep(2), (1,)))


def quaternionic_family(
    structure: StructureMap, phi: NDArray, a: complex, b: complex
) -> NDArray[np.complex128]:
    """The spinor a phi + b J phi."""
    phi = np.asarray(phi, dtype=complex)
    return a * phi + b * structure.apply(phi)


def real_part_decomposition(
    structure: StructureMap, phi: NDArray
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Split phi = phi_1 + i phi_2 into tau-invariant spinors (n = 3)."""
    phi = np.asarray(phi, dtype=complex)
    tau_phi = structure.apply(phi)
    return (phi + tau_phi) / 2, (phi - tau_phi) / 2j


def sigma3_representatives(
    rep: CliffordRep, *, c: float = 0.0, d: float = 0.0
) -> dict[str, NDArray[np.complex128]]:
    """Orbit representatives in dimension three for the alternative realization."""
    if rep.n != 3 or rep.realization != "alternative":
        raise DimensionMismatchError(expected=3, actual=rep.n, what="alternative rep")
    return {
        "sigma_1": np.array([1.0, 1j * d]),
        "sigma_2": np.array([1.0 + 1j * c, 0.0]),
        "sigma_3": np.array([1j, 0.0]),
    }


def sigma5_representatives(rep: CliffordRep, *, r: float = 1.0) -> dict[str, NDArray]:
    """Complex-model counterparts of the quaternionic representatives in dimension five.

    sigma_1 and sigma_2 lie in the +1 and -1 eigenspaces of Gamma_1 and have current
    r^2 e_1, sigma_3 is a (x) u(1) with current e_1 + e_2.
    """
    if rep.n != 5:
        raise DimensionMismatchError(expected=5, actual=rep.n, what="dimension")
    first = np.array([1.0, 0.0], dtype=complex)
    return {
        "sigma_1": r * np.kron(first, np.array([0.0, 1.0], dtype=complex)),
        "sigma_2": r * np.kron(first, np.array([1.0, 0.0], dtype=complex)),
        "sigma_3": lightlike_spinor(rep, first),
    }


def sigma7_representative(
    rep: CliffordRep, lambda_1: complex
) -> NDArray[np.complex128]:
    """The representative sigma_lambda for lambda = lambda_1 purely imaginary.

    With c = i lambda_1 it is a (x) (u(1) + c u(-1)) and has current
    (1 + c^2) e_1 + (1 - c^2) e_2 and length -2 i lambda_1.
    """
    if rep.n != 7:
        raise DimensionMismatchError(expected=7, actual=rep.n, what="dimension")
    c = 1j * complex(lambda_1)
    if abs(c.imag) > 1e-14:
        raise ValueError(f"lambda_1 = {lambda_1} must be purely imaginary.")
    two = build_rep(2)
    tail = standard_basis_spinor(two, (1,)) + c.real * standard_basis_spinor(two, (-1,))
    first = np.zeros(rep.spinor_dim // 2, dtype=complex)
    first[0] = 1.0
    return np.kron(first, tail)
