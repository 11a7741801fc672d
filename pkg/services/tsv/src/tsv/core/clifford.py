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

"""Explicit complex representations of the Clifford algebra of R^{1,n-1}.

Generators follow the Kronecker construction on the spinor module of dimension
2^{floor(n/2)} with the sign convention x.y + y.x = -2 g(x, y), so that the timelike
generator squares to the identity and the spacelike generators square to minus the
identity. Spinor coefficients refer to the unitary basis u(nu_1, ..., nu_m).
"""

import itertools
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Any, Literal

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm, null_space

from tsv.core.exceptions import (
    DimensionMismatchError,
    DimensionRangeError,
    StructureMapError,
    UnsupportedFormDegreeError,
)

log = logging.getLogger(__name__)

MIN_DIMENSION = 2
MAX_DIMENSION = 8

_E = np.eye(2, dtype=complex)
_T = np.array([[0, -1j], [1j, 0]])
_G1 = np.array([[1j, 0], [0, -1j]])
_G2 = np.array([[0, 1j], [1j, 0]])

Realization = Literal["kronecker", "alternative"]


def _kron(*factors: NDArray) -> NDArray:
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """Generator matrices of a complex Clifford representation in dimension n"""

    n: int
    gammas: NDArray[np.complex128]
    realization: Realization = "kronecker"

    @property
    def m(self) -> int:
        """Number of tensor factors of the spinor module."""
        return self.n // 2

    @property
    def spinor_dim(self) -> int:
        """Complex dimension of the spinor module."""
        return 2**self.m

    @property
    def signature(self) -> NDArray[np.float64]:
        """The diagonal (-1, +1, ..., +1) of the Minkowski metric."""
        eps = np.ones(self.n)
        eps[0] = -1.0
        return eps

    @property
    def identity(self) -> NDArray[np.complex128]:
        """Identity on the spinor module."""
        return np.eye(self.spinor_dim, dtype=complex)

    def check_spinor(self, phi: NDArray) -> NDArray[np.complex128]:
        """Return `phi` as complex array after checking its length."""
        phi = np.asarray(phi, dtype=complex)
        if phi.shape != (self.spinor_dim,):
            raise DimensionMismatchError(
                expected=self.spinor_dim, actual=phi.shape[0], what="spinor"
            )
        return phi

    def check_vector(self, v: NDArray) -> NDArray:
        """Return `v` as array after checking its length."""
        v = np.asarray(v)
        if v.shape != (self.n,):
            raise DimensionMismatchError(
                expected=self.n, actual=v.shape[0] if v.ndim else 0, what="vector"
            )
        return v


def build_rep(n: int) -> CliffordRep:
    """Build the Kronecker representation for 2 <= n <= 8.

    e_{2j-1} acts as tau(2j-1) E^(m-j) (x) g1 (x) T^(j-1) and e_{2j} as
    E^(m-j) (x) g2 (x) T^(j-1), with tau(1) = i and tau = 1 otherwise. Odd
    dimensions add e_n = i T^(m).
    """
    if not MIN_DIMENSION <= n <= MAX_DIMENSION:
        error = DimensionRangeError(n=n, minimum=MIN_DIMENSION, maximum=MAX_DIMENSION)
        log.error(error, extra={"n": n})
        raise error

    m = n // 2
    gammas = []
    for j in range(1, m + 1):
        head = [_E] * (m - j)
        tail = [_T] * (j - 1)
        tau = 1j if j == 1 else 1.0
        gammas.append(tau * _kron(*head, _G1, *tail))
        gammas.append(_kron(*head, _G2, *tail))
    if n % 2:
        gammas.append(1j * _kron(*([_T] * m)))
    return CliffordRep(n=n, gammas=np.array(gammas, dtype=complex))


def build_alternative_rep3() -> CliffordRep:
    """Second realization in dimension three, used for cross checks.

    All three generators are imaginary, so componentwise conjugation anticommutes
    with Clifford multiplication.
    """
    gammas = np.array(
        [
            [[0, 1j], [-1j, 0]],
            [[0, -1j], [-1j, 0]],
            [[1j, 0], [0, -1j]],
        ],
        dtype=complex,
    )
    return CliffordRep(n=3, gammas=gammas, realization="alternative")


def clifford_residual(rep: CliffordRep) -> float:
    """Max deviation of all anticommutators from -2 eps_i delta_ij."""
    residual = 0.0
    for i, j in itertools.product(range(rep.n), repeat=2):
        anti = rep.gammas[i] @ rep.gammas[j] + rep.gammas[j] @ rep.gammas[i]
        target = -2 * rep.signature[i] * rep.identity if i == j else 0
        residual = max(residual, float(np.max(np.abs(anti - target))))
    return residual


def vector_matrix(rep: CliffordRep, v: NDArray) -> NDArray[np.complex128]:
    """The matrix of Clifford multiplication with sum_j v_j e_j."""
    v = rep.check_vector(v)
    return np.einsum("j,jab->ab", v, rep.gammas)


def vector_action(rep: CliffordRep, v: NDArray, phi: NDArray) -> NDArray[np.complex128]:
    """Clifford multiplication v . phi."""
    return vector_matrix(rep, v) @ rep.check_spinor(phi)


def form_matrix(rep: CliffordRep, omega: NDArray | complex) -> NDArray[np.complex128]:
    """Matrix of the Clifford action of an alternating k-tensor, k <= 3.

    `omega` carries full antisymmetric components in the e_j basis; the action is
    the sum over increasing multi-indices of omega times the ordered product.
    """
    omega = np.asarray(omega)
    k = omega.ndim
    if k > 3:
        raise UnsupportedFormDegreeError(degree=k)
    if k and any(size != rep.n for size in omega.shape):
        raise DimensionMismatchError(expected=rep.n, actual=omega.shape[0], what="form")
    result = np.zeros((rep.spinor_dim, rep.spinor_dim), dtype=complex)
    if k == 0:
        return complex(omega) * rep.identity
    for index in itertools.combinations(range(rep.n), k):
        coefficient = omega[index]
        if coefficient == 0:
            continue
        result += coefficient * reduce(np.matmul, (rep.gammas[i] for i in index))
    return result


def form_action(
    rep: CliffordRep, omega: NDArray | complex, phi: NDArray
) -> NDArray[np.complex128]:
    """Clifford action of a form of degree at most three on a spinor."""
    return form_matrix(rep, omega) @ rep.check_spinor(phi)


def wedge_vector(v: NDArray, eta: NDArray | complex) -> NDArray:
    """Components of v wedge eta for a k-form eta given by antisymmetric components."""
    eta = np.asarray(eta)
    if eta.ndim == 0:
        return eta * np.asarray(v)
    outer = np.multiply.outer(np.asarray(v), eta)
    return sum(
        (-1) ** p * np.moveaxis(outer, 0, p) for p in range(eta.ndim + 1)
    )


def contract_vector(rep: CliffordRep, v: NDArray, eta: NDArray) -> NDArray:
    """Interior product of v with eta, using the Minkowski metric on the first slot."""
    eta = np.asarray(eta)
    return np.tensordot(rep.signature * np.asarray(v), eta, axes=(0, 0))


def standard_basis_spinor(
    rep: CliffordRep, nu: tuple[int, ...]
) -> NDArray[np.complex128]:
    """The unitary basis spinor u(nu_1) (x) ... (x) u(nu_m).

    u(nu) = (1, -i nu) / sqrt(2).
    """
    if len(nu) != rep.m:
        raise DimensionMismatchError(expected=rep.m, actual=len(nu), what="index tuple")
    if any(entry not in (-1, 1) for entry in nu):
        raise ValueError(f"Entries of {nu} must be +1 or -1.")
    factors = [np.array([1.0, -1j * entry]) / np.sqrt(2) for entry in nu]
    return reduce(np.kron, factors, np.ones(1, dtype=complex))


def all_basis_indices(rep: CliffordRep) -> list[tuple[int, ...]]:
    """All index tuples nu in lexicographic order of (+1, -1)."""
    return list(itertools.product((1, -1), repeat=rep.m))


def half_spinor_projector(rep: CliffordRep, parity: int) -> NDArray[np.complex128]:
    """Orthogonal projector onto span{u(nu): prod(nu) = parity}."""
    projector = np.zeros((rep.spinor_dim, rep.spinor_dim), dtype=complex)
    for nu in all_basis_indices(rep):
        if int(np.prod(nu)) == parity:
            u = standard_basis_spinor(rep, nu)
            projector += np.outer(u, u.conj())
    return projector


def half_spinor_parity(rep: CliffordRep, phi: NDArray, tol: float = 1e-10) -> int:
    """Return +1 or -1 if phi lies in a half-spinor space, 0 otherwise."""
    phi = rep.check_spinor(phi)
    scale = max(float(np.linalg.norm(phi)), 1.0)
    for parity in (1, -1):
        projected = half_spinor_projector(rep, parity) @ phi
        if np.linalg.norm(phi - projected) <= tol * scale:
            return parity
    return 0


def hermitian_product(phi: NDArray, psi: NDArray) -> complex:
    """Standard Hermitian product, antilinear in the first slot."""
    return complex(np.vdot(phi, psi))


def indefinite_inner(rep: CliffordRep, phi: NDArray, psi: NDArray) -> complex:
    """The indefinite product <phi, psi> = (e_1 . phi, psi)."""
    phi = rep.check_spinor(phi)
    psi = rep.check_spinor(psi)
    return hermitian_product(rep.gammas[0] @ phi, psi)


@dataclass(frozen=True, eq=False)
class StructureMap:
    """Antilinear map phi -> A conj(phi) with prescribed Clifford commutation.

    `commutation` is s in A conj(Gamma_j) = s Gamma_j A, `square` the scalar with
    A conj(A) = square * Identity and `form_sign` the sign in
    <J phi, J psi> = form_sign * <psi, phi>.
    """

    kind: Literal["real", "quaternionic"]
    matrix: NDArray[np.complex128]
    commutation: int
    square: int
    form_sign: int

    def apply(self, phi: NDArray) -> NDArray[np.complex128]:
        """Apply the antilinear map."""
        return self.matrix @ np.conj(np.asarray(phi, dtype=complex))


# n -> (kind, commutation sign, square, form sign)
STRUCTURE_TYPES: dict[int, tuple[Literal["real", "quaternionic"], int, int, int]] = {
    3: ("real", -1, 1, -1),
    5: ("quaternionic", 1, -1, 1),
    7: ("quaternionic", -1, -1, -1),
}


def build_structure_map(rep: CliffordRep, tol: float = 1e-10) -> StructureMap:
    """Solve A conj(Gamma_j) = s Gamma_j A for all generators and normalize A.

    The solution space is one dimensional for an irreducible module. A is scaled to
    be unitary and its phase fixed so that the first nonzero entry is positive real.
    """
    if rep.n not in STRUCTURE_TYPES:
        error = StructureMapError(n=rep.n, reason="only n in {3, 5, 7} carry one.")
        log.error(error, extra={"n": rep.n})
        raise error
    kind, sign, square, form_sign = STRUCTURE_TYPES[rep.n]
    d = rep.spinor_dim
    eye = np.eye(d)
    constraints = np.vstack(
        [np.kron(eye, np.conj(g).T) - sign * np.kron(g, eye) for g in rep.gammas]
    )
    kernel = null_space(constraints, rcond=tol)
    if kernel.shape[1] != 1:
        error = StructureMapError(
            n=rep.n, reason=f"solution space has dimension {kernel.shape[1]}."
        )
        log.error(error, extra={"n": rep.n, "kernel_dim": kernel.shape[1]})
        raise error

    matrix = kernel[:, 0].reshape(d, d)
    matrix = matrix / np.sqrt(np.real(np.trace(matrix.conj().T @ matrix)) / d)
    first = matrix.flat[np.flatnonzero(np.abs(matrix) > tol)[0]]
    matrix = matrix * np.conj(first) / abs(first)

    square_residual = np.max(np.abs(matrix @ np.conj(matrix) - square * np.eye(d)))
    if square_residual > 1e-8:
        reason = f"A conj(A) differs from {square} I by {square_residual:.2e}."
        error = StructureMapError(n=rep.n, reason=reason)
        log.error(error, extra={"n": rep.n})
        raise error
    return StructureMap(
        kind=kind, matrix=matrix, commutation=sign, square=square, form_sign=form_sign
    )


def spin_element(rep: CliffordRep, generator: NDArray) -> NDArray[np.complex128]:
    """Exponentiate a real antisymmetric coefficient matrix w into the spin group.

    The result is exp(1/2 sum_{a,b} w_ab Gamma_a Gamma_b).
    """
    generator = np.asarray(generator, dtype=float)
    algebra = 0.5 * np.einsum("ab,aij,bjk->ik", generator, rep.gammas, rep.gammas)
    return expm(algebra)


def vector_representation(rep: CliffordRep, s: NDArray) -> NDArray[np.float64]:
    """Lorentz matrix Lambda with s Gamma_k s^-1 = sum_j Lambda_jk Gamma_j."""
    s_inv = np.linalg.inv(s)
    inverse_gammas = -rep.signature[:, None, None] * rep.gammas
    conjugated = np.einsum("ij,kjl,lm->kim", s, rep.gammas, s_inv)
    traces = np.einsum("jab,kba->jk", inverse_gammas, conjugated)
    return np.real(traces) / rep.spinor_dim


def random_lorentz_generator(
    n: int, rng: np.random.Generator, scale: float = 0.5
) -> NDArray:
    """Random antisymmetric coefficient matrix of moderate size."""
    raw = rng.normal(scale=scale, size=(n, n))
    return raw - raw.T


def random_spinor(rep: CliffordRep, rng: np.random.Generator) -> NDArray[np.complex128]:
    """Spinor with independent standard complex Gaussian coefficients."""
    return rng.normal(size=rep.spinor_dim) + 1j * rng.normal(size=rep.spinor_dim)


def clifford_dump(rep: CliffordRep) -> dict[str, Any]:
    """JSON friendly dump of the generators as [re, im] pairs."""
    return {
        "n": rep.n,
        "realization": rep.realization,
        "generators": [
            [[[float(z.real), float(z.imag)] for z in row] for row in gamma]
            for gamma in rep.gammas
        ],
    }
