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

"""Algebraic identity checks of the Clifford module and the Dirac current"""

import itertools
import math

import numpy as np
from numpy.typing import NDArray

from tsv.core.clifford import (
    STRUCTURE_TYPES,
    CliffordRep,
    all_basis_indices,
    build_alternative_rep3,
    build_rep,
    build_structure_map,
    clifford_residual,
    contract_vector,
    form_matrix,
    half_spinor_parity,
    half_spinor_projector,
    indefinite_inner,
    random_lorentz_generator,
    random_spinor,
    spin_element,
    standard_basis_spinor,
    vector_matrix,
    vector_representation,
    wedge_vector,
)
from tsv.core.records import RecordBook
from tsv.core.spinors import (
    current_components,
    dirac_current,
    lightlike_identity_check,
    lightlike_spinor,
    minkowski_square,
    orbit_identity_check,
    quaternionic_family,
    real_part_decomposition,
    sigma3_representatives,
    sigma5_representatives,
    sigma7_representative,
)

CLIFFORD = "clifford_core"
INVARIANTS = "spinor_invariants"

RELATION_TOLERANCE = 1e-12
ADJOINT_TOLERANCE = 1e-10
IDENTITY_TOLERANCE = 1e-9
REPRESENTATIVE_TOLERANCE = 1e-12

# parameters of the printed representatives
SIGMA3_C = 0.5
SIGMA3_D = 0.3
SIGMA5_R = 1.5
SIGMA7_LAMBDA = 0.4j


def _permutation_sign(perm: tuple[int, ...]) -> int:
    inversions = sum(
        1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def random_form(n: int, degree: int, rng: np.random.Generator) -> NDArray[np.float64]:
    """Random real form given by its full antisymmetric components."""
    raw = rng.normal(size=(n,) * degree)
    return sum(
        _permutation_sign(perm) * np.transpose(raw, perm)
        for perm in itertools.permutations(range(degree))
    ) / math.factorial(degree)


def _relative(difference: NDArray, *sizes: float) -> float:
    return float(np.max(np.abs(difference))) / (1.0 + math.prod(sizes))


def check_relations(
    rep: CliffordRep, book: RecordBook, rng: np.random.Generator, samples: int
) -> None:
    """Anticommutators, adjointness, form reality and the vector form split."""
    n = rep.n
    book.add(
        CLIFFORD,
        "build_rep",
        "clifford_relations",
        clifford_residual(rep),
        book.tolerance(RELATION_TOLERANCE),
    )
    basis = np.array([standard_basis_spinor(rep, nu) for nu in all_basis_indices(rep)])
    book.add(
        CLIFFORD,
        "standard_basis_spinor",
        "orthonormal",
        float(np.max(np.abs(basis.conj() @ basis.T - np.eye(rep.spinor_dim)))),
        book.tolerance(RELATION_TOLERANCE),
    )
    adjoint = 0.0
    two_form = 0.0
    three_form = 0.0
    split = 0.0
    for _ in range(samples):
        x = rng.normal(size=n)
        phi, psi = random_spinor(rep, rng), random_spinor(rep, rng)
        x_matrix = vector_matrix(rep, x)
        size = float(np.linalg.norm(x) * np.linalg.norm(phi) * np.linalg.norm(psi))
        adjoint = max(
            adjoint,
            abs(
                indefinite_inner(rep, x_matrix @ phi, psi)
                - indefinite_inner(rep, phi, x_matrix @ psi)
            )
            / (1.0 + size),
        )
        eta = random_form(n, 2, rng)
        two_form = max(
            two_form,
            abs(indefinite_inner(rep, phi, form_matrix(rep, eta) @ phi).real)
            / (1.0 + float(np.vdot(phi, phi).real) * float(np.linalg.norm(eta))),
        )
        if n >= 3:
            zeta = random_form(n, 3, rng)
            three_form = max(
                three_form,
                abs(indefinite_inner(rep, phi, form_matrix(rep, zeta) @ phi).real)
                / (1.0 + float(np.vdot(phi, phi).real) * float(np.linalg.norm(zeta))),
            )
        lhs = x_matrix @ form_matrix(rep, eta) @ phi
        rhs = form_matrix(rep, wedge_vector(x, eta)) @ phi - form_matrix(
            rep, contract_vector(rep, x, eta)
        ) @ phi
        split = max(
            split,
            _relative(
                lhs - rhs,
                float(np.linalg.norm(x)),
                float(np.linalg.norm(eta)),
                float(np.linalg.norm(phi)),
            ),
        )
    tolerance = book.tolerance(ADJOINT_TOLERANCE)
    book.add(CLIFFORD, "indefinite_inner", "adjointness", adjoint, tolerance)
    book.add(CLIFFORD, "form_action", "two_form_imaginary", two_form, tolerance)
    if n >= 3:
        book.add(CLIFFORD, "form_action", "three_form_imaginary", three_form, tolerance)
    book.add(CLIFFORD, "form_action", "vector_form_split", split, tolerance)


def check_half_spinors(rep: CliffordRep, book: RecordBook) -> None:
    """Even elements preserve the half-spinor spaces, generators exchange them."""
    plus = half_spinor_projector(rep, 1)
    minus = half_spinor_projector(rep, -1)
    even = max(
        float(np.max(np.abs(minus @ rep.gammas[a] @ rep.gammas[b] @ plus)))
        for a, b in itertools.combinations(range(rep.n), 2)
    )
    odd = max(float(np.max(np.abs(plus @ gamma @ plus))) for gamma in rep.gammas)
    tolerance = book.tolerance(RELATION_TOLERANCE)
    book.add(CLIFFORD, "half_spinor_projector", "even_invariance", even, tolerance)
    book.add(CLIFFORD, "half_spinor_projector", "odd_exchange", odd, tolerance)
    mismatched = sum(
        half_spinor_parity(rep, standard_basis_spinor(rep, nu)) != int(np.prod(nu))
        for nu in all_basis_indices(rep)
    )
    book.add_verdict(CLIFFORD, "half_spinor_parity", "basis_parity", mismatched, 0)


def check_structure_map(
    rep: CliffordRep, book: RecordBook, rng: np.random.Generator, samples: int
) -> None:
    """Commutation, square and form sign of the real or quaternionic structure."""
    with book.guard(CLIFFORD, "build_structure_map"):
        structure = build_structure_map(rep)
        kind, sign, square, form_sign = STRUCTURE_TYPES[rep.n]
        a = structure.matrix
        commutation = max(
            float(np.max(np.abs(a @ np.conj(g) - sign * g @ a))) for g in rep.gammas
        )
        squared = float(
            np.max(
                np.abs(
                    structure.matrix @ np.conj(structure.matrix)
                    - square * np.eye(rep.spinor_dim)
                )
            )
        )
        form = 0.0
        for _ in range(samples):
            phi, psi = random_spinor(rep, rng), random_spinor(rep, rng)
            lhs = indefinite_inner(rep, structure.apply(phi), structure.apply(psi))
            rhs = form_sign * indefinite_inner(rep, psi, phi)
            form = max(
                form,
                abs(lhs - rhs)
                / (1.0 + float(np.linalg.norm(phi) * np.linalg.norm(psi))),
            )
        tolerance = book.tolerance(ADJOINT_TOLERANCE)
        book.add(CLIFFORD, "build_structure_map", "commutation", commutation, tolerance)
        book.add(CLIFFORD, "build_structure_map", "square", squared, tolerance)
        book.add(CLIFFORD, "build_structure_map", "form_sign", form, tolerance)
        book.add_verdict(CLIFFORD, "build_structure_map", "kind", structure.kind, kind)


def check_lorentz_action(
    rep: CliffordRep, book: RecordBook, rng: np.random.Generator, samples: int
) -> None:
    """Spin elements cover Lorentz matrices and move currents accordingly."""
    eta = np.diag(rep.signature)
    orthogonality = 0.0
    equivariance = 0.0
    for _ in range(max(samples // 10, 1)):
        s = spin_element(rep, random_lorentz_generator(rep.n, rng))
        lorentz = vector_representation(rep, s)
        orthogonality = max(
            orthogonality, float(np.max(np.abs(lorentz.T @ eta @ lorentz - eta)))
        )
        phi = random_spinor(rep, rng)
        moved = current_components(rep, s @ phi).real
        expected = lorentz @ current_components(rep, phi).real
        equivariance = max(
            equivariance,
            float(np.max(np.abs(moved - expected)))
            / (1.0 + float(np.max(np.abs(expected)))),
        )
    tolerance = book.tolerance(IDENTITY_TOLERANCE)
    book.add(CLIFFORD, "vector_representation", "lorentz", orthogonality, tolerance)
    book.add(INVARIANTS, "dirac_current", "equivariance", equivariance, tolerance)


def check_currents(
    rep: CliffordRep, book: RecordBook, rng: np.random.Generator, samples: int
) -> None:
    """Reality and causal character of currents, lightlike and orbit identities."""
    imaginary = 0.0
    causal = 0
    orbit: dict[str, float] = {}
    lightlike: dict[str, float] = {}
    structure = build_structure_map(rep) if rep.n == 7 else None
    for _ in range(samples):
        phi = random_spinor(rep, rng)
        raw = current_components(rep, phi)
        imaginary = max(
            imaginary,
            float(np.max(np.abs(raw.imag))) / (1.0 + float(np.vdot(phi, phi).real)),
        )
        current = dirac_current(rep, phi)
        causal += current.causal_type == "spacelike" or not current.future_directed
        if rep.n <= 7:
            for item in orbit_identity_check(rep, phi, structure).records:
                orbit[item.name] = max(orbit.get(item.name, 0.0), item.residual)
        boost = spin_element(rep, random_lorentz_generator(rep.n, rng))
        half = rep.spinor_dim // 2
        a = rng.normal(size=half) + 1j * rng.normal(size=half)
        null = boost @ lightlike_spinor(rep, a)
        for item in lightlike_identity_check(rep, null).records:
            lightlike[item.name] = max(lightlike.get(item.name, 0.0), item.residual)
    tolerance = book.tolerance(IDENTITY_TOLERANCE)
    book.add(INVARIANTS, "dirac_current", "real_components", imaginary, tolerance)
    book.add_verdict(INVARIANTS, "dirac_current", "future_causal", causal, 0)
    for name, value in lightlike.items():
        book.add(INVARIANTS, "lightlike_identity_check", name, value, tolerance)
    for name, value in orbit.items():
        book.add(INVARIANTS, "orbit_identity_check", name, value, tolerance)


def check_representatives(
    rep: CliffordRep, book: RecordBook, rng: np.random.Generator, samples: int
) -> None:
    """Printed currents of the orbit representatives and the structure families."""
    tolerance = book.tolerance(REPRESENTATIVE_TOLERANCE)
    if rep.n == 3:
        alternative = build_alternative_rep3()
        c, d = SIGMA3_C, SIGMA3_D
        expected = {
            "sigma_1": [1 + d**2, d**2 - 1, 0.0],
            "sigma_2": [1 + c**2, -1 - c**2, 0.0],
            "sigma_3": [1.0, -1.0, 0.0],
        }
        for name, phi in sigma3_representatives(alternative, c=c, d=d).items():
            current = dirac_current(alternative, phi).components
            book.add(
                INVARIANTS,
                "sigma3_representatives",
                name,
                float(np.max(np.abs(current - expected[name]))),
                tolerance,
            )
        structure = build_structure_map(rep)
        split = 0.0
        null = 0.0
        for _ in range(samples):
            phi = random_spinor(rep, rng)
            first, second = real_part_decomposition(structure, phi)
            split = max(
                split,
                float(
                    np.max(np.abs(first + 1j * second - phi))
                    + np.max(np.abs(structure.apply(first) - first))
                    + np.max(np.abs(structure.apply(second) - second))
                )
                / (1.0 + float(np.linalg.norm(phi))),
            )
            for part in (first, second):
                null = max(
                    null,
                    abs(minkowski_square(dirac_current(rep, part).components))
                    / (1.0 + float(np.vdot(part, part).real) ** 2),
                )
        tolerance = book.tolerance(IDENTITY_TOLERANCE)
        book.add(INVARIANTS, "real_part_decomposition", "real_split", split, tolerance)
        book.add(
            INVARIANTS, "real_part_decomposition", "null_currents", null, tolerance
        )
    elif rep.n == 5:
        r = SIGMA5_R
        expected = {
            "sigma_1": r**2 * np.eye(5)[0],
            "sigma_2": r**2 * np.eye(5)[0],
            "sigma_3": np.eye(5)[0] + np.eye(5)[1],
        }
        for name, phi in sigma5_representatives(rep, r=r).items():
            current = dirac_current(rep, phi).components
            book.add(
                INVARIANTS,
                "sigma5_representatives",
                name,
                float(np.max(np.abs(current - expected[name]))),
                tolerance,
            )
    elif rep.n == 7:
        c = (1j * SIGMA7_LAMBDA).real
        expected_current = (1 + c**2) * np.eye(7)[0] + (1 - c**2) * np.eye(7)[1]
        phi = sigma7_representative(rep, SIGMA7_LAMBDA)
        book.add(
            INVARIANTS,
            "sigma7_representative",
            "sigma_lambda",
            float(
                np.max(np.abs(dirac_current(rep, phi).components - expected_current))
            ),
            tolerance,
        )
        structure = build_structure_map(rep)
        family = 0.0
        for _ in range(samples):
            phi = random_spinor(rep, rng)
            a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
            psi = quaternionic_family(structure, phi, a, b)
            expected = (abs(a) ** 2 + abs(b) ** 2) * dirac_current(rep, phi).components
            family = max(
                family,
                float(np.max(np.abs(dirac_current(rep, psi).components - expected)))
                / (1.0 + float(np.max(np.abs(expected)))),
            )
        book.add(
            INVARIANTS,
            "quaternionic_family",
            "scaled_current",
            family,
            book.tolerance(IDENTITY_TOLERANCE),
        )


def check_algebra(
    n: int, book: RecordBook, rng: np.random.Generator, samples: int
) -> None:
    """Every algebraic check that applies in dimension n."""
    rep = build_rep(n)
    with book.guard(CLIFFORD, "relations"):
        check_relations(rep, book, rng, samples)
        if n % 2 == 0:
            check_half_spinors(rep, book)
        if n in STRUCTURE_TYPES:
            check_structure_map(rep, book, rng, samples)
        check_lorentz_action(rep, book, rng, samples)
    with book.guard(INVARIANTS, "dirac_current"):
        check_currents(rep, book, rng, samples)
    with book.guard(INVARIANTS, "representatives"):
        check_representatives(rep, book, rng, samples)
