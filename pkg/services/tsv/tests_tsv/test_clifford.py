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

"""Tests for the Clifford representations, forms and structure maps"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsv.core.algebra_checks import random_form
from tsv.core.clifford import (
    all_basis_indices,
    build_alternative_rep3,
    build_rep,
    build_structure_map,
    clifford_dump,
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
    vector_action,
    vector_matrix,
    vector_representation,
    wedge_vector,
)
from tsv.core.exceptions import (
    DimensionMismatchError,
    DimensionRangeError,
    StructureMapError,
    UnsupportedFormDegreeError,
)

DIMENSIONS = list(range(2, 9))
seeds = st.integers(min_value=0, max_value=2**31 - 1)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_clifford_relations(n: int):
    """The generators satisfy the Clifford relations of signature (-, +, ..., +)."""
    rep = build_rep(n)

    assert rep.gammas.shape == (n, 2 ** (n // 2), 2 ** (n // 2))
    assert clifford_residual(rep) < 1e-12
    assert np.allclose(rep.gammas[0] @ rep.gammas[0], rep.identity)
    for gamma in rep.gammas[1:]:
        assert np.allclose(gamma @ gamma, -rep.identity)


@pytest.mark.parametrize("n", [0, 1, 9, 12])
def test_dimension_out_of_range(n: int):
    """Dimensions outside 2..8 are rejected."""
    with pytest.raises(DimensionRangeError):
        build_rep(n)


def test_alternative_rep3():
    """The second realization in dimension three is imaginary and satisfies the
    same relations.
    """
    rep = build_alternative_rep3()

    assert rep.realization == "alternative"
    assert clifford_residual(rep) < 1e-12
    assert np.allclose(rep.gammas.real, 0.0)


@pytest.mark.parametrize("n", DIMENSIONS)
def test_basis_orthonormal(n: int):
    """The unitary basis spinors are orthonormal for the Hermitian product."""
    rep = build_rep(n)
    basis = np.array([standard_basis_spinor(rep, nu) for nu in all_basis_indices(rep)])

    assert np.allclose(basis.conj() @ basis.T, np.eye(rep.spinor_dim))


def test_basis_index_validation():
    """Index tuples need one entry of +1 or -1 per tensor factor."""
    rep = build_rep(4)

    with pytest.raises(DimensionMismatchError):
        standard_basis_spinor(rep, (1,))
    with pytest.raises(ValueError):
        standard_basis_spinor(rep, (1, 0))


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.sampled_from(DIMENSIONS))
def test_clifford_multiplication_self_adjoint(seed: int, n: int):
    """Vectors act self-adjointly for the indefinite product."""
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    x = rng.normal(size=n)
    phi, psi = random_spinor(rep, rng), random_spinor(rep, rng)

    lhs = indefinite_inner(rep, vector_action(rep, x, phi), psi)
    rhs = indefinite_inner(rep, phi, vector_action(rep, x, psi))

    assert abs(lhs - rhs) < 1e-10 * (1 + np.linalg.norm(x) * np.linalg.norm(phi) ** 2)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.sampled_from(DIMENSIONS[1:]))
def test_forms_act_with_imaginary_expectation(seed: int, n: int):
    """Real two- and three-forms have purely imaginary expectation values."""
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    phi = random_spinor(rep, rng)

    for degree in (2, 3):
        omega = random_form(n, degree, rng)
        value = indefinite_inner(rep, phi, form_matrix(rep, omega) @ phi)
        scale = (1 + np.linalg.norm(omega)) * np.vdot(phi, phi).real
        assert abs(value.real) < 1e-9 * scale


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.sampled_from(DIMENSIONS), degree=st.sampled_from([1, 2]))
def test_vector_form_split(seed: int, n: int, degree: int):
    """X . eta equals the wedge product minus the interior product."""
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    x = rng.normal(size=n)
    eta = random_form(n, degree, rng)

    lhs = vector_matrix(rep, x) @ form_matrix(rep, eta)
    rhs = form_matrix(rep, wedge_vector(x, eta)) - form_matrix(
        rep, contract_vector(rep, x, eta)
    )

    assert np.allclose(lhs, rhs, atol=1e-10)


def test_form_degree_and_size_checks():
    """Forms of degree four and forms of the wrong size are refused."""
    rep = build_rep(5)

    with pytest.raises(UnsupportedFormDegreeError):
        form_matrix(rep, np.zeros((5, 5, 5, 5)))
    with pytest.raises(DimensionMismatchError):
        form_matrix(rep, np.zeros((4, 4)))
    with pytest.raises(DimensionMismatchError):
        vector_action(rep, np.ones(4), np.ones(4))
    with pytest.raises(DimensionMismatchError):
        vector_action(rep, np.ones(5), np.ones(3))


def test_scalar_form_is_multiple_of_identity():
    """A zero form acts by multiplication."""
    rep = build_rep(4)

    assert np.allclose(form_matrix(rep, 2.5), 2.5 * rep.identity)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_half_spinor_projectors(n: int):
    """The projectors are complementary, even elements preserve and generators
    exchange the half-spinor spaces.
    """
    rep = build_rep(n)
    plus = half_spinor_projector(rep, 1)
    minus = half_spinor_projector(rep, -1)

    assert np.allclose(plus + minus, rep.identity)
    assert np.allclose(plus @ minus, 0.0)
    for gamma in rep.gammas:
        assert np.allclose(plus @ gamma @ plus, 0.0)
    assert np.allclose(minus @ rep.gammas[0] @ rep.gammas[1] @ plus, 0.0)
    for nu in all_basis_indices(rep):
        assert half_spinor_parity(rep, standard_basis_spinor(rep, nu)) == np.prod(nu)


def test_mixed_spinor_has_no_parity(rng: np.random.Generator):
    """A generic spinor lies in neither half-spinor space."""
    rep = build_rep(4)

    assert half_spinor_parity(rep, random_spinor(rep, rng)) == 0


@pytest.mark.parametrize(
    "n, kind, square",
    [(3, "real", 1), (5, "quaternionic", -1), (7, "quaternionic", -1)],
)
def test_structure_maps(n: int, kind: str, square: int, rng: np.random.Generator):
    """The antilinear structure commutes with Clifford multiplication up to sign,
    squares to +1 or -1 and transforms the indefinite product.
    """
    rep = build_rep(n)
    structure = build_structure_map(rep)

    assert structure.kind == kind
    assert structure.square == square
    assert np.allclose(
        structure.matrix @ np.conj(structure.matrix), square * rep.identity
    )
    for gamma in rep.gammas:
        assert np.allclose(
            structure.matrix @ np.conj(gamma),
            structure.commutation * gamma @ structure.matrix,
        )
    phi, psi = random_spinor(rep, rng), random_spinor(rep, rng)
    lhs = indefinite_inner(rep, structure.apply(phi), structure.apply(psi))
    rhs = structure.form_sign * indefinite_inner(rep, psi, phi)
    assert abs(lhs - rhs) < 1e-9 * np.linalg.norm(phi) * np.linalg.norm(psi)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_no_structure_map_in_even_dimension(n: int):
    """Only dimensions 3, 5 and 7 carry a structure map."""
    with pytest.raises(StructureMapError):
        build_structure_map(build_rep(n))


@settings(max_examples=15, deadline=None)
@given(seed=seeds, n=st.sampled_from(DIMENSIONS))
def test_spin_elements_cover_lorentz_matrices(seed: int, n: int):
    """Exponentiated two-forms act on vectors by Lorentz matrices."""
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    s = spin_element(rep, random_lorentz_generator(n, rng))
    lorentz = vector_representation(rep, s)
    eta = np.diag(rep.signature)

    assert np.allclose(lorentz.T @ eta @ lorentz, eta, atol=1e-9)
    conjugated = np.einsum("ij,kjl,lm->kim", s, rep.gammas, np.linalg.inv(s))
    assert np.allclose(conjugated, np.einsum("jk,jab->kab", lorentz, rep.gammas))


def test_clifford_dump():
    """The dump lists every generator as rows of [re, im] pairs."""
    dump = clifford_dump(build_rep(3))

    assert dump["n"] == 3
    assert dump["realization"] == "kronecker"
    assert np.array(dump["generators"]).shape == (3, 2, 2, 2)
