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

"""Tests for Dirac currents and the pointwise spinor identities"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsv.core.clifford import (
    build_alternative_rep3,
    build_rep,
    build_structure_map,
    hermitian_product,
    indefinite_inner,
    random_lorentz_generator,
    random_spinor,
    spin_element,
    vector_matrix,
    vector_representation,
)
from tsv.core.exceptions import (
    DimensionMismatchError,
    DimensionRangeError,
    MissingStructureMapError,
    NotLightlikeError,
)
from tsv.core.spinors import (
    causal_type,
    dirac_current,
    length_invariant,
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

seeds = st.integers(min_value=0, max_value=2**31 - 1)


@pytest.mark.parametrize(
    "vector, expected",
    [
        ([0.0, 0.0, 0.0], ("zero", False)),
        ([1.0, 1.0, 0.0], ("lightlike", True)),
        ([-2.0, 0.0, 1.0], ("timelike", False)),
        ([0.5, 0.0, 1.0], ("spacelike", True)),
    ],
)
def test_causal_type(vector: list[float], expected: tuple[str, bool]):
    """Vectors are classified by the sign of their Minkowski square."""
    assert causal_type(np.array(vector)) == expected


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(min_value=2, max_value=8))
def test_currents_are_future_causal(seed: int, n: int):
    """Every Dirac current is real, future directed and not spacelike."""
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    current = dirac_current(rep, random_spinor(rep, rng))

    assert current.components.dtype == np.float64
    assert current.future_directed
    assert current.causal_type in ("timelike", "lightlike")


@settings(max_examples=15, deadline=None)
@given(seed=seeds, n=st.integers(min_value=2, max_value=8))
def test_current_equivariance(seed: int, n: int):
    """Spin elements move the current by the corresponding Lorentz matrix."""
    rng = np.random.default_rng(seed)
    rep = build_rep(n)
    s = spin_element(rep, random_lorentz_generator(n, rng))
    phi = random_spinor(rep, rng)

    moved = dirac_current(rep, s @ phi).components
    expected = vector_representation(rep, s) @ dirac_current(rep, phi).components

    assert np.allclose(moved, expected, atol=1e-8 * (1 + np.max(np.abs(expected))))


@pytest.mark.parametrize("n", range(2, 9))
def test_lightlike_spinors(n: int, rng: np.random.Generator):
    """Boosted lightlike spinors have null currents that annihilate them."""
    rep = build_rep(n)
    a = rng.normal(size=rep.spinor_dim // 2) + 1j * rng.normal(size=rep.spinor_dim // 2)
    phi = lightlike_spinor(rep, a)

    current = dirac_current(rep, phi).components
    assert current[0] > 0
    assert np.allclose(current[0], current[1])
    assert np.allclose(current[2:], 0.0)

    s = spin_element(rep, random_lorentz_generator(n, rng))
    report = lightlike_identity_check(rep, s @ phi)
    assert report.passed
    assert {record.name for record in report.records} == {
        "clifford_annihilation",
        "null_length",
    }


def test_lightlike_check_rejects_timelike():
    """The lightlike identities are only defined for null currents."""
    rep = build_rep(3)
    phi = np.array([1.0, 0.0], dtype=complex)

    assert dirac_current(rep, phi).causal_type == "timelike"
    with pytest.raises(NotLightlikeError):
        lightlike_identity_check(rep, phi)


def test_lightlike_spinor_factor_size():
    """The factor of a lightlike spinor has half the spinor dimension."""
    with pytest.raises(DimensionMismatchError):
        lightlike_spinor(build_rep(4), np.ones(3))


@settings(max_examples=20, deadline=None)
@given(seed=seeds, n=st.integers(min_value=2, max_value=6))
def test_orbit_identities(seed: int, n: int):
    """The dimension dependent identities between a spinor and its current hold."""
    rng = np.random.default_rng(seed)
    rep = build_rep(n)

    report = orbit_identity_check(rep, random_spinor(rep, rng))

    assert report.passed, report.records


def test_orbit_identities_in_dimension_seven(rng: np.random.Generator):
    """In dimension seven the identity involves the quaternionic structure."""
    rep = build_rep(7)
    structure = build_structure_map(rep)

    for _ in range(10):
        report = orbit_identity_check(rep, random_spinor(rep, rng), structure)
        assert report.passed, report.records
    assert report.residual("structure_coefficient") < 1e-9

    with pytest.raises(MissingStructureMapError):
        orbit_identity_check(rep, random_spinor(rep, rng))


def test_structure_coefficient_is_conjugate_pairing(rng: np.random.Generator):
    """In dimension seven V . phi - <phi, phi> phi = conj(<phi, J phi>) J phi, also
    when <phi, J phi> is not real.
    """
    rep = build_rep(7)
    structure = build_structure_map(rep)
    phi = random_spinor(rep, rng)
    # rotate the phase so that <phi, J phi> has argument pi / 4
    cross = indefinite_inner(rep, phi, structure.apply(phi))
    phi = np.exp(0.5j * (np.angle(cross) - np.pi / 4)) * phi

    j_phi = structure.apply(phi)
    cross = indefinite_inner(rep, phi, j_phi)
    v_phi = vector_matrix(rep, dirac_current(rep, phi).components) @ phi
    beta = hermitian_product(j_phi, v_phi) / np.vdot(phi, phi).real
    report = orbit_identity_check(rep, phi, structure)

    assert abs(cross.imag) > 1e-3 * abs(cross)
    assert beta == pytest.approx(np.conj(cross), abs=1e-9 * (1 + abs(cross)))
    assert abs(beta - cross) > 1e-3 * abs(cross)
    assert report.passed, report.records
    assert report.residual("structure_coefficient") < 1e-9

def test_orbit_identities_undefined_in_dimension_eight(rng: np.random.Generator):
    """No orbit identity is checked in dimension eight."""
    rep = build_rep(8)

    with pytest.raises(DimensionRangeError):
        orbit_identity_check(rep, random_spinor(rep, rng))


@pytest.mark.parametrize("n", [3, 5])
def test_length_invariant_vanishes(n: int, rng: np.random.Generator):
    """In dimensions three and five g(V, V) = -<phi, phi>^2."""
    rep = build_rep(n)
    phi = random_spinor(rep, rng)

    assert abs(length_invariant(rep, phi)) < 1e-9 * (1 + np.vdot(phi, phi).real ** 2)


def test_sigma3_representatives():
    """The representatives of the alternative realization have the listed currents."""
    rep = build_alternative_rep3()
    c, d = 0.5, 0.3
    expected = {
        "sigma_1": [1 + d**2, d**2 - 1, 0.0],
        "sigma_2": [1 + c**2, -1 - c**2, 0.0],
        "sigma_3": [1.0, -1.0, 0.0],
    }

    for name, phi in sigma3_representatives(rep, c=c, d=d).items():
        assert np.allclose(dirac_current(rep, phi).components, expected[name])

    with pytest.raises(DimensionMismatchError):
        sigma3_representatives(build_rep(3))


def test_real_part_decomposition(rng: np.random.Generator):
    """In dimension three a spinor splits into two real spinors with null currents."""
    rep = build_rep(3)
    structure = build_structure_map(rep)
    phi = random_spinor(rep, rng)

    first, second = real_part_decomposition(structure, phi)

    assert np.allclose(first + 1j * second, phi)
    assert np.allclose(structure.apply(first), first)
    assert np.allclose(structure.apply(second), second)
    for part in (first, second):
        assert abs(minkowski_square(dirac_current(rep, part).components)) < 1e-9


def test_sigma5_representatives():
    """The dimension five representatives have currents r^2 e_1 and e_1 + e_2."""
    rep = build_rep(5)
    r = 1.5

    currents = {
        name: dirac_current(rep, phi).components
        for name, phi in sigma5_representatives(rep, r=r).items()
    }

    assert np.allclose(currents["sigma_1"], r**2 * np.eye(5)[0])
    assert np.allclose(currents["sigma_2"], r**2 * np.eye(5)[0])
    assert np.allclose(currents["sigma_3"], np.eye(5)[0] + np.eye(5)[1])


def test_sigma7_representative():
    """sigma_lambda has current (1 + c^2) e_1 + (1 - c^2) e_2 with c = i lambda."""
    rep = build_rep(7)
    c = -0.4

    phi = sigma7_representative(rep, 0.4j)

    expected = (1 + c**2) * np.eye(7)[0] + (1 - c**2) * np.eye(7)[1]
    assert np.allclose(dirac_current(rep, phi).components, expected)
    with pytest.raises(ValueError):
        sigma7_representative(rep, 0.4)


def test_quaternionic_family_scales_current(rng: np.random.Generator):
    """a phi + b J phi has the current of phi scaled by |a|^2 + |b|^2."""
    rep = build_rep(7)
    structure = build_structure_map(rep)
    phi = random_spinor(rep, rng)
    a, b = 0.7 - 0.2j, 1.1 + 0.5j

    psi = quaternionic_family(structure, phi, a, b)

    expected = (abs(a) ** 2 + abs(b) ** 2) * dirac_current(rep, phi).components
    assert np.allclose(dirac_current(rep, psi).components, expected)
