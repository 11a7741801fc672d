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

"""Tests for the CR structure of the Heisenberg group and its Fefferman metric"""

import numpy as np
import pytest

from tsv.core.differentiation import central_difference
from tsv.core.heisenberg import CRHeisenberg

POINTS = np.array([[0.1, -0.2, 0.3], [-0.4, 0.25, -0.1], [0.0, 0.0, 0.0]])


def test_tanaka_webster_conditions():
    """Contact, Levi form, torsion and flatness conditions hold exactly."""
    report = CRHeisenberg().tanaka_webster_residuals(POINTS, tolerance=1e-10)

    assert report.passed, report.records
    assert len(report.records) == 8


def test_levi_form_and_webster_metric():
    """The Levi form is 2 (dx^2 + dy^2) and the Webster metric adds theta^2."""
    cr = CRHeisenberg()

    for x in POINTS:
        assert np.allclose(cr.levi_form(x), np.diag([2.0, 2.0, 0.0]))
        frame = cr.frame(x)
        inverse = np.linalg.inv(frame)
        assert np.allclose(
            cr.webster_metric(x), inverse.T @ np.diag([2.0, 2.0, 1.0]) @ inverse
        )
        assert np.allclose(
            cr.webster_metric_derivative(x),
            central_difference(cr.webster_metric, x, 1e-4),
            atol=1e-9,
        )


def test_complex_structure():
    """J squares to -1 on the contact distribution and kills the Reeb field."""
    cr = CRHeisenberg()
    x = POINTS[0]
    j = cr.complex_structure(x)
    horizontal = cr.frame(x)[:, :2]

    assert np.allclose(j @ j @ horizontal, -horizontal)
    assert np.allclose(j @ cr.reeb(x), 0.0)
    assert cr.contact_form(x) @ cr.reeb(x) == pytest.approx(1.0)


def test_fefferman_metric():
    """The Fefferman metric is Lorentzian and its derivative is exact."""
    cr = CRHeisenberg()
    p = np.array([0.1, -0.2, 0.3, 0.5])

    assert cr.fefferman_factor == pytest.approx(8 / 3)
    eigenvalues = np.linalg.eigvalsh(cr.fefferman_metric(p))
    assert np.sum(eigenvalues < 0) == 1
    assert np.allclose(
        cr.fefferman_metric_derivative(p),
        central_difference(cr.fefferman_metric, p, 1e-4),
        atol=1e-9,
    )
