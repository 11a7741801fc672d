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

"""Tests for the record book collecting check residuals"""

import math

import pytest

from tsv.core.exceptions import DimensionRangeError
from tsv.core.models import IdentityReport
from tsv.core.records import RecordBook


def test_add_marks_residuals_against_tolerance():
    """A residual within tolerance passes, a larger one fails the book."""
    book = RecordBook(subject="algebra-n3")
    ok = book.add("clifford_core", "relations", "anticommutator", 1e-14, 1e-10)
    assert ok.passed
    assert book.passed

    bad = book.add("clifford_core", "relations", "square", 1e-3, 1e-10)
    assert not bad.passed
    assert not book.passed
    assert len(book.records) == 2


def test_negative_control_passes_above_tolerance():
    """An expected failure passes only when the residual exceeds the tolerance."""
    book = RecordBook(subject="product")
    args = ("model_geometries", "kaehler_flag", "curvature_trace")
    above = book.add(*args, 0.5, 1e-6, expected_failure=True)
    below = book.add(*args, 0.0, 1e-6, expected_failure=True)
    assert above.passed and above.expected_failure
    assert not below.passed


def test_non_finite_residual_fails_and_is_stored_as_null():
    """A nan residual never passes and serializes as null."""
    book = RecordBook(subject="pp-wave")
    record = book.add("geometry_engine", "curvature", "symmetry", math.nan, 1.0)
    assert record.residual is None
    assert not record.passed
    assert record.model_dump()["residual"] is None


def test_tolerance_override():
    """The global override replaces the per-check default."""
    assert RecordBook(subject="x").tolerance(1e-10) == 1e-10
    assert RecordBook(subject="x", override=1e-3).tolerance(1e-10) == 1e-3


def test_add_report_flags_negative_controls():
    """Identities named as negative controls are recorded as expected failures."""
    report = IdentityReport.from_residuals(
        {"symmetry": 1e-12, "kaehler_trace": 0.3}, tolerance=1e-8
    )
    book = RecordBook(subject="product")
    book.add_report(
        "geometry_engine", "curvature", report, negative_controls=("kaehler_trace",)
    )

    symmetry, trace = book.records
    assert symmetry.passed and not symmetry.expected_failure
    assert trace.passed and trace.expected_failure


def test_add_verdict():
    """Discrete verdicts are recorded as residual 0 or 1."""
    book = RecordBook(subject="algebra-n5")
    args = ("clifford_core", "build_structure_map", "kind")
    same = book.add_verdict(*args, "quaternionic", "quaternionic")
    differ = book.add_verdict(*args, "real", "quaternionic")
    assert same.passed and same.residual == 0.0
    assert not differ.passed and differ.residual == 1.0


def test_guard_records_domain_errors(caplog):
    """A domain error inside the guard becomes a failed record."""
    book = RecordBook(subject="algebra-n9")
    with book.guard("clifford_core", "clifford_basis"):
        raise DimensionRangeError(n=9, minimum=2, maximum=8)

    (record,) = book.records
    assert not record.passed
    assert record.residual is None
    assert record.identity == "raised"
    assert record.error is not None
    assert record.error.startswith("DimensionRangeError")
    assert any("raised for algebra-n9" in message for message in caplog.messages)


def test_guard_lets_other_errors_through():
    """Errors outside the domain hierarchy are not swallowed."""
    book = RecordBook(subject="minkowski")
    with pytest.raises(ZeroDivisionError), book.guard("geometry_engine", "curvature"):
        _ = 1 / 0
    assert book.records == []
