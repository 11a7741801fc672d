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

"""Checks of a model geometry against the expectations it carries"""

import logging
from typing import Any

import numpy as np
from numpy.typing import NDArray

from tsv.core.charts import (
    FrameField,
    SampleGrid,
    VectorField,
    coordinate_field,
    random_polynomial_scalar,
    transformed_frame,
)
from tsv.core.clifford import (
    CliffordRep,
    random_lorentz_generator,
    spin_element,
    vector_representation,
)
from tsv.core.curvature import (
    conformal_killing_residual,
    covariant_derivative_riemann,
    covariant_derivative_vector,
    curvature_pack,
    killing_residual,
    metric_compatibility_residual,
    pp_curvature_check,
    riemann_symmetry_residuals,
    second_bianchi_residual,
    weyl_trace_residual,
)
from tsv.core.exceptions import MissingSpinStructureError, SignatureError
from tsv.core.geometries import BundledSpinor, GeometrySpec
from tsv.core.killing import (
    endomorphism_covariant_derivative,
    kaehler_flag_check,
    killing_decompose,
    lightlike_killing_analysis,
)
from tsv.core.records import RecordBook
from tsv.core.spin_geometry import (
    clifford_product_rule_residual,
    conformal_covariance_check,
    connection_reassembly_residual,
    current_field,
    current_frame_components,
    dirac_operator,
    directional_spinor_derivative,
    inner_product_compatibility_residual,
    integrability_check,
    measure_fiber_constant,
    regauged_field,
    special_spinor_check,
    zero_set_residual,
)
from tsv.core.spinors import dirac_current, length_invariant, lightlike_identity_check
from tsv.core.transport import (
    loop_holonomy,
    square_loop,
    transport_spinor,
    transport_vector,
)

log = logging.getLogger(__name__)

ENGINE = "geometry_engine"
SPIN = "spin_geometry"
INVARIANTS = "spinor_invariants"
MODELS = "model_geometries"

CURVATURE_TOLERANCE = 1e-6
NESTED_TOLERANCE = 1e-4
SPINOR_TOLERANCE = 1e-6
STRUCTURE_TOLERANCE = 1e-5
GAUGE_TOLERANCE = 1e-8
IDENTITY_TOLERANCE = 1e-9
TRANSPORT_TOLERANCE = 1e-6

LATTICE_LIMIT = 128
LOOP_FRACTION = 0.2

VERDICTS = {1: "fefferman_type", 0: "brinkmann_type"}


def lattice_sample(grid: SampleGrid, limit: int = LATTICE_LIMIT) -> NDArray[np.float64]:
    """Evenly spaced subset of the lattice with at most `limit` points."""
    if len(grid.points) <= limit:
        return grid.points
    index = np.unique(np.linspace(0, len(grid.points) - 1, limit).round().astype(int))
    return grid.points[index]


def central_loop(spec: GeometrySpec) -> NDArray[np.float64]:
    """Closed coordinate square around the midpoint in the first two axes."""
    chart = spec.chart
    width = chart.upper - chart.lower
    size = LOOP_FRACTION * float(min(width[0], width[1]))
    return square_loop(chart.midpoint(), 0, 1, size)


def _merge(target: dict[str, float], residuals: dict[str, float]) -> None:
    for name, value in residuals.items():
        target[name] = max(target.get(name, 0.0), float(value))


def spin_data(spec: GeometrySpec) -> tuple[FrameField, CliffordRep]:
    """The frame and representation of a geometry that carries spinors."""
    if spec.frame is None or spec.rep is None:
        error = MissingSpinStructureError(geometry=spec.name)
        log.error(error, extra={"geometry": spec.name})
        raise error
    return spec.frame, spec.rep


def check_chart(spec: GeometrySpec, grid: SampleGrid, book: RecordBook) -> None:
    """Signature, metric compatibility and the algebraic curvature identities."""
    chart = spec.chart
    violations = 0
    for x in grid.all_points:
        try:
            chart.check_signature(x)
        except SignatureError:
            violations += 1
    book.add_verdict(ENGINE, "check_signature", "signature_violations", violations, 0)

    tolerance = book.tolerance(CURVATURE_TOLERANCE)
    with book.guard(ENGINE, "christoffel"):
        compatibility = max(
            metric_compatibility_residual(chart, x) for x in grid.spot_points
        )
        book.add(
            ENGINE, "christoffel", "metric_compatibility", compatibility, tolerance
        )
    with book.guard(ENGINE, "curvature_pack"):
        symmetries: dict[str, float] = {}
        weyl = 0.0
        for x in grid.spot_points:
            pack = curvature_pack(chart, x)
            _merge(symmetries, riemann_symmetry_residuals(pack))
            weyl = max(weyl, weyl_trace_residual(chart, pack))
        for name, value in symmetries.items():
            book.add(ENGINE, "curvature_pack", name, value, tolerance)
        if chart.dim >= 3:
            book.add(ENGINE, "curvature_pack", "weyl_trace_free", weyl, tolerance)
    with book.guard(ENGINE, "covariant_derivative_riemann"):
        bianchi = max(second_bianchi_residual(chart, x) for x in grid.spot_points)
        book.add(
            ENGINE,
            "covariant_derivative_riemann",
            "second_bianchi",
            bianchi,
            book.tolerance(NESTED_TOLERANCE),
        )


def check_curvature(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook
) -> dict[str, Any]:
    """Einstein, Ricci flat, pp and symmetric space expectations."""
    chart = spec.chart
    expect = spec.expectations
    tolerance = book.tolerance(CURVATURE_TOLERANCE)
    points = lattice_sample(grid)
    measured: dict[str, Any] = {}
    with book.guard(ENGINE, "curvature_pack"):
        if (expect.einstein, expect.scalar_sign, expect.ricci_flat) != (None,) * 3:
            packs = [curvature_pack(chart, x, with_cotton=False) for x in points]
            scalars = np.array([pack.scalar for pack in packs])
            measured["scalar_curvature"] = float(np.mean(scalars))
            if expect.einstein is not None:
                dim = chart.dim
                trace_free = max(
                    float(np.max(np.abs(p.ricci - p.scalar / dim * chart.g(p.point))))
                    / (1.0 + abs(p.scalar))
                    for p in packs
                )
                book.add(
                    ENGINE,
                    "curvature_pack",
                    "einstein",
                    trace_free,
                    tolerance,
                    expected_failure=not expect.einstein,
                )
            if expect.scalar_sign is not None:
                mean = float(np.mean(scalars))
                observed = 0 if abs(mean) <= tolerance else int(np.sign(mean))
                book.add_verdict(
                    ENGINE,
                    "curvature_pack",
                    "scalar_sign",
                    observed,
                    expect.scalar_sign,
                )
            if expect.ricci_flat is not None:
                ricci = max(float(np.max(np.abs(p.ricci))) for p in packs)
                book.add(
                    ENGINE,
                    "curvature_pack",
                    "ricci_flat",
                    ricci,
                    tolerance,
                    expected_failure=not expect.ricci_flat,
                )
    if expect.pp_condition is not None:
        with book.guard(ENGINE, "pp_curvature_check"):
            book.add(
                ENGINE,
                "pp_curvature_check",
                "pp_trace",
                pp_curvature_check(chart, points),
                tolerance,
                expected_failure=not expect.pp_condition,
            )
    if expect.symmetric is not None:
        with book.guard(ENGINE, "covariant_derivative_riemann"):
            nabla = max(
                float(np.max(np.abs(covariant_derivative_riemann(chart, x))))
                for x in grid.spot_points
            )
            book.add(
                ENGINE,
                "covariant_derivative_riemann",
                "locally_symmetric",
                nabla,
                book.tolerance(NESTED_TOLERANCE),
                expected_failure=not expect.symmetric,
            )
    return measured


def check_vector_fields(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook
) -> dict[str, Any]:
    """Parallel fields, holonomy and the lightlike Killing classification."""
    chart = spec.chart
    expect = spec.expectations
    tolerance = book.tolerance(CURVATURE_TOLERANCE)
    points = lattice_sample(grid)
    measured: dict[str, Any] = {}
    if expect.parallel_field is not None:
        vector = spec.vector_fields[expect.parallel_field]
        with book.guard(ENGINE, "covariant_derivative_vector"):
            parallel = max(
                float(np.max(np.abs(covariant_derivative_vector(chart, vector, x))))
                for x in points
            )
            book.add(
                ENGINE,
                "covariant_derivative_vector",
                "parallel_field",
                parallel,
                tolerance,
            )
        with book.guard(SPIN, "loop_holonomy"):
            loop = central_loop(spec)
            holonomy = loop_holonomy(chart, loop)
            start = vector(loop[0])
            book.add(
                SPIN,
                "loop_holonomy",
                "fixes_parallel_field",
                float(np.max(np.abs(holonomy @ start - start))),
                book.tolerance(TRANSPORT_TOLERANCE),
            )

    if expect.killing_field is not None:
        vector = spec.vector_fields[expect.killing_field]
        spinor = None
        if expect.killing_current is not None:
            spinor = spec.spinors[expect.killing_current].field
        with book.guard(SPIN, "lightlike_killing_analysis"):
            analysis = lightlike_killing_analysis(
                chart,
                vector,
                points,
                tolerance=tolerance,
                frame=spec.frame if spinor is not None else None,
                spinor=spinor,
            )
            book.add_report(SPIN, "lightlike_killing_analysis", analysis.report)
            measured.update(
                epsilon=analysis.epsilon,
                ric_vv=analysis.ric_vv,
                scaled_ric_vv=analysis.scaled_ric_vv,
                verdict=analysis.verdict,
            )
            if expect.epsilon is not None:
                book.add_verdict(
                    SPIN,
                    "lightlike_killing_analysis",
                    "epsilon",
                    analysis.epsilon,
                    expect.epsilon,
                )
                book.add_verdict(
                    SPIN,
                    "lightlike_killing_analysis",
                    "verdict",
                    analysis.verdict,
                    VERDICTS.get(expect.epsilon, "invalid"),
                )
            if expect.twisting is True:
                book.add(
                    SPIN,
                    "lightlike_killing_analysis",
                    "twisting",
                    analysis.twist_min,
                    tolerance,
                    expected_failure=True,
                )
            elif expect.twisting is False:
                book.add(
                    SPIN,
                    "lightlike_killing_analysis",
                    "twist_free",
                    analysis.twist_max,
                    tolerance,
                )
    return measured


def _check_spinor(
    spec: GeometrySpec,
    name: str,
    bundled: BundledSpinor,
    grid: SampleGrid,
    book: RecordBook,
) -> None:
    frame, rep = spin_data(spec)
    chart = spec.chart
    field = bundled.field
    points = lattice_sample(grid)
    tolerance = book.tolerance(SPINOR_TOLERANCE)
    with book.guard(SPIN, "special_spinor_check"):
        verdict = special_spinor_check(
            frame,
            field,
            bundled.kind,
            points,
            tolerance=tolerance,
            killing_number=bundled.killing_number,
        )
        book.add(
            SPIN,
            "special_spinor_check",
            f"{name}:{bundled.kind}",
            verdict.max_residual,
            tolerance,
        )
        book.add_verdict(
            SPIN,
            "special_spinor_check",
            f"{name}:nonvanishing",
            verdict.degenerate,
            False,
        )

    with book.guard(SPIN, "current_field"):
        current = current_field(frame, field)
        if bundled.kind == "parallel":
            identity, test = "killing_current", killing_residual
        else:
            identity, test = "conformal_killing_current", conformal_killing_residual
        residual = max(test(chart, current, x) for x in grid.spot_points)
        book.add(SPIN, "current_field", f"{name}:{identity}", residual, tolerance)

    identity_tolerance = book.tolerance(IDENTITY_TOLERANCE)
    with book.guard(SPIN, "zero_set_residual"):
        book.add(
            SPIN,
            "zero_set_residual",
            f"{name}:time_component",
            zero_set_residual(field, points),
            identity_tolerance,
        )

    with book.guard(INVARIANTS, "lightlike_identity_check"):
        lightlike: dict[str, float] = {}
        for x in points:
            phi = field(x)
            if dirac_current(rep, phi).causal_type == "lightlike":
                report = lightlike_identity_check(rep, phi)
                _merge(lightlike, {r.name: r.residual for r in report.records})
        for identity, value in lightlike.items():
            book.add(
                INVARIANTS,
                "lightlike_identity_check",
                f"{name}:{identity}",
                value,
                identity_tolerance,
            )

    if spec.expectations.integrability:
        with book.guard(SPIN, "integrability_check"):
            integrability: dict[str, float] = {}
            for x in grid.spot_points:
                report = integrability_check(
                    frame,
                    field,
                    x,
                    tolerance=book.tolerance(STRUCTURE_TOLERANCE),
                    twistor_tolerance=tolerance,
                )
                _merge(integrability, {r.name: r.residual for r in report.records})
            for identity, value in integrability.items():
                book.add(
                    SPIN,
                    "integrability_check",
                    f"{name}:{identity}",
                    value,
                    book.tolerance(STRUCTURE_TOLERANCE),
                )

    if spec.expectations.length_invariant_zero:
        with book.guard(INVARIANTS, "length_invariant"):
            q = max(
                abs(length_invariant(rep, field(x)))
                / (1.0 + float(np.vdot(field(x), field(x)).real)) ** 2
                for x in points
            )
            book.add(
                INVARIANTS,
                "length_invariant",
                f"{name}:vanishes",
                q,
                identity_tolerance,
            )


def _check_spin_structure(
    spec: GeometrySpec, first: BundledSpinor, grid: SampleGrid, book: RecordBook
) -> None:
    """Connection reassembly and the Leibniz rules with the first bundled spinor."""
    frame = spin_data(spec)[0]
    chart = spec.chart
    field = first.field
    tolerance = book.tolerance(SPINOR_TOLERANCE)
    vector: VectorField = next(
        iter(spec.vector_fields.values()), coordinate_field(chart.dim, 0)
    )
    with book.guard(SPIN, "spin_connection"):
        book.add(
            SPIN,
            "spin_connection",
            "reassembly",
            max(connection_reassembly_residual(frame, x) for x in grid.spot_points),
            tolerance,
        )
        book.add(
            SPIN,
            "spinor_derivatives",
            "inner_product_compatibility",
            max(
                inner_product_compatibility_residual(frame, field, field, x)
                for x in grid.spot_points
            ),
            tolerance,
        )
        book.add(
            SPIN,
            "spinor_derivatives",
            "clifford_product_rule",
            max(
                clifford_product_rule_residual(frame, vector, field, x)
                for x in grid.spot_points
            ),
            tolerance,
        )


def check_frame_covariance(
    spec: GeometrySpec,
    first: BundledSpinor,
    grid: SampleGrid,
    book: RecordBook,
    rng: np.random.Generator,
) -> None:
    """The Dirac operator computed in a pointwise rotated frame."""
    frame, rep = spin_data(spec)
    n = rep.n
    constant = random_lorentz_generator(n, rng, scale=0.3)
    slope = random_lorentz_generator(n, rng, scale=0.3)

    def spin(x: NDArray) -> NDArray:
        return spin_element(rep, constant + x[0] * slope)

    rotated = transformed_frame(
        frame,
        lambda x: vector_representation(rep, spin(x)),
        gauge="rotated",
    )
    moved = regauged_field(first.field, spin, "rotated")
    with book.guard(SPIN, "dirac_operator"):
        residual = 0.0
        for x in grid.spot_points:
            expected = np.linalg.solve(spin(x), dirac_operator(frame, first.field, x))
            residual = max(
                residual,
                float(np.linalg.norm(dirac_operator(rotated, moved, x) - expected))
                / (1.0 + float(np.linalg.norm(expected))),
            )
        book.add(
            SPIN,
            "dirac_operator",
            "frame_covariance",
            residual,
            book.tolerance(GAUGE_TOLERANCE),
        )


def check_spinors(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook, rng: np.random.Generator
) -> None:
    """Every bundled spinor, plus connection and covariance checks on the first one."""
    if not spec.spinors:
        return
    for name, bundled in spec.spinors.items():
        _check_spinor(spec, name, bundled, grid, book)
    first = next(iter(spec.spinors.values()))
    _check_spin_structure(spec, first, grid, book)
    check_frame_covariance(spec, first, grid, book, rng)
    if first.field.gauge == "gram-schmidt":
        with book.guard(SPIN, "conformal_covariance_check"):
            sigma = random_polynomial_scalar(spec.chart.dim, rng, scale=0.1)
            report = conformal_covariance_check(
                spec.chart,
                sigma,
                first.field,
                grid.spot_points,
                tolerance=book.tolerance(SPINOR_TOLERANCE),
            )
            book.add_report(SPIN, "conformal_covariance_check", report)

    parallel = [
        (name, b) for name, b in spec.spinors.items() if b.kind == "parallel"
    ]
    if parallel:
        name, bundled = parallel[0]
        with book.guard(SPIN, "transport_spinor"):
            loop = central_loop(spec)
            start = bundled.field(loop[0])
            end = transport_spinor(*spin_data(spec), loop, start)
            book.add(
                SPIN,
                "transport_spinor",
                f"{name}:loop_invariant",
                float(np.linalg.norm(end - start))
                / (1.0 + float(np.linalg.norm(start))),
                book.tolerance(TRANSPORT_TOLERANCE),
            )


def check_transport(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook, rng: np.random.Generator
) -> None:
    """Parallel transport preserves the metric along a polyline through spot points."""
    chart = spec.chart
    path = np.vstack([grid.spot_points[:2], chart.midpoint()[None, :]])
    first = rng.normal(size=chart.dim)
    second = rng.normal(size=chart.dim)
    with book.guard(SPIN, "transport_vector"):
        moved_first = transport_vector(chart, path, first)
        moved_second = transport_vector(chart, path, second)
        before = first @ chart.g(path[0]) @ second
        after = moved_first @ chart.g(path[-1]) @ moved_second
        book.add(
            SPIN,
            "transport_vector",
            "metric_preserved",
            abs(after - before) / (1.0 + abs(before)),
            book.tolerance(TRANSPORT_TOLERANCE),
        )


def check_sasaki(spec: GeometrySpec, grid: SampleGrid, book: RecordBook) -> None:
    """Unit Killing Reeb field whose derivative J = -nabla xi is a Sasaki structure."""
    chart = spec.chart
    xi = spec.vector_fields[spec.sasaki_field]  # type: ignore [index]
    tolerance = book.tolerance(STRUCTURE_TOLERANCE)

    def structure(x: NDArray) -> NDArray:
        return -covariant_derivative_vector(chart, xi, x).T

    residuals: dict[str, float] = {}
    with book.guard(MODELS, "sasaki_structure"):
        for x in lattice_sample(grid):
            g = chart.g(x)
            v = xi(x)
            dual = g @ v
            j = structure(x)
            nabla = endomorphism_covariant_derivative(chart, structure, x)
            expected = -np.einsum("il,k->ikl", g, v) + np.einsum(
                "l,ki->ikl", dual, np.eye(chart.dim)
            )
            _merge(
                residuals,
                {
                    "unit_timelike": abs(v @ dual + 1.0),
                    "killing": killing_residual(chart, xi, x),
                    "complex_square": float(
                        np.max(np.abs(j @ j + np.eye(chart.dim) + np.outer(v, dual)))
                    ),
                    "structure_derivative": float(np.max(np.abs(nabla - expected))),
                },
            )
        for name, value in residuals.items():
            book.add(MODELS, "sasaki_structure", name, value, tolerance)


def check_cone(spec: GeometrySpec, grid: SampleGrid, book: RecordBook) -> None:
    """Parallel orthogonal complex structure and signature of a Kaehler cone."""
    chart = spec.chart
    structure = spec.cone_structure
    tolerance = book.tolerance(STRUCTURE_TOLERANCE)
    residuals: dict[str, float] = {}
    with book.guard(MODELS, "cone_over"):
        for x in grid.spot_points:
            g = chart.g(x)
            j = structure(x)
            nabla_j = endomorphism_covariant_derivative(chart, structure, x)
            _merge(
                residuals,
                {
                    "complex_square": float(np.max(np.abs(j @ j + np.eye(chart.dim)))),
                    "orthogonal": float(np.max(np.abs(j.T @ g @ j - g))),
                    "parallel_structure": float(np.max(np.abs(nabla_j))),
                },
            )
        for name, value in residuals.items():
            book.add(MODELS, "cone_over", name, value, tolerance)
        negative = int(np.sum(np.linalg.eigvalsh(chart.g(chart.midpoint())) < 0))
        book.add_verdict(MODELS, "cone_over", "negative_directions", negative, 2)


def check_kaehler_flag(spec: GeometrySpec, grid: SampleGrid, book: RecordBook) -> None:
    """Kaehler condition on the screen bundle of the parallel null field."""
    expect = spec.expectations
    field_name = expect.parallel_field or expect.killing_field
    vector = spec.vector_fields[field_name]  # type: ignore [index]
    with book.guard(SPIN, "kaehler_flag_check"):
        report = kaehler_flag_check(
            spec.chart,
            vector,
            spec.complex_structure,
            spec.transverse,
            grid.spot_points,
            tolerance=book.tolerance(CURVATURE_TOLERANCE),
        )
        book.add_report(
            SPIN,
            "kaehler_flag_check",
            report,
            negative_controls=() if expect.kaehler_flag else ("curvature_trace",),
        )


def check_killing_decomposition(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook
) -> dict[str, Any]:
    """Split the named twistor spinor into Killing spinors on an Einstein chart."""
    name = spec.expectations.killing_decomposition
    bundled = spec.spinors[name]  # type: ignore [index]
    measured: dict[str, Any] = {}
    with book.guard(SPIN, "killing_decompose"):
        decomposition = killing_decompose(
            spin_data(spec)[0],
            bundled.field,
            grid.spot_points,
            tolerance=book.tolerance(STRUCTURE_TOLERANCE),
        )
        book.add_report(SPIN, "killing_decompose", decomposition.report)
        measured["killing_numbers"] = [
            [decomposition.killing_plus.real, decomposition.killing_plus.imag],
            [decomposition.killing_minus.real, decomposition.killing_minus.imag],
        ]
    return measured


def check_fiber_constant(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook
) -> dict[str, Any]:
    """Measure c with nabla_V phi = i c phi along the Dirac current of phi."""
    field = spec.spinors[spec.expectations.fiber_constant].field  # type: ignore [index]
    tolerance = book.tolerance(SPINOR_TOLERANCE)
    measured: dict[str, Any] = {}
    with book.guard(SPIN, "measure_fiber_constant"):
        frame = spin_data(spec)[0]
        values = []
        residual = 0.0
        for x in lattice_sample(grid):
            c, error = measure_fiber_constant(frame, field, x)
            values.append(c)
            residual = max(residual, error)
        mean = float(np.mean(values))
        measured["fiber_constant"] = mean
        book.add(SPIN, "measure_fiber_constant", "eigen_relation", residual, tolerance)
        spread = float(np.ptp(values))
        book.add(SPIN, "measure_fiber_constant", "constant", spread, tolerance)
    return measured


def check_current_properties(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook
) -> None:
    """V . phi = <phi, phi> phi and nabla_V phi = lambda <phi, phi> phi."""
    bundled = spec.spinors[spec.expectations.current_properties]  # type: ignore [index]
    field = bundled.field
    frame, rep = spin_data(spec)
    tolerance = book.tolerance(SPINOR_TOLERANCE)
    with book.guard(SPIN, "current_properties"):
        lengths = []
        action = 0.0
        flow = 0.0
        for x in lattice_sample(grid):
            phi = field(x)
            current = current_frame_components(field, x)
            length = float(np.real(np.vdot(rep.gammas[0] @ phi, phi)))
            lengths.append(length)
            clifford = np.einsum("a,aij,j->i", current, rep.gammas, phi)
            action = max(action, float(np.linalg.norm(clifford - length * phi)))
            derivative = directional_spinor_derivative(frame, field, current, x)
            flow = max(
                flow,
                float(
                    np.linalg.norm(derivative - bundled.killing_number * length * phi)
                ),
            )
        book.add(SPIN, "current_properties", "current_action", action, tolerance)
        book.add(SPIN, "current_properties", "killing_flow", flow, tolerance)
        spread = float(np.ptp(lengths))
        book.add(SPIN, "current_properties", "constant_length", spread, tolerance)


def check_geometry(
    spec: GeometrySpec, grid: SampleGrid, book: RecordBook, rng: np.random.Generator
) -> dict[str, Any]:
    """Run every check the expectations of a geometry ask for.

    Returns the measured constants.
    """
    expect = spec.expectations
    measured: dict[str, Any] = {}
    check_chart(spec, grid, book)
    measured.update(check_curvature(spec, grid, book))
    measured.update(check_vector_fields(spec, grid, book))
    with book.guard(SPIN, "spinor_fields"):
        check_spinors(spec, grid, book, rng)
    check_transport(spec, grid, book, rng)
    if expect.sasaki:
        check_sasaki(spec, grid, book)
    if expect.cone_kaehler:
        check_cone(spec, grid, book)
    if expect.kaehler_flag is not None and spec.complex_structure is not None:
        check_kaehler_flag(spec, grid, book)
    if expect.tanaka_webster and spec.cr_structure is not None:
        with book.guard(MODELS, "tanaka_webster_residuals"):
            report = spec.cr_structure.tanaka_webster_residuals(
                grid.all_points, tolerance=book.tolerance(STRUCTURE_TOLERANCE)
            )
            book.add_report(MODELS, "tanaka_webster_residuals", report)
    if expect.killing_decomposition is not None:
        measured.update(check_killing_decomposition(spec, grid, book))
    if expect.fiber_constant is not None:
        measured.update(check_fiber_constant(spec, grid, book))
    if expect.current_properties is not None:
        check_current_properties(spec, grid, book)
    log.info(
        "Checked geometry '%s' with %d records.",
        spec.name,
        len(book.records),
        extra={"geometry": spec.name, "passed": book.passed},
    )
    return measured
