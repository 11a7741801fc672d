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

"""Entrypoint of the package"""

import asyncio
from pathlib import Path
from typing import Annotated

import typer
from pydantic import ValidationError

from tsv.core.exceptions import DimensionRangeError
from tsv.core.models import GeometryRequest, SuiteReport
from tsv.core.records import DOMAIN_ERRORS
from tsv.core.verifier import QUANTITIES
from tsv.main import evaluate_point, load_config, run_algebra, run_all, run_geometry
from tsv.ports.inbound.verifier import VerifierPort

cli = typer.Typer(
    help="Check Clifford, spinor and twistor identities on Lorentzian model geometries."
)
suite = typer.Typer(help="Grouped suite runs.")
cli.add_typer(suite, name="suite")

USAGE_ERRORS = (
    DimensionRangeError,
    VerifierPort.UnknownGeometryError,
    VerifierPort.MalformedParametersError,
    VerifierPort.PointOutsideDomainError,
    VerifierPort.UnknownQuantityError,
)

Seed = Annotated[int | None, typer.Option("--seed", help="Seed of every random draw.")]
Tolerance = Annotated[
    float | None, typer.Option("--tol", help="Override every per-check tolerance.")
]
Grid = Annotated[int | None, typer.Option("--grid", help="Lattice points per axis.")]
JsonPath = Annotated[
    Path | None, typer.Option("--json", help="Write the JSON report to this path.")
]
ParamsPath = Annotated[
    Path | None,
    typer.Option(
        "--params", help='JSON file {"name": ..., "params": {...}} selecting a geometry.'
    ),
]


def _request(name: str | None, params_path: Path | None) -> tuple[str, dict]:
    """Resolve the geometry name and its parameter block."""
    if params_path is None:
        if name is None:
            raise typer.BadParameter("Give a geometry name or a --params file.")
        return name, {}
    try:
        request = GeometryRequest.model_validate_json(params_path.read_text())
    except (OSError, ValidationError) as err:
        raise typer.BadParameter(f"Cannot read {params_path}: {err}") from err
    if name is not None and name != request.name:
        raise typer.BadParameter(
            f"Geometry '{name}' does not match '{request.name}' in {params_path}."
        )
    return request.name, request.params


def _finish(report: SuiteReport) -> None:
    """Print a summary and exit with 1 when a check failed."""
    failed = [record for record in report.records if not record.passed]
    total = len(report.records)
    typer.echo(
        f"{report.geometry}: {total - len(failed)}/{total} checks passed"
        + f" in {report.wall_time:.1f} s"
    )
    for record in failed:
        detail = record.error or f"residual {record.residual} > {record.tolerance}"
        if record.expected_failure:
            detail = f"residual {record.residual} <= {record.tolerance}, expected above"
        typer.echo(
            f"  FAILED {record.subject} {record.module}.{record.op} {record.identity}:"
            + f" {detail}"
        )
    if not report.passed:
        raise typer.Exit(code=1)


@cli.command(name="algebra")
def sync_run_algebra(
    n: Annotated[int, typer.Option("--n", help="Dimension, 2 <= n <= 8.")],
    seed: Seed = None,
    tol: Tolerance = None,
    json_path: JsonPath = None,
):
    """Check the Clifford and spinor identities in one dimension."""
    config = load_config(seed=seed, tolerance=tol)
    try:
        report, _ = asyncio.run(run_algebra(config=config, n=n, report_path=json_path))
    except USAGE_ERRORS as error:
        raise typer.BadParameter(str(error)) from error
    _finish(report)


@cli.command(name="geometry")
def sync_run_geometry(
    name: Annotated[str | None, typer.Argument(help="Registered geometry.")] = None,
    params: ParamsPath = None,
    seed: Seed = None,
    tol: Tolerance = None,
    grid: Grid = None,
    json_path: JsonPath = None,
):
    """Build a model geometry and check every expectation it carries."""
    geometry, block = _request(name, params)
    config = load_config(seed=seed, tolerance=tol, grid_size=grid)
    try:
        report, _ = asyncio.run(
            run_geometry(
                config=config, name=geometry, params=block, report_path=json_path
            )
        )
    except USAGE_ERRORS as error:
        raise typer.BadParameter(str(error)) from error
    _finish(report)


@cli.command(name="point")
def sync_evaluate_point(
    at: Annotated[str, typer.Option("--at", help="Comma separated coordinates.")],
    name: Annotated[str | None, typer.Argument(help="Registered geometry.")] = None,
    what: Annotated[
        str, typer.Option("--what", help=f"One of {', '.join(QUANTITIES)}.")
    ] = "curvature",
    params: ParamsPath = None,
    json_path: JsonPath = None,
):
    """Evaluate one quantity of a model geometry at a point and print it as JSON."""
    geometry, block = _request(name, params)
    try:
        point = [float(value) for value in at.split(",")]
    except ValueError as err:
        raise typer.BadParameter(f"Cannot parse point '{at}'.") from err
    config = load_config()
    try:
        text = asyncio.run(
            evaluate_point(
                config=config,
                name=geometry,
                params=block,
                point=point,
                quantity=what,
                report_path=json_path,
            )
        )
    except USAGE_ERRORS as error:
        raise typer.BadParameter(str(error)) from error
    except DOMAIN_ERRORS as error:
        typer.echo(f"{type(error).__name__}: {error}", err=True)
        raise typer.Exit(code=1) from error
    typer.echo(text)


@suite.command(name="all")
def sync_run_all(
    seed: Seed = None,
    tol: Tolerance = None,
    grid: Grid = None,
    json_path: JsonPath = None,
):
    """Run every algebra suite and every model geometry suite."""
    config = load_config(seed=seed, tolerance=tol, grid_size=grid)
    report, _ = asyncio.run(run_all(config=config, report_path=json_path))
    _finish(report)
