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

"""Top-level object construction and dependency injection"""

import json
from pathlib import Path
from typing import Any

from hexkit.log import configure_logging

from tsv.config import Config
from tsv.core.models import SuiteReport
from tsv.inject import prepare_runner


def load_config(**overrides: Any) -> Config:
    """Load the config and apply the command line overrides that were given."""
    config = Config()
    updates = {key: value for key, value in overrides.items() if value is not None}
    return config.model_copy(update=updates) if updates else config


async def run_algebra(
    *, config: Config, n: int, report_path: Path | None = None
) -> tuple[SuiteReport, str]:
    """Run the algebra suite of one dimension and write its report."""
    configure_logging(config=config)
    async with prepare_runner(config=config) as (verifier, report_writer):
        report = await verifier.run_algebra(n=n)
        text = await report_writer.write(report=report, path=report_path)
    return report, text


async def run_geometry(
    *,
    config: Config,
    name: str,
    params: dict[str, Any],
    report_path: Path | None = None,
) -> tuple[SuiteReport, str]:
    """Run the suite of a registry geometry and write its report."""
    configure_logging(config=config)
    async with prepare_runner(config=config) as (verifier, report_writer):
        report = await verifier.run_geometry(name=name, params=params)
        text = await report_writer.write(report=report, path=report_path)
    return report, text


async def evaluate_point(
    *,
    config: Config,
    name: str,
    params: dict[str, Any],
    point: list[float],
    quantity: str,
    report_path: Path | None = None,
) -> str:
    """Evaluate one quantity at a point and return it as JSON."""
    configure_logging(config=config)
    async with prepare_runner(config=config) as (verifier, _):
        values = await verifier.evaluate_point(
            name=name, params=params, point=point, quantity=quantity
        )
    text = json.dumps(values, indent=config.report_indent or None)
    if report_path is not None:
        report_path.write_text(text + "\n", encoding="utf-8")
    return text


async def run_all(
    *, config: Config, report_path: Path | None = None
) -> tuple[SuiteReport, str]:
    """Run every algebra and geometry suite and write the merged report."""
    configure_logging(config=config)
    async with prepare_runner(config=config) as (verifier, report_writer):
        report = await verifier.run_all()
        text = await report_writer.write(report=report, path=report_path)
    return report, text
