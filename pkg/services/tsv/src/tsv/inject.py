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

"""Module hosting the dependency injection container."""

from collections.abc import AsyncGenerator
from contextlib import asynccontextmanager, nullcontext

from tsv.adapters.outbound.report_writer import JsonReportWriter
from tsv.config import Config
from tsv.core.verifier import Verifier
from tsv.ports.inbound.verifier import VerifierPort
from tsv.ports.outbound.report import ReportWriterPort


@asynccontextmanager
async def prepare_core(*, config: Config) -> AsyncGenerator[VerifierPort, None]:
    """Constructs the suite runner from the config."""
    yield Verifier(config=config)


def prepare_core_with_override(
    *, config: Config, verifier_override: VerifierPort | None = None
):
    """Resolve the verifier context manager based on config and override (if any)."""
    return (
        nullcontext(verifier_override)
        if verifier_override
        else prepare_core(config=config)
    )


@asynccontextmanager
async def prepare_report_writer(
    *, config: Config
) -> AsyncGenerator[ReportWriterPort, None]:
    """Construct the JSON report writer."""
    yield JsonReportWriter(config=config)


@asynccontextmanager
async def prepare_runner(
    *, config: Config, verifier_override: VerifierPort | None = None
) -> AsyncGenerator[tuple[VerifierPort, ReportWriterPort], None]:
    """Construct the verifier together with the report writer.

    By default, the core is prepared from the config but you can also provide it
    using the verifier_override parameter.
    """
    async with (
        prepare_core_with_override(
            config=config, verifier_override=verifier_override
        ) as verifier,
        prepare_report_writer(config=config) as report_writer,
    ):
        yield verifier, report_writer
