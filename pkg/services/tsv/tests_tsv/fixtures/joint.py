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

"""Provides multiple fixtures in one spot"""

from collections.abc import AsyncGenerator
from dataclasses import dataclass
from pathlib import Path

import pytest_asyncio

from tests_tsv.fixtures.config import get_config
from tsv.config import Config
from tsv.inject import prepare_runner
from tsv.ports.inbound.verifier import VerifierPort
from tsv.ports.outbound.report import ReportWriterPort


@dataclass
class JointFixture:
    """Returned by the `joint_fixture`."""

    config: Config
    verifier: VerifierPort
    report_writer: ReportWriterPort
    report_dir: Path


@pytest_asyncio.fixture(scope="function")
async def joint_fixture(tmp_path: Path) -> AsyncGenerator[JointFixture, None]:
    """A fixture that embeds the verifier and the report writer"""
    config = get_config()

    # Create joint_fixture using the inject module
    async with prepare_runner(config=config) as (verifier, report_writer):
        yield JointFixture(
            config=config,
            verifier=verifier,
            report_writer=report_writer,
            report_dir=tmp_path,
        )
