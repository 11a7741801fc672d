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

"""Set up session-scope fixtures for tests."""

import numpy as np
import pytest

from tests_tsv.fixtures.joint import JointFixture, joint_fixture  # noqa: F401


@pytest.fixture()
def rng() -> np.random.Generator:
    """A freshly seeded generator for each test."""
    return np.random.default_rng(20240611)
