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

"""Central finite differences with one Richardson extrapolation level"""

import logging
from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

from tsv.core.exceptions import StepUnderflowError

log = logging.getLogger(__name__)

MIN_STEP = 1e-12


def _central(
    func: Callable[[NDArray[np.float64]], NDArray], x: NDArray[np.float64], h: float
) -> NDArray:
    """Plain central differences, derivative index first."""
    columns = []
    for k in range(x.shape[0]):
        shift = np.zeros_like(x)
        shift[k] = h
        forward, backward = np.asarray(func(x + shift)), np.asarray(func(x - shift))
        columns.append((forward - backward) / (2 * h))
    return np.stack(columns)


def central_difference(
    func: Callable[[NDArray[np.float64]], NDArray],
    x: NDArray[np.float64],
    step: float,
) -> NDArray:
    """Differentiate `func` at `x` in every coordinate direction.

    The step is scaled with the size of the point. The returned array carries the
    derivative index in front of the shape of `func(x)`.
    """
    x = np.asarray(x, dtype=float)
    scale = 1.0 + float(np.max(np.abs(x))) if x.size else 1.0
    h = step * scale
    if h < MIN_STEP:
        error = StepUnderflowError(step=h)
        log.error(error, extra={"step": h})
        raise error
    coarse = _central(func, x, h)
    fine = _central(func, x, h / 2)
    return (4 * fine - coarse) / 3
