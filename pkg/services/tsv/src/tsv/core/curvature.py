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

"""Levi-Civita connection and the conformal curvature stack on coordinate charts.

Index conventions: `christoffel[k, i, j]` is Gamma^k_ij, `riemann_up[l, k, i, j]` is
the l component of R(d_i, d_j) d_k with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y],
`riemann[i, j, k, l]` is g(R(d_i, d_j) d_k, d_l) and `ricci[j, k]` is the trace of
X -> R(X, d_j) d_k.
"""

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
from numpy.typing import NDArray

from tsv.core.charts import MetricChart, VectorField
from tsv.core.differentiation import central_difference

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CurvaturePack:
    """All curvature quantities at one point, coordinate indices"""

    point: NDArray[np.float64]
    christoffel: NDArray[np.float64]
    riemann_up: NDArray[np.float64]
    riemann: NDArray[np.float64]
    ricci: NDArray[np.float64]
    scalar: float
    rho: NDArray[np.float64]
    weyl: NDArray[np.float64]
    cotton: NDArray[np.float64]

    def to_dict(self) -> dict[str, Any]:
        """JSON friendly dump of all arrays."""
        return {
            "point": self.point.tolist(),
            "christoffel": self.christoffel.tolist(),
            "riemann": self.riemann.tolist(),
            "ricci": self.ricci.tolist(),
            "scalar": self.scalar,
            "rho": self.rho.tolist(),
            "weyl": self.weyl.tolist(),
            "cotton": self.cotton.tolist(),
        }


def _first_kind(dg: NDArray) -> NDArray:
    """d_i g_lj + d_j g_li - d_l g_ij with the free index l in front."""
    return np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg


def christoffel(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """Christoffel symbols Gamma^k_ij of the Levi-Civita connection."""
    ginv = chart.inverse(x)
    return 0.5 * np.einsum("kl,lij->kij", ginv, _first_kind(chart.dg(x)))


def christoffel_derivative(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """d_m Gamma^k_ij from first and second metric derivatives."""
    ginv = chart.inverse(x)
    dg = chart.dg(x)
    d2g = chart.d2g(x)
    dginv = -np.einsum("kl,mlp,pq->mkq", ginv, dg, ginv)
    first = _first_kind(dg)
    dfirst = (
        np.einsum("milj->mlij", d2g) + np.einsum("mjli->mlij", d2g) - d2g
    )
    return 0.5 * (
        np.einsum("mkl,lij->mkij", dginv, first)
        + np.einsum("kl,mlij->mkij", ginv, dfirst)
    )


def riemann_up(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """R^l_kij = (R(d_i, d_j) d_k)^l."""
    gamma = christoffel(chart, x)
    dgamma = christoffel_derivative(chart, x)
    return (
        np.einsum("iljk->lkij", dgamma)
        - np.einsum("jlik->lkij", dgamma)
        + np.einsum("lip,pjk->lkij", gamma, gamma)
        - np.einsum("ljp,pik->lkij", gamma, gamma)
    )


def lower_riemann(g: NDArray, rup: NDArray) -> NDArray[np.float64]:
    """R_ijkl = g(R(d_i, d_j) d_k, d_l)."""
    return np.einsum("lm,mkij->ijkl", g, rup)


def riemann(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """Fully lowered Riemann tensor."""
    return lower_riemann(chart.g(x), riemann_up(chart, x))


def kulkarni_nomizu(h: NDArray, k: NDArray) -> NDArray[np.float64]:
    """(h * k)_abcd = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad."""
    return (
        np.einsum("ac,bd->abcd", h, k)
        + np.einsum("bd,ac->abcd", h, k)
        - np.einsum("ad,bc->abcd", h, k)
        - np.einsum("bc,ad->abcd", h, k)
    )


def _ricci_scalar_rho(
    chart: MetricChart, x: NDArray, rup: NDArray
) -> tuple[NDArray, float, NDArray]:
    n = chart.dim
    g = chart.g(x)
    ricci = np.einsum("lklj->jk", rup)
    scalar = float(np.einsum("jk,jk->", chart.inverse(x), ricci))
    if n <= 2:
        return ricci, scalar, np.zeros((n, n))
    rho = (scalar / (2 * (n - 1)) * g - ricci) / (n - 2)
    return ricci, scalar, rho


def rho_tensor(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """K = (R / (2 (n - 1)) g - Ric) / (n - 2), zero in dimension two."""
    return _ricci_scalar_rho(chart, x, riemann_up(chart, x))[2]


def outer_step(chart: MetricChart) -> float:
    """Step for differentiating curvature, one level above the metric data."""
    return chart.fd_step * 10 ** chart.derivative_depth


def cotton_york(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """C_ijk = (nabla_i K)_jk - (nabla_j K)_ik."""
    n = chart.dim
    if n <= 2:
        return np.zeros((n, n, n))
    x = np.asarray(x, dtype=float)
    gamma = christoffel(chart, x)
    rho = rho_tensor(chart, x)
    drho = central_difference(lambda y: rho_tensor(chart, y), x, outer_step(chart))
    nabla = (
        drho
        - np.einsum("pij,pk->ijk", gamma, rho)
        - np.einsum("pik,jp->ijk", gamma, rho)
    )
    return nabla - np.einsum("jik->ijk", nabla)


def curvature_pack(
    chart: MetricChart, x: NDArray, *, with_cotton: bool = True
) -> CurvaturePack:
    """Riemann, Ricci, scalar, Rho, Weyl and Cotton-York tensors at x.

    The Weyl tensor is Riemann - g * K, which vanishes on constant curvature.
    """
    x = np.asarray(x, dtype=float)
    n = chart.dim
    g = chart.g(x)
    rup = riemann_up(chart, x)
    lowered = lower_riemann(g, rup)
    ricci, scalar, rho = _ricci_scalar_rho(chart, x, rup)
    weyl = np.zeros((n,) * 4) if n <= 2 else lowered - kulkarni_nomizu(g, rho)
    cotton = cotton_york(chart, x) if with_cotton else np.zeros((n,) * 3)
    return CurvaturePack(
        point=x,
        christoffel=christoffel(chart, x),
        riemann_up=rup,
        riemann=lowered,
        ricci=ricci,
        scalar=scalar,
        rho=rho,
        weyl=weyl,
        cotton=cotton,
    )


def without_analytic_derivatives(chart: MetricChart) -> MetricChart:
    """Same chart, all derivatives by finite differences."""
    return replace(chart, metric_derivative=None, metric_second_derivative=None)


def metric_compatibility_residual(chart: MetricChart, x: NDArray) -> float:
    """max |nabla_k g_ij| reassembled from the Christoffel symbols."""
    g = chart.g(x)
    gamma = christoffel(chart, x)
    nabla = (
        chart.dg(x)
        - np.einsum("pki,pj->kij", gamma, g)
        - np.einsum("pkj,ip->kij", gamma, g)
    )
    return float(np.max(np.abs(nabla)))


def riemann_symmetry_residuals(pack: CurvaturePack) -> dict[str, float]:
    """Pair antisymmetry, pair exchange and first Bianchi identity."""
    r = pack.riemann
    bianchi = r + np.einsum("jkil->ijkl", r) + np.einsum("kijl->ijkl", r)
    return {
        "antisymmetry_first_pair": float(
            np.max(np.abs(r + np.einsum("jikl->ijkl", r)))
        ),
        "antisymmetry_second_pair": float(
            np.max(np.abs(r + np.einsum("ijlk->ijkl", r)))
        ),
        "pair_exchange": float(np.max(np.abs(r - np.einsum("klij->ijkl", r)))),
        "first_bianchi": float(np.max(np.abs(bianchi))),
    }


def weyl_trace_residual(chart: MetricChart, pack: CurvaturePack) -> float:
    """Largest single contraction of W with the inverse metric."""
    ginv = chart.inverse(pack.point)
    residual = 0.0
    for first, second in itertools.combinations(range(4), 2):
        moved = np.moveaxis(pack.weyl, (first, second), (0, 1))
        trace = np.einsum("ab,ab...->...", ginv, moved)
        residual = max(residual, float(np.max(np.abs(trace))))
    return residual


def covariant_derivative_riemann(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """(nabla_m R)_ijkl."""
    x = np.asarray(x, dtype=float)
    gamma = christoffel(chart, x)
    r = riemann(chart, x)
    dr = central_difference(lambda y: riemann(chart, y), x, outer_step(chart))
    return (
        dr
        - np.einsum("pmi,pjkl->mijkl", gamma, r)
        - np.einsum("pmj,ipkl->mijkl", gamma, r)
        - np.einsum("pmk,ijpl->mijkl", gamma, r)
        - np.einsum("pml,ijkp->mijkl", gamma, r)
    )


def second_bianchi_residual(chart: MetricChart, x: NDArray) -> float:
    """max |cyclic sum over (m, i, j) of (nabla_m R)_ijkl|."""
    nabla = covariant_derivative_riemann(chart, x)
    cyclic = (
        nabla
        + np.einsum("ijmkl->mijkl", nabla)
        + np.einsum("jmikl->mijkl", nabla)
    )
    return float(np.max(np.abs(cyclic)))


def pp_trace(chart: MetricChart, x: NDArray) -> NDArray[np.float64]:
    """R_ab^cd R_cdgh, the contraction of R (x) R over slots (3, 5) and (4, 6)."""
    r = riemann(chart, x)
    ginv = chart.inverse(x)
    return np.einsum("abcd,ce,df,efgh->abgh", r, ginv, ginv, r)


def pp_curvature_check(chart: MetricChart, region: NDArray) -> float:
    """Max norm of the pp trace over the sample points."""
    return max(float(np.max(np.abs(pp_trace(chart, x)))) for x in region)


def covariant_derivative_vector(
    chart: MetricChart, field: VectorField, x: NDArray
) -> NDArray[np.float64]:
    """nabla[i, k] = (nabla_{d_i} V)^k."""
    x = np.asarray(x, dtype=float)
    return field.jacobian(x, chart.fd_step) + np.einsum(
        "kij,j->ik", christoffel(chart, x), field(x)
    )


def divergence(chart: MetricChart, field: VectorField, x: NDArray) -> float:
    """div V = nabla_k V^k."""
    return float(np.trace(covariant_derivative_vector(chart, field, x)))


def metric_dual_derivative(
    chart: MetricChart, field: VectorField, x: NDArray
) -> tuple[NDArray, NDArray]:
    """theta = g V and its partial derivatives d_k theta_i."""
    x = np.asarray(x, dtype=float)
    g = chart.g(x)
    v = field(x)
    theta = g @ v
    dtheta = np.einsum("kij,j->ki", chart.dg(x), v) + np.einsum(
        "ij,kj->ki", g, field.jacobian(x, chart.fd_step)
    )
    return theta, dtheta


def exterior_derivative_dual(
    chart: MetricChart, field: VectorField, x: NDArray
) -> NDArray:
    """(d theta)_ij = d_i theta_j - d_j theta_i."""
    _, dtheta = metric_dual_derivative(chart, field, x)
    return dtheta - dtheta.T


def twist_measure(chart: MetricChart, field: VectorField, x: NDArray) -> float:
    """Euclidean norm of the components of d theta ^ theta."""
    theta, _ = metric_dual_derivative(chart, field, x)
    dtheta = exterior_derivative_dual(chart, field, x)
    three = (
        np.einsum("ij,k->ijk", dtheta, theta)
        + np.einsum("jk,i->ijk", dtheta, theta)
        + np.einsum("ki,j->ijk", dtheta, theta)
    )
    return float(np.linalg.norm(three))


def lie_derivative_metric(
    chart: MetricChart, field: VectorField, x: NDArray
) -> NDArray[np.float64]:
    """(L_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k."""
    x = np.asarray(x, dtype=float)
    g = chart.g(x)
    dv = field.jacobian(x, chart.fd_step)
    return (
        np.einsum("k,kij->ij", field(x), chart.dg(x))
        + np.einsum("ik,kj->ij", dv, g)
        + np.einsum("jk,ik->ij", dv, g)
    )


def killing_residual(chart: MetricChart, field: VectorField, x: NDArray) -> float:
    """max |L_V g|."""
    return float(np.max(np.abs(lie_derivative_metric(chart, field, x))))


def conformal_killing_residual(
    chart: MetricChart, field: VectorField, x: NDArray
) -> float:
    """max of the trace-free part of L_V g."""
    lie = lie_derivative_metric(chart, field, x)
    trace = float(np.einsum("ij,ij->", chart.inverse(x), lie))
    return float(np.max(np.abs(lie - trace / chart.dim * chart.g(x))))
