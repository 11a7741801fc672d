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

"""Closed form CR and Tanaka-Webster data of the three dimensional Heisenberg group"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from tsv.core.models import IdentityReport

# complex structure on H in the frame (X1, X2, T): J X1 = X2, J X2 = -X1, J T = 0
FRAME_COMPLEX_STRUCTURE = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


@dataclass(frozen=True)
class CRHeisenberg:
    """Heisenberg group on coordinates (x, y, u) with contact form du + x dy - y dx.

    H = ker theta is spanned by X1 = d_x + y d_u and X2 = d_y - x d_u, the Reeb
    field is T = d_u. The Tanaka-Webster connection is the flat connection that
    makes X1, X2, T parallel.
    """

    dimension_m: int = 1

    @property
    def fefferman_factor(self) -> float:
        """8 / (m + 2)."""
        return 8.0 / (self.dimension_m + 2)

    def contact_form(self, x: NDArray) -> NDArray[np.float64]:
        """theta as a covector."""
        return np.array([-x[1], x[0], 1.0])

    def contact_differential(self) -> NDArray[np.float64]:
        """(d theta)_ij, constant 2 dx ^ dy."""
        return np.array([[0.0, 2.0, 0.0], [-2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])

    def reeb(self, x: NDArray) -> NDArray[np.float64]:
        return np.array([0.0, 0.0, 1.0])

    def frame(self, x: NDArray) -> NDArray[np.float64]:
        """Columns X1, X2, T."""
        return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [x[1], -x[0], 1.0]])

    def frame_derivative(self, x: NDArray) -> NDArray[np.float64]:
        """dF[k] = d_k F."""
        d = np.zeros((3, 3, 3))
        d[0, 2, 1] = -1.0
        d[1, 2, 0] = 1.0
        return d

    def complex_structure(self, x: NDArray) -> NDArray[np.float64]:
        """J in coordinates, extended by J T = 0."""
        f = self.frame(x)
        return f @ FRAME_COMPLEX_STRUCTURE @ np.linalg.inv(f)

    def levi_form(self, x: NDArray) -> NDArray[np.float64]:
        """L(X, Y) = d theta(X, J Y) in coordinates."""
        return self.contact_differential() @ self.complex_structure(x)

    def webster_metric(self, x: NDArray) -> NDArray[np.float64]:
        """g_theta = L_theta + theta (x) theta."""
        theta = self.contact_form(x)
        return self.levi_form(x) + np.outer(theta, theta)

    def webster_metric_derivative(self, x: NDArray) -> NDArray[np.float64]:
        """d_k g_theta from g_theta = F^-T diag(2, 2, 1) F^-1."""
        inverse = np.linalg.inv(self.frame(x))
        frame_metric = np.diag([2.0, 2.0, 1.0])
        d_frame = self.frame_derivative(x)
        d_inverse = -np.einsum("ab,kbc,cd->kad", inverse, d_frame, inverse)
        half = np.einsum("kai,ab,bj->kij", d_inverse, frame_metric, inverse)
        return half + np.einsum("kij->kji", half)

    def webster_metric_covariant_derivative(self, x: NDArray) -> NDArray[np.float64]:
        """(nabla_k g_theta)_ij."""
        g = self.webster_metric(x)
        gamma = self.connection(x)
        return (
            self.webster_metric_derivative(x)
            - np.einsum("mki,mj->kij", gamma, g)
            - np.einsum("mkj,im->kij", gamma, g)
        )

    def connection(self, x: NDArray) -> NDArray[np.float64]:
        """gamma[m, k, i] = Gamma^m_ki, from Gamma_k = -(d_k F) F^-1."""
        inverse = np.linalg.inv(self.frame(x))
        return -np.einsum("kmj,ji->mki", self.frame_derivative(x), inverse)

    def covariant_derivative(
        self, x: NDArray, vector: NDArray, jacobian: NDArray
    ) -> NDArray:
        """(nabla_{d_k} Y)^m for Y with Jacobian jacobian[k, m] = d_k Y^m."""
        return jacobian + np.einsum("mki,i->km", self.connection(x), vector)

    def curvature(self, x: NDArray) -> NDArray[np.float64]:
        """R_kl = d_k Gamma_l - d_l Gamma_k + [Gamma_k, Gamma_l] as matrices."""
        inverse = np.linalg.inv(self.frame(x))
        df = self.frame_derivative(x)
        gammas = -np.einsum("kmj,ji->kmi", df, inverse)
        # d_k Gamma_l = (d_l F) F^-1 (d_k F) F^-1 for F affine in x
        d_gammas = np.einsum("lmj,ja,kab,bi->klmi", df, inverse, df, inverse)
        commutators = np.einsum("kma,lai->klmi", gammas, gammas) - np.einsum(
            "lma,kai->klmi", gammas, gammas
        )
        return d_gammas - np.einsum("klmi->lkmi", d_gammas) + commutators

    def _frame_field_terms(self, x: NDArray, a: int, b: int) -> tuple[NDArray, NDArray]:
        """nabla_{X_a} X_b and [X_a, X_b] in coordinates."""
        f = self.frame(x)
        df = self.frame_derivative(x)
        nabla = np.einsum(
            "k,km->m", f[:, a], self.covariant_derivative(x, f[:, b], df[:, :, b])
        )
        bracket = np.einsum("k,km->m", f[:, a], df[:, :, b]) - np.einsum(
            "k,km->m", f[:, b], df[:, :, a]
        )
        return nabla, bracket

    def torsion(self, x: NDArray, a: int, b: int) -> NDArray[np.float64]:
        """Tor(X_a, X_b) for frame indices a, b."""
        nabla_ab, bracket = self._frame_field_terms(x, a, b)
        nabla_ba, _ = self._frame_field_terms(x, b, a)
        return nabla_ab - nabla_ba - bracket

    def tanaka_webster_residuals(
        self, points: NDArray, *, tolerance: float
    ) -> IdentityReport:
        """Residuals of the contact, Levi form and Tanaka-Webster conditions."""
        residuals = dict.fromkeys(
            [
                "reeb_normalization",
                "reeb_contraction",
                "levi_symmetric",
                "levi_positive",
                "metric_parallel",
                "torsion_horizontal",
                "torsion_reeb",
                "curvature_flat",
            ],
            0.0,
        )

        def bump(name: str, value: float) -> None:
            residuals[name] = max(residuals[name], float(value))

        dtheta = self.contact_differential()
        for x in np.asarray(points, dtype=float)[:, :3]:
            f = self.frame(x)
            t = self.reeb(x)
            theta = self.contact_form(x)
            j = self.complex_structure(x)
            levi = self.levi_form(x)
            bump("reeb_normalization", abs(theta @ t - 1))
            bump("reeb_contraction", np.max(np.abs(t @ dtheta)))
            horizontal = f[:, :2]
            levi_h = horizontal.T @ levi @ horizontal
            bump("levi_symmetric", np.max(np.abs(levi_h - levi_h.T)))
            bump("levi_positive", max(0.0, -float(np.min(np.linalg.eigvalsh(levi_h)))))
            nabla_metric = self.webster_metric_covariant_derivative(x)
            bump("metric_parallel", np.max(np.abs(nabla_metric)))
            for a in range(2):
                for b in range(2):
                    expected = (j @ f[:, a]) @ levi @ f[:, b] * t
                    defect = self.torsion(x, a, b) - expected
                    bump("torsion_horizontal", np.max(np.abs(defect)))
                jx = j @ f[:, a]
                jx_frame = np.linalg.solve(f, jx)
                _, bracket = self._frame_field_terms(x, 2, a)
                bracket_j = sum(
                    jx_frame[c] * self._frame_field_terms(x, 2, c)[1] for c in range(3)
                )
                expected = -0.5 * (bracket + j @ bracket_j)
                bump("torsion_reeb", np.max(np.abs(self.torsion(x, 2, a) - expected)))
            bump("curvature_flat", np.max(np.abs(self.curvature(x))))
        return IdentityReport.from_residuals(residuals, tolerance=tolerance)

    def fefferman_metric(self, p: NDArray) -> NDArray[np.float64]:
        """pi* L_theta + k (theta (x) ds + ds (x) theta) on (x, y, u, s)."""
        theta = np.append(self.contact_form(p), 0.0)
        ds = np.array([0.0, 0.0, 0.0, 1.0])
        g = np.zeros((4, 4))
        g[:3, :3] = self.levi_form(p)
        return g + self.fefferman_factor * (np.outer(theta, ds) + np.outer(ds, theta))

    def fefferman_metric_derivative(self, p: NDArray) -> NDArray[np.float64]:
        """dg[k] for the Fefferman metric; the Levi form is constant."""
        ds = np.array([0.0, 0.0, 0.0, 1.0])
        d_theta = np.zeros((4, 4))
        d_theta[0, 1] = 1.0
        d_theta[1, 0] = -1.0
        return self.fefferman_factor * (
            np.einsum("ki,j->kij", d_theta, ds) + np.einsum("i,kj->kij", ds, d_theta)
        )
