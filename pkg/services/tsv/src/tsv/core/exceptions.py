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

"""Custom exceptions raised by the numerical core"""


class CliffordError(Exception):
    """Base for errors in the Clifford representation layer"""


class DimensionRangeError(CliffordError):
    """Thrown when a representation is requested outside of the supported range"""

    def __init__(self, *, n: int, minimum: int = 2, maximum: int = 8):
        message = (
            f"Dimension {n} is not supported, expected {minimum} <= n <= {maximum}."
        )
        super().__init__(message)


class DimensionMismatchError(CliffordError):
    """Thrown when an array does not match the representation it is applied with"""

    def __init__(self, *, expected: int, actual: int, what: str):
        message = f"Expected {what} of length {expected} but got {actual}."
        super().__init__(message)


class UnsupportedFormDegreeError(CliffordError):
    """Thrown when a form of unsupported degree acts on spinors"""

    def __init__(self, *, degree: int):
        message = f"Forms of degree {degree} are not supported, expected 0 <= k <= 3."
        super().__init__(message)


class StructureMapError(CliffordError):
    """Thrown when no structure map with the required properties exists"""

    def __init__(self, *, n: int, reason: str):
        message = f"Could not build the structure map for n = {n}: {reason}"
        super().__init__(message)


class MissingStructureMapError(CliffordError):
    """Thrown when an invariant needs a structure map that was not supplied"""

    def __init__(self, *, n: int):
        message = f"An invariant in dimension {n} requires the structure map J."
        super().__init__(message)


class SpinorInvariantError(Exception):
    """Base for errors raised while evaluating algebraic spinor invariants"""


class CurrentNotRealError(SpinorInvariantError):
    """Thrown when a Dirac current component has a significant imaginary part"""

    def __init__(self, *, component: int, imaginary_part: float):
        message = (
            f"Dirac current component {component} is not real"
            + f" (imaginary part {imaginary_part:.3e})."
        )
        super().__init__(message)


class NotLightlikeError(SpinorInvariantError):
    """Thrown when a lightlike spinor was expected but the current is not null"""

    def __init__(self, *, norm: float):
        message = f"Expected a lightlike Dirac current, got g(V, V) = {norm:.3e}."
        super().__init__(message)


class GeometryError(Exception):
    """Base for errors in charts, frames and curvature"""


class SingularMetricError(GeometryError):
    """Thrown when the metric cannot be inverted at a point"""

    def __init__(self, *, point: list[float], condition: float):
        message = (
            f"Metric is singular at {point} (condition number {condition:.3e})."
        )
        super().__init__(message)


class SignatureError(GeometryError):
    """Thrown when the metric does not have the declared signature at a point"""

    def __init__(self, *, point: list[float], expected: int, actual: int):
        message = (
            f"Metric at {point} has {actual} negative directions, expected {expected}."
        )
        super().__init__(message)


class StepUnderflowError(GeometryError):
    """Thrown when a finite difference step underflows"""

    def __init__(self, *, step: float):
        message = f"Finite difference step {step:.3e} is too small to be resolved."
        super().__init__(message)


class OutsideDomainError(GeometryError):
    """Thrown when a point lies outside of the chart domain"""

    def __init__(self, *, point: list[float], chart: str):
        message = f"Point {point} lies outside of the domain of chart '{chart}'."
        super().__init__(message)


class FrameError(GeometryError):
    """Thrown when no orthonormal frame can be built from the coordinate vectors"""

    def __init__(self, *, point: list[float], reason: str):
        message = f"Could not build an orthonormal frame at {point}: {reason}"
        super().__init__(message)


class SpinGeometryError(Exception):
    """Base for errors raised by the spinor calculus on charts"""


class GaugeMismatchError(SpinGeometryError):
    """Thrown when a spinor field is evaluated in a frame gauge it was not built for"""

    def __init__(self, *, expected: str, actual: str):
        message = (
            f"Spinor field is expressed in frame gauge '{expected}',"
            + f" but the frame uses gauge '{actual}'."
        )
        super().__init__(message)


class FrameNotOrthonormalError(SpinGeometryError):
    """Thrown when a frame fails the orthonormality test"""

    def __init__(self, *, point: list[float], residual: float):
        message = f"Frame at {point} is not orthonormal (residual {residual:.3e})."
        super().__init__(message)


class NotTwistorError(SpinGeometryError):
    """Thrown when a spinor field fails the twistor equation"""

    def __init__(self, *, residual: float, tolerance: float):
        message = (
            f"Spinor field is not a twistor spinor: residual {residual:.3e}"
            + f" exceeds {tolerance:.1e}."
        )
        super().__init__(message)


class NotKillingError(SpinGeometryError):
    """Thrown when a vector field fails the Killing equation"""

    def __init__(self, *, residual: float, tolerance: float):
        message = (
            f"Vector field is not a Killing field: residual {residual:.3e}"
            + f" exceeds {tolerance:.1e}."
        )
        super().__init__(message)


class NotLightlikeFieldError(SpinGeometryError):
    """Thrown when a vector field is expected to be lightlike but is not"""

    def __init__(self, *, norm: float):
        message = f"Vector field is not lightlike: max |g(V, V)| = {norm:.3e}."
        super().__init__(message)


class NotParallelError(SpinGeometryError):
    """Thrown when a vector field is expected to be parallel but is not"""

    def __init__(self, *, residual: float):
        message = f"Vector field is not parallel: max |nabla V| = {residual:.3e}."
        super().__init__(message)


class VanishingScalarCurvatureError(SpinGeometryError):
    """Thrown when a decomposition needs non-zero scalar curvature"""

    def __init__(self, *, scalar: float):
        message = f"Scalar curvature {scalar:.3e} vanishes on the sample region."
        super().__init__(message)


class NonConstantScalarCurvatureError(SpinGeometryError):
    """Thrown when a decomposition needs constant scalar curvature"""

    def __init__(self, *, spread: float):
        message = f"Scalar curvature varies by {spread:.3e} over the sample region."
        super().__init__(message)


class TransportStepError(SpinGeometryError):
    """Thrown when adaptive parallel transport cannot reach the requested accuracy"""

    def __init__(self, *, refinements: int, error: float):
        message = (
            f"Parallel transport did not converge after {refinements} refinements"
            + f" (error estimate {error:.3e})."
        )
        super().__init__(message)


class ModelGeometryError(Exception):
    """Base for errors raised while building model geometries"""


class UnsupportedBaseError(ModelGeometryError):
    """Thrown when a product or warped product is requested over an unknown base"""

    def __init__(self, *, base: str, supported: list[str]):
        message = f"Unsupported base '{base}', expected one of {supported}."
        super().__init__(message)


class MissingSasakiDataError(ModelGeometryError):
    """Thrown when a cone is requested over a chart without Sasaki data"""

    def __init__(self, *, base: str):
        message = f"Geometry '{base}' carries no Sasaki data to build the cone from."
        super().__init__(message)


class DegenerateGeometryError(ModelGeometryError):
    """Thrown when model parameters produce a degenerate metric"""

    def __init__(self, *, geometry: str, reason: str):
        message = f"Parameters for '{geometry}' are degenerate: {reason}"
        super().__init__(message)


class MissingSpinStructureError(ModelGeometryError):
    """Thrown when a spinor check runs on a geometry without frame or representation"""

    def __init__(self, *, geometry: str):
        message = f"Geometry '{geometry}' carries no frame and spinor representation."
        super().__init__(message)
