"""Domain types for frequency grids, joint spectral amplitudes, and the
two-term biphoton state, plus the quadrature helpers shared by the
analysis modules.

Conventions
-----------
Frequencies are angular frequencies in rad/s.  A ``JointAmplitude`` samples
a complex function F(omega, omega') on a uniform grid; ``values[i, j]`` is
F(omega_i, omega_j).  The biphoton state keeps two such amplitudes:

* ``f_h1v2`` -- coefficient of "H photon in path 1 at omega_H, V photon in
  path 2 at omega_V",
* ``f_v1h2`` -- coefficient of "V photon in path 1 at omega_V, H photon in
  path 2 at omega_H".

In *both* amplitudes the first argument is omega_H, the frequency of the
horizontally polarized photon in whichever path it travels; the second is
omega_V.  Under this storage convention the two key spectral symmetries
read

* exchange antisymmetry (coincidence peak):  f_v1h2 == -f_h1v2,
* path-label antisymmetry (Bell correlations):  f_v1h2 == -swap(f_h1v2),

where ``swap`` transposes the two frequency arguments.

All integrals are 2D trapezoidal quadratures on the shared grid.  The state
normalization convention is (1/2) * (||f_h1v2||^2 + ||f_v1h2||^2) == 1, the
1/2 carrying the global prefactor of the two-term superposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact SI value

#: Tolerance on the state normalization invariant.
NORMALIZATION_TOL = 1e-9

#: Default tolerance for physical-equality comparisons.
PHYSICAL_TOL = 1e-6

#: Default number of grid points.
DEFAULT_GRID_POINTS = 256


def wavelength_to_angular_frequency(wavelength: float) -> float:
    """Convert a vacuum wavelength in meters to angular frequency in rad/s."""
    if not math.isfinite(wavelength) or wavelength <= 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    return 2.0 * math.pi * SPEED_OF_LIGHT / wavelength


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform discretization of an angular-frequency interval.

    Two grids compare equal iff all three fields match exactly; every
    binary operation on sampled amplitudes requires equal grids.
    """

    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega_min) and math.isfinite(self.omega_max)):
            raise ValueError("grid bounds must be finite")
        if self.omega_min >= self.omega_max:
            raise ValueError(
                f"omega_min must be < omega_max, got [{self.omega_min}, {self.omega_max}]"
            )
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points}")

    @classmethod
    def centered(cls, center: float, half_width: float, n_points: int) -> "FrequencyGrid":
        if half_width <= 0.0:
            raise ValueError(f"half_width must be positive, got {half_width}")
        return cls(center - half_width, center + half_width, n_points)

    @property
    def step(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    def trapezoid_weights(self) -> np.ndarray:
        """1D trapezoid weights: full step inside, half step at both ends."""
        w = np.full(self.n_points, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w


def _weights_2d(grid: FrequencyGrid) -> np.ndarray:
    w = grid.trapezoid_weights()
    return np.outer(w, w)


@dataclass(frozen=True, eq=False)
class JointAmplitude:
    """Complex amplitude F(omega, omega') sampled on a square grid.

    Values are immutable after construction.  The squared norm (2D
    trapezoid of |F|^2) must be finite.
    """

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        n = self.grid.n_points
        if values.shape != (n, n):
            raise ValueError(
                f"values shape {values.shape} does not match grid with {n} points"
            )
        if (
            values is self.values
            or not values.flags.owndata
            or not values.flags.c_contiguous
        ):
            values = np.array(values, order="C")
        if not np.all(np.isfinite(values.view(np.float64))):
            raise ValueError("amplitude values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def swap(self) -> "JointAmplitude":
        """Exchange the two frequency arguments: swap(F)(w, w') = F(w', w)."""
        return JointAmplitude(self.grid, self.values.T.copy())


def inner_product(a: JointAmplitude, b: JointAmplitude) -> complex:
    """Trapezoidal quadrature of the L2 inner product <a, b>.

    <a, b> = integral of conj(a(w, w')) * b(w, w') dw dw', evaluated with
    product trapezoid weights on the shared grid.  Amplitudes on different
    grids are rejected.
    """
    if a.grid != b.grid:
        raise ValueError("amplitudes live on different grids")
    return complex(np.sum(_weights_2d(a.grid) * np.conj(a.values) * b.values))


def norm_squared(a: JointAmplitude) -> float:
    """Trapezoidal quadrature of ||a||^2 = integral of |a|^2."""
    return float(np.sum(_weights_2d(a.grid) * np.abs(a.values) ** 2))


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    """Two-term biphoton superposition over a shared frequency grid.

    The physical state is

        (1/sqrt(2)) * integral dw_H dw_V [
            f_h1v2(w_H, w_V) |H_1(w_H)> |V_2(w_V)>
          + f_v1h2(w_H, w_V) |V_1(w_V)> |H_2(w_H)> ]

    so in ``f_v1h2`` the first argument w_H is carried by the path-2
    photon.  Normalized states satisfy
    (1/2) * (||f_h1v2||^2 + ||f_v1h2||^2) == 1 within NORMALIZATION_TOL.
    """

    #: Fixes how f_v1h2's arguments map onto the two photons.
    argument_convention: ClassVar[str] = (
        "both amplitudes take (omega_H, omega_V); in f_v1h2 the H photon "
        "travels path 2, so the first argument belongs to the path-2 photon"
    )

    f_h1v2: JointAmplitude
    f_v1h2: JointAmplitude

    def __post_init__(self) -> None:
        if self.f_h1v2.grid != self.f_v1h2.grid:
            raise ValueError("state amplitudes live on different grids")

    @property
    def grid(self) -> FrequencyGrid:
        return self.f_h1v2.grid

    def norm_squared(self) -> float:
        """(1/2) * (||f_h1v2||^2 + ||f_v1h2||^2); 1 for normalized states."""
        return 0.5 * (norm_squared(self.f_h1v2) + norm_squared(self.f_v1h2))


def normalize(state: TwoPhotonState) -> TwoPhotonState:
    """Rescale both amplitudes so the combined norm is exactly one.

    The zero state cannot be normalized and is rejected.
    """
    total = state.norm_squared()
    if not math.isfinite(total) or total <= 0.0:
        raise ValueError(f"cannot normalize state with combined norm^2 = {total}")
    scale = 1.0 / math.sqrt(total)
    return TwoPhotonState(
        JointAmplitude(state.grid, state.f_h1v2.values * scale),
        JointAmplitude(state.grid, state.f_v1h2.values * scale),
    )


def is_normalized(state: TwoPhotonState, tol: float = NORMALIZATION_TOL) -> bool:
    return abs(state.norm_squared() - 1.0) <= tol


def require_normalized(state: TwoPhotonState, tol: float = NORMALIZATION_TOL) -> None:
    total = state.norm_squared()
    if abs(total - 1.0) > tol:
        raise ValueError(
            f"state is not normalized: (1/2)(||f1||^2 + ||f2||^2) = {total!r}"
        )


@dataclass(frozen=True)
class PolarizerSetting:
    """Linear polarizer angle for one arm, reduced to [0, pi).

    Predictions are pi-periodic in the angle, so the reduction loses
    nothing.  ``arm`` is 1 or 2.
    """

    theta: float
    arm: int

    def __post_init__(self) -> None:
        if self.arm not in (1, 2):
            raise ValueError(f"arm must be 1 or 2, got {self.arm}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "theta", self.theta % math.pi)
