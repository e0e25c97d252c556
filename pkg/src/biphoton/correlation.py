"""Polarization correlations and the CHSH statistic.

Each arm carries a linear analyzer; the projection of path 1 onto angle
theta1 and path 2 onto theta2 turns the two-term biphoton state into a
single detection amplitude per frequency pair.  The integrated rate
varies as sin^2(theta1 - theta2) exactly when the spectra are correlated
with path (f_v1h2 = -swap(f_h1v2)); the machinery below measures how far
a given state is from that behavior, from fitted fringe visibilities up
to the CHSH S value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import JointAmplitude, TwoPhotonState, inner_product, norm_squared

#: Analyzer angles (a, a', b, b') maximizing S for a singlet-type state.
DEFAULT_CHSH_ANGLES: tuple[float, float, float, float] = (
    0.0,
    math.pi / 4.0,
    math.pi / 8.0,
    3.0 * math.pi / 8.0,
)

#: Fitted fringe amplitudes below this fraction of the mean rate are
#: reported as a flat curve.
DEGENERATE_FRINGE_FRACTION = 1e-12


def rc_integrated(state: TwoPhotonState, theta1: float, theta2: float) -> float:
    """Frequency-integrated coincidence rate behind two linear analyzers.

        R(t1, t2) = (1/N) * integral |cos t1 sin t2 * f_h1v2(w, w')
                                      + sin t1 cos t2 * f_v1h2(w', w)|^2

    The argument swap on f_v1h2 rewrites it in path order (first argument
    = path-1 photon frequency) so both terms project the same way: cos for
    an H photon, sin for a V photon, arm 1 angle on the path-1 photon.
    N = n1 + n2 normalizes the complete analyzer basis: the four outcomes
    (t1, t2), (t1, t2+pi/2), (t1+pi/2, t2), (t1+pi/2, t2+pi/2) sum to 1.
    """
    v1 = state.f_h1v2.values
    v2_path_order = state.f_v1h2.values.T
    amp = (
        math.cos(theta1) * math.sin(theta2) * v1
        + math.sin(theta1) * math.cos(theta2) * v2_path_order
    )
    w = state.grid.trapezoid_weights()
    w2d = w[:, None] * w[None, :]
    total = norm_squared(state.f_h1v2) + norm_squared(state.f_v1h2)
    if total <= 0.0:
        raise ValueError("state has zero norm")
    return float(np.sum(w2d * np.abs(amp) ** 2)) / total


@dataclass(frozen=True, eq=False)
class CorrelationCurve:
    """Analyzer-2 scan at fixed analyzer-1 angle with a fringe fit.

    The fit model is rate = a + b sin^2(theta2 - c); visibility is
    b / (2a + b), the standard (max - min)/(max + min) of the fitted
    fringe.  fit_residual is the RMS misfit.  degenerate marks a flat
    curve, where the phase c is meaningless and visibility is set to 0.
    """

    theta1: float
    theta2s: np.ndarray
    rates: np.ndarray
    offset: float
    amplitude: float
    phase: float
    visibility: float
    fit_residual: float
    degenerate: bool

    def __post_init__(self) -> None:
        self.theta2s.setflags(write=False)
        self.rates.setflags(write=False)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return [(float(t), float(r)) for t, r in zip(self.theta2s, self.rates)]


def correlation_scan(state: TwoPhotonState, theta1: float, theta2s) -> CorrelationCurve:
    """Scan analyzer 2 and fit the sinusoidal fringe.

    The rate is an exact trigonometric polynomial
    c0 + c1 cos 2t + c2 sin 2t, so the sin^2 model parameters come from a
    linear least-squares solve: with rho = hypot(c1, c2),

        b = 2 rho,  a = c0 - rho,  c = atan2(-c2, -c1) / 2.

    The scan must span at least pi so all three coefficients are
    determined.
    """
    angles = np.asarray(theta2s, dtype=np.float64)
    if angles.ndim != 1 or angles.size < 3:
        raise ValueError("theta2s must be a 1D sequence with at least 3 entries")
    if not np.all(np.isfinite(angles)):
        raise ValueError("theta2s must be finite")
    if angles.max() - angles.min() < math.pi - 1e-12:
        raise ValueError(
            "analyzer-2 scan must span at least pi radians, got "
            f"{angles.max() - angles.min():.6f}"
        )
    angles = np.sort(angles)
    rates = np.array([rc_integrated(state, theta1, float(t)) for t in angles])
    design = np.column_stack(
        [np.ones_like(angles), np.cos(2.0 * angles), np.sin(2.0 * angles)]
    )
    coef, *_ = np.linalg.lstsq(design, rates, rcond=None)
    c0, c1, c2 = (float(c) for c in coef)
    residual = float(np.sqrt(np.mean((rates - design @ coef) ** 2)))
    rho = math.hypot(c1, c2)
    if c0 <= 0.0 or rho <= DEGENERATE_FRINGE_FRACTION * c0:
        return CorrelationCurve(
            theta1=theta1,
            theta2s=angles,
            rates=rates,
            offset=c0,
            amplitude=0.0,
            phase=0.0,
            visibility=0.0,
            fit_residual=residual,
            degenerate=True,
        )
    return CorrelationCurve(
        theta1=theta1,
        theta2s=angles,
        rates=rates,
        offset=c0 - rho,
        amplitude=2.0 * rho,
        phase=0.5 * math.atan2(-c2, -c1),
        visibility=rho / c0,
        fit_residual=residual,
        degenerate=False,
    )


def correlation_E(state: TwoPhotonState, alpha: float, beta: float) -> float:
    """Correlation coefficient of the +-1 analyzer outcomes.

    Each analyzer has a transmitted (+) and an orthogonal (-) port, the
    latter obtained by rotating the angle by pi/2.  E is the standard
    four-rate combination

        E = (R++ - R+- - R-+ + R--) / (R++ + R+- + R-+ + R--).
    """
    half_pi = 0.5 * math.pi
    r_pp = rc_integrated(state, alpha, beta)
    r_pm = rc_integrated(state, alpha, beta + half_pi)
    r_mp = rc_integrated(state, alpha + half_pi, beta)
    r_mm = rc_integrated(state, alpha + half_pi, beta + half_pi)
    total = r_pp + r_pm + r_mp + r_mm
    if total <= 0.0:
        raise ValueError("all four analyzer rates vanish")
    return (r_pp - r_pm - r_mp + r_mm) / total


def chsh(
    state: TwoPhotonState,
    angles: tuple[float, float, float, float] = DEFAULT_CHSH_ANGLES,
) -> float:
    """CHSH statistic S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.

    S <= 2 for any local-realistic model; a singlet-type state reaches
    2 sqrt(2) at the default angles (0, pi/4, pi/8, 3pi/8).
    """
    a, a_prime, b, b_prime = (float(x) for x in angles)
    return abs(
        correlation_E(state, a, b)
        - correlation_E(state, a, b_prime)
        + correlation_E(state, a_prime, b)
        + correlation_E(state, a_prime, b_prime)
    )


def fringe_visibility_45(state: TwoPhotonState) -> float:
    """Ceiling of the fringe visibility with analyzer 1 at 45 degrees.

    Expanding the analyzer rate shows the fringe modulation is carried
    entirely by the overlap of f_h1v2 with the path-ordered f_v1h2:

        V45 = 2 |<f_h1v2, swap(f_v1h2)>| / (n1 + n2)

    which is 1 for a singlet-type state and 0 when the two emission terms
    are spectrally distinguishable (for example by a large polarization
    walk-off), whatever the coincidence peak looks like.
    """
    total = norm_squared(state.f_h1v2) + norm_squared(state.f_v1h2)
    if total <= 0.0:
        raise ValueError("state has zero norm")
    overlap = inner_product(
        state.f_h1v2,
        JointAmplitude(state.grid, state.f_v1h2.values.T),
    )
    return 2.0 * abs(overlap) / total
