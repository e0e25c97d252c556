"""Builders for the biphoton states the analysis modules consume.

The physical model is a pulsed type-II downconversion source: a Gaussian
pump envelope constrains the sum frequency, each photon carries a Gaussian
marginal envelope, and birefringent walk-off attaches a group delay to each
polarization.  The builders below also produce idealized reference states
(exact exchange-antisymmetric states, path-entangled Bell states, two-color
gedanken states) used to separate the two spectral symmetries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_GRID_POINTS,
    FrequencyGrid,
    JointAmplitude,
    TwoPhotonState,
    normalize,
    wavelength_to_angular_frequency,
)

#: Maximum allowed envelope magnitude at the grid boundary, relative to the
#: envelope peak.  Larger values mean the grid truncates the state.
EDGE_FRACTION_TOL = 1e-3

_TWO_COLOR_CASES = ("i", "ii")


@dataclass(frozen=True)
class SpdcParams:
    """Pulsed type-II source parameters, all in SI units.

    sigma_h and sigma_v are RMS widths of the single-photon intensity
    spectra (the amplitude envelope is exp(-x^2 / (4 sigma^2))).  t_h and
    t_v are the most probable emission times of the H and V photon; their
    difference is the birefringent walk-off.  phi is the relative phase
    between the two emission alternatives (pi gives the minus
    configuration).  extra_group_delay_arm2 retards whichever photon
    travels path 2, modeling a path-length mismatch between the arms.

    The 2:1 default bandwidth ratio is a placeholder for an uncompensated
    crystal, not a fitted value; override it through the config.
    """

    pump_center_wavelength: float = 390e-9
    pump_duration_fwhm: float = 120e-15
    sigma_h: float = 6.0e13
    sigma_v: float = 3.0e13
    t_h: float = 0.0
    t_v: float = 400e-15
    phi: float = math.pi
    extra_group_delay_arm2: float = 0.0

    def __post_init__(self) -> None:
        if self.pump_center_wavelength <= 0.0:
            raise ValueError("pump_center_wavelength must be positive")
        if self.pump_duration_fwhm <= 0.0:
            raise ValueError("pump_duration_fwhm must be positive")
        if self.sigma_h <= 0.0 or self.sigma_v <= 0.0:
            raise ValueError("photon bandwidths must be positive")

    @property
    def photon_center_frequency(self) -> float:
        """Degenerate photons sit at half the pump frequency."""
        return 0.5 * wavelength_to_angular_frequency(self.pump_center_wavelength)

    @property
    def pump_sigma(self) -> float:
        """RMS width of the pump intensity spectrum.

        For a transform-limited Gaussian pulse of intensity FWHM T the
        spectral intensity RMS width is sqrt(2 ln 2) / T.
        """
        return math.sqrt(2.0 * math.log(2.0)) / self.pump_duration_fwhm


@dataclass(frozen=True)
class FilterParams:
    """Spectral filter placed in front of each detector.

    ``fwhm`` is the full width at half maximum of the *intensity*
    transmission, quoted in wavelength; it is converted to angular
    frequency linearly about the center wavelength.
    """

    center_wavelength: float = 780e-9
    fwhm: float = 20e-9
    shape: str = "gaussian"

    def __post_init__(self) -> None:
        if self.center_wavelength <= 0.0 or self.fwhm <= 0.0:
            raise ValueError("filter center and fwhm must be positive")
        if self.shape not in ("gaussian", "tophat"):
            raise ValueError(f"unknown filter shape {self.shape!r}")

    @property
    def center_frequency(self) -> float:
        return wavelength_to_angular_frequency(self.center_wavelength)

    @property
    def fwhm_frequency(self) -> float:
        lam = self.center_wavelength
        return 2.0 * math.pi * 299_792_458.0 * self.fwhm / (lam * lam)


def default_grid(params: SpdcParams, n_points: int = DEFAULT_GRID_POINTS) -> FrequencyGrid:
    """Grid centered on the degenerate photon frequency.

    The half width is six times the largest photon RMS bandwidth, wide
    enough that every Gaussian envelope decays below EDGE_FRACTION_TOL at
    the boundary.
    """
    half_width = 6.0 * max(params.sigma_h, params.sigma_v)
    return FrequencyGrid.centered(params.photon_center_frequency, half_width, n_points)


def gaussian_line(
    grid: FrequencyGrid, center: float, sigma: float, normalized: bool = True
) -> np.ndarray:
    """Single-photon Gaussian amplitude envelope sampled on the grid.

    ``sigma`` is the RMS width of the intensity spectrum, so the amplitude
    is exp(-(w - center)^2 / (4 sigma^2)).  With ``normalized`` the
    trapezoid quadrature of the intensity is scaled to one.
    """
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = grid.points() - center
    g = np.exp(-(x * x) / (4.0 * sigma * sigma))
    if normalized:
        total = float(np.sum(grid.trapezoid_weights() * g * g))
        if total <= 0.0:
            raise ValueError("envelope vanishes on the grid; center is off-grid")
        g = g / math.sqrt(total)
    return g


def _check_grid_wide_enough(values: np.ndarray, what: str) -> None:
    # Compare boundary magnitude against the interior peak; phases cancel.
    mags = np.abs(values)
    peak = float(mags.max())
    if peak == 0.0:
        raise ValueError(f"{what} vanishes everywhere on the grid")
    edge = max(
        float(mags[0, :].max()),
        float(mags[-1, :].max()),
        float(mags[:, 0].max()),
        float(mags[:, -1].max()),
    )
    if edge > EDGE_FRACTION_TOL * peak:
        raise ValueError(
            f"grid too narrow for {what}: boundary amplitude is {edge / peak:.3e} "
            f"of the peak (limit {EDGE_FRACTION_TOL:.1e}); widen the grid"
        )


def type2_joint_envelope(params: SpdcParams, grid: FrequencyGrid) -> JointAmplitude:
    """Joint amplitude of one emission alternative of the pulsed source.

    F(w_H, w_V) = G(w_H; sigma_h) G(w_V; sigma_v) P(w_H + w_V)
                  * exp(i (w_H t_h + w_V t_v))

    with G Gaussian photon envelopes around the degenerate frequency and P
    the Gaussian pump envelope around the pump frequency.  Not normalized.
    """
    w = grid.points()
    w0 = params.photon_center_frequency
    g_h = np.exp(-((w - w0) ** 2) / (4.0 * params.sigma_h**2))
    g_v = np.exp(-((w - w0) ** 2) / (4.0 * params.sigma_v**2))
    sum_freq = w[:, None] + w[None, :]
    pump = np.exp(-((sum_freq - 2.0 * w0) ** 2) / (4.0 * params.pump_sigma**2))
    phases = np.exp(1j * (w * params.t_h)[:, None] + 1j * (w * params.t_v)[None, :])
    return JointAmplitude(grid, g_h[:, None] * g_v[None, :] * pump * phases)


def build_type2_ultrafast(params: SpdcParams, grid: FrequencyGrid) -> TwoPhotonState:
    """Biphoton state of the pulsed type-II source.

    Both emission alternatives share the envelope of
    ``type2_joint_envelope`` because the spectral and temporal properties
    follow the polarization, not the path:

        f_h1v2 = F,    f_v1h2 = exp(-i phi) * F.

    A nonzero arm-2 group delay then multiplies whichever frequency factor
    rides in path 2 -- omega_V in the first term, omega_H in the second --
    by exp(i omega delay), breaking the exchange antisymmetry that an
    identical-arms minus configuration (phi = pi) satisfies exactly.
    """
    envelope = type2_joint_envelope(params, grid)
    _check_grid_wide_enough(envelope.values, "the joint spectral envelope")
    f1 = envelope.values
    f2 = np.exp(-1j * params.phi) * f1
    delay = params.extra_group_delay_arm2
    if delay != 0.0:
        arm2_phase = np.exp(1j * grid.points() * delay)
        f1 = f1 * arm2_phase[None, :]
        f2 = f2 * arm2_phase[:, None]
    return normalize(
        TwoPhotonState(JointAmplitude(grid, f1), JointAmplitude(grid, f2))
    )


def build_antisymmetric(envelope: JointAmplitude) -> TwoPhotonState:
    """Exchange-antisymmetric state for an arbitrary joint envelope.

    Sets f_v1h2 = -f_h1v2 by exact negation, so the coincidence peak
    condition holds identically on the grid regardless of the envelope.
    """
    # State norm is 0.5 (|f1|^2 + |f2|^2) = |envelope|^2 here.
    w = envelope.grid.trapezoid_weights()
    total = float(np.sum(np.outer(w, w) * np.abs(envelope.values) ** 2))
    if total <= 0.0:
        raise ValueError("envelope must be nonzero")
    f1 = envelope.values / math.sqrt(total)
    return TwoPhotonState(
        JointAmplitude(envelope.grid, f1), JointAmplitude(envelope.grid, -f1)
    )


def build_bell_psi_minus(
    envelope1: np.ndarray, envelope2: np.ndarray, grid: FrequencyGrid
) -> TwoPhotonState:
    """Singlet-type state whose path labels carry the spectral envelopes.

    The path-1 photon always carries ``envelope1`` and the path-2 photon
    ``envelope2``, whatever the polarization:

        f_h1v2(w_H, w_V) = g1(w_H) g2(w_V)
        f_v1h2(w_H, w_V) = -g1(w_V) g2(w_H)

    which is exactly f_v1h2 = -swap(f_h1v2), the condition for perfect
    sin^2 polarization correlations.  Envelopes must be unit-normalized
    1D amplitudes on the grid.
    """
    g1 = np.asarray(envelope1, dtype=np.complex128)
    g2 = np.asarray(envelope2, dtype=np.complex128)
    if g1.shape != (grid.n_points,) or g2.shape != (grid.n_points,):
        raise ValueError("envelopes must be 1D arrays sampled on the grid")
    w = grid.trapezoid_weights()
    for name, g in (("envelope1", g1), ("envelope2", g2)):
        total = float(np.sum(w * np.abs(g) ** 2))
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"{name} is not normalized: integral |g|^2 = {total!r}")
    f1 = np.outer(g1, g2)
    f2 = -np.outer(g2, g1)
    state = TwoPhotonState(JointAmplitude(grid, f1), JointAmplitude(grid, f2))
    _check_grid_wide_enough(f1, "the Bell-state envelope")
    return normalize(state)


def build_two_color(
    case: str,
    red_center: float,
    blue_center: float,
    bandwidth: float,
    grid: FrequencyGrid,
) -> TwoPhotonState:
    """Two-color gedanken states separating the two spectral symmetries.

    Case "i" ties color to polarization (the H photon is always red), so
    exchange antisymmetry holds exactly but the polarization correlations
    collapse.  Case "ii" ties color to path (the path-1 photon is always
    red), the Bell form, so sin^2 correlations survive but the coincidence
    peak is lost.  The colors must be separated by more than ten
    bandwidths to count as fully distinguishable.
    """
    if case not in _TWO_COLOR_CASES:
        raise ValueError(f"case must be one of {_TWO_COLOR_CASES}, got {case!r}")
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    if abs(red_center - blue_center) <= 10.0 * bandwidth:
        raise ValueError(
            "color separation must exceed 10x the bandwidth: "
            f"|{red_center} - {blue_center}| <= 10 * {bandwidth}"
        )
    red = gaussian_line(grid, red_center, bandwidth)
    blue = gaussian_line(grid, blue_center, bandwidth)
    f1 = np.outer(red, blue)
    _check_grid_wide_enough(f1, "the two-color envelope")
    if case == "i":
        f2 = -f1
    else:
        f2 = -np.outer(blue, red)
    return normalize(
        TwoPhotonState(JointAmplitude(grid, f1), JointAmplitude(grid, f2))
    )


def apply_filters(state: TwoPhotonState, filt: FilterParams) -> TwoPhotonState:
    """Apply an identical spectral filter to both photons and renormalize.

    The amplitude transmission multiplies each frequency argument of both
    amplitudes, so both exchange and path-label symmetries are preserved.
    A filter whose passband misses the grid would annihilate the state and
    is rejected.
    """
    x = state.grid.points() - filt.center_frequency
    width = filt.fwhm_frequency
    if filt.shape == "gaussian":
        # Amplitude transmission = sqrt of a Gaussian intensity profile.
        t = np.exp(-2.0 * math.log(2.0) * (x / width) ** 2)
    else:
        t = (np.abs(x) <= 0.5 * width).astype(np.float64)
    t2d = t[:, None] * t[None, :]
    filtered = TwoPhotonState(
        JointAmplitude(state.grid, state.f_h1v2.values * t2d),
        JointAmplitude(state.grid, state.f_v1h2.values * t2d),
    )
    survived = filtered.norm_squared()
    if survived <= 1e-12 * state.norm_squared():
        raise ValueError(
            "filter support lies outside the grid: transmitted norm^2 "
            f"fraction is {survived!r}"
        )
    return normalize(filtered)
