"""50/50 beamsplitter transform, coincidence probability, and delay scans.

Input paths are labeled 1 and 2, output paths 3 and 4.  The mode relations
are

    a3 = (a2 + i a1) / sqrt(2),    a4 = (a1 + i a2) / sqrt(2)

equivalently, for creation operators, a1+ -> (i a3+ + a4+)/sqrt(2) and
a2+ -> (a3+ + i a4+)/sqrt(2): straight-through transmission with an i on
reflection.  A relative delay between the arms is modeled as a group delay
on input path 1, applied before the transform as a phase e^{i w delay} on
whichever frequency factor rides in path 1 (w_H in the f_h1v2 term, w_V in
the f_v1h2 term).  Positive delay retards path 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    FrequencyGrid,
    JointAmplitude,
    TwoPhotonState,
    inner_product,
    norm_squared,
)

#: 1 / (2 sqrt(2)): product of the 1/sqrt(2) state normalization prefactor
#: and the two 1/sqrt(2) beamsplitter factors, one per photon.
_OUTPUT_PREFACTOR = 1.0 / (2.0 * math.sqrt(2.0))


def apply_path1_delay(state: TwoPhotonState, delay: float) -> TwoPhotonState:
    """Retard input path 1 by ``delay`` seconds.

    The path-1 photon is H in the first term (frequency w_H, the row
    index) and V in the second term (frequency w_V, the column index), so
    the phase e^{i w delay} multiplies rows of f_h1v2 and columns of
    f_v1h2.
    """
    if delay == 0.0:
        return state
    v1, v2 = _delayed_pair(state, delay)
    grid = state.grid
    return TwoPhotonState(JointAmplitude(grid, v1), JointAmplitude(grid, v2))


def _delayed_pair(state: TwoPhotonState, delay: float) -> tuple[np.ndarray, np.ndarray]:
    v1 = state.f_h1v2.values
    v2 = state.f_v1h2.values
    if delay == 0.0:
        return v1, v2
    phase = np.exp(1j * state.grid.points() * delay)
    return v1 * phase[:, None], v2 * phase[None, :]


@dataclass(frozen=True, eq=False)
class BsOutputState:
    """Two-photon amplitudes behind the beamsplitter.

    a_43 multiplies a+_{H4} a+_{V3} (H photon in path 4, V in path 3) and
    a_34 multiplies a+_{H3} a+_{V4}; these are the two coincidence
    channels.  b_33 and b_44 multiply a+_{H3} a+_{V3} and a+_{H4} a+_{V4},
    the bunched channels.  In terms of the input amplitudes F1 = f_h1v2
    and F2 = f_v1h2 (after any path-1 delay),

        a_43 = (F1 - F2) / (2 sqrt(2))      a_34 = -(F1 - F2) / (2 sqrt(2))
        b_33 = b_44 = i (F1 + F2) / (2 sqrt(2))

    The input state's 1/sqrt(2) normalization prefactor is absorbed into
    these amplitudes, so each channel probability is the plain quadrature
    norm of its amplitude and the four of them sum to one.
    """

    a_43: JointAmplitude
    a_34: JointAmplitude
    b_33: JointAmplitude
    b_44: JointAmplitude

    @property
    def grid(self) -> FrequencyGrid:
        return self.a_43.grid

    @property
    def probability_coincidence(self) -> float:
        return norm_squared(self.a_43) + norm_squared(self.a_34)

    @property
    def probability_both_in_3(self) -> float:
        return norm_squared(self.b_33)

    @property
    def probability_both_in_4(self) -> float:
        return norm_squared(self.b_44)

    @property
    def total_probability(self) -> float:
        return (
            self.probability_coincidence
            + self.probability_both_in_3
            + self.probability_both_in_4
        )

    def channel_probabilities(self) -> dict[str, float]:
        """Outcome probabilities keyed like the discrete-mode checker."""
        return {
            "coincidence": self.probability_coincidence,
            "both_in_3": self.probability_both_in_3,
            "both_in_4": self.probability_both_in_4,
        }


def bs_transform(state: TwoPhotonState, delay: float = 0.0) -> BsOutputState:
    """Full output state of the beamsplitter for a given path-1 delay."""
    v1, v2 = _delayed_pair(state, delay)
    grid = state.grid
    # Scale each term first so the channel amplitudes equal the sums of the
    # per-alternative amplitudes bit for bit.
    t1 = _OUTPUT_PREFACTOR * v1
    t2 = _OUTPUT_PREFACTOR * v2
    diff = t1 - t2
    bunch = 1j * (t1 + t2)
    return BsOutputState(
        a_43=JointAmplitude(grid, diff),
        a_34=JointAmplitude(grid, -diff),
        b_33=JointAmplitude(grid, bunch),
        b_44=JointAmplitude(grid, bunch),
    )


def _weights_2d(grid: FrequencyGrid) -> np.ndarray:
    w = grid.trapezoid_weights()
    return w[:, None] * w[None, :]


def coincidence_probability(
    state: TwoPhotonState, delay: float = 0.0, *, mode_overlap: float = 1.0
) -> float:
    """Probability of one photon in each output path.

    For perfect mode overlap this is the norm of the two coincidence
    channels,

        P_cc = (1/4) integral |F1(delay) - F2(delay)|^2
             = (n1 + n2)/4 - (1/2) Re <F1(delay), F2(delay)>

    with n_k the squared amplitude norms.  ``mode_overlap`` is a single
    scalar in [0, 1] multiplying only the interference cross term; it
    models imperfect spatial overlap at the beamsplitter, which damps the
    peak or dip without moving the background.
    """
    if not 0.0 <= mode_overlap <= 1.0:
        raise ValueError(f"mode_overlap must lie in [0, 1], got {mode_overlap}")
    v1, v2 = _delayed_pair(state, delay)
    w2d = _weights_2d(state.grid)
    background = 0.25 * float(
        np.sum(w2d * (np.abs(v1) ** 2 + np.abs(v2) ** 2))
    )
    cross = float(np.sum(w2d * (np.conj(v1) * v2)).real)
    p = background - 0.5 * mode_overlap * cross
    # Clamp double-precision residue just outside [0, 1].
    return min(max(p, 0.0), 1.0)


def coherence_time(state: TwoPhotonState) -> float:
    """RMS coherence time of the two-photon interference feature.

    The delay dependence of the coincidence rate enters only through the
    frequency difference v = w_V - w_H, so the feature width is the
    inverse RMS spread of v under the joint spectral intensity
    (|f_h1v2|^2 + |f_v1h2|^2)/2.
    """
    w2d = _weights_2d(state.grid)
    intensity = w2d * 0.5 * (
        np.abs(state.f_h1v2.values) ** 2 + np.abs(state.f_v1h2.values) ** 2
    )
    total = float(np.sum(intensity))
    if total <= 0.0:
        raise ValueError("state has zero norm, coherence time undefined")
    pts = state.grid.points()
    v = pts[None, :] - pts[:, None]
    mean = float(np.sum(intensity * v)) / total
    var = float(np.sum(intensity * (v - mean) ** 2)) / total
    if var <= 0.0:
        raise ValueError("frequency-difference spread is zero, coherence time undefined")
    return 1.0 / math.sqrt(var)


@dataclass(frozen=True, eq=False)
class DelayScanCurve:
    """Coincidence rate versus path-1 delay with extracted summary numbers.

    background is the mean rate over the outer 10% of the delay axis,
    extremum the sampled rate farthest from that background, and
    visibility = |extremum - background| / background.
    """

    delays: np.ndarray
    rates: np.ndarray
    background: float
    extremum: float
    extremum_delay: float
    visibility: float

    def __post_init__(self) -> None:
        self.delays.setflags(write=False)
        self.rates.setflags(write=False)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return [(float(d), float(r)) for d, r in zip(self.delays, self.rates)]


def delay_scan(
    state: TwoPhotonState,
    delays,
    *,
    mode_overlap: float = 1.0,
) -> DelayScanCurve:
    """Scan the path-1 delay and extract background, extremum, visibility.

    The delay list must reach at least 10 coherence times on each side of
    zero so that the outer 10% of samples measure the incoherent
    background; otherwise the scan is rejected.  Samples are evaluated in
    ascending delay order.
    """
    axis = np.asarray(delays, dtype=np.float64)
    if axis.ndim != 1 or axis.size < 2:
        raise ValueError("delays must be a 1D sequence with at least 2 entries")
    if not np.all(np.isfinite(axis)):
        raise ValueError("delays must be finite")
    tau_c = coherence_time(state)
    span_needed = 10.0 * tau_c
    if axis.min() > -span_needed or axis.max() < span_needed:
        raise ValueError(
            "delay span must reach +-10 coherence times "
            f"(+-{span_needed:.3e} s); got [{axis.min():.3e}, {axis.max():.3e}] s"
        )
    axis = np.sort(axis)
    rates = np.array(
        [coincidence_probability(state, float(d), mode_overlap=mode_overlap) for d in axis]
    )
    n_edge = max(1, int(round(0.05 * axis.size)))
    background = float(np.mean(np.concatenate([rates[:n_edge], rates[-n_edge:]])))
    if background <= 0.0:
        raise ValueError("scan background is zero, visibility undefined")
    idx = int(np.argmax(np.abs(rates - background)))
    extremum = float(rates[idx])
    return DelayScanCurve(
        delays=axis,
        rates=rates,
        background=background,
        extremum=extremum,
        extremum_delay=float(axis[idx]),
        visibility=abs(extremum - background) / background,
    )


@dataclass(frozen=True, eq=False)
class FeynmanDecomposition:
    """The four two-photon detection alternatives behind the beamsplitter.

    psi_1 and psi_2 are the both-transmitted and both-reflected amplitudes
    from the f_h1v2 emission term; psi_3 and psi_4 the same from f_v1h2.
    psi_1 and psi_4 feed the (H in 4, V in 3) coincidence channel and sum
    to its amplitude a_43; psi_2 and psi_3 feed (H in 3, V in 4) and sum
    to a_34.  overlap_14 and overlap_23 are the normalized overlap
    magnitudes |<psi_a, psi_b>| / (|psi_a| |psi_b|) of each interfering
    pair: 1 means the alternatives are fully indistinguishable and
    interfere completely, 0 means they merely add probabilities.
    """

    psi_1: JointAmplitude
    psi_2: JointAmplitude
    psi_3: JointAmplitude
    psi_4: JointAmplitude
    overlap_14: float
    overlap_23: float


def _normalized_overlap(a: JointAmplitude, b: JointAmplitude) -> float:
    na = norm_squared(a)
    nb = norm_squared(b)
    if na <= 0.0 or nb <= 0.0:
        return 0.0
    return abs(inner_product(a, b)) / math.sqrt(na * nb)


def feynman_decomposition(state: TwoPhotonState, delay: float = 0.0) -> FeynmanDecomposition:
    """Split the coincidence amplitudes into their emission alternatives.

    Transmission routes 1 -> 4 and 2 -> 3 (amplitude 1/sqrt(2) each);
    reflection routes 1 -> 3 and 2 -> 4 (amplitude i/sqrt(2), so the
    double reflection carries i^2 = -1):

        psi_1 = +c F1   (both transmitted,  H4 V3)
        psi_2 = -c F1   (both reflected,    H3 V4)
        psi_3 = +c F2   (both transmitted,  H3 V4)
        psi_4 = -c F2   (both reflected,    H4 V3)

    with c = 1/(2 sqrt(2)) and F1, F2 the delayed input amplitudes.
    """
    v1, v2 = _delayed_pair(state, delay)
    grid = state.grid
    c = _OUTPUT_PREFACTOR
    psi_1 = JointAmplitude(grid, c * v1)
    psi_2 = JointAmplitude(grid, -c * v1)
    psi_3 = JointAmplitude(grid, c * v2)
    psi_4 = JointAmplitude(grid, -c * v2)
    return FeynmanDecomposition(
        psi_1=psi_1,
        psi_2=psi_2,
        psi_3=psi_3,
        psi_4=psi_4,
        overlap_14=_normalized_overlap(psi_1, psi_4),
        overlap_23=_normalized_overlap(psi_2, psi_3),
    )
