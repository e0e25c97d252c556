"""Brute-force discrete-mode cross-check of the beamsplitter analysis.

Frequency is coarsened into K bins, giving a finite set of single-photon
modes (path, polarization, bin).  The two-photon state becomes a vector
over unordered mode pairs, the beamsplitter acts as an exact one-photon
unitary on the path label, and outcome probabilities are read off by
direct summation.  Everything here is written against that finite Fock
space from scratch: bin aggregation and probability bookkeeping share no
code with the quadrature modules, so agreement between the two routes is
a real consistency check rather than the same integral computed twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import JointAmplitude, TwoPhotonState


class Mode(NamedTuple):
    """One bosonic mode: which path, which polarization, which bin."""

    path: int
    pol: str
    bin_index: int


def _pair_key(a: Mode, b: Mode) -> tuple[Mode, Mode]:
    # Unordered pair: store under a canonical ordering.
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True, eq=False)
class DiscreteModeBasis:
    """Two-photon amplitude vector over unordered discrete mode pairs.

    amplitudes maps a canonical (mode, mode) pair to its physical
    amplitude: the probability of finding the pair is |amplitude|^2, for
    identical-mode pairs (a doubly occupied mode) included.  The vector is
    normalized after construction; captured_norm records how much of the
    original continuum norm the K bins captured before renormalization.
    """

    k_bins: int
    paths: tuple[int, int]
    amplitudes: dict[tuple[Mode, Mode], complex]
    captured_norm: float

    def total_probability(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.amplitudes.values()))


def discretize(state: TwoPhotonState, k_bins: int) -> DiscreteModeBasis:
    """Project the continuum state onto K flat frequency-bin modes.

    Bin k covers a contiguous block of grid points; its mode function is
    constant over the block, so the projection coefficient of F onto the
    (k, m) bin pair is

        c[k, m] = sum_{i in k, j in m} w_i w_j F[i, j] / sqrt(W_k W_m)

    with w the quadrature weights and W_k their per-bin totals.  The
    captured norm sum |c|^2 can only fall short of the continuum norm
    (within-bin structure is lost, a deficit of order 1/K^2 for smooth
    states); it reaches it exactly when K equals the grid size.
    """
    if not isinstance(k_bins, int) or isinstance(k_bins, bool):
        raise ValueError(f"k_bins must be an integer, got {k_bins!r}")
    if k_bins < 2:
        raise ValueError(f"k_bins must be at least 2, got {k_bins}")
    n = state.grid.n_points
    if k_bins > n:
        raise ValueError(f"k_bins = {k_bins} exceeds the {n}-point grid")
    # Trapezoid weights written out on purpose; see the module docstring.
    step = (state.grid.omega_max - state.grid.omega_min) / (n - 1)
    w = np.full(n, step)
    w[0] = 0.5 * step
    w[-1] = 0.5 * step
    blocks = np.array_split(np.arange(n), k_bins)
    aggregate = np.zeros((k_bins, n))
    for k, block in enumerate(blocks):
        w_block = w[block]
        aggregate[k, block] = w_block / math.sqrt(float(np.sum(w_block)))
    c1 = aggregate @ state.f_h1v2.values @ aggregate.T
    c2 = aggregate @ state.f_v1h2.values @ aggregate.T
    # Physical pair amplitudes carry the state's overall 1/sqrt(2).
    root_half = 1.0 / math.sqrt(2.0)
    amplitudes: dict[tuple[Mode, Mode], complex] = {}
    for k in range(k_bins):
        for m in range(k_bins):
            a1 = root_half * c1[k, m]
            if a1 != 0.0:
                key = _pair_key(Mode(1, "H", k), Mode(2, "V", m))
                amplitudes[key] = amplitudes.get(key, 0.0) + a1
            a2 = root_half * c2[k, m]
            if a2 != 0.0:
                # In f_v1h2 the first index (bin k) is the path-2 H photon.
                key = _pair_key(Mode(1, "V", m), Mode(2, "H", k))
                amplitudes[key] = amplitudes.get(key, 0.0) + a2
    captured = float(sum(abs(c) ** 2 for c in amplitudes.values()))
    if captured <= 0.0:
        raise ValueError("state projects to zero on the requested bins")
    scale = 1.0 / math.sqrt(captured)
    amplitudes = {key: scale * c for key, c in amplitudes.items()}
    return DiscreteModeBasis(
        k_bins=k_bins, paths=(1, 2), amplitudes=amplitudes, captured_norm=captured
    )


def reconstruct(basis: DiscreteModeBasis, grid) -> TwoPhotonState:
    """Embed a discretized input state back onto a frequency grid.

    Each bin amplitude spreads uniformly over its block of grid points
    (the same flat mode functions ``discretize`` projects onto), so
    discretize(reconstruct(b), b.k_bins) returns b with captured norm 1.
    The result is the piecewise-constant continuum state the discrete
    vector actually represents, which makes analytic and discrete-mode
    outcome probabilities directly comparable.
    """
    if basis.paths != (1, 2):
        raise ValueError(f"only input bases on paths (1, 2) embed, got {basis.paths}")
    n = grid.n_points
    if basis.k_bins > n:
        raise ValueError(f"k_bins = {basis.k_bins} exceeds the {n}-point grid")
    step = (grid.omega_max - grid.omega_min) / (n - 1)
    w = np.full(n, step)
    w[0] = 0.5 * step
    w[-1] = 0.5 * step
    blocks = np.array_split(np.arange(n), basis.k_bins)
    # Flat bin mode sampled on the grid: 1/sqrt(W_k) over block k.
    mode_fn = np.zeros((basis.k_bins, n))
    for k, block in enumerate(blocks):
        mode_fn[k, block] = 1.0 / math.sqrt(float(np.sum(w[block])))
    c1 = np.zeros((basis.k_bins, basis.k_bins), dtype=np.complex128)
    c2 = np.zeros((basis.k_bins, basis.k_bins), dtype=np.complex128)
    root_two = math.sqrt(2.0)
    for (mode_a, mode_b), amp in basis.amplitudes.items():
        first, second = (mode_a, mode_b) if mode_a.path == 1 else (mode_b, mode_a)
        if first.pol == "H":
            # Row index is the w_H bin: the path-1 H photon's bin here.
            c1[first.bin_index, second.bin_index] += root_two * amp
        else:
            # Here w_H rides with the path-2 H photon.
            c2[second.bin_index, first.bin_index] += root_two * amp
    f1 = mode_fn.T @ c1 @ mode_fn
    f2 = mode_fn.T @ c2 @ mode_fn
    return TwoPhotonState(JointAmplitude(grid, f1), JointAmplitude(grid, f2))


def _mode_list(paths: tuple[int, int], k_bins: int) -> list[Mode]:
    return [
        Mode(path, pol, k)
        for path in paths
        for pol in ("H", "V")
        for k in range(k_bins)
    ]


def apply_bs_exact(basis: DiscreteModeBasis) -> DiscreteModeBasis:
    """Send the discrete state through the beamsplitter exactly.

    The pair amplitudes are packed into a symmetric matrix T over input
    modes (T[u, v] = amplitude/2 off the diagonal, amplitude/sqrt(2) on
    it, so that |psi> = sum T[u, v] a+_u a+_v |0>), the one-photon unitary

        a+_1 -> (i a+_3 + a+_4)/sqrt(2),   a+_2 -> (a+_3 + i a+_4)/sqrt(2)

    acts as T -> U T U^T, and the physical amplitudes are unpacked with
    the inverse bosonic factors (2 T off-diagonal, sqrt(2) T on it).
    """
    if basis.paths != (1, 2):
        raise ValueError(f"input basis must live on paths (1, 2), got {basis.paths}")
    k_bins = basis.k_bins
    modes_in = _mode_list((1, 2), k_bins)
    modes_out = _mode_list((3, 4), k_bins)
    index_in = {m: i for i, m in enumerate(modes_in)}
    index_out = {m: i for i, m in enumerate(modes_out)}
    n_modes = len(modes_in)
    t = np.zeros((n_modes, n_modes), dtype=np.complex128)
    for (mode_a, mode_b), amp in basis.amplitudes.items():
        i, j = index_in[mode_a], index_in[mode_b]
        if i == j:
            t[i, i] = amp / math.sqrt(2.0)
        else:
            t[i, j] += 0.5 * amp
            t[j, i] += 0.5 * amp
    u = np.zeros((n_modes, n_modes), dtype=np.complex128)
    r = 1.0 / math.sqrt(2.0)
    for pol in ("H", "V"):
        for k in range(k_bins):
            col1 = index_in[Mode(1, pol, k)]
            col2 = index_in[Mode(2, pol, k)]
            u[index_out[Mode(3, pol, k)], col1] = 1j * r
            u[index_out[Mode(4, pol, k)], col1] = r
            u[index_out[Mode(3, pol, k)], col2] = r
            u[index_out[Mode(4, pol, k)], col2] = 1j * r
    t_out = u @ t @ u.T
    amplitudes: dict[tuple[Mode, Mode], complex] = {}
    for i, mode_a in enumerate(modes_out):
        diag = math.sqrt(2.0) * t_out[i, i]
        if diag != 0.0:
            amplitudes[(mode_a, mode_a)] = complex(diag)
        for j in range(i + 1, n_modes):
            amp = 2.0 * t_out[i, j]
            if amp != 0.0:
                amplitudes[_pair_key(mode_a, modes_out[j])] = complex(amp)
    return DiscreteModeBasis(
        k_bins=k_bins,
        paths=(3, 4),
        amplitudes=amplitudes,
        captured_norm=basis.captured_norm,
    )


def outcome_probabilities(basis: DiscreteModeBasis) -> dict[str, float]:
    """Sum |amplitude|^2 into the three detection outcomes.

    coincidence: one photon in each output path; both_in_3 / both_in_4:
    the bunched outcomes.  The three sum to the basis total probability,
    1 within 1e-12 after a lossless transform.
    """
    if basis.paths != (3, 4):
        raise ValueError(f"output basis must live on paths (3, 4), got {basis.paths}")
    sums = {"coincidence": 0.0, "both_in_3": 0.0, "both_in_4": 0.0}
    for (mode_a, mode_b), amp in basis.amplitudes.items():
        p = abs(amp) ** 2
        if mode_a.path == mode_b.path:
            sums["both_in_3" if mode_a.path == 3 else "both_in_4"] += p
        else:
            sums["coincidence"] += p
    return sums
