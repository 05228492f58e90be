"""Synthesis of TOA and TDOA matrices from a scene.

Matrices are stored dense and row-major: M rows of microphones, N columns of
sources, entries in seconds.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .rng import make_rng
from .scene import Scene, pairwise_distances
from .validation import check_index, check_matrix


class TimingKind(Enum):
    TOA = "toa"
    TDOA = "tdoa"


@dataclass(frozen=True)
class TimingMatrix:
    """An (M, N) matrix of timing measurements in seconds.

    kind tags the measurement model. TDOA matrices carry the reference
    microphone index; matrices built by this package have that row
    identically zero.
    """

    kind: TimingKind
    values: np.ndarray
    ref_mic: int | None = None

    def __post_init__(self):
        if not isinstance(self.kind, TimingKind):
            raise TypeError(f"kind must be a TimingKind, got {self.kind!r}")
        values = check_matrix(self.values, "values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.kind is TimingKind.TDOA:
            ref = 0 if self.ref_mic is None else self.ref_mic
            object.__setattr__(
                self, "ref_mic", check_index(ref, values.shape[0], "ref_mic")
            )
        elif self.ref_mic is not None:
            raise ValueError("ref_mic only applies to TDOA matrices")

    @property
    def num_mics(self) -> int:
        return self.values.shape[0]

    @property
    def num_srcs(self) -> int:
        return self.values.shape[1]


def synth_toa(scene: Scene) -> TimingMatrix:
    """Arrival times: t[i, j] = ||r_i - s_j|| / c + eta[j] - delta[i]."""
    dist = pairwise_distances(scene.mics, scene.srcs)
    values = dist / scene.c + scene.eta[None, :] - scene.delta[:, None]
    return TimingMatrix(TimingKind.TOA, values)


def synth_tdoa(scene: Scene, ref_mic: int = 0) -> TimingMatrix:
    """Arrival-time differences against a reference microphone.

    tau[i, j] = (||r_i - s_j|| - ||r_ref - s_j||) / c + delta[ref] - delta[i].
    Emission times cancel, so the result never depends on scene.eta. The
    reference row is exactly zero.
    """
    ref_mic = check_index(ref_mic, scene.num_mics, "ref_mic")
    dist = pairwise_distances(scene.mics, scene.srcs)
    values = (dist - dist[ref_mic][None, :]) / scene.c + (
        scene.delta[ref_mic] - scene.delta[:, None]
    )
    return TimingMatrix(TimingKind.TDOA, values, ref_mic)


def tdoa_from_toa(toa: TimingMatrix, ref_mic: int = 0) -> TimingMatrix:
    """Convert a measured TOA matrix to TDOA by subtracting a reference row.

    This is the conversion to use when only a timing matrix exists and there
    is no scene behind it (e.g. matrices loaded from a file).
    """
    if toa.kind is not TimingKind.TOA:
        raise TypeError(f"expected a TOA matrix, got kind={toa.kind.value}")
    ref_mic = check_index(ref_mic, toa.num_mics, "ref_mic")
    values = toa.values - toa.values[ref_mic][None, :]
    return TimingMatrix(TimingKind.TDOA, values, ref_mic)


def add_noise(matrix: TimingMatrix, sigma: float, seed: int) -> TimingMatrix:
    """Perturb every entry with i.i.d. zero-mean Gaussian noise of std sigma.

    sigma is in seconds; sigma=0 returns the input unchanged. Deterministic
    given the seed.
    """
    if not np.isfinite(sigma) or sigma < 0.0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return matrix
    noise = make_rng(seed).normal(0.0, sigma, size=matrix.values.shape)
    return TimingMatrix(matrix.kind, matrix.values + noise, matrix.ref_mic)
