"""The offset-cancelling transform shared by TOA and TDOA matrices.

The transform subtracts the reference-source column from a timing matrix and
then removes each column's mean across microphones. Both unknown recording
start times (constant along rows) and unknown emission times (constant along
columns) cancel, so TOA and TDOA matrices of the same scene land on the same
offset-free matrix. That matrix is also computable from geometry alone, which
gives an independent oracle for the transform.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .scene import Scene, pairwise_distances
from .timing import TimingKind, TimingMatrix
from .validation import check_index, check_matrix, check_positions


class MapSource(Enum):
    FROM_TOA = "from_toa"
    FROM_TDOA = "from_tdoa"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class MappedMatrix:
    """Offset-free (M, N) matrix produced by the timing transform.

    The reference-source column is exactly zero and every column has zero
    mean across microphones up to floating point. source_kind records which
    route produced the values.
    """

    values: np.ndarray
    source_kind: MapSource
    ref_src: int = 0

    def __post_init__(self):
        if not isinstance(self.source_kind, MapSource):
            raise TypeError(f"source_kind must be a MapSource, got {self.source_kind!r}")
        values = check_matrix(self.values, "values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self, "ref_src", check_index(self.ref_src, values.shape[1], "ref_src")
        )

    @property
    def shape(self) -> tuple:
        return self.values.shape


def _mean_over_mics(values: np.ndarray) -> np.ndarray:
    # Rows are accumulated in index order; results must not depend on
    # execution order or worker count.
    total = np.zeros_like(values[0])
    for row in values:
        total = total + row
    return total / values.shape[0]


def map_values(values: np.ndarray, ref_src: int = 0) -> np.ndarray:
    """Apply the offset-cancelling transform to raw (M, N) timing values.

    out[i, j] = (v[i, j] - v[i, ref]) - mean_i (v[i, j] - v[i, ref]).
    The reference column comes out exactly zero.
    """
    values = check_matrix(values, "values")
    ref_src = check_index(ref_src, values.shape[1], "ref_src")
    diff = values - values[:, [ref_src]]
    return diff - _mean_over_mics(diff)[None, :]


def map_timing(matrix: TimingMatrix, ref_src: int = 0) -> MappedMatrix:
    """Cancel the unknown clock offsets out of a TOA or TDOA matrix.

    The same arithmetic applies to both kinds; the kind is carried through
    as provenance only.
    """
    source = (
        MapSource.FROM_TOA if matrix.kind is TimingKind.TOA else MapSource.FROM_TDOA
    )
    return MappedMatrix(map_values(matrix.values, ref_src), source, ref_src)


def geometry_map(mics, srcs, c: float, ref_src: int = 0) -> np.ndarray:
    """Offset-free matrix predicted from candidate geometry alone.

    With x_i the range time from mic i to the reference source and y_ij the
    range time from mic i to source j, entry (i, j) is
    (y_ij - mean_i y_ij) - (x_i - mean_i x_i). Clock offsets never enter.
    """
    mics = check_positions(mics, "mics")
    srcs = check_positions(srcs, "srcs")
    if not np.isfinite(c) or c <= 0.0:
        raise ValueError(f"c must be positive and finite, got {c}")
    ref_src = check_index(ref_src, len(srcs), "ref_src")
    y = pairwise_distances(mics, srcs) / c
    x = y[:, ref_src]
    return (y - _mean_over_mics(y)[None, :]) - (x - _mean_over_mics(x))[:, None]


def closed_form_map(scene: Scene, ref_src: int = 0) -> MappedMatrix:
    """Geometry-only oracle for map_timing; never sees delta or eta."""
    values = geometry_map(scene.mics, scene.srcs, scene.c, ref_src)
    return MappedMatrix(values, MapSource.CLOSED_FORM, ref_src)


@dataclass(frozen=True)
class DerivedOffsets:
    """Geometry-determined stand-ins for the cancelled clock offsets.

    delta_dot[i] is the reference-source range time of mic i, eta_dot[j] the
    mean range-time advantage of the reference source over source j. x and y
    are the underlying range times: x[i] = y[i, ref] and y[i, j] the mic i to
    source j range time, all in seconds.
    """

    delta_dot: np.ndarray
    eta_dot: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for arr in (self.delta_dot, self.eta_dot, self.x, self.y):
            np.asarray(arr).setflags(write=False)


def derived_offsets(scene: Scene, ref_src: int = 0) -> DerivedOffsets:
    """Compute the derived offsets; the mapped matrix equals y - delta_dot + eta_dot."""
    ref_src = check_index(ref_src, scene.num_srcs, "ref_src")
    y = pairwise_distances(scene.mics, scene.srcs) / scene.c
    x = y[:, ref_src].copy()
    eta_dot = _mean_over_mics(x[:, None] - y)
    return DerivedOffsets(delta_dot=x, eta_dot=eta_dot, x=x, y=y)


def residual(a: MappedMatrix, b: MappedMatrix) -> np.ndarray:
    """Elementwise difference a - b between two mapped matrices."""
    if a.values.shape != b.values.shape:
        raise ValueError(f"shape mismatch: {a.values.shape} vs {b.values.shape}")
    return a.values - b.values


def column_means(matrix: MappedMatrix) -> np.ndarray:
    """Per-source mean across microphones; zero up to floating point."""
    return _mean_over_mics(matrix.values)


def write_mapped_csv(matrix, path) -> None:
    """Write M rows by N comma-separated values, 17 significant digits, no header."""
    values = matrix.values if isinstance(matrix, MappedMatrix) else np.asarray(matrix, dtype=float)
    np.savetxt(path, values, delimiter=",", fmt="%.17g")


def read_mapped_values(path) -> np.ndarray:
    """Read a matrix written by write_mapped_csv back as a 2-D array."""
    return np.loadtxt(path, delimiter=",", ndmin=2)
