"""Loading measured TOA matrices from CSV and injecting synthetic offsets.

The expected dialect is plain numeric CSV: comma separator, period decimal,
no header (an optional single header line can be skipped), one microphone per
row, one source per column, entries in seconds.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .rng import make_rng
from .timing import TimingKind, TimingMatrix


@dataclass(frozen=True)
class RealDataset:
    """A measured TOA matrix together with where it came from."""

    toa: TimingMatrix
    source_path: str


def load_toa_csv(path, scale: float = 1.0, skip_header: bool = False) -> TimingMatrix:
    """Read a rectangular numeric CSV of arrival times.

    scale multiplies every entry on load, for files recorded in units other
    than seconds. Ragged or non-numeric input raises ValueError naming the
    offending row and column (1-indexed, counting physical file lines).
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        for line_num, row in enumerate(csv.reader(fh), start=1):
            if skip_header and line_num == 1:
                continue
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # trailing blank line
            parsed = []
            for col_num, cell in enumerate(row, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}: non-numeric value {cell!r} at row {line_num}, column {col_num}"
                    ) from None
            if width is None:
                width = len(parsed)
            elif len(parsed) != width:
                raise ValueError(
                    f"{path}: row {line_num} has {len(parsed)} values, expected {width}"
                )
            rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return TimingMatrix(TimingKind.TOA, np.asarray(rows, dtype=float) * float(scale))


def load_dataset(path, scale: float = 1.0, skip_header: bool = False) -> RealDataset:
    return RealDataset(load_toa_csv(path, scale, skip_header), str(path))


def save_toa_csv(matrix: TimingMatrix, path) -> None:
    """Write the values back in the same dialect, full double precision."""
    np.savetxt(path, matrix.values, delimiter=",", fmt="%.17g")


def inject_offsets(toa: TimingMatrix, offset_range: float, seed: int):
    """Contaminate a TOA matrix with fresh uniform clock offsets.

    Returns (matrix, delta, eta) where out[i, j] = toa[i, j] + eta[j] -
    delta[i]. delta (per mic) is drawn before eta (per source), both uniform
    in [-offset_range, offset_range] from one PCG64 stream, so the draw is
    reproducible from the seed. The offsets are returned for audit.
    """
    if toa.kind is not TimingKind.TOA:
        raise TypeError(f"expected a TOA matrix, got kind={toa.kind.value}")
    if not np.isfinite(offset_range) or offset_range < 0.0:
        raise ValueError(f"offset_range must be non-negative, got {offset_range}")
    rng = make_rng(seed)
    delta = rng.uniform(-offset_range, offset_range, size=toa.num_mics)
    eta = rng.uniform(-offset_range, offset_range, size=toa.num_srcs)
    values = toa.values + eta[None, :] - delta[:, None]
    return TimingMatrix(TimingKind.TOA, values), delta, eta


def write_audit_json(path, delta, eta, seed: int) -> None:
    """Record injected offsets next to the contaminated matrix."""
    with open(path, "w") as fh:
        json.dump(
            {"delta": np.asarray(delta).tolist(), "eta": np.asarray(eta).tolist(), "seed": seed},
            fh,
            indent=2,
        )
        fh.write("\n")
