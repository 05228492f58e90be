"""Monte Carlo harness: seeded trials, aggregate checks, plot-ready exports."""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .mapping import closed_form_map, column_means, map_timing, residual
from .rng import derive_seed
from .scene import SceneConfig, generate_scene
from .timing import synth_tdoa, synth_toa


@dataclass(frozen=True)
class TrialResult:
    """Worst-case statistics of one random scene."""

    trial_index: int
    max_abs_residual_toa_tdoa: float
    max_abs_residual_vs_closed_form: float
    max_abs_column_mean: float
    f_min: float
    f_max: float


@dataclass
class ValidationReport:
    """Aggregate of a Monte Carlo run; serializable to JSON."""

    config: SceneConfig
    num_trials: int
    tolerance: float
    data_points: int
    max_abs_residual_toa_tdoa: float
    max_abs_residual_vs_closed_form: float
    max_abs_column_mean: float
    f_min: float
    f_max: float
    f_bound: float
    passed: bool

    def to_dict(self) -> dict:
        out = asdict(self)
        out["config"] = asdict(self.config)
        out["config"]["room"] = list(out["config"]["room"])  # JSON-native
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def run_trial(config: SceneConfig, trial_index: int) -> TrialResult:
    """One seeded scene with all three mapped-matrix routes compared.

    Pure function of (config, trial_index): the scene seed is
    derive_seed(config.seed, trial_index), so a trial's result does not
    depend on which worker runs it.
    """
    scene = generate_scene(replace(config, seed=derive_seed(config.seed, trial_index)))
    mapped_toa = map_timing(synth_toa(scene))
    mapped_tdoa = map_timing(synth_tdoa(scene, 0))
    mapped_oracle = closed_form_map(scene)
    return TrialResult(
        trial_index=trial_index,
        max_abs_residual_toa_tdoa=float(np.abs(residual(mapped_toa, mapped_tdoa)).max()),
        max_abs_residual_vs_closed_form=float(
            np.abs(residual(mapped_toa, mapped_oracle)).max()
        ),
        max_abs_column_mean=float(
            max(
                np.abs(column_means(mapped_toa)).max(),
                np.abs(column_means(mapped_tdoa)).max(),
            )
        ),
        f_min=float(min(mapped_toa.values.min(), mapped_tdoa.values.min())),
        f_max=float(max(mapped_toa.values.max(), mapped_tdoa.values.max())),
    )


def trial_f_values(config: SceneConfig, trial_index: int) -> np.ndarray:
    """The TOA-route mapped values of one trial (for histogram export)."""
    scene = generate_scene(replace(config, seed=derive_seed(config.seed, trial_index)))
    return map_timing(synth_toa(scene)).values


def run_monte_carlo(
    config: SceneConfig,
    num_trials: int,
    tolerance: float,
    workers: int = 1,
) -> ValidationReport:
    """Seeded sweep of random scenes with identity and zero-mean checks.

    The report passes when every aggregate residual maximum stays below
    tolerance. Results are bit-identical for any worker count because each
    trial seeds its own stream and aggregation is order-insensitive.
    """
    if num_trials < 1:
        raise ValueError("num_trials must be at least 1")
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")

    if workers <= 1:
        results = [run_trial(config, t) for t in range(num_trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: run_trial(config, t), range(num_trials)))

    max_identity = max(r.max_abs_residual_toa_tdoa for r in results)
    max_oracle = max(r.max_abs_residual_vs_closed_form for r in results)
    max_colmean = max(r.max_abs_column_mean for r in results)
    passed = max(max_identity, max_oracle, max_colmean) < tolerance
    return ValidationReport(
        config=config,
        num_trials=num_trials,
        tolerance=tolerance,
        data_points=num_trials * config.num_mics * config.num_srcs,
        max_abs_residual_toa_tdoa=max_identity,
        max_abs_residual_vs_closed_form=max_oracle,
        max_abs_column_mean=max_colmean,
        f_min=min(r.f_min for r in results),
        f_max=max(r.f_max for r in results),
        f_bound=2.0 * float(np.linalg.norm(config.room)) / config.speed,
        passed=passed,
    )


def histogram(values, num_bins: int, value_range: tuple) -> list:
    """Uniform-bin counts over [lo, hi] as (bin_left, bin_right, count) rows.

    Values outside the range are dropped; the last bin includes its right
    edge, so counts sum to the number of values with lo <= v <= hi. An empty
    input yields all-zero counts.
    """
    lo, hi = float(value_range[0]), float(value_range[1])
    if num_bins < 1:
        raise ValueError("num_bins must be at least 1")
    if not lo < hi:
        raise ValueError(f"range must satisfy min < max, got [{lo}, {hi}]")
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=num_bins, range=(lo, hi))
    return [
        (float(edges[k]), float(edges[k + 1]), int(counts[k])) for k in range(num_bins)
    ]


def write_histogram_csv(rows, path) -> None:
    with open(path, "w") as fh:
        fh.write("bin_left,bin_right,count\n")
        for left, right, count in rows:
            fh.write(f"{left:.17g},{right:.17g},{count}\n")
