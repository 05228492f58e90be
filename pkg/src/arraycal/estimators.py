"""Scikit-learn compatible wrappers around the timing transform and solver.

These let the toolkit compose with the wider ecosystem, e.g.

    pipe = make_pipeline(TimingCenterer(), GeometryEstimator(speed=340.0))
    pipe.fit(toa_values)
    pipe[-1].mics_
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .localize import SolveOptions, solve
from .mapping import map_values
from .validation import check_matrix


class TimingCenterer(TransformerMixin, BaseEstimator):
    """Stateless transformer that cancels clock offsets in timing matrices.

    Rows are microphones, columns are sources. transform() subtracts the
    reference-source column and then each column's mean over rows, which
    removes unknown per-microphone recording start times and per-source
    emission times from TOA and TDOA data alike.

    Parameters
    ----------
    ref_src : int, default=0
        Column treated as the reference source; it comes out exactly zero.
    """

    def __init__(self, ref_src=0):
        self.ref_src = ref_src

    def fit(self, X, y=None):
        """No state to learn; validates the input and returns self."""
        X = check_matrix(X, "X")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        return map_values(np.asarray(X, dtype=float), self.ref_src)


class GeometryEstimator(BaseEstimator):
    """Recovers microphone and source positions from an offset-free matrix.

    fit(X) treats X as the (M, N) output of TimingCenterer (or map_timing)
    and runs the damped least-squares solver. Positions are determined only
    up to rigid motion and reflection.

    Parameters
    ----------
    speed : float, default=340.0
        Speed of sound in m/s.
    ref_src : int, default=0
        Reference source column of the input matrix; must match the
        TimingCenterer that produced it.
    num_restarts : int, default=1
        Random restarts; the lowest-cost one wins.
    seed : int, default=0
        Seed for the restart initializations.
    max_iterations, cost_tolerance, step_tolerance, initial_damping :
        Solver knobs, see SolveOptions.

    Attributes
    ----------
    mics_ : ndarray of shape (M, 3)
    srcs_ : ndarray of shape (N, 3)
    final_cost_ : float
    n_iter_ : int
    converged_ : bool
    """

    def __init__(
        self,
        speed=340.0,
        ref_src=0,
        num_restarts=1,
        seed=0,
        max_iterations=200,
        cost_tolerance=1e-24,
        step_tolerance=1e-12,
        initial_damping=1e-3,
    ):
        self.speed = speed
        self.ref_src = ref_src
        self.num_restarts = num_restarts
        self.seed = seed
        self.max_iterations = max_iterations
        self.cost_tolerance = cost_tolerance
        self.step_tolerance = step_tolerance
        self.initial_damping = initial_damping

    def fit(self, X, y=None, init=None):
        """Fit positions to an offset-free matrix.

        init optionally seeds the first restart with flattened positions
        (mics first), e.g. a known rough layout.
        """
        X = check_matrix(X, "X")
        opts = SolveOptions(
            max_iterations=self.max_iterations,
            cost_tolerance=self.cost_tolerance,
            step_tolerance=self.step_tolerance,
            initial_damping=self.initial_damping,
            num_restarts=self.num_restarts,
            seed=self.seed,
        )
        estimate = solve(X, self.speed, init=init, opts=opts, ref_src=self.ref_src)
        self.n_features_in_ = X.shape[1]
        self.mics_ = estimate.mics
        self.srcs_ = estimate.srcs
        self.final_cost_ = estimate.final_cost
        self.n_iter_ = estimate.iterations
        self.converged_ = estimate.converged
        return self
