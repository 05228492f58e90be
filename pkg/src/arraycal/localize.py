"""Geometry recovery from an offset-free matrix by damped least squares.

The offset-free matrix depends on geometry only, so fitting candidate
microphone and source positions to an observed matrix recovers the setup.
Positions are identifiable only up to rigid motion and reflection (pairwise
distances are blind to both), so estimates are scored with procrustes_rmse.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .mapping import MappedMatrix, MapSource, geometry_map, _mean_over_mics
from .rng import derive_seed, make_rng
from .validation import check_index, check_matrix, check_positions

# Distance below which a mic-source pair counts as coincident; the range-time
# derivative is taken as zero there (subgradient at the cusp).
COINCIDENT_DISTANCE = 1e-9


@dataclass(frozen=True)
class SolveOptions:
    """Solver knobs. Tolerances are absolute: cost in s^2, step in meters."""

    max_iterations: int = 200
    cost_tolerance: float = 1e-24
    step_tolerance: float = 1e-12
    initial_damping: float = 1e-3
    num_restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if int(self.max_iterations) < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.cost_tolerance <= 0.0 or self.step_tolerance <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.initial_damping <= 0.0:
            raise ValueError("initial_damping must be positive")
        if int(self.num_restarts) < 1:
            raise ValueError("num_restarts must be at least 1")


@dataclass
class GeometryEstimate:
    """Solver output: positions in meters plus convergence diagnostics.

    cost_history holds the accepted cost sequence of the winning restart,
    starting at the initial cost; accepted steps never increase it.
    """

    mics: np.ndarray
    srcs: np.ndarray
    final_cost: float
    iterations: int
    converged: bool
    cost_history: list = field(default_factory=list)


def model_f(mics, srcs, c: float, ref_src: int = 0) -> MappedMatrix:
    """Offset-free matrix for candidate positions (same formula as the oracle)."""
    return MappedMatrix(geometry_map(mics, srcs, c, ref_src), MapSource.CLOSED_FORM, ref_src)


def _unpack(params: np.ndarray, num_mics: int, num_srcs: int):
    mics = params[: 3 * num_mics].reshape(num_mics, 3)
    srcs = params[3 * num_mics :].reshape(num_srcs, 3)
    return mics, srcs


def _model_terms(mics, srcs, c, ref_src):
    """Model matrix plus unit direction vectors (zeroed at coincident pairs)."""
    diff = mics[:, None, :] - srcs[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    y = dist / c
    x = y[:, ref_src]
    f = (y - _mean_over_mics(y)[None, :]) - (x - _mean_over_mics(x))[:, None]
    safe = np.where(dist > COINCIDENT_DISTANCE, dist, 1.0)
    unit = diff / safe[..., None]
    unit[dist <= COINCIDENT_DISTANCE] = 0.0
    return f, unit


def _resolve_observation(f_obs, ref_src):
    """Unpack (values, ref_src), inheriting ref_src from a MappedMatrix."""
    if isinstance(f_obs, MappedMatrix):
        obs = f_obs.values
        if ref_src is None:
            ref_src = f_obs.ref_src
    else:
        obs = check_matrix(f_obs, "f_obs")
    return obs, check_index(0 if ref_src is None else ref_src, obs.shape[1], "ref_src")


def objective_and_gradient(params, f_obs, c: float, ref_src: int | None = None):
    """Sum of squared residuals against f_obs and its exact gradient.

    params stacks all positions as [r_0, ..., r_{M-1}, s_0, ..., s_{N-1}],
    flattened to length 3(M+N). f_obs may be a MappedMatrix (whose reference
    source is used unless ref_src is given) or a bare (M, N) array. The
    derivative contribution of any mic-source pair closer than
    COINCIDENT_DISTANCE is zero.
    """
    obs, ref_src = _resolve_observation(f_obs, ref_src)
    num_mics, num_srcs = obs.shape
    params = np.asarray(params, dtype=float).ravel()
    if params.size != 3 * (num_mics + num_srcs):
        raise ValueError(
            f"params must have length {3 * (num_mics + num_srcs)}, got {params.size}"
        )
    if not np.all(np.isfinite(params)):
        raise ValueError("params contain non-finite values")

    mics, srcs = _unpack(params, num_mics, num_srcs)
    f, unit = _model_terms(mics, srcs, c, ref_src)
    res = f - obs
    cost = float((res * res).sum())

    # Chain rule through the centering: with G = 2*res, H = G - colmean(G),
    # dC/dy[k, l] = H[k, l] - (sum_j H[k, j]) for l == ref_src.
    h = 2.0 * res
    h = h - _mean_over_mics(h)[None, :]
    w = h.copy()
    w[:, ref_src] -= h.sum(axis=1)
    grad_mics = np.einsum("ij,ijd->id", w, unit) / c
    grad_srcs = -np.einsum("ij,ijd->jd", w, unit) / c
    return cost, np.concatenate([grad_mics.ravel(), grad_srcs.ravel()])


def _residual_and_jacobian(params, obs, c, ref_src):
    num_mics, num_srcs = obs.shape
    mics, srcs = _unpack(params, num_mics, num_srcs)
    f, unit = _model_terms(mics, srcs, c, ref_src)
    res = (f - obs).ravel()

    jac = np.zeros((num_mics * num_srcs, 3 * (num_mics + num_srcs)))
    rel = unit - unit[:, [ref_src], :]  # U[i, j] - U[i, ref]
    cen = unit - _mean_over_mics(unit)[None, ...]  # U[i, j] - colmean_j
    for k in range(num_mics):
        block = np.broadcast_to(-rel[k] / num_mics, (num_mics, num_srcs, 3)).copy()
        block[k] += rel[k]
        jac[:, 3 * k : 3 * k + 3] = (block / c).reshape(-1, 3)
    for l in range(num_srcs):
        block = np.zeros((num_mics, num_srcs, 3))
        block[:, l, :] = -cen[:, l, :]
        if l == ref_src:
            # the reference column of f is identically zero; every other
            # column picks up the centered reference direction
            block += cen[:, [ref_src], :]
        jac[:, 3 * (num_mics + l) : 3 * (num_mics + l) + 3] = (block / c).reshape(-1, 3)
    return res, jac


def _lm_from(x0, obs, c, ref_src, opts):
    """Damped least squares from one start; accepted steps never raise cost."""
    x = x0.copy()
    res, jac = _residual_and_jacobian(x, obs, c, ref_src)
    cost = float(res @ res)
    lam = opts.initial_damping
    history = [cost]
    converged = False
    iterations = 0
    identity = np.eye(x.size)
    for iterations in range(1, opts.max_iterations + 1):
        grad = jac.T @ res
        step = np.linalg.solve(jac.T @ jac + lam * identity, -grad)
        if np.linalg.norm(step) < opts.step_tolerance:
            converged = True
            break
        candidate = x + step
        res_new, jac_new = _residual_and_jacobian(candidate, obs, c, ref_src)
        cost_new = float(res_new @ res_new)
        if cost_new < cost:
            decrease = cost - cost_new
            x, res, jac, cost = candidate, res_new, jac_new, cost_new
            history.append(cost)
            lam = max(lam / 3.0, 1e-15)
            if decrease < opts.cost_tolerance:
                converged = True
                break
        else:
            lam *= 10.0
            if lam > 1e15:
                break  # no acceptable step left at any damping
    return x, cost, iterations, converged, history


def solve(
    f_obs,
    c: float,
    init=None,
    opts: SolveOptions = SolveOptions(),
    ref_src: int | None = None,
) -> GeometryEstimate:
    """Recover microphone and source positions from an offset-free matrix.

    Each damped least-squares step solves (J'J + lam*I) d = -J'r; lam grows
    tenfold when a step would raise the cost and shrinks threefold after an
    accepted step. Convergence means the accepted cost decrease fell below
    cost_tolerance or the proposed step norm below step_tolerance; hitting
    max_iterations returns the best iterate with converged=False.

    init seeds restart 0 with explicit positions (length 3(M+N), mics first);
    remaining restarts draw random positions from streams derived off
    opts.seed. The restart with the lowest final cost wins, ties going to the
    lowest restart index. ref_src defaults to the MappedMatrix's reference
    source, or 0 for bare arrays.
    """
    obs, ref_src = _resolve_observation(f_obs, ref_src)
    num_mics, num_srcs = obs.shape
    num_params = 3 * (num_mics + num_srcs)

    independent = (num_mics - 1) * (num_srcs - 1)
    if num_params - 6 > independent:
        warnings.warn(
            f"geometry has {num_params - 6} free parameters after the rigid gauge "
            f"but the matrix carries at most {independent} independent entries; "
            "the fit is underdetermined",
            stacklevel=2,
        )

    # Heuristic length scale for random starts, from the data itself.
    scale = max(c * float(np.abs(obs).max()), 1.0)

    starts = []
    for restart in range(opts.num_restarts):
        if restart == 0 and init is not None:
            x0 = np.asarray(init, dtype=float).ravel()
            if x0.size != num_params:
                raise ValueError(f"init must have length {num_params}, got {x0.size}")
            starts.append(x0)
        else:
            rng = make_rng(derive_seed(opts.seed, restart))
            starts.append(rng.normal(0.0, scale, size=num_params))

    best = None
    for x0 in starts:
        result = _lm_from(x0, obs, c, ref_src, opts)
        if best is None or result[1] < best[1]:
            best = result
    x, cost, iterations, converged, history = best
    mics, srcs = _unpack(x, num_mics, num_srcs)
    return GeometryEstimate(
        mics=mics.copy(),
        srcs=srcs.copy(),
        final_cost=cost,
        iterations=iterations,
        converged=converged,
        cost_history=history,
    )


def procrustes_rmse(est, truth) -> float:
    """RMSE between two point clouds after the best rigid alignment.

    Translation, rotation, and reflection are free; scale is not. Stack mics
    and sources into one cloud to score a full geometry estimate.
    """
    est = check_positions(est, "est")
    truth = check_positions(truth, "truth")
    if est.shape != truth.shape:
        raise ValueError(f"point counts differ: {est.shape} vs {truth.shape}")
    a = est - est.mean(axis=0)
    b = truth - truth.mean(axis=0)
    u, _, vt = np.linalg.svd(a.T @ b)
    rotation = u @ vt  # reflection allowed: no determinant correction
    diff = a @ rotation - b
    return float(np.sqrt((diff * diff).sum() / len(est)))
