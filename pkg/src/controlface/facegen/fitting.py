"""Inverse rendering of face parameters by multi-start nonlinear least squares.

Fits a FaceParams candidate to an observed 9-channel control stack or RGB
image by minimizing the mean squared pixel difference against re-renders.
Gradients come from central finite differences (the renderer's clamps and
soft masks make analytic gradients piecewise, FD with multiple restarts is
robust at this scale); the inner solver is a damped Gauss-Newton
(Levenberg-Marquardt) iteration projected onto the parameter box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import (
    EXPRESSION_RANGES,
    ALBEDO_RANGES,
    BACKGROUND_RANGES,
    FaceParams,
    IdentityParams,
    LIGHTING_RANGES,
    POSE_RANGES,
    SHAPE_RANGES,
    StateParams,
)
from .render import SUPPORTED_RESOLUTIONS, make_control, render_face
from .sampling import sample_identity, sample_state

FD_STEP = 1e-3
MAX_ITERATIONS = 300
CONVERGED_RESIDUAL = 1.0  # flag threshold on the mean squared residual
EARLY_STOP_RESIDUAL = 1e-8  # skip remaining starts once a fit is this good

# Observed maps with no pixel deviating from the 0.5-gray normal encoding (or
# a fully constant image) carry no face evidence; a fit against them is
# reported as non-converged regardless of its residual.
_EVIDENCE_NORMAL_DEV = 0.02
_EVIDENCE_MIN_FRACTION = 0.005


@dataclass
class FitResult:
    params: FaceParams
    residual: float
    converged: bool
    starts_used: int


def _state_bounds() -> np.ndarray:
    return np.concatenate([EXPRESSION_RANGES, POSE_RANGES, LIGHTING_RANGES]).astype(np.float64)


def _identity_bounds() -> np.ndarray:
    return np.concatenate([SHAPE_RANGES, ALBEDO_RANGES, BACKGROUND_RANGES]).astype(np.float64)


def _has_face_evidence(observed: np.ndarray) -> bool:
    if observed.shape[-1] == 9:
        dev = np.abs(observed[..., 0:3].astype(np.float64) - 0.5)
        return float(np.mean(np.any(dev > _EVIDENCE_NORMAL_DEV, axis=-1))) >= _EVIDENCE_MIN_FRACTION
    flat = observed.reshape(-1, observed.shape[-1]).astype(np.float64)
    return float(np.max(np.std(flat, axis=0))) > 1e-3


def _lm_minimize(residual_fn, x0, bounds, max_iterations):
    """Box-projected Levenberg-Marquardt with central-difference Jacobian."""
    lo, hi = bounds[:, 0], bounds[:, 1]
    x = np.clip(x0.astype(np.float64), lo, hi)
    r = residual_fn(x)
    cost = float(np.mean(r * r))
    lam = 1e-3
    n = len(x)
    for _ in range(max_iterations):
        jac = np.empty((r.size, n))
        for j in range(n):
            xp = x.copy()
            xp[j] = x[j] + FD_STEP
            xm = x.copy()
            xm[j] = x[j] - FD_STEP
            jac[:, j] = (residual_fn(xp) - residual_fn(xm)) / (2.0 * FD_STEP)
        g = jac.T @ r
        h = jac.T @ jac
        diag = np.diag(h).copy()
        diag[diag < 1e-12] = 1e-12
        accepted = False
        for _ in range(8):
            try:
                delta = np.linalg.solve(h + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_new = np.clip(x + delta, lo, hi)
            r_new = residual_fn(x_new)
            cost_new = float(np.mean(r_new * r_new))
            if cost_new < cost:
                rel_drop = (cost - cost_new) / max(cost, 1e-30)
                x, r, cost = x_new, r_new, cost_new
                lam = max(lam * 0.3, 1e-9)
                accepted = True
                break
            lam = min(lam * 5.0, 1e9)
        if not accepted or cost < 1e-14:
            break
        if accepted and rel_drop < 1e-7:
            break
    return x, cost


def fit_params(
    observed: np.ndarray,
    init_seeds,
    frozen_identity: IdentityParams | None = None,
    max_iterations: int = MAX_ITERATIONS,
) -> FitResult:
    """Recover FaceParams whose re-render best matches `observed`.

    `observed` is either an (H, W, 9) control stack or an (H, W, 3) image at a
    supported resolution. One optimization run is started per init seed and
    the lowest-residual candidate wins; remaining starts are skipped once a
    run reaches a near-exact fit. With `frozen_identity` only the state
    (expression, pose, lighting) is optimized.
    """
    observed = np.asarray(
        observed.data if isinstance(observed, object) and hasattr(observed, "data") else observed
    )
    if observed.ndim != 3 or observed.shape[-1] not in (3, 9):
        raise ValueError(f"observed must be (H,W,3) image or (H,W,9) controls, got {observed.shape}")
    resolution = observed.shape[0]
    if observed.shape[0] != observed.shape[1] or resolution not in SUPPORTED_RESOLUTIONS:
        raise ValueError(f"unsupported observed resolution {observed.shape[:2]}")
    init_seeds = list(init_seeds)
    if not init_seeds:
        raise ValueError("need at least one init seed")
    use_controls = observed.shape[-1] == 9
    target = observed.astype(np.float64)

    fit_identity = frozen_identity is None
    bounds = (
        np.concatenate([_identity_bounds(), _state_bounds()]) if fit_identity else _state_bounds()
    )

    def unpack(x: np.ndarray) -> FaceParams:
        if fit_identity:
            identity = IdentityParams.from_vector(x[:17].astype(np.float32))
            state = StateParams.from_vector(x[17:].astype(np.float32))
        else:
            identity = frozen_identity
            state = StateParams.from_vector(x.astype(np.float32))
        return FaceParams(identity=identity, state=state)

    def residual_fn(x: np.ndarray) -> np.ndarray:
        bundle = render_face(unpack(np.clip(x, bounds[:, 0], bounds[:, 1])), resolution)
        pred = make_control(bundle).data if use_controls else bundle.image
        return (pred.astype(np.float64) - target).ravel()

    best_x, best_cost, starts_used = None, np.inf, 0
    for seed in init_seeds:
        identity0 = frozen_identity if not fit_identity else sample_identity(int(seed))
        state0 = sample_state(identity0, int(seed))
        x0 = (
            np.concatenate([identity0.to_vector(), state0.to_vector()])
            if fit_identity
            else state0.to_vector()
        ).astype(np.float64)
        x, cost = _lm_minimize(residual_fn, x0, bounds, max_iterations)
        starts_used += 1
        if cost < best_cost:
            best_x, best_cost = x, cost
        if best_cost < EARLY_STOP_RESIDUAL:
            break

    converged = best_cost < CONVERGED_RESIDUAL and _has_face_evidence(observed)
    return FitResult(
        params=unpack(best_x), residual=best_cost, converged=converged, starts_used=starts_used
    )
