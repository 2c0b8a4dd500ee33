"""Seeded draws of identity and per-frame state parameters."""

from __future__ import annotations

import numpy as np

from ..rng import STREAM_IDENTITY, STREAM_STATE, stream_rng
from .params import (
    ALBEDO_RANGES,
    BACKGROUND_RANGES,
    EXPRESSION_RANGES,
    FaceParams,
    IdentityParams,
    LIGHTING_RANGES,
    POSE_RANGES,
    SHAPE_RANGES,
    StateParams,
)
from .render import positive_shade_fraction

# Lighting draws are rejected until at least this fraction of face pixels has
# positive unclamped irradiance, evaluated at the check resolution below.
MIN_POSITIVE_FRACTION = 0.5
POSITIVITY_CHECK_RESOLUTION = 32
MAX_LIGHTING_ATTEMPTS = 100


def _uniform(rng: np.random.Generator, ranges: np.ndarray) -> np.ndarray:
    lo, hi = ranges[:, 0].astype(np.float64), ranges[:, 1].astype(np.float64)
    return (lo + rng.random(len(ranges)) * (hi - lo)).astype(np.float32)


def sample_identity(seed: int) -> IdentityParams:
    """Uniform identity draw from a counter-based generator keyed by seed."""
    rng = stream_rng(seed, STREAM_IDENTITY)
    return IdentityParams(
        shape=_uniform(rng, SHAPE_RANGES),
        albedo_params=_uniform(rng, ALBEDO_RANGES),
        background_rgb=_uniform(rng, BACKGROUND_RANGES),
    ).validate()


def _lighting_ok(identity: IdentityParams, expression, pose, lighting) -> bool:
    candidate = FaceParams(
        identity=identity, state=StateParams(expression=expression, pose=pose, lighting=lighting)
    )
    frac = positive_shade_fraction(candidate, POSITIVITY_CHECK_RESOLUTION)
    return frac >= MIN_POSITIVE_FRACTION


def sample_state(identity: IdentityParams, seed: int) -> StateParams:
    """Uniform state draw; lighting is re-drawn until the face is mostly lit."""
    rng = stream_rng(seed, STREAM_STATE)
    expression = _uniform(rng, EXPRESSION_RANGES)
    pose = _uniform(rng, POSE_RANGES)
    lighting = _uniform(rng, LIGHTING_RANGES)
    for _ in range(MAX_LIGHTING_ATTEMPTS):
        if _lighting_ok(identity, expression, pose, lighting):
            return StateParams(expression=expression, pose=pose, lighting=lighting).validate()
        lighting = _uniform(rng, LIGHTING_RANGES)
    raise RuntimeError(f"no admissible lighting after {MAX_LIGHTING_ATTEMPTS} attempts (seed {seed})")


def sample_face(identity_seed: int, state_seed: int | None = None) -> FaceParams:
    identity = sample_identity(identity_seed)
    state = sample_state(identity, identity_seed if state_seed is None else state_seed)
    return FaceParams(identity=identity, state=state)
