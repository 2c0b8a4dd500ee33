"""Parameter model of the procedural face world.

A face is an ellipsoid head with Gaussian-falloff features painted in its
surface (uv) coordinates, lit by a 9-coefficient real spherical-harmonics
environment. Identity fields are constant across the frames of a trajectory;
state fields (expression, pose, lighting) vary per frame.

All parameter vectors are float32 at rest so that serialization through the
float32 container format is lossless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Per-field bounds. Shape vector layout:
#   [radius_x, radius_y, radius_z, eye_spacing, eye_height, nose_size,
#    mouth_half_width, hairline_height]
# Radii are in half-image units, the rest in uv units on the ellipsoid.
SHAPE_RANGES = np.array(
    [
        [0.55, 0.95],
        [0.55, 0.95],
        [0.55, 0.95],
        [0.25, 0.45],
        [0.15, 0.40],
        [0.06, 0.16],
        [0.25, 0.50],
        [0.55, 0.80],
    ],
    dtype=np.float32,
)

# albedo_params layout: skin RGB then hair RGB.
ALBEDO_RANGES = np.array([[0.2, 0.9]] * 3 + [[0.05, 0.8]] * 3, dtype=np.float32)
BACKGROUND_RANGES = np.array([[0.0, 1.0]] * 3, dtype=np.float32)

# expression layout: [mouth_curvature, mouth_openness, brow_raise, eye_openness]
EXPRESSION_RANGES = np.array(
    [[-1.0, 1.0], [0.0, 1.0], [-1.0, 1.0], [0.2, 1.0]], dtype=np.float32
)
POSE_RANGES = np.array([[-0.6, 0.6]] * 3, dtype=np.float32)  # yaw, pitch, roll
LIGHTING_RANGES = np.array([[0.5, 1.2]] + [[-0.4, 0.4]] * 8, dtype=np.float32)

IDENTITY_DIM = 17  # 8 shape + 6 albedo + 3 background
STATE_DIM = 16  # 4 expression + 3 pose + 9 lighting
PARAM_DIM = IDENTITY_DIM + STATE_DIM


def _check_range(name: str, values: np.ndarray, ranges: np.ndarray) -> None:
    v = np.asarray(values, dtype=np.float64)
    if v.shape != (len(ranges),):
        raise ValueError(f"{name}: expected shape ({len(ranges)},), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name}: non-finite entries")
    lo, hi = ranges[:, 0], ranges[:, 1]
    if np.any(v < lo - 1e-6) or np.any(v > hi + 1e-6):
        raise ValueError(f"{name}: values {v} outside ranges {ranges.tolist()}")


def _f32(values) -> np.ndarray:
    out = np.asarray(values, dtype=np.float32).copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class IdentityParams:
    """Frame-invariant fields: head geometry, skin/hair colors, background."""

    shape: np.ndarray
    albedo_params: np.ndarray
    background_rgb: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "shape", _f32(self.shape))
        object.__setattr__(self, "albedo_params", _f32(self.albedo_params))
        object.__setattr__(self, "background_rgb", _f32(self.background_rgb))

    def validate(self) -> "IdentityParams":
        _check_range("shape", self.shape, SHAPE_RANGES)
        _check_range("albedo_params", self.albedo_params, ALBEDO_RANGES)
        _check_range("background_rgb", self.background_rgb, BACKGROUND_RANGES)
        return self

    @property
    def radii(self) -> np.ndarray:
        return self.shape[:3]

    @property
    def skin_rgb(self) -> np.ndarray:
        return self.albedo_params[:3]

    @property
    def hair_rgb(self) -> np.ndarray:
        return self.albedo_params[3:]

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.shape, self.albedo_params, self.background_rgb])

    @classmethod
    def from_vector(cls, v) -> "IdentityParams":
        v = np.asarray(v, dtype=np.float32)
        return cls(shape=v[:8], albedo_params=v[8:14], background_rgb=v[14:17])


@dataclass(frozen=True, eq=False)
class StateParams:
    """Per-frame fields: expression, head pose (yaw/pitch/roll), SH lighting."""

    expression: np.ndarray
    pose: np.ndarray
    lighting: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "expression", _f32(self.expression))
        object.__setattr__(self, "pose", _f32(self.pose))
        object.__setattr__(self, "lighting", _f32(self.lighting))

    def validate(self) -> "StateParams":
        _check_range("expression", self.expression, EXPRESSION_RANGES)
        _check_range("pose", self.pose, POSE_RANGES)
        _check_range("lighting", self.lighting, LIGHTING_RANGES)
        return self

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.expression, self.pose, self.lighting])

    @classmethod
    def from_vector(cls, v) -> "StateParams":
        v = np.asarray(v, dtype=np.float32)
        return cls(expression=v[:4], pose=v[4:7], lighting=v[7:16])


@dataclass(frozen=True, eq=False)
class FaceParams:
    identity: IdentityParams
    state: StateParams

    def validate(self) -> "FaceParams":
        self.identity.validate()
        self.state.validate()
        return self

    def to_vector(self) -> np.ndarray:
        """Flat float32 layout: shape, albedo, background, expression, pose, lighting."""
        return np.concatenate([self.identity.to_vector(), self.state.to_vector()])

    @classmethod
    def from_vector(cls, v) -> "FaceParams":
        v = np.asarray(v, dtype=np.float32)
        if v.shape != (PARAM_DIM,):
            raise ValueError(f"expected {PARAM_DIM} values, got {v.shape}")
        return cls(
            identity=IdentityParams.from_vector(v[:IDENTITY_DIM]),
            state=StateParams.from_vector(v[IDENTITY_DIM:]),
        )

    def replace_state(self, state: StateParams) -> "FaceParams":
        return FaceParams(identity=self.identity, state=state)


def params_equal(a: FaceParams, b: FaceParams) -> bool:
    return np.array_equal(a.to_vector(), b.to_vector())
