"""Orthographic ellipsoid-head renderer with SH Lambertian shading.

The camera sits on the +z axis looking down -z; per-pixel rays are cast along
the z axis and intersected with the yaw/pitch/roll-rotated ellipsoid. The
camera-facing hit gives, per pixel:

  * the unrotated (head-space) hit point, whose scaled coordinates yield the
    outward surface normal (rotated back to world space),
  * uv surface coordinates (x'/radius_x, y'/radius_y) in which all albedo
    features are painted.

Output planes are float32. The shaded plane is computed *from the encoded
float32 normal plane* through `lambertian_shade`, so the identity
``shaded == albedo * clamp(irradiance(decoded normals))`` holds bitwise on
face pixels by construction; callers can re-derive it with the same helper.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import FaceParams
from .sh import sh_irradiance

SUPPORTED_RESOLUTIONS = (32, 64, 128)

# Feature falloff widths in uv units. Gaussian falloffs keep the rendered
# maps smooth in the parameters, which finite-difference fitting relies on.
EYE_SIGMA = 0.06
MOUTH_SIGMA = 0.04
BROW_SIGMA = 0.03
BROW_WIDTH = 0.10
HAIR_EDGE = 0.015
MOUTH_V = -0.38
NOSE_V = -0.02
BROW_OFFSET = 0.14
BROW_RAISE_GAIN = 0.06
MOUTH_CURVE_GAIN = 0.10
MOUTH_OPEN_GAIN = 2.5

EYE_COLOR = np.array([0.06, 0.05, 0.05], dtype=np.float64)
MOUTH_COLOR = np.array([0.55, 0.20, 0.22], dtype=np.float64)
NOSE_SHADE = 0.85  # multiplies skin under the nose disk


@dataclass(frozen=True, eq=False)
class RenderBundle:
    """Rendered planes at one resolution.

    image   : composited output (shaded face, flat hair, flat background)
    normals : world normals remapped (n+1)/2 on face pixels, 0.5 elsewhere
    albedo  : painted surface color on head pixels, background color elsewhere
    shaded  : albedo * clamped irradiance on face pixels, 0 elsewhere
    mask    : face pixels (head hit below the hairline)
    """

    image: np.ndarray
    normals: np.ndarray
    albedo: np.ndarray
    shaded: np.ndarray
    mask: np.ndarray


@dataclass(frozen=True, eq=False)
class ControlMaps:
    """H x W x 9 control stack: channels [0:3] normals, [3:6] albedo, [6:9] shaded."""

    data: np.ndarray

    @property
    def normals(self) -> np.ndarray:
        return self.data[..., 0:3]

    @property
    def albedo(self) -> np.ndarray:
        return self.data[..., 3:6]

    @property
    def shaded(self) -> np.ndarray:
        return self.data[..., 6:9]


def make_control(bundle: RenderBundle) -> ControlMaps:
    """Stack normals, albedo and shaded planes into the 9-channel control."""
    planes = (bundle.normals, bundle.albedo, bundle.shaded)
    h, w = bundle.mask.shape
    for p in planes:
        if p.shape != (h, w, 3):
            raise ValueError(f"plane shape {p.shape} does not match mask {bundle.mask.shape}")
    return ControlMaps(data=np.concatenate(planes, axis=-1))


def rotation_matrix(yaw: float, pitch: float, roll: float) -> np.ndarray:
    """World-from-head rotation, R = Rz(roll) @ Rx(pitch) @ Ry(yaw)."""
    cy, sy = np.cos(yaw), np.sin(yaw)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cr, sr = np.cos(roll), np.sin(roll)
    ry = np.array([[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cp, -sp], [0.0, sp, cp]])
    rz = np.array([[cr, -sr, 0.0], [sr, cr, 0.0], [0.0, 0.0, 1.0]])
    return rz @ rx @ ry


def pixel_grid(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Pixel-center world coordinates; x grows with columns, y up with rows."""
    xs = (np.arange(resolution, dtype=np.float64) + 0.5) / resolution * 2.0 - 1.0
    ys = 1.0 - (np.arange(resolution, dtype=np.float64) + 0.5) / resolution * 2.0
    return np.broadcast_to(xs[None, :], (resolution, resolution)), np.broadcast_to(
        ys[:, None], (resolution, resolution)
    )


def _intersect_head(params: FaceParams, resolution: int):
    """Ray-cast the rotated ellipsoid.

    Returns (hit, point_local, normal_world, u, v) with arrays over the full
    pixel grid; entries outside `hit` are zero-filled.
    """
    radii = params.identity.radii.astype(np.float64)
    yaw, pitch, roll = (float(a) for a in params.state.pose)
    rot = rotation_matrix(yaw, pitch, roll)

    gx, gy = pixel_grid(resolution)
    origin_w = np.stack([gx, gy, np.full_like(gx, 2.0)], axis=-1)
    direction_w = np.array([0.0, 0.0, -1.0])

    # Head-space ray; R is orthonormal so the inverse is the transpose.
    origin = origin_w @ rot  # == (rot.T @ o) per pixel
    direction = rot.T @ direction_w

    inv_r2 = 1.0 / (radii * radii)
    a = np.sum(direction * direction * inv_r2)
    b = 2.0 * np.sum(origin * direction * inv_r2, axis=-1)
    c = np.sum(origin * origin * inv_r2, axis=-1) - 1.0
    disc = b * b - 4.0 * a * c
    hit = disc >= 0.0

    sqrt_disc = np.sqrt(np.where(hit, disc, 0.0))
    t = (-b - sqrt_disc) / (2.0 * a)  # first hit from the camera side
    point = origin + t[..., None] * direction
    point = np.where(hit[..., None], point, 0.0)

    normal_local = point * inv_r2
    norm = np.linalg.norm(normal_local, axis=-1, keepdims=True)
    normal_local = np.divide(normal_local, norm, out=np.zeros_like(normal_local), where=norm > 0)
    normal_world = normal_local @ rot.T  # rot @ n per pixel

    u = np.where(hit, point[..., 0] / radii[0], 0.0)
    v = np.where(hit, point[..., 1] / radii[1], 0.0)
    return hit, point, normal_world, u, v


def _paint_albedo(params: FaceParams, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Skin with Gaussian feature masks, hair color above the hairline."""
    shape = params.identity.shape.astype(np.float64)
    eye_spacing, eye_height, nose_size, mouth_w, hairline = shape[3:8]
    curve, openness, brow_raise, eye_open = params.state.expression.astype(np.float64)
    skin = params.identity.skin_rgb.astype(np.float64)
    hair = params.identity.hair_rgb.astype(np.float64)

    def gauss2(du, dv, su, sv):
        return np.exp(-0.5 * ((du / su) ** 2 + (dv / sv) ** 2))

    # Eyes: vertical extent scales with openness, so the slit never vanishes.
    eye_sv = EYE_SIGMA * eye_open
    m_eye = gauss2(u - eye_spacing, v - eye_height, EYE_SIGMA, eye_sv) + gauss2(
        u + eye_spacing, v - eye_height, EYE_SIGMA, eye_sv
    )
    # Brows ride above the eyes, shifted by the raise component.
    brow_v = eye_height + BROW_OFFSET + BROW_RAISE_GAIN * brow_raise
    m_brow = gauss2(u - eye_spacing, v - brow_v, BROW_WIDTH, BROW_SIGMA) + gauss2(
        u + eye_spacing, v - brow_v, BROW_WIDTH, BROW_SIGMA
    )
    # Nose disk.
    m_nose = gauss2(u, v - NOSE_V, nose_size, nose_size)
    # Mouth band: curvature lifts the corners, openness thickens the band.
    band_v = MOUTH_V + MOUTH_CURVE_GAIN * curve * (u / mouth_w) ** 2
    sv = MOUTH_SIGMA * (1.0 + MOUTH_OPEN_GAIN * openness)
    m_mouth = np.exp(-0.5 * (u / mouth_w) ** 4) * np.exp(-0.5 * ((v - band_v) / sv) ** 2)

    albedo = np.broadcast_to(skin, u.shape + (3,)).copy()

    def blend(mask, color):
        nonlocal albedo
        m = np.clip(mask, 0.0, 1.0)[..., None]
        albedo = albedo * (1.0 - m) + m * color

    blend(0.6 * m_nose, skin * NOSE_SHADE)
    blend(m_mouth, MOUTH_COLOR)
    blend(m_brow, hair * 0.6)
    blend(m_eye, EYE_COLOR)

    # Soft hair edge; logistic keeps the blend smooth for finite differences.
    w_hair = 1.0 / (1.0 + np.exp(-(v - hairline) / HAIR_EDGE))
    blend(w_hair, hair)
    return np.clip(albedo, 0.0, 1.0)


def lambertian_shade(
    normals_plane: np.ndarray, albedo_plane: np.ndarray, lighting: np.ndarray, mask: np.ndarray
) -> np.ndarray:
    """Shaded plane from an encoded float32 normal plane.

    Decodes normals on mask pixels, evaluates the SH irradiance, clamps it to
    [0, 1] and multiplies with the albedo. This is the single arithmetic path
    used both when rendering and when verifying the shaded-identity invariant.
    """
    out = np.zeros(normals_plane.shape, dtype=np.float32)
    if not np.any(mask):
        return out
    decoded = normals_plane[mask].astype(np.float64) * 2.0 - 1.0
    irr = sh_irradiance(decoded, np.asarray(lighting, dtype=np.float64))
    shade = np.clip(irr, 0.0, 1.0)
    out[mask] = (albedo_plane[mask].astype(np.float64) * shade[:, None]).astype(np.float32)
    return out


def render_face(params: FaceParams, resolution: int) -> RenderBundle:
    """Render one face; pure function of (params, resolution)."""
    if resolution not in SUPPORTED_RESOLUTIONS:
        raise ValueError(f"resolution must be one of {SUPPORTED_RESOLUTIONS}, got {resolution}")
    params.validate()

    hit, _, normal_world, u, v = _intersect_head(params, resolution)
    hairline = float(params.identity.shape[7])
    mask = hit & (v <= hairline)
    hair_region = hit & ~mask

    normals = np.full((resolution, resolution, 3), 0.5, dtype=np.float32)
    normals[mask] = ((normal_world[mask] + 1.0) * 0.5).astype(np.float32)

    albedo = np.broadcast_to(
        params.identity.background_rgb.astype(np.float64), (resolution, resolution, 3)
    ).copy()
    albedo[hit] = _paint_albedo(params, u, v)[hit]
    albedo = albedo.astype(np.float32)

    shaded = lambertian_shade(normals, albedo, params.state.lighting, mask)

    image = np.broadcast_to(
        params.identity.background_rgb.astype(np.float32), (resolution, resolution, 3)
    ).copy()
    image[hair_region] = params.identity.hair_rgb
    image[mask] = shaded[mask]

    return RenderBundle(image=image, normals=normals, albedo=albedo, shaded=shaded, mask=mask)


def positive_shade_fraction(params: FaceParams, resolution: int = 32) -> float:
    """Fraction of face pixels whose unclamped irradiance is positive.

    Geometry-only helper used by state sampling; expression does not enter.
    """
    hit, _, normal_world, _, v = _intersect_head(params, resolution)
    mask = hit & (v <= float(params.identity.shape[7]))
    if not np.any(mask):
        return 0.0
    irr = sh_irradiance(
        normal_world[mask], params.state.lighting.astype(np.float64), check_unit=False
    )
    return float(np.mean(irr > 0.0))
