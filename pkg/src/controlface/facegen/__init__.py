"""Procedural parametric face world: parameters, renderer, inverse fitting."""

from .params import (
    ALBEDO_RANGES,
    BACKGROUND_RANGES,
    EXPRESSION_RANGES,
    FaceParams,
    IdentityParams,
    LIGHTING_RANGES,
    PARAM_DIM,
    POSE_RANGES,
    SHAPE_RANGES,
    StateParams,
    params_equal,
)
from .render import (
    ControlMaps,
    RenderBundle,
    SUPPORTED_RESOLUTIONS,
    lambertian_shade,
    make_control,
    positive_shade_fraction,
    render_face,
    rotation_matrix,
)
from .sampling import sample_face, sample_identity, sample_state
from .sh import band_energies, sh_basis, sh_irradiance
from .fitting import FitResult, fit_params

__all__ = [
    "ALBEDO_RANGES",
    "BACKGROUND_RANGES",
    "ControlMaps",
    "EXPRESSION_RANGES",
    "FaceParams",
    "FitResult",
    "IdentityParams",
    "LIGHTING_RANGES",
    "PARAM_DIM",
    "POSE_RANGES",
    "RenderBundle",
    "SHAPE_RANGES",
    "SUPPORTED_RESOLUTIONS",
    "StateParams",
    "band_energies",
    "fit_params",
    "lambertian_shade",
    "make_control",
    "params_equal",
    "positive_shade_fraction",
    "render_face",
    "rotation_matrix",
    "sample_face",
    "sample_identity",
    "sample_state",
    "sh_basis",
    "sh_irradiance",
]
