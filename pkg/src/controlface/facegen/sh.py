"""Real spherical harmonics up to band 2, Lambertian irradiance.

Basis order: [1, y, z, x, xy, yz, 3z^2-1, xz, x^2-y^2] with the usual real-SH
normalization constants.
"""

from __future__ import annotations

import numpy as np

SH_C0 = 0.282095
SH_C1 = 0.488603
SH_C2 = 1.092548
SH_C3 = 0.315392
SH_C4 = 0.546274

UNIT_TOL = 1e-6


def sh_basis(normal: np.ndarray, check_unit: bool = True) -> np.ndarray:
    """Evaluate the 9 real SH basis functions at unit direction(s).

    `normal` is (..., 3); returns (..., 9). Inputs must be unit length within
    1e-6 unless check_unit is disabled for internal callers that already
    guarantee it.
    """
    n = np.asarray(normal, dtype=np.float64)
    if n.shape[-1] != 3:
        raise ValueError(f"expected (...,3) directions, got {n.shape}")
    if check_unit:
        norms = np.sqrt(np.sum(n * n, axis=-1))
        if norms.size and np.max(np.abs(norms - 1.0)) > UNIT_TOL:
            raise ValueError("sh_basis requires unit-length directions (|n|-1 > 1e-6)")
    x, y, z = n[..., 0], n[..., 1], n[..., 2]
    out = np.empty(n.shape[:-1] + (9,), dtype=np.float64)
    out[..., 0] = SH_C0
    out[..., 1] = SH_C1 * y
    out[..., 2] = SH_C1 * z
    out[..., 3] = SH_C1 * x
    out[..., 4] = SH_C2 * x * y
    out[..., 5] = SH_C2 * y * z
    out[..., 6] = SH_C3 * (3.0 * z * z - 1.0)
    out[..., 7] = SH_C2 * x * z
    out[..., 8] = SH_C4 * (x * x - y * y)
    return out


def sh_irradiance(normal: np.ndarray, coeffs: np.ndarray, check_unit: bool = True) -> np.ndarray:
    """Unclamped irradiance sum_k coeffs[k] * Y_k(normal); (...,3) -> (...)."""
    basis = sh_basis(normal, check_unit=check_unit)
    return basis @ np.asarray(coeffs, dtype=np.float64)


def band_energies(basis_values: np.ndarray) -> np.ndarray:
    """Per-band squared energy (E0, E1, E2) of 9 basis values; rotation invariant."""
    b = np.asarray(basis_values, dtype=np.float64)
    e0 = b[..., 0] ** 2
    e1 = np.sum(b[..., 1:4] ** 2, axis=-1)
    e2 = np.sum(b[..., 4:9] ** 2, axis=-1)
    return np.stack([e0, e1, e2], axis=-1)
