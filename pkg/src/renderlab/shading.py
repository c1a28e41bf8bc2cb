"""CPU reference shading: the scalar forms the GPU shaders are held to.

These functions use plain Python float math on single samples, deliberately
separate from the vectorized shader sources executed by the device, so the
two routes stay independent checks of each other.
"""

from __future__ import annotations

import math

import numpy as np

from .math3d import transform_point


def _norm3(v):
    n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    if n == 0.0:
        return (0.0, 0.0, 0.0)
    return (v[0] / n, v[1] / n, v[2] / n)


def _dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def shade_blinn_phong(normal, light_dir, view_dir, light_color, albedo,
                      ka: float, kd: float, ks: float, glossiness: float):
    """Blinn-Phong sample: ambient + diffuse + specular, clamped to [0, 1].

    color = albedo * (ka + kd * max(N.L, 0)) * lightColor
          + ks * max(N.H, 0) ** (32 * glossiness) * lightColor
    with H = normalize(L + V). The specular term drops out entirely on
    backfaces (N.L <= 0). Inputs are assumed normalized.
    """
    n, l, v = tuple(normal), tuple(light_dir), tuple(view_dir)
    ndl = max(_dot3(n, l), 0.0)
    h = _norm3((l[0] + v[0], l[1] + v[1], l[2] + v[2]))
    ndh = max(_dot3(n, h), 0.0)
    exponent = 32.0 * glossiness
    spec = ks * (ndh ** exponent) if ndl > 0.0 else 0.0
    out = []
    for i in range(3):
        c = albedo[i] * (ka + kd * ndl) * light_color[i] + spec * light_color[i]
        out.append(min(max(c, 0.0), 1.0))
    return tuple(out)


def reflect_dir(incident, normal):
    """Mirror ``incident`` about ``normal`` (both 3-vectors)."""
    d = _dot3(incident, normal)
    return (
        incident[0] - 2.0 * d * normal[0],
        incident[1] - 2.0 * d * normal[1],
        incident[2] - 2.0 * d * normal[2],
    )


# cubemap face table: face index -> (sc, tc, ma) selectors
# ordering matches the device: +X -X +Y -Y +Z -Z

def _cube_face(direction):
    x, y, z = direction
    ax, ay, az = abs(x), abs(y), abs(z)
    if ax >= ay and ax >= az:
        if x >= 0:
            return 0, -z, -y, ax
        return 1, z, -y, ax
    if ay > ax and ay >= az:
        if y >= 0:
            return 2, x, z, ay
        return 3, x, -z, ay
    if z >= 0:
        return 4, x, -y, az
    return 5, -x, -y, az


def sample_environment(direction, cubemap: np.ndarray):
    """Bilinear cubemap sample along ``direction``; cubemap is (6, H, W, 4) uint8.

    Face selection uses the dominant-axis table shared with the device
    sampler. Returns an RGB tuple of floats in [0, 1].
    """
    if _dot3(direction, direction) == 0.0:
        raise ValueError("sample direction must be nonzero")
    face, sc, tc, ma = _cube_face(direction)
    u = (sc / ma + 1.0) * 0.5
    v = (tc / ma + 1.0) * 0.5
    data = cubemap[face]
    h, w = data.shape[0], data.shape[1]
    x = u * w - 0.5
    y = v * h - 0.5
    x0, y0 = math.floor(x), math.floor(y)
    fx, fy = x - x0, y - y0
    result = []
    for c in range(3):
        acc = 0.0
        for (yy, xx, weight) in (
            (y0, x0, (1 - fx) * (1 - fy)),
            (y0, x0 + 1, fx * (1 - fy)),
            (y0 + 1, x0, (1 - fx) * fy),
            (y0 + 1, x0 + 1, fx * fy),
        ):
            yy = min(max(yy, 0), h - 1)
            xx = min(max(xx, 0), w - 1)
            acc += (data[yy, xx, c] / 255.0) * weight
        result.append(acc)
    return tuple(result)


def shadow_visibility(world_position, light_view_proj: np.ndarray,
                      shadow_map: np.ndarray, bias: float) -> float:
    """3x3 percentage-closer-filtered visibility; 1.0 means fully lit.

    Projects the world position into the light's clip space, compares the
    receiver depth (minus ``bias``) against the stored depth in a 3x3 texel
    neighborhood, and averages the nine pass/fail results. Positions outside
    the light frustum count as lit.
    """
    ndc = transform_point(light_view_proj, world_position)
    u = (ndc[0] + 1.0) * 0.5
    v = (1.0 - ndc[1]) * 0.5
    depth = ndc[2]
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0 and 0.0 <= depth <= 1.0):
        return 1.0
    h, w = shadow_map.shape
    px = int(math.floor(u * w))  # texel containing (u, v)
    py = int(math.floor(v * h))
    total = 0.0
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            ix = min(max(px + dx, 0), w - 1)
            iy = min(max(py + dy, 0), h - 1)
            stored = float(shadow_map[iy, ix])
            total += 1.0 if depth - bias <= stored else 0.0
    return total / 9.0


def slope_scaled_bias(n_dot_l: float, base: float = 0.005) -> float:
    """Depth bias grown with the surface slope; capped at 10x base."""
    ndl = max(n_dot_l, 0.05)
    slope = math.sqrt(max(1.0 - ndl * ndl, 0.0)) / ndl
    return min(base * (1.0 + slope), base * 10.0)
