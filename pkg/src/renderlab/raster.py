"""Triangle rasterization internals for the software device.

Screen space has pixel centers at (x + 0.5, y + 0.5) with y down (row 0 is the
top of the image). A triangle is front-facing when its projected winding is
counter-clockwise in NDC, which makes the screen-space signed area positive
under the edge function used here. Depth compares use NDC z in [0, 1];
varyings are interpolated perspective-correct (v/w interpolated linearly, then
divided by interpolated 1/w).
"""

from __future__ import annotations

import numpy as np


def clip_triangle_near(pos: np.ndarray, var: np.ndarray):
    """Clip one triangle against the near plane (clip-space z >= 0).

    pos is (3, 4) clip positions, var is (3, K) packed varying rows. Returns a
    list of (pos3x4, var3xK) triangles (0, 1, or 2 of them).
    """
    out_pos: list[np.ndarray] = []
    out_var: list[np.ndarray] = []
    for i in range(3):
        j = (i + 1) % 3
        za, zb = float(pos[i, 2]), float(pos[j, 2])
        if za >= 0.0:
            out_pos.append(pos[i])
            out_var.append(var[i])
        if (za >= 0.0) != (zb >= 0.0):
            t = za / (za - zb)
            out_pos.append(pos[i] + t * (pos[j] - pos[i]))
            out_var.append(var[i] + t * (var[j] - var[i]))
    if len(out_pos) < 3:
        return []
    tris = []
    for k in range(1, len(out_pos) - 1):
        tris.append(
            (
                np.stack([out_pos[0], out_pos[k], out_pos[k + 1]]),
                np.stack([out_var[0], out_var[k], out_var[k + 1]]),
            )
        )
    return tris


def rasterize(
    screen_xy,  # (T, 3, 2) float64 pixel coordinates
    ndc_z,  # (T, 3) float64
    inv_w,  # (T, 3) float64
    var_over_w,  # (T, 3, K) float32 varyings premultiplied by 1/w, or None
    depth_buffer,  # (H, W) float32, mutated in place when depth_write
    *,
    cull_mode: str = "none",
    depth_compare: str = "less",
    depth_write: bool = True,
    coverage=None,  # (H, W) bool scratch, already cleared; None for depth-only
    vow_buffer=None,  # (H, W, K) float32 scratch
    invw_buffer=None,  # (H, W) float32 scratch
):
    """Rasterize triangles with depth test; fill interpolation scratch buffers.

    Returns the number of triangles that produced at least one fragment.
    """
    height, width = depth_buffer.shape
    shaded = var_over_w is not None
    drawn = 0
    for t in range(screen_xy.shape[0]):
        x0, y0 = screen_xy[t, 0]
        x1, y1 = screen_xy[t, 1]
        x2, y2 = screen_xy[t, 2]
        # edge(a, b, p) = cross2d(b - a, p - a); with y down, front-facing
        # (CCW in NDC) triangles have negative doubled area
        area2 = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if area2 == 0.0 or not np.isfinite(area2):
            continue
        if cull_mode == "back" and area2 > 0.0:
            continue
        if cull_mode == "front" and area2 < 0.0:
            continue

        xmin = max(0, int(np.ceil(min(x0, x1, x2) - 0.5)))
        xmax = min(width - 1, int(np.floor(max(x0, x1, x2) - 0.5)))
        ymin = max(0, int(np.ceil(min(y0, y1, y2) - 0.5)))
        ymax = min(height - 1, int(np.floor(max(y0, y1, y2) - 0.5)))
        if xmin > xmax or ymin > ymax:
            continue

        px = np.arange(xmin, xmax + 1, dtype=np.float64) + 0.5
        py = (np.arange(ymin, ymax + 1, dtype=np.float64) + 0.5)[:, None]
        # barycentric numerators: e0 opposite v0, etc., same orientation as area2
        e0 = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        e1 = (x0 - x2) * (py - y2) - (y0 - y2) * (px - x2)
        e2 = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
        if area2 > 0.0:
            inside = (e0 >= 0.0) & (e1 >= 0.0) & (e2 >= 0.0)
        else:
            inside = (e0 <= 0.0) & (e1 <= 0.0) & (e2 <= 0.0)
        if not inside.any():
            continue

        b0 = e0 / area2
        b1 = e1 / area2
        b2 = e2 / area2
        z = b0 * ndc_z[t, 0] + b1 * ndc_z[t, 1] + b2 * ndc_z[t, 2]

        region = (slice(ymin, ymax + 1), slice(xmin, xmax + 1))
        dbuf = depth_buffer[region]
        if depth_compare == "less":
            passes = inside & (z < dbuf)
        elif depth_compare == "lequal":
            passes = inside & (z <= dbuf)
        else:  # always
            passes = inside
        passes &= (z >= 0.0) & (z <= 1.0)
        if not passes.any():
            continue
        drawn += 1

        if depth_write:
            dbuf[passes] = z[passes]
        if shaded:
            iw = b0 * inv_w[t, 0] + b1 * inv_w[t, 1] + b2 * inv_w[t, 2]
            invw_buffer[region][passes] = iw[passes].astype(np.float32)
            vow = (
                b0[..., None] * var_over_w[t, 0]
                + b1[..., None] * var_over_w[t, 1]
                + b2[..., None] * var_over_w[t, 2]
            )
            vow_buffer[region][passes] = vow[passes].astype(np.float32)
            coverage[region][passes] = True
    return drawn
