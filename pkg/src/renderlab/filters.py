"""Compute-pass image filters plus their CPU reference implementations.

``dispatch_image_filter`` runs on the device (compute pipeline over storage
textures); ``reference_grayscale`` / ``reference_box_blur`` are independent
CPU implementations used as oracles. Grayscale luma is pinned to
Y = 0.2126 R + 0.7152 G + 0.0722 B; stores quantize with floor(x * 255 + 0.5).
"""

from __future__ import annotations

import math

import numpy as np

from .device import StorageTexture, get_device
from .resources import ShaderLib, shaders_path

FILTER_KINDS = ("grayscale", "box-blur-3x3")

_FILTER_SHADERS = {
    "grayscale": "filter_grayscale",
    "box-blur-3x3": "filter_box_blur",
}


def dispatch_image_filter(image: np.ndarray, kind: str) -> np.ndarray:
    """Apply ``kind`` to an RGBA8 image via a device compute pass."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 4 or image.dtype != np.uint8:
        raise ValueError("image filters need (H, W, 4) uint8 input")
    if kind not in _FILTER_SHADERS:
        raise ValueError(f"unsupported filter kind {kind!r}; expected one of {FILTER_KINDS}")

    device = get_device()
    shader_name = _FILTER_SHADERS[kind]
    lib = ShaderLib()
    shader = lib.lookup(shader_name)
    if shader is None:
        shader = lib.build(shader_name, shaders_path() / f"{shader_name}.py")
    pipeline = device.create_compute_pipeline(shader.module, label=kind)

    src = device.create_texture(image, label="filter_src")
    dst = device.create_texture(np.zeros_like(image), label="filter_dst")

    height, width = image.shape[:2]
    wx, wy, _ = shader.module.workgroup_size
    compute_pass = device.begin_compute_pass()
    compute_pass.set_pipeline(pipeline)
    compute_pass.set_bind_group({"src": StorageTexture(src), "dst": StorageTexture(dst)})
    compute_pass.dispatch_workgroups(math.ceil(width / wx), math.ceil(height / wy))
    compute_pass.end()
    return dst.data.copy()


def reference_grayscale(image: np.ndarray) -> np.ndarray:
    """CPU oracle: per-pixel luma in float64 from the raw uint8 channels."""
    image = np.asarray(image, dtype=np.uint8)
    r = image[..., 0].astype(np.float64)
    g = image[..., 1].astype(np.float64)
    b = image[..., 2].astype(np.float64)
    luma = 0.2126 * r + 0.7152 * g + 0.0722 * b
    gray = np.floor(luma + 0.5).astype(np.uint8)
    out = image.copy()
    out[..., 0] = gray
    out[..., 1] = gray
    out[..., 2] = gray
    return out


def reference_box_blur(image: np.ndarray) -> np.ndarray:
    """CPU oracle: 3x3 mean with edge clamp, averaged over integer texels."""
    image = np.asarray(image, dtype=np.uint8)
    padded = np.pad(image.astype(np.float64), ((1, 1), (1, 1), (0, 0)), mode="edge")
    height, width = image.shape[:2]
    acc = np.zeros((height, width, 4), dtype=np.float64)
    for dy in range(3):
        for dx in range(3):
            acc += padded[dy:dy + height, dx:dx + width]
    return np.floor(acc / 9.0 + 0.5).astype(np.uint8)
