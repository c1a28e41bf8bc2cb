"""Small 4x4 matrix toolbox.

Conventions, pinned once and shared by every oracle in the test suite:
column vectors, right-handed coordinates, local matrix = T @ Rz @ Ry @ Rx @ S
with Euler angles given in degrees, and clip-space depth in [0, 1].
"""

from __future__ import annotations

import math

import numpy as np


def translation(t) -> np.ndarray:
    m = np.eye(4)
    m[:3, 3] = t
    return m


def scaling(s) -> np.ndarray:
    m = np.eye(4)
    m[0, 0], m[1, 1], m[2, 2] = s
    return m


def rotation_x(degrees: float) -> np.ndarray:
    c, s = math.cos(math.radians(degrees)), math.sin(math.radians(degrees))
    m = np.eye(4)
    m[1, 1], m[1, 2] = c, -s
    m[2, 1], m[2, 2] = s, c
    return m


def rotation_y(degrees: float) -> np.ndarray:
    c, s = math.cos(math.radians(degrees)), math.sin(math.radians(degrees))
    m = np.eye(4)
    m[0, 0], m[0, 2] = c, s
    m[2, 0], m[2, 2] = -s, c
    return m


def rotation_z(degrees: float) -> np.ndarray:
    c, s = math.cos(math.radians(degrees)), math.sin(math.radians(degrees))
    m = np.eye(4)
    m[0, 0], m[0, 1] = c, -s
    m[1, 0], m[1, 1] = s, c
    return m


def compose_trs(translation_xyz, rotation_deg_xyz, scale_xyz) -> np.ndarray:
    """Local matrix T @ R @ S with R = Rz @ Ry @ Rx from Euler XYZ degrees."""
    sx, sy, sz = (float(v) for v in scale_xyz)
    if sx == 0.0 or sy == 0.0 or sz == 0.0:
        raise ValueError(f"scale components must be nonzero, got {(sx, sy, sz)}")
    rx, ry, rz = (float(v) for v in rotation_deg_xyz)
    m = translation(translation_xyz)
    m = m @ rotation_z(rz) @ rotation_y(ry) @ rotation_x(rx)
    return m @ scaling((sx, sy, sz))


def perspective(fov_y_deg: float, aspect: float, near: float, far: float) -> np.ndarray:
    """Right-handed perspective projection mapping view z=-near..-far to depth 0..1."""
    if not 0 < near < far:
        raise ValueError(f"require 0 < near < far, got near={near} far={far}")
    f = 1.0 / math.tan(math.radians(fov_y_deg) / 2.0)
    m = np.zeros((4, 4))
    m[0, 0] = f / aspect
    m[1, 1] = f
    m[2, 2] = far / (near - far)
    m[2, 3] = far * near / (near - far)
    m[3, 2] = -1.0
    return m


def orthographic(left, right, bottom, top, near, far) -> np.ndarray:
    """Right-handed orthographic projection with depth in [0, 1]."""
    m = np.eye(4)
    m[0, 0] = 2.0 / (right - left)
    m[1, 1] = 2.0 / (top - bottom)
    m[2, 2] = -1.0 / (far - near)
    m[0, 3] = -(right + left) / (right - left)
    m[1, 3] = -(top + bottom) / (top - bottom)
    m[2, 3] = -near / (far - near)
    return m


def look_at(eye, target, up=(0.0, 1.0, 0.0)) -> np.ndarray:
    """View matrix for a camera at ``eye`` looking toward ``target``."""
    eye = np.asarray(eye, dtype=float)
    target = np.asarray(target, dtype=float)
    forward = target - eye
    norm = np.linalg.norm(forward)
    if norm == 0:
        raise ValueError("eye and target coincide")
    forward = forward / norm
    right = np.cross(forward, np.asarray(up, dtype=float))
    rnorm = np.linalg.norm(right)
    if rnorm < 1e-12:
        right = np.cross(forward, (0.0, 0.0, 1.0))
        rnorm = np.linalg.norm(right)
    right = right / rnorm
    true_up = np.cross(right, forward)
    m = np.eye(4)
    m[0, :3] = right
    m[1, :3] = true_up
    m[2, :3] = -forward
    m[0, 3] = -np.dot(right, eye)
    m[1, 3] = -np.dot(true_up, eye)
    m[2, 3] = np.dot(forward, eye)
    return m


def transform_point(matrix: np.ndarray, point) -> np.ndarray:
    """Apply a 4x4 matrix to a 3D point (w divide included)."""
    p = np.asarray((*point, 1.0), dtype=float)
    out = matrix @ p
    return out[:3] / out[3]


def normalized(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        return np.zeros_like(v)
    return v / n
