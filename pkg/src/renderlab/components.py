"""Renderable, camera, light, and skybox components."""

from __future__ import annotations

import numpy as np

from .ecs import Component


class MeshComponent(Component):
    """References a mesh registered in MeshLib by name."""

    def __init__(self, mesh: str):
        self.mesh = mesh


class MaterialComponent(Component):
    """References a material registered in MaterialLib by name."""

    def __init__(self, material: str):
        self.material = material


class CameraComponent(Component):
    """Perspective or orthographic camera; exactly one primary per scene."""

    def __init__(self, projection: str = "perspective", fov_y: float = 60.0,
                 near: float = 0.1, far: float = 100.0, primary: bool = True,
                 ortho_size: float = 5.0):
        if projection not in ("perspective", "orthographic"):
            raise ValueError(f"unknown projection kind {projection!r}")
        if not 0 < near < far:
            raise ValueError(f"require 0 < near < far, got near={near} far={far}")
        self.projection = projection
        self.fov_y = fov_y
        self.near = near
        self.far = far
        self.primary = primary
        self.ortho_size = ortho_size


class LightComponent(Component):
    """Directional light. ``direction`` is the direction the light travels."""

    def __init__(self, direction=(-0.5, -1.0, -0.3), color=(1.0, 1.0, 1.0),
                 intensity: float = 1.0, casts_shadows: bool = False,
                 shadow_extent: float = 10.0, shadow_distance: float = 20.0,
                 shadow_map_size: int = 512):
        direction = np.asarray(direction, dtype=np.float64)
        if not np.linalg.norm(direction) > 0:
            raise ValueError("light direction must be nonzero")
        self.direction = direction
        self.color = np.asarray(color, dtype=np.float64)
        self.intensity = intensity
        self.casts_shadows = casts_shadows
        self.shadow_extent = shadow_extent
        self.shadow_distance = shadow_distance
        self.shadow_map_size = shadow_map_size


class SkyboxComponent(Component):
    """Background cube sampled from a cubemap texture registered in TextureLib."""

    def __init__(self, cubemap: str):
        self.cubemap = cubemap
