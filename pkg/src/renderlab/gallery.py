"""Tiered example gallery: small scenes covering the core techniques.

Each example builds a self-contained scene and renders it offscreen; the CLI
(`renderlab examples run <name>`) saves the result as PNG files. The same
builders back the golden-image tests, so every scene is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from PIL import Image

from .components import (
    CameraComponent,
    LightComponent,
    MaterialComponent,
    MeshComponent,
    SkyboxComponent,
)
from .device import get_device
from .ecs import InfoComponent, Scene
from .filters import dispatch_image_filter
from .renderer import readback, render_frame
from .resources import (
    MaterialData,
    MaterialLib,
    MeshLib,
    ShaderLib,
    TextureData,
    TextureLib,
    shaders_path,
    textures_path,
)
from .scenegraph import LinkComponent, TransformComponent, set_parent

SKY_FACES = ("px", "nx", "py", "ny", "pz", "nz")


def _sky_cubemap(name="sky"):
    sky_dir = textures_path() / "sky"
    return TextureLib().build_cubemap(name, [sky_dir / f"{f}.png" for f in SKY_FACES])


def _camera(scene, position=(0.0, 0.0, 4.0), rotation=(0.0, 0.0, 0.0), fov_y=60.0):
    camera = scene.enroll_entity()
    scene.add_component(camera, TransformComponent(position, rotation))
    scene.add_component(camera, CameraComponent(fov_y=fov_y))
    scene.add_component(camera, InfoComponent("camera"))
    return camera


def build_triangle_scene() -> Scene:
    ShaderLib().build("vertex_color", shaders_path() / "vertex_color.py")
    from . import meshes

    MeshLib().build("triangle", meshes.triangle())
    MaterialLib().build("M_triangle", MaterialData("vertex_color"))
    scene = Scene("triangle")
    _camera(scene, (0.0, 0.0, 2.0))
    entity = scene.enroll_entity()
    scene.add_component(entity, TransformComponent())
    scene.add_component(entity, MeshComponent("triangle"))
    scene.add_component(entity, MaterialComponent("M_triangle"))
    scene.add_component(entity, InfoComponent("triangle"))
    return scene


def build_textured_cube_scene() -> Scene:
    ShaderLib().build("unlit", shaders_path() / "unlit.py")
    TextureLib().build("checker", TextureData(path=textures_path() / "checker.png"))
    MeshLib().build("cube", "cube.npz")
    MaterialLib().build("M_checker", MaterialData("unlit", ["checker"]))
    scene = Scene("textured-cube")
    _camera(scene, (0.0, 0.0, 4.0))
    cube = scene.enroll_entity()
    scene.add_component(cube, TransformComponent(rotation=(25.0, 35.0, 0.0)))
    scene.add_component(cube, MeshComponent("cube"))
    scene.add_component(cube, MaterialComponent("M_checker"))
    scene.add_component(cube, InfoComponent("cube"))
    return scene


def build_scenegraph_scene() -> Scene:
    ShaderLib().build("unlit", shaders_path() / "unlit.py")
    TextureLib().build("checker", TextureData(path=textures_path() / "checker.png"))
    TextureLib().build("bricks", TextureData(path=textures_path() / "bricks.png"))
    MeshLib().build("cube", "cube.npz")
    MaterialLib().build("M_checker", MaterialData("unlit", ["checker"]))
    MaterialLib().build("M_bricks", MaterialData("unlit", ["bricks"]))
    scene = Scene("scenegraph")
    _camera(scene, (0.0, 2.5, 7.0), rotation=(-18.0, 0.0, 0.0))

    root = scene.enroll_entity()
    scene.add_component(root, TransformComponent(rotation=(0.0, 30.0, 0.0)))
    scene.add_component(root, InfoComponent("root"))
    scene.add_component(root, LinkComponent(None))
    scene.add_component(root, MeshComponent("cube"))
    scene.add_component(root, MaterialComponent("M_bricks"))

    for i, offset in enumerate(((-2.2, 0.8, 0.0), (2.2, -0.8, 0.0))):
        child = scene.enroll_entity()
        scene.add_component(
            child, TransformComponent(offset, (0.0, 45.0, 0.0), (0.55, 0.55, 0.55))
        )
        scene.add_component(child, InfoComponent(f"satellite-{i}"))
        scene.add_component(child, MeshComponent("cube"))
        scene.add_component(child, MaterialComponent("M_checker"))
        set_parent(scene, child, root)
    return scene


BLINN_PHONG_PARAMS = dict(ambient=0.1, diffuse=0.7, specular=0.2, glossiness=2.0)
BLINN_PHONG_LIGHT_DIR = (-0.45, -0.35, -0.82)


def build_blinn_phong_scene() -> Scene:
    ShaderLib().build("default_mesh", shaders_path() / "lit_blinn_phong.py")
    from . import meshes

    MeshLib().build("cube", "cube.npz")
    MeshLib().build("sphere", "sphere.npz")
    MaterialLib().build(
        "M_lit",
        MaterialData("default_mesh", base_color=(0.82, 0.34, 0.27, 1.0), **BLINN_PHONG_PARAMS),
    )
    scene = Scene("blinn-phong")
    _camera(scene, (0.0, 0.0, 4.0))
    sun = scene.enroll_entity()
    scene.add_component(sun, LightComponent(direction=BLINN_PHONG_LIGHT_DIR))

    cube = scene.enroll_entity()
    scene.add_component(cube, TransformComponent((-0.2, 0.0, 0.0), (0.0, 30.0, 0.0)))
    scene.add_component(cube, MeshComponent("cube"))
    scene.add_component(cube, MaterialComponent("M_lit"))
    scene.add_component(cube, InfoComponent("model"))

    sphere = scene.enroll_entity()
    scene.add_component(sphere, TransformComponent((1.8, 0.9, -0.8), scale=(0.7, 0.7, 0.7)))
    scene.add_component(sphere, MeshComponent("sphere"))
    scene.add_component(sphere, MaterialComponent("M_lit"))
    scene.add_component(sphere, InfoComponent("sphere"))
    return scene


def build_skybox_scene() -> Scene:
    _sky_cubemap()
    scene = Scene("skybox")
    _camera(scene, (0.0, 0.0, 0.0), rotation=(10.0, -20.0, 0.0))
    sky = scene.enroll_entity()
    scene.add_component(sky, SkyboxComponent("sky"))
    scene.add_component(sky, InfoComponent("sky"))
    return scene


def build_environment_scene() -> Scene:
    ShaderLib().build("environment", shaders_path() / "environment.py")
    _sky_cubemap()
    MeshLib().build("sphere", "sphere.npz")
    MaterialLib().build(
        "M_mirror", MaterialData("environment", ["sky"], base_color=(0.92, 0.95, 1.0, 1.0))
    )
    scene = Scene("environment")
    _camera(scene, (0.0, 0.0, 3.2))
    sky = scene.enroll_entity()
    scene.add_component(sky, SkyboxComponent("sky"))
    ball = scene.enroll_entity()
    scene.add_component(ball, TransformComponent())
    scene.add_component(ball, MeshComponent("sphere"))
    scene.add_component(ball, MaterialComponent("M_mirror"))
    scene.add_component(ball, InfoComponent("mirror-ball"))
    return scene


SHADOW_LIGHT_DIR = (-0.45, -1.0, -0.35)


def build_shadow_scene() -> Scene:
    ShaderLib().build("default_mesh", shaders_path() / "lit_blinn_phong.py")
    from . import meshes

    MeshLib().build("cube", "cube.npz")
    MeshLib().build("ground", meshes.plane(4.0, uv_scale=4.0))
    MaterialLib().build(
        "M_ground", MaterialData("default_mesh", base_color=(0.75, 0.78, 0.8, 1.0),
                                 **BLINN_PHONG_PARAMS)
    )
    MaterialLib().build(
        "M_box", MaterialData("default_mesh", base_color=(0.8, 0.45, 0.25, 1.0),
                              **BLINN_PHONG_PARAMS)
    )
    scene = Scene("shadow")
    _camera(scene, (0.0, 3.5, 7.5), rotation=(-26.0, 0.0, 0.0))
    sun = scene.enroll_entity()
    scene.add_component(
        sun,
        LightComponent(direction=SHADOW_LIGHT_DIR, casts_shadows=True,
                       shadow_extent=8.0, shadow_distance=14.0),
    )
    ground = scene.enroll_entity()
    scene.add_component(ground, TransformComponent((0.0, 0.0, 0.0)))
    scene.add_component(ground, MeshComponent("ground"))
    scene.add_component(ground, MaterialComponent("M_ground"))
    scene.add_component(ground, InfoComponent("ground"))

    box = scene.enroll_entity()
    scene.add_component(box, TransformComponent((0.0, 1.2, 0.0), (0.0, 25.0, 0.0),
                                                (0.7, 0.7, 0.7)))
    scene.add_component(box, MeshComponent("cube"))
    scene.add_component(box, MaterialComponent("M_box"))
    scene.add_component(box, InfoComponent("box"))
    return scene


@dataclass
class Example:
    name: str
    tier: str
    description: str
    build: Callable[[], Scene]


EXAMPLES = {
    example.name: example
    for example in (
        Example("triangle", "beginner", "first triangle with per-corner colors",
                build_triangle_scene),
        Example("textured-cube", "beginner", "checker-textured cube", build_textured_cube_scene),
        Example("scenegraph", "beginner", "parent-child transform hierarchy",
                build_scenegraph_scene),
        Example("blinn-phong", "intermediate", "Blinn-Phong lit model",
                build_blinn_phong_scene),
        Example("environment", "intermediate", "mirror ball sampling the sky cubemap",
                build_environment_scene),
        Example("compute-filter", "advanced", "compute-pass image filters over a rendering",
                build_textured_cube_scene),
        Example("shadow", "advanced", "shadow-mapped directional light with soft edges",
                build_shadow_scene),
    )
}


def list_examples():
    return [(e.name, e.tier, e.description) for e in EXAMPLES.values()]


def save_png(pixels: np.ndarray, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(pixels).save(path)
    return path


def run_example(name: str, out_dir, size: int = 512, strategy: str = "instanced"):
    """Render one example offscreen and write its PNG output(s)."""
    example = EXAMPLES.get(name)
    if example is None:
        raise KeyError(f"unknown example {name!r}; try one of {sorted(EXAMPLES)}")
    scene = example.build()
    target = get_device().create_target(size, size)
    stats = render_frame(scene, strategy, target)
    pixels = readback(target)
    written = [save_png(pixels, Path(out_dir) / f"{name}.png")]
    if name == "compute-filter":
        for kind, suffix in (("grayscale", "grayscale"), ("box-blur-3x3", "blur")):
            filtered = dispatch_image_filter(pixels, kind)
            written.append(save_png(filtered, Path(out_dir) / f"{name}_{suffix}.png"))
    return scene, stats, written
