"""Forward renderer over the software device.

Two selectable draw strategies cover the same scenes: ``per-object`` submits
one draw call per renderable entity, ``instanced`` groups renderables by
(material, mesh) and submits one instanced draw call per group. Both walk the
same collection order and run the same shader math, so they produce the same
image; only the draw-call counts (and CPU-side cost) differ.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import math3d
from .components import (
    CameraComponent,
    LightComponent,
    MaterialComponent,
    MeshComponent,
    SkyboxComponent,
)
from .device import BoundTexture, Sampler, get_device
from .ecs import Scene
from .resources import (
    MaterialHandle,
    MeshHandle,
    MeshLib,
    MaterialLib,
    MissingResourceError,
    ShaderLib,
    TextureLib,
    shaders_path,
)
from .scenegraph import TransformComponent, propagate

STRATEGIES = ("per-object", "instanced")


class RenderError(RuntimeError):
    """Frame cannot be rendered (missing camera, bad strategy, lost device)."""


@dataclass
class RenderBatch:
    """Renderables sharing one (material, mesh) key, drawn in a single call."""

    material: MaterialHandle
    mesh: MeshHandle
    matrices: list = field(default_factory=list)
    normal_matrices: list = field(default_factory=list)

    @property
    def instance_count(self) -> int:
        return len(self.matrices)


@dataclass
class FrameStats:
    """Counters for one rendered frame.

    ``draw_calls`` counts color-pass draws only (the quantity the strategy
    comparison is about); shadow-pass draws are reported separately.
    """

    draw_calls: int = 0
    instances: int = 0
    batches: int = 0
    frame_ms: float = 0.0
    shadow_draw_calls: int = 0


def collect_renderables(scene: Scene):
    """Entities carrying Mesh+Material+Transform, in enrollment order.

    Returns (entity, mesh handle, material handle, world matrix float32,
    normal matrix float32) tuples; propagation must have run this frame.
    """
    mesh_lib, material_lib = MeshLib(), MaterialLib()
    out = []
    for entity, mesh_c, material_c, transform in scene.query(
        MeshComponent, MaterialComponent, TransformComponent
    ):
        mesh = mesh_lib.lookup(mesh_c.mesh)
        if mesh is None:
            raise MissingResourceError(f"{entity!r} references unbuilt mesh {mesh_c.mesh!r}")
        material = material_lib.lookup(material_c.material)
        if material is None:
            raise MissingResourceError(
                f"{entity!r} references unbuilt material {material_c.material!r}"
            )
        world = transform.world_matrix
        linear = world[:3, :3]
        try:
            normal_matrix = np.linalg.inv(linear).T
        except np.linalg.LinAlgError:
            normal_matrix = linear
        out.append(
            (
                entity,
                mesh,
                material,
                world.astype(np.float32),
                normal_matrix.astype(np.float32),
            )
        )
    return out


def build_batches(renderables) -> list[RenderBatch]:
    """Partition renderables by (material, mesh) in first-appearance order."""
    batches: dict[tuple, RenderBatch] = {}
    for _entity, mesh, material, world, normal_matrix in renderables:
        key = (material.name, mesh.name)
        batch = batches.get(key)
        if batch is None:
            batch = batches[key] = RenderBatch(material=material, mesh=mesh)
        batch.matrices.append(world)
        batch.normal_matrices.append(normal_matrix)
    return list(batches.values())


def readback(target) -> np.ndarray:
    """RGBA8 pixels of an offscreen target, rows top-to-bottom, bit-exact."""
    if not getattr(target, "offscreen", False):
        raise ValueError("cannot read back a window surface; render offscreen instead")
    return target.read_pixels()


# ---------------------------------------------------------------------------
# internals
# ---------------------------------------------------------------------------

_BUILTIN_SHADERS = ("skybox", "shadow_depth")


def _ensure_builtin_shaders():
    lib = ShaderLib()
    for name in _BUILTIN_SHADERS:
        if lib.lookup(name) is None:
            lib.build(name, shaders_path() / f"{name}.py")


def _pipeline_for(shader_handle, **state):
    cache = getattr(shader_handle, "_pipelines", None)
    if cache is None:
        cache = shader_handle._pipelines = {}
    key = tuple(sorted(state.items()))
    pipeline = cache.get(key)
    if pipeline is None:
        pipeline = get_device().create_render_pipeline(shader_handle.module, **state)
        cache[key] = pipeline
    return pipeline


def _mesh_arrays(mesh: MeshHandle):
    arrays = getattr(mesh, "_gpu", None)
    if arrays is None:
        device = get_device()
        arrays = {
            "position": device.create_buffer(mesh.data.positions, f"{mesh.name}.position"),
            "normal": device.create_buffer(mesh.data.normals, f"{mesh.name}.normal"),
            "uv": device.create_buffer(mesh.data.uvs, f"{mesh.name}.uv"),
            "index": device.create_buffer(mesh.data.indices, f"{mesh.name}.index"),
        }
        mesh._gpu = arrays
    return arrays


def _find_primary_camera(scene: Scene):
    primaries = [
        (entity, camera)
        for entity, camera in scene.query(CameraComponent)
        if camera.primary
    ]
    if not primaries:
        raise RenderError("no primary camera in scene")
    if len(primaries) > 1:
        raise RenderError(f"{len(primaries)} primary cameras in scene, expected exactly one")
    return primaries[0]


def _camera_matrices(scene: Scene, entity, camera: CameraComponent, aspect: float):
    transform = scene.get_component(entity, TransformComponent)
    world = transform.world_matrix if transform is not None else np.eye(4)
    view = np.linalg.inv(world)
    if camera.projection == "perspective":
        proj = math3d.perspective(camera.fov_y, aspect, camera.near, camera.far)
    else:
        s = camera.ortho_size
        proj = math3d.orthographic(-s * aspect, s * aspect, -s, s, camera.near, camera.far)
    eye = world[:3, 3]
    return view, proj, eye


def compute_light_matrices(light: LightComponent, center):
    """Orthographic view/projection for the shadow pass of a directional light."""
    direction = math3d.normalized(light.direction)
    eye = np.asarray(center, dtype=float) - direction * light.shadow_distance
    up = (0.0, 1.0, 0.0) if abs(direction[1]) < 0.99 else (0.0, 0.0, 1.0)
    view = math3d.look_at(eye, center, up)
    e = light.shadow_extent
    proj = math3d.orthographic(-e, e, -e, e, 0.1, light.shadow_distance * 2.0)
    return view, proj


def _material_bindings(material: MaterialHandle):
    bindings = dict(material.uniforms)
    for tex in material.textures:
        if tex.kind == "cube" and "sky_cube" not in bindings:
            bindings["sky_cube"] = BoundTexture(tex.texture, Sampler("linear", "clamp"))
        elif tex.kind == "2d" and "albedo_tex" not in bindings:
            bindings["albedo_tex"] = BoundTexture(tex.texture, Sampler("linear", "repeat"))
    return bindings


def _scene_center(renderables):
    if not renderables:
        return np.zeros(3)
    translations = np.stack([world[:3, 3] for _, _, _, world, _ in renderables])
    return (translations.min(axis=0) + translations.max(axis=0)) / 2.0


def _draw_group(render_pass, frame_bindings, mesh, material, matrices, normal_matrices):
    device = get_device()
    arrays = _mesh_arrays(mesh)
    pipeline = _pipeline_for(material.shader, cull_mode="back")
    render_pass.set_pipeline(pipeline)
    bindings = dict(frame_bindings)
    bindings.update(_material_bindings(material))
    render_pass.set_bind_group(bindings)
    render_pass.set_vertex_buffers(
        {"position": arrays["position"], "normal": arrays["normal"], "uv": arrays["uv"]}
    )
    render_pass.set_index_buffer(arrays["index"])
    # instancing needs CPU-side staging buffers for the per-instance matrices
    model = device.create_buffer(np.stack(matrices).astype(np.float32))
    normal = device.create_buffer(np.stack(normal_matrices).astype(np.float32))
    render_pass.set_instance_buffers({"model": model, "normal_mat": normal})
    render_pass.draw_indexed(instance_count=len(matrices))


def _render_shadow_map(light, renderables, center):
    device = get_device()
    size = light.shadow_map_size
    depth_texture = device.create_depth_texture(size, size, "shadow_map")
    target = _ShadowTarget(depth_texture)
    view, proj = compute_light_matrices(light, center)
    light_view_proj = (proj @ view).astype(np.float32)

    _ensure_builtin_shaders()
    shadow_shader = ShaderLib().get("shadow_depth")
    pipeline = _pipeline_for(shadow_shader, cull_mode="none")

    render_pass = device.begin_render_pass(target, clear_depth=1.0)
    render_pass.set_pipeline(pipeline)
    render_pass.set_bind_group({"light_view_proj": light_view_proj})
    draws = 0
    for batch in build_batches(renderables):
        arrays = _mesh_arrays(batch.mesh)
        render_pass.set_vertex_buffers(
            {"position": arrays["position"], "normal": arrays["normal"], "uv": arrays["uv"]}
        )
        render_pass.set_index_buffer(arrays["index"])
        model = device.create_buffer(np.stack(batch.matrices).astype(np.float32))
        normal = device.create_buffer(np.stack(batch.normal_matrices).astype(np.float32))
        render_pass.set_instance_buffers({"model": model, "normal_mat": normal})
        render_pass.draw_indexed(instance_count=batch.instance_count)
        draws += 1
    render_pass.end()
    return depth_texture, light_view_proj, draws


class _ShadowTarget:
    """Depth-only attachment wrapper for the shadow pass."""

    offscreen = True
    color = None

    def __init__(self, depth_texture):
        self.depth = depth_texture.data
        self.width = depth_texture.width
        self.height = depth_texture.height


def render_frame(scene: Scene, strategy: str, target,
                 clear_color=(0.1, 0.1, 0.12, 1.0)) -> FrameStats:
    """Render one frame of ``scene`` into ``target`` with the given strategy."""
    if strategy not in STRATEGIES:
        raise RenderError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    start = time.perf_counter()
    device = get_device()

    propagate(scene)
    camera_entity, camera = _find_primary_camera(scene)
    aspect = target.width / target.height
    view, proj, eye = _camera_matrices(scene, camera_entity, camera, aspect)
    view_proj = (proj @ view).astype(np.float32)

    renderables = collect_renderables(scene)
    batches = build_batches(renderables)

    lights = [light for _, light in scene.query(LightComponent)]
    light = lights[0] if lights else None

    frame_bindings = {
        "view_proj": view_proj,
        "camera_pos": eye.astype(np.float32),
        "shadow_map": None,
        "albedo_tex": None,
    }
    if light is not None:
        to_light = -math3d.normalized(light.direction)
        frame_bindings["light_dir_to"] = to_light.astype(np.float32)
        frame_bindings["light_color"] = (
            light.color * light.intensity
        ).astype(np.float32)

    stats = FrameStats(batches=len(batches))

    if light is not None and light.casts_shadows and renderables:
        shadow_map, light_view_proj, shadow_draws = _render_shadow_map(
            light, renderables, _scene_center(renderables)
        )
        stats.shadow_draw_calls = shadow_draws
        frame_bindings["shadow_map"] = BoundTexture(shadow_map, Sampler("nearest", "clamp"))
        frame_bindings["shadow_view_proj"] = light_view_proj
        frame_bindings["shadow_bias_base"] = np.float32(0.005)

    render_pass = device.begin_render_pass(target, clear_color=clear_color, clear_depth=1.0)

    if strategy == "instanced":
        for batch in batches:
            _draw_group(
                render_pass, frame_bindings, batch.mesh, batch.material,
                batch.matrices, batch.normal_matrices,
            )
    else:
        for _entity, mesh, material, world, normal_matrix in renderables:
            _draw_group(
                render_pass, frame_bindings, mesh, material, [world], [normal_matrix]
            )

    skyboxes = [s for _, s in scene.query(SkyboxComponent)]
    if skyboxes:
        _draw_skybox(render_pass, skyboxes[0], view, proj)

    render_pass.end()
    stats.draw_calls = render_pass.draw_calls
    stats.instances = render_pass.instances_drawn
    stats.frame_ms = (time.perf_counter() - start) * 1000.0
    return stats


_SKYBOX_MESH_NAME = "__skybox_cube"


def _draw_skybox(render_pass, skybox: SkyboxComponent, view, proj):
    from . import meshes  # local import to avoid a cycle at module load

    cubemap = TextureLib().lookup(skybox.cubemap)
    if cubemap is None or cubemap.kind != "cube":
        raise MissingResourceError(f"skybox references unbuilt cubemap {skybox.cubemap!r}")
    _ensure_builtin_shaders()
    shader = ShaderLib().get("skybox")
    pipeline = _pipeline_for(shader, cull_mode="front", depth_write=False,
                             depth_compare="lequal")
    mesh_lib = MeshLib()
    mesh = mesh_lib.lookup(_SKYBOX_MESH_NAME)
    if mesh is None:
        mesh = mesh_lib.build(_SKYBOX_MESH_NAME, meshes.cube(1.0))
    arrays = _mesh_arrays(mesh)

    rotation_only = view.copy()
    rotation_only[:3, 3] = 0.0
    sky_view_proj = (proj @ rotation_only).astype(np.float32)

    render_pass.set_pipeline(pipeline)
    render_pass.set_bind_group(
        {
            "sky_view_proj": sky_view_proj,
            "sky_cube": BoundTexture(cubemap.texture, Sampler("linear", "clamp")),
        }
    )
    render_pass.set_vertex_buffers(
        {"position": arrays["position"], "normal": arrays["normal"], "uv": arrays["uv"]}
    )
    render_pass.set_index_buffer(arrays["index"])
    identity = np.eye(4, dtype=np.float32)[None]
    render_pass.set_instance_buffers(
        {"model": identity, "normal_mat": np.eye(3, dtype=np.float32)[None]}
    )
    render_pass.draw_indexed(instance_count=1)
