"""renderlab: an educational ECS rendering framework.

The pieces: a pure ECS kernel (`Scene`, `System`, `SceneManager`), a transform
hierarchy (`TransformComponent`, `LinkComponent`, `propagate`), name-keyed
resource registries, a forward renderer with per-object and instanced draw
strategies over a deterministic software GPU device, `.pgscene` text
serialization, and a headless benchmark harness with a CLI.
"""

from .components import (
    CameraComponent,
    LightComponent,
    MaterialComponent,
    MeshComponent,
    SkyboxComponent,
)
from .ecs import (
    Component,
    Entity,
    GravityComponent,
    GravitySystem,
    InfoComponent,
    Scene,
    SceneManager,
    System,
    UnknownEntityError,
)
from .renderer import (
    FrameStats,
    RenderBatch,
    RenderError,
    build_batches,
    collect_renderables,
    readback,
    render_frame,
)
from .resources import (
    MaterialData,
    MaterialLib,
    MeshLib,
    MissingResourceError,
    ShaderLib,
    TextureData,
    TextureLib,
    lookup,
    reset_all_registries,
)
from .scenegraph import (
    CycleError,
    LinkComponent,
    TransformComponent,
    TransformSystem,
    propagate,
    set_parent,
)
from .scene_io import SceneFormatError, load_scene, save_scene

__version__ = "0.1.0"

__all__ = [
    "CameraComponent",
    "Component",
    "CycleError",
    "Entity",
    "FrameStats",
    "GravityComponent",
    "GravitySystem",
    "InfoComponent",
    "LightComponent",
    "LinkComponent",
    "MaterialComponent",
    "MaterialData",
    "MaterialLib",
    "MeshComponent",
    "MeshLib",
    "MissingResourceError",
    "RenderBatch",
    "RenderError",
    "Scene",
    "SceneFormatError",
    "SceneManager",
    "ShaderLib",
    "SkyboxComponent",
    "System",
    "TextureData",
    "TextureLib",
    "TransformComponent",
    "TransformSystem",
    "UnknownEntityError",
    "build_batches",
    "collect_renderables",
    "load_scene",
    "lookup",
    "propagate",
    "readback",
    "render_frame",
    "reset_all_registries",
    "save_scene",
    "set_parent",
]
