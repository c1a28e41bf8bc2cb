"""Headless benchmark harness: five scenes, two strategies, CSV + figures.

Scene recipes (model count, rotate-every-frame): 1=(1, no), 2=(10, no),
3=(50, no), 4=(50, yes), 5=(100, yes); every scene adds a skybox and a primary
camera. Models are identical duplicates of one low-poly cube sharing a single
material and mesh, which makes the per-object vs. instanced contrast an upper
bound: per-object issues one draw call per model, instanced collapses all
models into one draw call plus one for the skybox.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import psutil

from .components import (
    CameraComponent,
    LightComponent,
    MaterialComponent,
    MeshComponent,
    SkyboxComponent,
)
from .device import get_device
from .ecs import Component, Scene, System
from .renderer import STRATEGIES, render_frame
from .resources import (
    MaterialData,
    MaterialLib,
    MeshLib,
    ShaderLib,
    TextureLib,
    shaders_path,
    textures_path,
)
from .scene_io import FieldSpec, register_component
from .scenegraph import TransformComponent

# (model count, rotate every frame); the skybox flag is always true
SCENE_SPECS = {
    1: (1, False),
    2: (10, False),
    3: (50, False),
    4: (50, True),
    5: (100, True),
}

DEFAULT_WARMUP = 120
DEFAULT_FRAMES = 1000
TARGET_SIZE = 256
FIXED_TIMESTEP = 1.0 / 60.0

CSV_HEADER = ["scene", "strategy", "frames", "avg_fps", "avg_ms", "draw_calls", "cpu_mb", "gpu_mb"]


class SpinComponent(Component):
    """Y-axis rotation at a fixed angular velocity (degrees per second)."""

    def __init__(self, speed: float = 45.0):
        self.speed = speed


class SpinSystem(System):
    def __init__(self):
        super().__init__([SpinComponent, TransformComponent])

    def on_update_entity(self, ts, entity, components):
        spin, transform = components
        transform.rotation[1] += spin.speed * ts


register_component(SpinComponent, [FieldSpec("speed", "float")])


@dataclass
class BenchScene:
    index: int
    model_count: int
    rotate: bool
    skybox: bool = True


@dataclass
class BenchRecord:
    scene: int
    strategy: str
    frames: int
    avg_fps: float
    avg_ms: float
    draw_calls: int
    cpu_mb: float
    gpu_mb: Optional[float]

    def as_row(self):
        return [
            str(self.scene),
            self.strategy,
            str(self.frames),
            repr(self.avg_fps),
            repr(self.avg_ms),
            str(self.draw_calls),
            repr(self.cpu_mb),
            "" if self.gpu_mb is None else repr(self.gpu_mb),
        ]

    @classmethod
    def from_row(cls, row):
        return cls(
            scene=int(row[0]),
            strategy=row[1],
            frames=int(row[2]),
            avg_fps=float(row[3]),
            avg_ms=float(row[4]),
            draw_calls=int(row[5]),
            cpu_mb=float(row[6]),
            gpu_mb=float(row[7]) if row[7] != "" else None,
        )


def _ensure_bench_resources():
    from .resources import TextureData

    ShaderLib().build("default_mesh", shaders_path() / "lit_blinn_phong.py")
    TextureLib().build("bench_checker", TextureData(path=textures_path() / "checker.png"))
    MaterialLib().build(
        "M_bench",
        MaterialData("default_mesh", ["bench_checker"], glossiness=2.0,
                     base_color=(0.85, 0.65, 0.4, 1.0)),
    )
    MeshLib().build("bench_cube", "cube.npz")
    sky = textures_path() / "sky"
    TextureLib().build_cubemap(
        "bench_sky", [sky / f"{face}.png" for face in ("px", "nx", "py", "ny", "pz", "nz")]
    )


def describe_scene(index: int) -> BenchScene:
    if index not in SCENE_SPECS:
        raise ValueError(f"bench scene index must be 1..5, got {index}")
    count, rotate = SCENE_SPECS[index]
    return BenchScene(index=index, model_count=count, rotate=rotate)


def build_bench_scene(index: int) -> Scene:
    """Scene ``index`` per the recipe table: N cubes + skybox + camera."""
    spec = describe_scene(index)
    _ensure_bench_resources()

    scene = Scene(f"bench-{index}")
    camera = scene.enroll_entity()
    side = math.ceil(math.sqrt(spec.model_count))
    spacing = 2.4
    extent = (side - 1) * spacing
    camera_distance = max(8.0, extent * 1.2 + 6.0)
    scene.add_component(camera, TransformComponent((0.0, 0.0, camera_distance)))
    scene.add_component(camera, CameraComponent(fov_y=60.0, near=0.1, far=camera_distance * 4))

    sun = scene.enroll_entity()
    scene.add_component(sun, LightComponent(direction=(-0.4, -0.7, -0.6)))

    for i in range(spec.model_count):
        row, col = divmod(i, side)
        x = col * spacing - extent / 2.0
        y = row * spacing - extent / 2.0
        entity = scene.enroll_entity()
        scene.add_component(entity, TransformComponent((x, y, 0.0), (0.0, 20.0, 0.0),
                                                       (0.8, 0.8, 0.8)))
        scene.add_component(entity, MeshComponent("bench_cube"))
        scene.add_component(entity, MaterialComponent("M_bench"))
        if spec.rotate:
            scene.add_component(entity, SpinComponent(45.0))

    if spec.skybox:
        sky = scene.enroll_entity()
        scene.add_component(sky, SkyboxComponent("bench_sky"))

    if spec.rotate:
        scene.register_system(SpinSystem())
    return scene


def run_bench(scene: Scene, strategy: str, warmup_frames: int = DEFAULT_WARMUP,
              measured_frames: int = DEFAULT_FRAMES, scene_index: int = 0) -> BenchRecord:
    """Render headless, discard warmup, average the measured frames."""
    if measured_frames < 1:
        raise ValueError(f"measured frames must be >= 1, got {measured_frames}")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")

    target = get_device().create_target(TARGET_SIZE, TARGET_SIZE)
    stats = None
    for _ in range(warmup_frames):
        scene.tick(FIXED_TIMESTEP)
        stats = render_frame(scene, strategy, target)

    start = time.perf_counter()
    for _ in range(measured_frames):
        scene.tick(FIXED_TIMESTEP)
        stats = render_frame(scene, strategy, target)
    elapsed = time.perf_counter() - start

    avg_ms = elapsed * 1000.0 / measured_frames
    avg_fps = 1000.0 / avg_ms
    cpu_mb = psutil.Process().memory_info().rss / 1e6
    gpu_mb = get_device().allocated_bytes / 1e6

    return BenchRecord(
        scene=scene_index,
        strategy=strategy,
        frames=measured_frames,
        avg_fps=avg_fps,
        avg_ms=avg_ms,
        draw_calls=stats.draw_calls,
        cpu_mb=cpu_mb,
        gpu_mb=gpu_mb,
    )


def run_benchmarks(scene_indices, strategies, warmup_frames=DEFAULT_WARMUP,
                   measured_frames=DEFAULT_FRAMES, progress=None):
    records = []
    for index in scene_indices:
        for strategy in strategies:
            if progress:
                progress(f"scene {index} / {strategy}")
            scene = build_bench_scene(index)
            records.append(
                run_bench(scene, strategy, warmup_frames, measured_frames, scene_index=index)
            )
    return records


def write_csv(records, path):
    """Write records under the pinned header; floats use repr (locale-free)."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record.as_row())


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        return [BenchRecord.from_row(row) for row in reader]


def write_figures(records, out_dir) -> list[Path]:
    """Render fps and draw-call comparison charts next to the CSV report."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_strategy: dict[str, dict[int, BenchRecord]] = {}
    for record in records:
        by_strategy.setdefault(record.strategy, {})[record.scene] = record
    scenes = sorted({record.scene for record in records})
    paths = []

    for metric, ylabel, filename in (
        ("avg_fps", "average fps", "bench_fps.png"),
        ("draw_calls", "draw calls per frame", "bench_draw_calls.png"),
    ):
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        width = 0.8 / max(len(by_strategy), 1)
        for i, (strategy, by_scene) in enumerate(sorted(by_strategy.items())):
            xs = [s + (i - (len(by_strategy) - 1) / 2.0) * width for s in scenes]
            ys = [getattr(by_scene[s], metric) if s in by_scene else 0.0 for s in scenes]
            ax.bar(xs, ys, width=width, label=strategy)
        ax.set_xticks(scenes)
        ax.set_xticklabels([f"scene {s}" for s in scenes])
        ax.set_ylabel(ylabel)
        ax.legend()
        fig.tight_layout()
        out = out_dir / filename
        fig.savefig(out, dpi=120)
        plt.close(fig)
        paths.append(out)
    return paths
