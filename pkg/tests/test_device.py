import numpy as np
import pytest

from renderlab.device import (
    BoundTexture,
    Device,
    Sampler,
    ShaderCompileError,
    StorageTexture,
    float_to_unorm8,
)
from renderlab.shading import sample_environment

FLAT_SHADER = """
def vertex(vin, u):
    world = transform_points(vin["model"], vin["position"])
    return {
        "position": project(u["view_proj"], world),
        "uv": vin["uv"],
    }


def fragment(fin, u):
    return np.ones((len(fin["uv"]), 4), dtype=np.float32) * u["color"]
"""


def fullscreen_triangle(device, target, color, depth_z=0.5, pipeline_state=None):
    module = device.create_shader_module(FLAT_SHADER, "flat")
    pipeline = device.create_render_pipeline(module, **(pipeline_state or {"cull_mode": "none"}))
    render_pass = device.begin_render_pass(target)
    render_pass.set_pipeline(pipeline)
    render_pass.set_bind_group(
        {"view_proj": np.eye(4, dtype=np.float32), "color": np.asarray(color, np.float32)}
    )
    render_pass.set_vertex_buffers(
        {
            "position": np.array(
                [[-3, -1, depth_z], [3, -1, depth_z], [0, 3, depth_z]], np.float32
            ),
            "uv": np.zeros((3, 2), np.float32),
        }
    )
    render_pass.set_index_buffer(np.array([[0, 1, 2]], np.uint32))
    render_pass.set_instance_buffers({"model": np.eye(4, dtype=np.float32)[None]})
    render_pass.draw_indexed()
    render_pass.end()


def test_clear_echo_with_8bit_rounding():
    device = Device()
    target = device.create_target(16, 16)
    render_pass = device.begin_render_pass(
        target, clear_color=(0.2, 0.3, 0.4, 1.0), clear_depth=1.0
    )
    render_pass.end()
    pixels = target.read_pixels()
    assert (pixels == np.array([51, 77, 102, 255], np.uint8)).all()


def test_zero_size_target_rejected_at_creation():
    device = Device()
    with pytest.raises(ValueError):
        device.create_target(0, 0)


def test_two_readbacks_identical_without_rerender():
    device = Device()
    target = device.create_target(8, 8)
    fullscreen_triangle(device, target, (0.7, 0.2, 0.9, 1.0))
    first = target.read_pixels()
    second = target.read_pixels()
    assert np.array_equal(first, second)


def test_full_coverage_draw_and_determinism_across_devices():
    images = []
    for _ in range(2):
        device = Device()
        target = device.create_target(32, 32)
        render_pass = device.begin_render_pass(target, clear_color=(0, 0, 0, 1), clear_depth=1.0)
        render_pass.end()
        fullscreen_triangle(device, target, (1.0, 0.0, 0.0, 1.0))
        images.append(target.read_pixels())
    assert (images[0][..., 0] == 255).all()
    assert (images[0][..., 1] == 0).all()
    assert np.array_equal(images[0], images[1])


def test_depth_test_keeps_nearer_fragment():
    device = Device()
    target = device.create_target(16, 16)
    render_pass = device.begin_render_pass(target, clear_color=(0, 0, 0, 1), clear_depth=1.0)
    render_pass.end()
    fullscreen_triangle(device, target, (0.0, 0.0, 1.0, 1.0), depth_z=0.8)
    fullscreen_triangle(device, target, (1.0, 0.0, 0.0, 1.0), depth_z=0.3)
    pixels = target.read_pixels()
    assert (pixels[..., 0] == 255).all()
    # drawing the far triangle again must not overwrite the near one
    fullscreen_triangle(device, target, (0.0, 1.0, 0.0, 1.0), depth_z=0.8)
    assert np.array_equal(target.read_pixels(), pixels)


def test_shader_syntax_error_carries_diagnostics():
    device = Device()
    with pytest.raises(ShaderCompileError) as excinfo:
        device.create_shader_module("def vertex(vin, u:\n    pass", "broken")
    assert "broken" in str(excinfo.value)
    assert "line" in str(excinfo.value)


def test_shader_without_entry_points_rejected():
    device = Device()
    with pytest.raises(ShaderCompileError):
        device.create_shader_module("x = 1", "empty")


def test_draw_call_counting():
    device = Device()
    target = device.create_target(8, 8)
    fullscreen_triangle(device, target, (1, 1, 1, 1))
    fullscreen_triangle(device, target, (1, 1, 1, 1))
    assert device.draw_calls == 2


def test_render_pass_rejects_window_surface():
    from renderlab.device import WindowSurface

    device = Device()
    with pytest.raises(Exception):
        device.begin_render_pass(WindowSurface(64, 64))


def test_unorm8_conversion_rule():
    values = np.array([0.0, 0.2, 0.3, 0.4, 1.0, 1.5, -0.25], np.float32)
    assert float_to_unorm8(values).tolist() == [0, 51, 77, 102, 255, 255, 0]


def test_cube_sampler_matches_scalar_oracle():
    rng = np.random.default_rng(11)
    faces = rng.integers(0, 256, size=(6, 8, 8, 4), dtype=np.uint8)
    device = Device()
    cubemap = device.create_cubemap(faces)
    bound = BoundTexture(cubemap, Sampler("linear", "clamp"))
    directions = rng.normal(size=(1000, 3))
    directions = directions[np.linalg.norm(directions, axis=1) > 1e-3]
    sampled = bound.sample_cube(directions.astype(np.float32))
    for i in range(0, len(directions), 37):
        expected = sample_environment(tuple(directions[i]), faces)
        assert np.allclose(sampled[i, :3], expected, atol=2.0 / 255.0)


def test_cube_sampler_uniform_face_exact():
    faces = np.zeros((6, 4, 4, 4), np.uint8)
    faces[0] = (200, 10, 30, 255)  # +X face
    device = Device()
    bound = BoundTexture(device.create_cubemap(faces))
    out = bound.sample_cube(np.array([[1.0, 0.0, 0.0]]))
    assert np.allclose(out[0], np.array([200, 10, 30, 255]) / 255.0)


def test_texture_2d_bilinear_center_average():
    device = Device()
    pixels = np.zeros((2, 2, 4), np.uint8)
    pixels[..., 3] = 255
    pixels[0, 0, 0] = 255  # one red texel
    bound = BoundTexture(device.create_texture(pixels), Sampler("linear", "clamp"))
    center = bound.sample2d(np.array([[0.5, 0.5]]))
    assert np.allclose(center[0, 0], 0.25, atol=1e-6)


def test_compute_dispatch_covers_grid():
    device = Device()
    source = """
WORKGROUP_SIZE = (8, 8, 1)

def compute(gid, u):
    dst = u["dst"]
    x, y = gid[:, 0], gid[:, 1]
    live = (x < dst.width) & (y < dst.height)
    x, y = x[live], y[live]
    value = np.stack([x / 255.0, y / 255.0, np.zeros_like(x), np.ones_like(x)], axis=1)
    dst.store(x, y, value.astype(np.float32))
"""
    module = device.create_shader_module(source, "grid")
    pipeline = device.create_compute_pipeline(module)
    texture = device.create_texture(np.zeros((12, 20, 4), np.uint8))
    compute_pass = device.begin_compute_pass()
    compute_pass.set_pipeline(pipeline)
    compute_pass.set_bind_group({"dst": StorageTexture(texture)})
    compute_pass.dispatch_workgroups(3, 2)  # 24x16 threads covering 20x12 texels
    compute_pass.end()
    assert texture.data[5, 7, 0] == 7
    assert texture.data[5, 7, 1] == 5
    assert (texture.data[..., 3] == 255).all()
    assert device.compute_dispatches == 1


def test_memory_tracking_rises_and_falls():
    device = Device()
    base = device.allocated_bytes
    texture = device.create_texture(np.zeros((64, 64, 4), np.uint8))
    assert device.allocated_bytes == base + 64 * 64 * 4
    del texture
    import gc

    gc.collect()
    assert device.allocated_bytes == base
