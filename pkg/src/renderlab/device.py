"""Software GPU device with a WebGPU-style surface.

The device owns buffers, textures, samplers, shader modules, and pipelines,
and executes render and compute passes immediately on the CPU. Shader modules
are written in the device's shading language: plain Python source text whose
stage entry points (``vertex``, ``fragment``, ``compute``) operate on whole
numpy arrays at once. Results are deterministic: the same scene and camera
produce byte-identical readbacks on every run.

Shader stage contract:

* ``vertex(vin, u)`` receives per-vertex attribute arrays (instance attributes
  are pre-expanded to one row per vertex) and the bind-group dict ``u``; it
  returns a dict that must contain ``position`` (N, 4) clip-space coordinates.
  Every other key is a varying, interpolated perspective-correct.
* ``fragment(fin, u)`` receives interpolated varyings plus ``frag_coord`` and
  returns (M, 4) RGBA in [0, 1].
* ``compute(gid, u)`` receives (M, 3) global invocation ids; the device may
  batch the whole dispatch grid into a single call.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import raster

_FERR = "offscreen render targets must have positive dimensions, got {}x{}"


class ShaderCompileError(RuntimeError):
    """Shader source failed to compile; message carries the backend diagnostics."""


class DeviceLostError(RuntimeError):
    """The device is unusable (released or misconfigured)."""


def float_to_unorm8(values: np.ndarray) -> np.ndarray:
    """Convert float colors in [0, 1] to uint8 with round-half-up, in float32."""
    v = np.clip(values.astype(np.float32, copy=False), 0.0, 1.0)
    return np.floor(v * np.float32(255.0) + np.float32(0.5)).astype(np.uint8)


def unorm8_to_float(values: np.ndarray) -> np.ndarray:
    return values.astype(np.float32) / np.float32(255.0)


# ---------------------------------------------------------------------------
# Shading-language builtins
# ---------------------------------------------------------------------------

def _normalize(v):
    n = np.sqrt((v * v).sum(axis=-1, keepdims=True))
    return v / np.maximum(n, 1e-12)


def _vdot(a, b):
    return (a * b).sum(axis=-1, keepdims=True)


def _reflect(incident, normal):
    return incident - 2.0 * _vdot(incident, normal) * normal


def _saturate(x):
    return np.clip(x, 0.0, 1.0)


def _project(mat4, points3):
    """Uniform mat4 (4,4) applied to (N,3) points -> (N,4) clip coordinates."""
    x, y, z = points3[:, 0], points3[:, 1], points3[:, 2]
    out = np.empty((points3.shape[0], 4), dtype=np.float32)
    for i in range(4):
        out[:, i] = mat4[i, 0] * x + mat4[i, 1] * y + mat4[i, 2] * z + mat4[i, 3]
    return out


def _transform_points(mats, points3):
    """Per-row mat4 (N,4,4) applied affinely to (N,3) points -> (N,3)."""
    x, y, z = points3[:, 0], points3[:, 1], points3[:, 2]
    out = np.empty_like(points3)
    for i in range(3):
        out[:, i] = mats[:, i, 0] * x + mats[:, i, 1] * y + mats[:, i, 2] * z + mats[:, i, 3]
    return out


def _transform_dirs(mats, dirs3):
    """Per-row mat3/mat4 rotation part applied to (N,3) directions -> (N,3)."""
    x, y, z = dirs3[:, 0], dirs3[:, 1], dirs3[:, 2]
    out = np.empty_like(dirs3)
    for i in range(3):
        out[:, i] = mats[:, i, 0] * x + mats[:, i, 1] * y + mats[:, i, 2] * z
    return out


SHADER_BUILTINS = {
    "np": np,
    "normalize": _normalize,
    "vdot": _vdot,
    "reflect": _reflect,
    "saturate": _saturate,
    "clamp": np.clip,
    "project": _project,
    "transform_points": _transform_points,
    "transform_dirs": _transform_dirs,
}


class ShaderModule:
    """Compiled shader program: namespace with stage entry points."""

    def __init__(self, label, namespace):
        self.label = label
        self.vertex = namespace.get("vertex")
        self.fragment = namespace.get("fragment")
        self.compute = namespace.get("compute")
        self.workgroup_size = tuple(namespace.get("WORKGROUP_SIZE", (64, 1, 1)))
        self.bindings = tuple(namespace.get("BINDINGS", ()))

    @property
    def stages(self):
        names = []
        for name in ("vertex", "fragment", "compute"):
            if getattr(self, name) is not None:
                names.append(name)
        return tuple(names)


# ---------------------------------------------------------------------------
# Resources
# ---------------------------------------------------------------------------

class Buffer:
    """A block of device-visible memory wrapping a numpy array."""

    def __init__(self, data: np.ndarray, label: str = ""):
        self.data = data
        self.label = label

    @property
    def nbytes(self) -> int:
        return self.data.nbytes


class Texture:
    """2D, cube, or depth texture stored as a numpy array.

    kind is one of 'rgba8' (H, W, 4) uint8, 'cube' (6, H, W, 4) uint8, or
    'depth32f' (H, W) float32.
    """

    def __init__(self, data: np.ndarray, kind: str, label: str = ""):
        self.data = data
        self.kind = kind
        self.label = label

    @property
    def width(self) -> int:
        return self.data.shape[-2] if self.kind != "depth32f" else self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[-3] if self.kind != "depth32f" else self.data.shape[0]

    @property
    def nbytes(self) -> int:
        return self.data.nbytes


@dataclass
class Sampler:
    filter: str = "linear"  # 'linear' | 'nearest'
    address: str = "clamp"  # 'clamp' | 'repeat'


class BoundTexture:
    """A texture paired with a sampler, as seen from shader code."""

    def __init__(self, texture: Texture, sampler: Optional[Sampler] = None):
        self.texture = texture
        self.sampler = sampler or Sampler()

    @property
    def width(self):
        return self.texture.width

    @property
    def height(self):
        return self.texture.height

    def _wrap(self, ix, limit):
        if self.sampler.address == "repeat":
            return np.mod(ix, limit)
        return np.clip(ix, 0, limit - 1)

    def load(self, ix, iy):
        """Fetch texels by integer coordinates, normalized to float [0, 1]."""
        h, w = self.texture.data.shape[0], self.texture.data.shape[1]
        ix = self._wrap(np.asarray(ix, dtype=np.int64), w)
        iy = self._wrap(np.asarray(iy, dtype=np.int64), h)
        return unorm8_to_float(self.texture.data[iy, ix])

    def fetch_depth(self, ix, iy):
        """Fetch raw depth values with clamp addressing."""
        h, w = self.texture.data.shape
        ix = np.clip(np.asarray(ix, dtype=np.int64), 0, w - 1)
        iy = np.clip(np.asarray(iy, dtype=np.int64), 0, h - 1)
        return self.texture.data[iy, ix]

    def _bilinear_face(self, face_data, u, v):
        h, w = face_data.shape[0], face_data.shape[1]
        x = u * w - 0.5
        y = v * h - 0.5
        x0 = np.floor(x)
        y0 = np.floor(y)
        fx = (x - x0)[..., None].astype(np.float32)
        fy = (y - y0)[..., None].astype(np.float32)
        x0 = x0.astype(np.int64)
        y0 = y0.astype(np.int64)
        x1, y1 = x0 + 1, y0 + 1
        if self.sampler.address == "repeat":
            x0, x1 = np.mod(x0, w), np.mod(x1, w)
            y0, y1 = np.mod(y0, h), np.mod(y1, h)
        else:
            x0, x1 = np.clip(x0, 0, w - 1), np.clip(x1, 0, w - 1)
            y0, y1 = np.clip(y0, 0, h - 1), np.clip(y1, 0, h - 1)
        c00 = unorm8_to_float(face_data[y0, x0])
        c10 = unorm8_to_float(face_data[y1, x0])
        c01 = unorm8_to_float(face_data[y0, x1])
        c11 = unorm8_to_float(face_data[y1, x1])
        top = c00 * (1.0 - fx) + c01 * fx
        bottom = c10 * (1.0 - fx) + c11 * fx
        return top * (1.0 - fy) + bottom * fy

    def sample2d(self, uv):
        """Sample a 2D texture at (M, 2) uv coordinates."""
        u = np.asarray(uv[..., 0], dtype=np.float64)
        v = np.asarray(uv[..., 1], dtype=np.float64)
        if self.sampler.filter == "nearest":
            h, w = self.texture.data.shape[0], self.texture.data.shape[1]
            ix = np.floor(u * w).astype(np.int64)
            iy = np.floor(v * h).astype(np.int64)
            return self.load(ix, iy)
        return self._bilinear_face(self.texture.data, u, v)

    def sample_cube(self, directions):
        """Sample a cubemap along (M, 3) directions (need not be normalized).

        Face selection follows the standard dominant-axis table: the face is
        picked by the largest-magnitude component, and (s, t) come from the
        remaining two divided by it.
        """
        d = np.asarray(directions, dtype=np.float64)
        x, y, z = d[..., 0], d[..., 1], d[..., 2]
        ax, ay, az = np.abs(x), np.abs(y), np.abs(z)
        face = np.zeros(x.shape, dtype=np.int64)
        sc = np.zeros_like(x)
        tc = np.zeros_like(x)
        ma = np.zeros_like(x)

        xm = (ax >= ay) & (ax >= az)
        ym = (ay > ax) & (ay >= az)
        zm = ~(xm | ym)

        pos = x >= 0
        m = xm & pos
        face[m], sc[m], tc[m], ma[m] = 0, -z[m], -y[m], ax[m]
        m = xm & ~pos
        face[m], sc[m], tc[m], ma[m] = 1, z[m], -y[m], ax[m]
        pos = y >= 0
        m = ym & pos
        face[m], sc[m], tc[m], ma[m] = 2, x[m], z[m], ay[m]
        m = ym & ~pos
        face[m], sc[m], tc[m], ma[m] = 3, x[m], -z[m], ay[m]
        pos = z >= 0
        m = zm & pos
        face[m], sc[m], tc[m], ma[m] = 4, x[m], -y[m], az[m]
        m = zm & ~pos
        face[m], sc[m], tc[m], ma[m] = 5, -x[m], -y[m], az[m]

        ma = np.maximum(ma, 1e-12)
        u = (sc / ma + 1.0) * 0.5
        v = (tc / ma + 1.0) * 0.5

        out = np.empty(x.shape + (4,), dtype=np.float32)
        for f in range(6):
            m = face == f
            if not m.any():
                continue
            out[m] = self._bilinear_face(self.texture.data[f], u[m], v[m])
        return out


class StorageTexture:
    """Read-write texture binding for compute stages (rgba8 storage)."""

    def __init__(self, texture: Texture):
        self.texture = texture

    @property
    def width(self):
        return self.texture.data.shape[1]

    @property
    def height(self):
        return self.texture.data.shape[0]

    def load(self, ix, iy):
        h, w = self.texture.data.shape[:2]
        ix = np.clip(np.asarray(ix, dtype=np.int64), 0, w - 1)
        iy = np.clip(np.asarray(iy, dtype=np.int64), 0, h - 1)
        return unorm8_to_float(self.texture.data[iy, ix])

    def store(self, ix, iy, rgba):
        self.texture.data[np.asarray(iy, dtype=np.int64), np.asarray(ix, dtype=np.int64)] = (
            float_to_unorm8(np.asarray(rgba, dtype=np.float32))
        )


# ---------------------------------------------------------------------------
# Targets and pipelines
# ---------------------------------------------------------------------------

class OffscreenTarget:
    """Fixed-size color+depth attachment pair that supports readback."""

    offscreen = True

    def __init__(self, width: int, height: int, with_color=True, with_depth=True):
        if width <= 0 or height <= 0:
            raise ValueError(_FERR.format(width, height))
        self.width = width
        self.height = height
        self.color = np.zeros((height, width, 4), dtype=np.float32) if with_color else None
        self.depth = np.ones((height, width), dtype=np.float32) if with_depth else None

    def read_pixels(self) -> np.ndarray:
        """RGBA8 rows top-to-bottom; a bit-exact copy of the attachment."""
        if self.color is None:
            raise ValueError("target has no color attachment")
        return float_to_unorm8(self.color)


class WindowSurface:
    """Placeholder for an on-screen swapchain surface; cannot be read back."""

    offscreen = False

    def __init__(self, width=0, height=0):
        self.width = width
        self.height = height


@dataclass
class RenderPipeline:
    shader: ShaderModule
    cull_mode: str = "back"
    depth_write: bool = True
    depth_compare: str = "less"
    label: str = ""

    def __post_init__(self):
        if self.shader.vertex is None:
            raise ShaderCompileError(
                f"{self.shader.label}: render pipeline needs a vertex stage"
            )


@dataclass
class ComputePipeline:
    shader: ShaderModule
    label: str = ""

    def __post_init__(self):
        if self.shader.compute is None:
            raise ShaderCompileError(
                f"{self.shader.label}: compute pipeline needs a compute stage"
            )


class RenderPass:
    """Immediate-mode render pass encoder over one target."""

    def __init__(self, device: "Device", target, clear_color=None, clear_depth=None):
        if not getattr(target, "offscreen", False):
            raise DeviceLostError("no window system available; use an offscreen target")
        self.device = device
        self.target = target
        self.pipeline: Optional[RenderPipeline] = None
        self.bindings: dict = {}
        self.vertex_buffers: dict = {}
        self.index_buffer: Optional[np.ndarray] = None
        self.instance_buffers: dict = {}
        self.draw_calls = 0
        self.instances_drawn = 0
        self._open = True
        if clear_color is not None and target.color is not None:
            target.color[:] = np.asarray(clear_color, dtype=np.float32)
        if clear_depth is not None and target.depth is not None:
            target.depth[:] = np.float32(clear_depth)

    def set_pipeline(self, pipeline: RenderPipeline):
        self.pipeline = pipeline

    def set_bind_group(self, bindings: dict):
        self.bindings = dict(bindings)

    def set_vertex_buffers(self, arrays: dict):
        self.vertex_buffers = {
            k: (v.data if isinstance(v, Buffer) else v) for k, v in arrays.items()
        }

    def set_index_buffer(self, indices):
        data = indices.data if isinstance(indices, Buffer) else indices
        self.index_buffer = np.asarray(data, dtype=np.int64).reshape(-1, 3)

    def set_instance_buffers(self, arrays: dict):
        self.instance_buffers = {
            k: (v.data if isinstance(v, Buffer) else v) for k, v in arrays.items()
        }

    def draw_indexed(self, instance_count: int = 1):
        """Draw the bound mesh for ``instance_count`` instances. One draw call."""
        if not self._open:
            raise DeviceLostError("render pass already ended")
        if self.pipeline is None or self.index_buffer is None or not self.vertex_buffers:
            raise DeviceLostError("pipeline, vertex buffers, and index buffer must be bound")
        self.draw_calls += 1
        self.instances_drawn += instance_count
        self.device.draw_calls += 1
        self.device._execute_draw(self, instance_count)

    def end(self):
        self._open = False


class ComputePass:
    def __init__(self, device: "Device"):
        self.device = device
        self.pipeline: Optional[ComputePipeline] = None
        self.bindings: dict = {}

    def set_pipeline(self, pipeline: ComputePipeline):
        self.pipeline = pipeline

    def set_bind_group(self, bindings: dict):
        self.bindings = dict(bindings)

    def dispatch_workgroups(self, nx: int, ny: int = 1, nz: int = 1):
        if self.pipeline is None:
            raise DeviceLostError("compute pipeline must be bound before dispatch")
        wx, wy, wz = self.pipeline.shader.workgroup_size
        gx, gy, gz = nx * wx, ny * wy, nz * wz
        ix = np.tile(np.arange(gx), gy * gz)
        iy = np.tile(np.repeat(np.arange(gy), gx), gz)
        iz = np.repeat(np.arange(gz), gx * gy)
        gid = np.stack([ix, iy, iz], axis=1).astype(np.int32)
        self.device.compute_dispatches += 1
        self.pipeline.shader.compute(gid, self.bindings)

    def end(self):
        pass


# ---------------------------------------------------------------------------
# Device
# ---------------------------------------------------------------------------

class Device:
    """Process-wide software GPU device."""

    def __init__(self):
        self.allocated_bytes = 0
        self.texture_count = 0
        self.buffer_count = 0
        self.draw_calls = 0
        self.compute_dispatches = 0
        self._scratch: dict = {}

    # -- resource creation ---------------------------------------------

    def _track(self, resource):
        nbytes = resource.nbytes
        self.allocated_bytes += nbytes
        weakref.finalize(resource, self._release, nbytes)
        return resource

    def _release(self, nbytes):
        self.allocated_bytes -= nbytes

    def create_buffer(self, data, label: str = "") -> Buffer:
        self.buffer_count += 1
        return self._track(Buffer(np.ascontiguousarray(data), label))

    def create_texture(self, pixels: np.ndarray, label: str = "") -> Texture:
        pixels = np.asarray(pixels)
        if pixels.ndim != 3 or pixels.shape[2] != 4 or pixels.dtype != np.uint8:
            raise ValueError("2D textures must be (H, W, 4) uint8")
        self.texture_count += 1
        return self._track(Texture(pixels.copy(), "rgba8", label))

    def create_cubemap(self, faces: np.ndarray, label: str = "") -> Texture:
        faces = np.asarray(faces)
        if faces.ndim != 4 or faces.shape[0] != 6 or faces.shape[3] != 4 or faces.dtype != np.uint8:
            raise ValueError("cubemaps must be (6, H, W, 4) uint8")
        self.texture_count += 1
        return self._track(Texture(faces.copy(), "cube", label))

    def create_depth_texture(self, width: int, height: int, label: str = "") -> Texture:
        if width <= 0 or height <= 0:
            raise ValueError(_FERR.format(width, height))
        self.texture_count += 1
        data = np.ones((height, width), dtype=np.float32)
        return self._track(Texture(data, "depth32f", label))

    def create_target(self, width: int, height: int, with_depth: bool = True) -> OffscreenTarget:
        return OffscreenTarget(width, height, with_depth=with_depth)

    def create_shader_module(self, source: str, label: str = "shader") -> ShaderModule:
        """Compile shading-language source text; raises ShaderCompileError."""
        try:
            code = compile(source, f"<shader:{label}>", "exec")
        except SyntaxError as exc:
            raise ShaderCompileError(
                f"shader {label!r} failed to parse: {exc.msg} at line {exc.lineno}"
            ) from exc
        namespace = dict(SHADER_BUILTINS)
        try:
            exec(code, namespace)
        except Exception as exc:
            raise ShaderCompileError(f"shader {label!r} failed to load: {exc}") from exc
        module = ShaderModule(label, namespace)
        if not module.stages:
            raise ShaderCompileError(
                f"shader {label!r} defines no stage entry point "
                "(expected vertex/fragment/compute)"
            )
        return module

    def create_render_pipeline(self, shader: ShaderModule, **state) -> RenderPipeline:
        return RenderPipeline(shader=shader, **state)

    def create_compute_pipeline(self, shader: ShaderModule, label: str = "") -> ComputePipeline:
        return ComputePipeline(shader=shader, label=label)

    def begin_render_pass(self, target, clear_color=None, clear_depth=None) -> RenderPass:
        return RenderPass(self, target, clear_color, clear_depth)

    def begin_compute_pass(self) -> ComputePass:
        return ComputePass(self)

    # -- draw execution --------------------------------------------------

    def _scratch_buffer(self, key, shape, dtype):
        buf = self._scratch.get(key)
        if buf is None or buf.shape != shape or buf.dtype != dtype:
            buf = np.empty(shape, dtype=dtype)
            self._scratch[key] = buf
        return buf

    def _execute_draw(self, rp: RenderPass, instance_count: int):
        pipeline = rp.pipeline
        shader = pipeline.shader
        target = rp.target
        vertex_arrays = rp.vertex_buffers
        num_vertices = len(next(iter(vertex_arrays.values())))

        vin = {}
        if instance_count == 1:
            vin.update(vertex_arrays)
            for name, arr in rp.instance_buffers.items():
                vin[name] = np.broadcast_to(arr[0], (num_vertices,) + arr.shape[1:])
        else:
            for name, arr in vertex_arrays.items():
                reps = (instance_count,) + (1,) * (arr.ndim - 1)
                vin[name] = np.tile(arr, reps)
            for name, arr in rp.instance_buffers.items():
                vin[name] = np.repeat(arr, num_vertices, axis=0)

        out = shader.vertex(vin, rp.bindings)
        clip = np.asarray(out.pop("position"), dtype=np.float64)

        varying_names = sorted(out)
        shaded = shader.fragment is not None and target.color is not None
        if shaded:
            parts = []
            widths = []
            for name in varying_names:
                arr = np.asarray(out[name], dtype=np.float32)
                if arr.ndim == 1:
                    arr = arr[:, None]
                parts.append(arr)
                widths.append(arr.shape[1])
            packed = np.concatenate(parts, axis=1) if parts else np.zeros((len(clip), 0), np.float32)
        else:
            packed = np.zeros((len(clip), 0), np.float32)
            widths = []

        tri = rp.index_buffer
        if instance_count > 1:
            offsets = (np.arange(instance_count, dtype=np.int64) * num_vertices)[:, None, None]
            tri = (tri[None, :, :] + offsets).reshape(-1, 3)

        tri_pos = clip[tri]  # (T, 3, 4)
        tri_var = packed[tri]  # (T, 3, K)

        # conservative whole-triangle rejection against the frustum planes
        x, y, z, w = tri_pos[..., 0], tri_pos[..., 1], tri_pos[..., 2], tri_pos[..., 3]
        reject = (
            (x > w).all(axis=1) | (x < -w).all(axis=1)
            | (y > w).all(axis=1) | (y < -w).all(axis=1)
            | (z > w).all(axis=1) | (z < 0).all(axis=1)
        )
        keep = ~reject
        tri_pos, tri_var = tri_pos[keep], tri_var[keep]

        needs_clip = (tri_pos[..., 2] < 0.0).any(axis=1)
        if needs_clip.any():
            pieces = [tri_pos[~needs_clip]]
            var_pieces = [tri_var[~needs_clip]]
            for pos3, var3 in zip(tri_pos[needs_clip], tri_var[needs_clip]):
                for cpos, cvar in raster.clip_triangle_near(pos3, var3):
                    pieces.append(cpos[None])
                    var_pieces.append(cvar[None])
            tri_pos = np.concatenate(pieces, axis=0)
            tri_var = np.concatenate(var_pieces, axis=0)

        if len(tri_pos) == 0:
            return

        w = tri_pos[..., 3]
        valid = (w > 1e-9).all(axis=1)
        tri_pos, tri_var, w = tri_pos[valid], tri_var[valid], w[valid]
        if len(tri_pos) == 0:
            return

        inv_w = 1.0 / w
        ndc = tri_pos[..., :3] * inv_w[..., None]
        width, height = target.width, target.height
        screen = np.empty(tri_pos.shape[:2] + (2,), dtype=np.float64)
        screen[..., 0] = (ndc[..., 0] + 1.0) * 0.5 * width
        screen[..., 1] = (1.0 - ndc[..., 1]) * 0.5 * height
        ndc_z = ndc[..., 2]

        if shaded:
            kwidth = tri_var.shape[2]
            coverage = self._scratch_buffer(("cov", height, width), (height, width), bool)
            coverage[:] = False
            invw_buf = self._scratch_buffer(("invw", height, width), (height, width), np.float32)
            vow_buf = self._scratch_buffer(
                ("vow", height, width, kwidth), (height, width, kwidth), np.float32
            )
            var_over_w = (tri_var * inv_w[..., None]).astype(np.float32)
        else:
            coverage = invw_buf = vow_buf = var_over_w = None

        raster.rasterize(
            screen,
            ndc_z,
            inv_w,
            var_over_w,
            target.depth,
            cull_mode=pipeline.cull_mode,
            depth_compare=pipeline.depth_compare,
            depth_write=pipeline.depth_write,
            coverage=coverage,
            vow_buffer=vow_buf,
            invw_buffer=invw_buf,
        )

        if not shaded:
            return
        ys, xs = np.nonzero(coverage)
        if len(ys) == 0:
            return
        iw = invw_buf[ys, xs]
        vow = vow_buf[ys, xs]
        fin = {}
        offset = 0
        for name, k in zip(varying_names, widths):
            fin[name] = vow[:, offset:offset + k] / iw[:, None]
            offset += k
        fin["frag_coord"] = np.stack(
            [xs.astype(np.float32) + 0.5, ys.astype(np.float32) + 0.5], axis=1
        )
        color = np.asarray(shader.fragment(fin, rp.bindings), dtype=np.float32)
        target.color[ys, xs] = np.clip(color, 0.0, 1.0)


_default_device: Optional[Device] = None


def get_device() -> Device:
    """Process-wide device, created lazily."""
    global _default_device
    if _default_device is None:
        _default_device = Device()
    return _default_device


def reset_device():
    """Drop the process device (test isolation)."""
    global _default_device
    _default_device = None
