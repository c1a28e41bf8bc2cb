"""Named registries for textures, shaders, materials, and meshes.

Each registry is a process-wide singleton (constructed lazily, resettable for
tests) with build-once semantics: building an existing name returns the first
handle unchanged and logs a warning, so handles stay stable for the lifetime
of the process. Assets live under a configurable root with textures/,
shaders/, and models/ subdirectories.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from PIL import Image

from . import meshes
from .device import ShaderCompileError, ShaderModule, Texture, get_device

log = logging.getLogger(__name__)

_PACKAGED_ASSETS = Path(__file__).parent / "assets"
_assets_root: Optional[Path] = None


class MissingResourceError(KeyError):
    """A referenced resource name is not registered (message names it)."""


def assets_root() -> Path:
    """Asset directory: set_assets_root() > $RENDERLAB_ASSETS > packaged assets."""
    if _assets_root is not None:
        return _assets_root
    env = os.environ.get("RENDERLAB_ASSETS")
    if env:
        return Path(env)
    return _PACKAGED_ASSETS


def set_assets_root(path):
    global _assets_root
    _assets_root = Path(path) if path is not None else None


def textures_path() -> Path:
    return assets_root() / "textures"


def shaders_path() -> Path:
    return assets_root() / "shaders"


def models_path() -> Path:
    return assets_root() / "models"


# ---------------------------------------------------------------------------
# Data descriptions
# ---------------------------------------------------------------------------

@dataclass
class TextureData:
    """Texture source: an image file path or raw pixels with explicit size."""

    path: Optional[Union[str, Path]] = None
    pixels: Optional[np.ndarray] = None
    width: int = 0
    height: int = 0
    channels: int = 4

    def __post_init__(self):
        if self.path is None and self.pixels is None:
            raise ValueError("TextureData needs a path or raw pixels")
        if self.pixels is not None:
            self.pixels = np.asarray(self.pixels, dtype=np.uint8)
            expected = self.width * self.height * self.channels
            if self.pixels.size != expected:
                raise ValueError(
                    f"raw pixel buffer has {self.pixels.size} values, "
                    f"expected width*height*channels = {expected}"
                )

    def load_rgba8(self) -> np.ndarray:
        """Decode to (H, W, 4) uint8, converting PNG/JPEG inputs to RGBA."""
        if self.pixels is not None:
            pixels = self.pixels.reshape(self.height, self.width, self.channels)
            if self.channels == 4:
                return pixels
            out = np.zeros((self.height, self.width, 4), dtype=np.uint8)
            out[..., 3] = 255
            out[..., : self.channels] = pixels
            if self.channels == 1:
                out[..., 1] = out[..., 2] = out[..., 0]
            return out
        path = Path(self.path)
        if not path.is_absolute() and not path.exists():
            candidate = textures_path() / path
            if candidate.exists():
                path = candidate
        if not path.exists():
            raise FileNotFoundError(f"texture file not found: {path}")
        try:
            with Image.open(path) as img:
                return np.asarray(img.convert("RGBA"), dtype=np.uint8)
        except FileNotFoundError:
            raise
        except Exception as exc:
            raise ValueError(f"failed to decode texture {path}: {exc}") from exc


@dataclass
class MaterialData:
    """Recipe for a material: shader name, texture names, scalar parameters."""

    shader: str
    textures: Sequence[str] = field(default_factory=tuple)
    glossiness: float = 1.0
    base_color: tuple = (1.0, 1.0, 1.0, 1.0)
    ambient: float = 0.1
    diffuse: float = 0.7
    specular: float = 0.2

    def __post_init__(self):
        self.textures = tuple(self.textures)
        if self.glossiness < 0:
            raise ValueError(f"glossiness must be >= 0, got {self.glossiness}")


# ---------------------------------------------------------------------------
# Handles
# ---------------------------------------------------------------------------

@dataclass
class TextureHandle:
    name: str
    texture: Texture
    width: int
    height: int
    kind: str = "2d"  # '2d' | 'cube'
    source: Optional[str] = None


@dataclass
class ShaderHandle:
    name: str
    module: ShaderModule
    stages: tuple
    bindings: tuple
    source: Optional[str] = None


@dataclass
class MaterialHandle:
    name: str
    data: MaterialData
    shader: ShaderHandle
    textures: tuple
    uniforms: dict = field(default_factory=dict)


@dataclass
class MeshHandle:
    name: str
    data: meshes.MeshData
    source: Optional[str] = None


# ---------------------------------------------------------------------------
# Registries
# ---------------------------------------------------------------------------

class _Registry:
    """Singleton base: lazily constructed, resettable, name-keyed."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            instance = super().__new__(cls)
            instance._entries = {}
            cls._instance = instance
        return cls._instance

    @classmethod
    def reset(cls):
        cls._instance = None

    def lookup(self, name: str):
        """Registered handle or None; never builds."""
        return self._entries.get(name)

    def get(self, name: str):
        handle = self._entries.get(name)
        if handle is None:
            raise MissingResourceError(
                f"{type(self).__name__}: no resource named {name!r}"
            )
        return handle

    def names(self):
        return list(self._entries)

    def __len__(self):
        return len(self._entries)

    def _existing(self, name):
        handle = self._entries.get(name)
        if handle is not None:
            log.warning("%s: %r already built, reusing existing handle",
                        type(self).__name__, name)
        return handle


class TextureLib(_Registry):
    """Texture registry; GPU textures are created once per name."""

    def build(self, name: str, data: TextureData) -> TextureHandle:
        existing = self._existing(name)
        if existing is not None:
            return existing
        pixels = data.load_rgba8()
        texture = get_device().create_texture(pixels, label=name)
        handle = TextureHandle(
            name, texture, pixels.shape[1], pixels.shape[0], "2d",
            str(data.path) if data.path else None,
        )
        self._entries[name] = handle
        return handle

    def build_cubemap(self, name: str, face_paths: Sequence) -> TextureHandle:
        """Build a cubemap from six face images ordered +X -X +Y -Y +Z -Z."""
        existing = self._existing(name)
        if existing is not None:
            return existing
        if len(face_paths) != 6:
            raise ValueError("cubemaps need exactly six faces (+X -X +Y -Y +Z -Z)")
        faces = [TextureData(path=p).load_rgba8() for p in face_paths]
        stack = np.stack(faces)
        texture = get_device().create_cubemap(stack, label=name)
        handle = TextureHandle(
            name, texture, stack.shape[2], stack.shape[1], "cube",
            str(face_paths[0]),
        )
        self._entries[name] = handle
        return handle


class ShaderLib(_Registry):
    """Compiled-shader repository keyed by name to avoid redundant compilation."""

    def build(self, name: str, sources) -> ShaderHandle:
        """Compile and register a program.

        ``sources`` is one source (text or path) or a sequence of per-stage
        sources, which are concatenated into one module before compilation.
        """
        existing = self._existing(name)
        if existing is not None:
            return existing
        if isinstance(sources, (str, Path)):
            sources = [sources]
        texts = []
        origin = None
        for source in sources:
            path = Path(source) if isinstance(source, Path) else None
            if path is None and isinstance(source, str) and "\n" not in source:
                # single-line strings are path specs; real sources span lines
                path = Path(source)
                if not path.is_absolute() and not path.exists():
                    in_assets = shaders_path() / path
                    path = in_assets if in_assets.exists() else path
            if path is not None:
                if not path.exists():
                    raise FileNotFoundError(f"shader source not found: {path}")
                texts.append(path.read_text())
                origin = origin or str(path)
            else:
                texts.append(str(source))
        module = get_device().create_shader_module("\n\n".join(texts), label=name)
        handle = ShaderHandle(name, module, module.stages, module.bindings, origin)
        self._entries[name] = handle
        return handle


class MaterialLib(_Registry):
    """Material registry; resolves shader and texture names at build time."""

    def build(self, name: str, data: MaterialData) -> MaterialHandle:
        existing = self._existing(name)
        if existing is not None:
            return existing
        shader = ShaderLib().lookup(data.shader)
        if shader is None:
            raise MissingResourceError(
                f"material {name!r} references unbuilt shader {data.shader!r}"
            )
        textures = []
        for tex_name in data.textures:
            tex = TextureLib().lookup(tex_name)
            if tex is None:
                raise MissingResourceError(
                    f"material {name!r} references unbuilt texture {tex_name!r}"
                )
            textures.append(tex)
        uniforms = {
            "base_color": np.asarray(data.base_color, dtype=np.float32),
            "ambient": np.float32(data.ambient),
            "diffuse": np.float32(data.diffuse),
            "specular": np.float32(data.specular),
            "glossiness": np.float32(data.glossiness),
        }
        handle = MaterialHandle(name, data, shader, tuple(textures), uniforms)
        self._entries[name] = handle
        return handle


class MeshLib(_Registry):
    """Mesh registry over procedural builders and models/ .npz files."""

    def build(self, name: str, data) -> MeshHandle:
        existing = self._existing(name)
        if existing is not None:
            return existing
        source = None
        if isinstance(data, (str, Path)):
            path = Path(data)
            if not path.is_absolute() and not path.exists():
                candidate = models_path() / path
                if candidate.exists():
                    path = candidate
            source = str(path)
            data = meshes.load_npz(path)
        if not isinstance(data, meshes.MeshData):
            raise TypeError("MeshLib.build expects MeshData or a .npz path")
        handle = MeshHandle(name, data, source)
        self._entries[name] = handle
        return handle


_KIND_TO_REGISTRY = {
    "texture": TextureLib,
    "shader": ShaderLib,
    "material": MaterialLib,
    "mesh": MeshLib,
}


def lookup(kind: str, name: str):
    """Registered handle of ``kind`` under ``name``, or None. Never builds."""
    registry = _KIND_TO_REGISTRY.get(kind)
    if registry is None:
        return None
    return registry().lookup(name)


def reset_all_registries():
    """Drop every registry singleton (test isolation)."""
    for registry in _KIND_TO_REGISTRY.values():
        registry.reset()
