"""Procedural mesh builders and the .npz mesh file format.

All meshes use right-handed coordinates, +Y up, counter-clockwise winding
viewed from outside, and top-left uv origin (v grows downward in the image).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class MeshData:
    positions: np.ndarray  # (V, 3) float32
    normals: np.ndarray  # (V, 3) float32
    uvs: np.ndarray  # (V, 2) float32
    indices: np.ndarray  # (T, 3) uint32

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float32)
        self.normals = np.asarray(self.normals, dtype=np.float32)
        self.uvs = np.asarray(self.uvs, dtype=np.float32)
        self.indices = np.asarray(self.indices, dtype=np.uint32).reshape(-1, 3)
        if self.indices.size and self.indices.max() >= len(self.positions):
            raise ValueError("index out of bounds for vertex buffer")

    @property
    def vertex_count(self) -> int:
        return len(self.positions)

    @property
    def triangle_count(self) -> int:
        return len(self.indices)


def save_npz(mesh: MeshData, path):
    np.savez(
        path,
        positions=mesh.positions,
        normals=mesh.normals,
        uvs=mesh.uvs,
        indices=mesh.indices,
    )


def load_npz(path) -> MeshData:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"mesh file not found: {path}")
    data = np.load(path)
    return MeshData(data["positions"], data["normals"], data["uvs"], data["indices"])


def triangle() -> MeshData:
    positions = [(-0.6, -0.5, 0.0), (0.6, -0.5, 0.0), (0.0, 0.6, 0.0)]
    normals = [(0.0, 0.0, 1.0)] * 3
    uvs = [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0)]
    return MeshData(positions, normals, uvs, [(0, 1, 2)])


def _quad(corners, normal, uv_scale=1.0):
    """Four corners ordered bl, br, tr, tl as seen from outside."""
    uvs = [(0.0, uv_scale), (uv_scale, uv_scale), (uv_scale, 0.0), (0.0, 0.0)]
    return corners, [normal] * 4, uvs, [(0, 1, 2), (0, 2, 3)]


def cube(half: float = 1.0) -> MeshData:
    h = half
    faces = [
        _quad([(-h, -h, h), (h, -h, h), (h, h, h), (-h, h, h)], (0, 0, 1)),
        _quad([(h, -h, -h), (-h, -h, -h), (-h, h, -h), (h, h, -h)], (0, 0, -1)),
        _quad([(h, -h, h), (h, -h, -h), (h, h, -h), (h, h, h)], (1, 0, 0)),
        _quad([(-h, -h, -h), (-h, -h, h), (-h, h, h), (-h, h, -h)], (-1, 0, 0)),
        _quad([(-h, h, h), (h, h, h), (h, h, -h), (-h, h, -h)], (0, 1, 0)),
        _quad([(-h, -h, -h), (h, -h, -h), (h, -h, h), (-h, -h, h)], (0, -1, 0)),
    ]
    positions, normals, uvs, indices = [], [], [], []
    for corners, face_normals, face_uvs, tris in faces:
        base = len(positions)
        positions.extend(corners)
        normals.extend(face_normals)
        uvs.extend(face_uvs)
        indices.extend([(base + a, base + b, base + c) for a, b, c in tris])
    return MeshData(positions, normals, uvs, indices)


def plane(half: float = 1.0, uv_scale: float = 1.0) -> MeshData:
    corners, normals, uvs, tris = _quad(
        [(-half, 0, half), (half, 0, half), (half, 0, -half), (-half, 0, -half)],
        (0, 1, 0),
        uv_scale,
    )
    return MeshData(corners, normals, uvs, tris)


def uv_sphere(radius: float = 1.0, stacks: int = 24, slices: int = 32) -> MeshData:
    positions, normals, uvs = [], [], []
    for i in range(stacks + 1):
        phi = np.pi * i / stacks
        for j in range(slices + 1):
            theta = 2.0 * np.pi * j / slices
            nx = np.sin(phi) * np.cos(theta)
            ny = np.cos(phi)
            nz = -np.sin(phi) * np.sin(theta)
            positions.append((radius * nx, radius * ny, radius * nz))
            normals.append((nx, ny, nz))
            uvs.append((j / slices, i / stacks))
    indices = []
    row = slices + 1
    for i in range(stacks):
        for j in range(slices):
            a = i * row + j
            b = a + row
            if i != 0:
                indices.append((a, b, a + 1))
            if i != stacks - 1:
                indices.append((a + 1, b, b + 1))
    return MeshData(positions, normals, uvs, indices)
