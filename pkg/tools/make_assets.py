"""Regenerate the packaged texture and model assets. Run from the repo root:

    python tools/make_assets.py
"""

from pathlib import Path

import numpy as np
from PIL import Image

import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from renderlab import meshes  # noqa: E402

ASSETS = Path(__file__).resolve().parents[1] / "src" / "renderlab" / "assets"


def checker(size=64, cells=8, a=(235, 235, 235), b=(40, 40, 60)):
    img = np.zeros((size, size, 4), dtype=np.uint8)
    img[..., 3] = 255
    cell = size // cells
    ys, xs = np.mgrid[0:size, 0:size]
    mask = ((xs // cell) + (ys // cell)) % 2 == 0
    img[mask, :3] = a
    img[~mask, :3] = b
    return img


def gradient_face(size, top, bottom):
    """Vertical gradient face; distinct per side so sampling tests can probe."""
    img = np.zeros((size, size, 4), dtype=np.uint8)
    img[..., 3] = 255
    t = np.linspace(0.0, 1.0, size)[:, None]
    for c in range(3):
        img[..., c] = np.round(top[c] * (1 - t) + bottom[c] * t).astype(np.uint8)
    return img


SKY_FACES = {
    # name -> (top color, bottom color); +X -X +Y -Y +Z -Z
    "px": ((96, 160, 224), (168, 200, 232)),
    "nx": ((80, 144, 208), (160, 192, 224)),
    "py": ((48, 104, 192), (96, 160, 224)),
    "ny": ((176, 208, 232), (208, 224, 240)),
    "pz": ((88, 152, 216), (164, 196, 228)),
    "nz": ((72, 136, 200), (156, 188, 220)),
}


def main():
    textures = ASSETS / "textures"
    sky = textures / "sky"
    models = ASSETS / "models"
    for directory in (textures, sky, models):
        directory.mkdir(parents=True, exist_ok=True)

    Image.fromarray(checker()).save(textures / "checker.png")
    Image.fromarray(checker(64, 4, (220, 120, 60), (120, 60, 30))).save(
        textures / "bricks.png"
    )
    for name, (top, bottom) in SKY_FACES.items():
        Image.fromarray(gradient_face(64, top, bottom)).save(sky / f"{name}.png")

    meshes.save_npz(meshes.cube(1.0), models / "cube.npz")
    meshes.save_npz(meshes.plane(1.0), models / "plane.npz")
    meshes.save_npz(meshes.uv_sphere(1.0, 24, 32), models / "sphere.npz")
    print(f"assets written under {ASSETS}")


if __name__ == "__main__":
    main()
