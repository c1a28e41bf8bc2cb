import numpy as np
import pytest

from renderlab import (
    MaterialData,
    MaterialLib,
    MeshLib,
    MissingResourceError,
    ShaderLib,
    TextureData,
    TextureLib,
    lookup,
)
from renderlab.device import ShaderCompileError, get_device
from renderlab.resources import shaders_path

UNLIT = "unlit.py"


def white_png(tmp_path, name="white.png", size=2):
    from PIL import Image

    path = tmp_path / name
    Image.fromarray(np.full((size, size, 4), 255, np.uint8)).save(path)
    return path


def test_texture_build_echoes_dimensions(tmp_path):
    handle = TextureLib().build("a", TextureData(path=white_png(tmp_path)))
    assert handle.width == 2 and handle.height == 2
    assert (handle.texture.data == 255).all()


def test_texture_double_build_single_allocation(tmp_path):
    path = white_png(tmp_path)
    first = TextureLib().build("a", TextureData(path=path))
    count = get_device().texture_count
    second = TextureLib().build("a", TextureData(path=path))
    assert second is first
    assert get_device().texture_count == count
    assert len(TextureLib()) == 1


def test_texture_missing_file_errors():
    with pytest.raises(FileNotFoundError):
        TextureLib().build("b", TextureData(path="/nonexistent/nope.png"))
    assert lookup("texture", "b") is None


def test_texture_decode_failure_errors(tmp_path):
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"not a png at all")
    with pytest.raises(ValueError):
        TextureLib().build("bad", TextureData(path=bad))


def test_texture_raw_pixels_validated():
    with pytest.raises(ValueError):
        TextureData(pixels=np.zeros(5, np.uint8), width=2, height=2, channels=4)
    data = TextureData(
        pixels=np.zeros(2 * 2 * 4, np.uint8), width=2, height=2, channels=4
    )
    assert data.load_rgba8().shape == (2, 2, 4)


def test_shader_build_idempotent():
    first = ShaderLib().build("default_mesh", shaders_path() / UNLIT)
    second = ShaderLib().build("default_mesh", shaders_path() / UNLIT)
    assert second is first
    assert first.stages == ("vertex", "fragment")
    assert "view_proj" in first.bindings


def test_shader_compile_error_leaves_registry_unchanged():
    with pytest.raises(ShaderCompileError):
        ShaderLib().build("broken", "def vertex(vin, u:\n    pass")
    assert lookup("shader", "broken") is None


def test_shader_name_keyed_not_content_keyed():
    source = (shaders_path() / UNLIT).read_text()
    a = ShaderLib().build("one", source)
    b = ShaderLib().build("two", source)
    assert a is not b
    assert len(ShaderLib()) == 2


def test_shader_missing_file_errors():
    with pytest.raises(FileNotFoundError):
        ShaderLib().build("nope", shaders_path() / "does_not_exist.py")


def test_material_build_resolves_references(tmp_path):
    ShaderLib().build("default_mesh", shaders_path() / "lit_blinn_phong.py")
    TextureLib().build("pistol_albedo", TextureData(path=white_png(tmp_path)))
    handle = MaterialLib().build(
        "M_Pistol", MaterialData("default_mesh", ["pistol_albedo"], glossiness=2.0)
    )
    assert handle.data.glossiness == 2.0
    assert handle.shader.name == "default_mesh"
    assert handle.textures[0].name == "pistol_albedo"


def test_material_before_texture_is_dangling_error():
    ShaderLib().build("default_mesh", shaders_path() / UNLIT)
    with pytest.raises(MissingResourceError) as excinfo:
        MaterialLib().build("M", MaterialData("default_mesh", ["missing_tex"]))
    assert "missing_tex" in str(excinfo.value)
    with pytest.raises(MissingResourceError) as excinfo:
        MaterialLib().build("M2", MaterialData("missing_shader"))
    assert "missing_shader" in str(excinfo.value)
    assert lookup("material", "M") is None


def test_material_rebuild_returns_same_handle():
    ShaderLib().build("default_mesh", shaders_path() / UNLIT)
    first = MaterialLib().build("M", MaterialData("default_mesh"))
    second = MaterialLib().build("M", MaterialData("default_mesh", glossiness=9.0))
    assert second is first
    assert second.data.glossiness == 1.0  # original payload kept


def test_material_glossiness_must_be_nonnegative():
    with pytest.raises(ValueError):
        MaterialData("s", glossiness=-1.0)


def test_lookup_never_builds():
    assert lookup("texture", "ghost") is None
    assert lookup("shader", "ghost") is None
    assert lookup("material", "ghost") is None
    assert lookup("mesh", "ghost") is None
    assert lookup("unknown-kind", "ghost") is None


def test_lookup_wrong_kind_right_name(tmp_path):
    TextureLib().build("thing", TextureData(path=white_png(tmp_path)))
    assert lookup("texture", "thing") is not None
    assert lookup("shader", "thing") is None


def test_mesh_registry_from_models_dir():
    handle = MeshLib().build("cube", "cube.npz")
    assert handle.data.vertex_count == 24
    assert handle.data.triangle_count == 12
    again = MeshLib().build("cube", "cube.npz")
    assert again is handle


def test_cubemap_build(tmp_path):
    paths = [white_png(tmp_path, f"f{i}.png") for i in range(6)]
    handle = TextureLib().build_cubemap("sky", paths)
    assert handle.kind == "cube"
    assert handle.texture.data.shape == (6, 2, 2, 4)
    with pytest.raises(ValueError):
        TextureLib().build_cubemap("sky2", paths[:3])


def test_registry_size_never_exceeds_distinct_names(tmp_path):
    lib = TextureLib()
    path = white_png(tmp_path)
    for i in range(5):
        lib.build("a", TextureData(path=path))
        lib.build("b", TextureData(path=path))
    assert len(lib) == 2
