import math
import random

import numpy as np
import pytest

from renderlab import (
    CycleError,
    InfoComponent,
    LinkComponent,
    Scene,
    TransformComponent,
    TransformSystem,
    propagate,
    set_parent,
)
from renderlab.ecs import UnknownEntityError
from renderlab.math3d import compose_trs, transform_point


def oracle_trs(translation, rotation_deg, scale):
    """Independent TRS assembly: rotation built directly from sin/cos terms,
    scale applied to the rotation columns, translation in the last column."""
    rx, ry, rz = (math.radians(v) for v in rotation_deg)
    cx, sx = math.cos(rx), math.sin(rx)
    cy, sy = math.cos(ry), math.sin(ry)
    cz, sz = math.cos(rz), math.sin(rz)
    mat_x = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    mat_y = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
    mat_z = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    rot = mat_z @ mat_y @ mat_x
    out = np.eye(4)
    out[:3, :3] = rot * np.asarray(scale, dtype=float)[None, :]
    out[:3, 3] = translation
    return out


def random_trs(rng):
    return (
        [rng.uniform(-5, 5) for _ in range(3)],
        [rng.uniform(-180, 180) for _ in range(3)],
        [rng.choice([-1, 1]) * rng.uniform(0.2, 3.0) for _ in range(3)],
    )


def test_compose_identity():
    assert np.allclose(compose_trs((0, 0, 0), (0, 0, 0), (1, 1, 1)), np.eye(4))


def test_compose_translation_column():
    m = compose_trs((1, 2, 3), (0, 0, 0), (1, 1, 1))
    expected = np.eye(4)
    expected[:3, 3] = (1, 2, 3)
    assert np.array_equal(m, expected)


def test_compose_trs_derived_point():
    m = compose_trs((1, 0, 0), (0, 90, 0), (2, 2, 2))
    world = transform_point(m, (1, 0, 0))
    assert np.allclose(world, (1, 0, -2), atol=1e-6)


def test_compose_matches_independent_oracle():
    rng = random.Random(7)
    for _ in range(100):
        t, r, s = random_trs(rng)
        got = compose_trs(t, r, s)
        expected = oracle_trs(t, r, s)
        assert np.max(np.abs(got - expected)) <= 1e-9


def test_compose_zero_scale_errors():
    with pytest.raises(ValueError):
        compose_trs((0, 0, 0), (0, 0, 0), (1, 0, 1))


def test_root_world_equals_local():
    scene = Scene()
    entity = scene.enroll_entity()
    transform = scene.add_component(entity, TransformComponent((2, 3, 4), (10, 20, 30)))
    set_parent(scene, entity, None)
    propagate(scene)
    assert np.array_equal(transform.world_matrix, transform.local_matrix)


def test_child_of_translated_root():
    scene = Scene()
    root = scene.enroll_entity()
    child = scene.enroll_entity()
    scene.add_component(root, TransformComponent((1, 0, 0)))
    child_t = scene.add_component(child, TransformComponent((0, 1, 0)))
    set_parent(scene, child, root)
    propagate(scene)
    assert np.allclose(child_t.world_matrix[:3, 3], (1, 1, 0))


def test_two_cycle_rejected():
    scene = Scene()
    a, b = scene.enroll_entity(), scene.enroll_entity()
    scene.add_component(a, TransformComponent())
    scene.add_component(b, TransformComponent())
    set_parent(scene, a, b)
    with pytest.raises(CycleError):
        set_parent(scene, b, a)
    # link unchanged by the failed call
    assert scene.get_component(b, LinkComponent) is None or \
        scene.get_component(b, LinkComponent).parent is None


def test_self_parent_rejected():
    scene = Scene()
    a = scene.enroll_entity()
    with pytest.raises(CycleError):
        set_parent(scene, a, a)


def test_set_parent_unknown_entity():
    scene = Scene()
    a = scene.enroll_entity()
    stranger = Scene().enroll_entity()
    with pytest.raises(UnknownEntityError):
        set_parent(scene, stranger, a)
    with pytest.raises(UnknownEntityError):
        set_parent(scene, a, stranger)


def test_dangling_parent_errors_naming_entity():
    scene = Scene()
    entity = scene.enroll_entity()
    scene.add_component(entity, TransformComponent())
    stranger = Scene().enroll_entity()
    scene.add_component(entity, LinkComponent(stranger))
    with pytest.raises(UnknownEntityError) as excinfo:
        propagate(scene)
    assert str(entity.id)[:8] in str(excinfo.value)


def test_chain_matches_matrix_chain_oracle():
    rng = random.Random(42)
    for _case in range(60):
        scene = Scene()
        depth = rng.randint(2, 5)
        previous = None
        transforms = []
        locals_ = []
        for _ in range(depth):
            entity = scene.enroll_entity()
            t, r, s = random_trs(rng)
            transforms.append(scene.add_component(entity, TransformComponent(t, r, s)))
            locals_.append(oracle_trs(t, r, s))
            set_parent(scene, entity, previous)
            previous = entity
        propagate(scene)
        expected = np.eye(4)
        for local, transform in zip(locals_, transforms):
            expected = expected @ local  # brute-force left-to-right chain
            assert np.max(np.abs(transform.world_matrix - expected)) <= 1e-6


def test_rotating_root_closed_form():
    scene = Scene()
    root = scene.enroll_entity()
    child = scene.enroll_entity()
    root_t = scene.add_component(root, TransformComponent())
    child_t = scene.add_component(child, TransformComponent((1, 0, 0)))
    set_parent(scene, child, root)
    scene.register_system(TransformSystem())
    for _ in range(90):
        root_t.rotation[1] += 1.0  # one degree per tick about y
        scene.tick(1.0 / 60.0)
    position = child_t.world_matrix[:3, 3]
    angle = math.radians(90.0)
    expected = (math.cos(angle), 0.0, -math.sin(angle))
    assert np.allclose(position, expected, atol=1e-4)


def test_propagate_is_idempotent():
    scene = Scene()
    root = scene.enroll_entity()
    child = scene.enroll_entity()
    scene.add_component(root, TransformComponent((1, 2, 3), (4, 5, 6)))
    child_t = scene.add_component(child, TransformComponent((0.5, 0, 0), scale=(2, 2, 2)))
    set_parent(scene, child, root)
    propagate(scene)
    snapshot = child_t.world_matrix.copy()
    propagate(scene)
    assert np.array_equal(child_t.world_matrix, snapshot)


def test_reparent_preserves_local_fields():
    scene = Scene()
    a, b, child = (scene.enroll_entity() for _ in range(3))
    scene.add_component(a, TransformComponent((5, 0, 0)))
    scene.add_component(b, TransformComponent((0, 5, 0)))
    child_t = scene.add_component(child, TransformComponent((1, 2, 3), (10, 20, 30), (2, 2, 2)))
    set_parent(scene, child, a)
    propagate(scene)
    local = (child_t.translation.copy(), child_t.rotation.copy(), child_t.scale.copy())
    set_parent(scene, child, b)
    propagate(scene)
    assert np.array_equal(child_t.translation, local[0])
    assert np.array_equal(child_t.rotation, local[1])
    assert np.array_equal(child_t.scale, local[2])
    assert np.allclose(child_t.world_matrix[:3, 3], transform_point(
        compose_trs((0, 5, 0), (0, 0, 0), (1, 1, 1)), (1, 2, 3)))


def test_transformless_parent_passes_world_through():
    scene = Scene()
    group = scene.enroll_entity()  # no transform of its own
    scene.add_component(group, InfoComponent("group"))
    child = scene.enroll_entity()
    child_t = scene.add_component(child, TransformComponent((1, 1, 1)))
    set_parent(scene, child, group)
    propagate(scene)
    assert np.allclose(child_t.world_matrix[:3, 3], (1, 1, 1))


def test_world_parent_child_invariant():
    rng = random.Random(3)
    scene = Scene()
    entities = []
    transforms = {}
    for i in range(12):
        entity = scene.enroll_entity()
        t, r, s = random_trs(rng)
        transforms[entity] = scene.add_component(entity, TransformComponent(t, r, s))
        parent = rng.choice(entities) if entities and rng.random() < 0.7 else None
        set_parent(scene, entity, parent)
        entities.append(entity)
    propagate(scene)
    for entity in entities:
        link = scene.get_component(entity, LinkComponent)
        if link.parent is None:
            continue
        expected = transforms[link.parent].world_matrix @ transforms[entity].local_matrix
        assert np.max(np.abs(transforms[entity].world_matrix - expected)) <= 1e-6
