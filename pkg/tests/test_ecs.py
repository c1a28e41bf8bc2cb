import random

import pytest

from renderlab import (
    GravityComponent,
    GravitySystem,
    InfoComponent,
    Scene,
    SceneManager,
    System,
    TransformComponent,
    UnknownEntityError,
)
from renderlab.ecs import Component
from renderlab.scenegraph import LinkComponent

from helpers import assert_cache_coherent, assert_store_refs_bijection, brute_force_members


class Flag(Component):
    def __init__(self, value=0):
        self.value = value


class Tagged(Component):
    pass


class CountingSystem(System):
    """Records create/update hook invocations for oracle checks."""

    def __init__(self, required):
        super().__init__(required)
        self.created = []
        self.updated = []

    def on_create_entity(self, entity, components):
        self.created.append(entity)

    def on_update_entity(self, ts, entity, components):
        self.updated.append((entity, ts))


def test_enroll_on_empty_scene():
    scene = Scene()
    entity = scene.enroll_entity()
    assert len(scene.entities) == 1
    assert sum(len(s) for s in scene.stores.values()) == 0
    assert scene.refs[entity] == {}


def test_enroll_ids_are_unique():
    scene = Scene()
    a, b = scene.enroll_entity(), scene.enroll_entity()
    assert a.id != b.id


def test_refs_empty_until_add_component():
    scene = Scene()
    root = scene.enroll_entity()
    entity = scene.enroll_entity()
    third = scene.enroll_entity()
    assert all(scene.refs[e] == {} for e in (root, entity, third))
    scene.add_component(root, TransformComponent())
    scene.add_component(root, InfoComponent("root"))
    scene.add_component(root, LinkComponent(None))
    scene.add_component(entity, TransformComponent())
    scene.add_component(entity, InfoComponent("entity"))
    scene.add_component(entity, LinkComponent(root))
    assert len(scene.refs[root]) == 3
    assert len(scene.refs[entity]) == 3
    assert scene.refs[third] == {}
    assert_store_refs_bijection(scene)


def test_add_component_unknown_entity_errors():
    scene = Scene()
    other = Scene().enroll_entity()
    with pytest.raises(UnknownEntityError):
        scene.add_component(other, Flag())


def test_add_fires_create_hook_once_on_entry():
    scene = Scene()
    system = CountingSystem([GravityComponent, TransformComponent])
    scene.register_system(system)
    entity = scene.enroll_entity()
    scene.add_component(entity, GravityComponent())
    assert system.created == []
    scene.add_component(entity, TransformComponent())
    assert system.created == [entity]
    assert [e for e, _ in system.cache] == brute_force_members(scene, system.required)


def test_duplicate_add_replaces_value_in_place():
    scene = Scene()
    entity = scene.enroll_entity()
    scene.add_component(entity, Flag(1))
    scene.add_component(entity, Flag(2))
    assert len(scene.stores[Flag]) == 1
    assert scene.get_component(entity, Flag).value == 2


def test_duplicate_add_refreshes_system_cache_tuple():
    scene = Scene()
    system = CountingSystem([Flag])
    scene.register_system(system)
    entity = scene.enroll_entity()
    first, second = Flag(1), Flag(2)
    scene.add_component(entity, first)
    scene.add_component(entity, second)
    assert system.created == [entity]  # replacement is not a re-entry
    assert system.cache[0][1][0] is second


def test_get_component_read_your_write():
    scene = Scene()
    entity = scene.enroll_entity()
    transform = TransformComponent()
    scene.add_component(entity, transform)
    assert scene.get_component(entity, TransformComponent) is transform
    assert scene.get_component(entity, Flag) is None
    scene.remove_component(entity, TransformComponent)
    assert scene.get_component(entity, TransformComponent) is None
    with pytest.raises(UnknownEntityError):
        scene.get_component(Scene().enroll_entity(), Flag)


def test_remove_component_updates_caches_same_tick():
    scene = Scene()
    system = CountingSystem([GravityComponent, TransformComponent])
    scene.register_system(system)
    entity = scene.enroll_entity()
    scene.add_component(entity, GravityComponent())
    scene.add_component(entity, TransformComponent())
    assert [e for e, _ in system.cache] == [entity]
    assert scene.remove_component(entity, GravityComponent) is True
    assert system.cache == []
    assert scene.remove_component(entity, GravityComponent) is False


def test_remove_absent_returns_false_without_change():
    scene = Scene()
    entity = scene.enroll_entity()
    scene.add_component(entity, Flag())
    assert scene.remove_component(entity, Tagged) is False
    assert len(scene.stores[Flag]) == 1
    assert_store_refs_bijection(scene)


def test_create_hook_fires_again_on_reentry():
    scene = Scene()
    system = CountingSystem([Flag])
    scene.register_system(system)
    entity = scene.enroll_entity()
    scene.add_component(entity, Flag())
    scene.remove_component(entity, Flag)
    scene.add_component(entity, Flag())
    assert system.created == [entity, entity]


def test_register_filters_existing_entities():
    scene = Scene()
    match_a = scene.enroll_entity()
    scene.add_component(match_a, GravityComponent())
    scene.add_component(match_a, TransformComponent())
    match_b = scene.enroll_entity()
    scene.add_component(match_b, GravityComponent())
    scene.add_component(match_b, TransformComponent())
    lone = scene.enroll_entity()
    scene.add_component(lone, GravityComponent())
    system = CountingSystem([GravityComponent, TransformComponent])
    scene.register_system(system)
    assert len(system.cache) == 2
    assert system.created == [match_a, match_b]


def test_register_empty_required_matches_all():
    scene = Scene()
    entities = [scene.enroll_entity() for _ in range(3)]
    system = CountingSystem([])
    scene.register_system(system)
    assert [e for e, _ in system.cache] == entities


def test_register_twice_runs_two_instances_in_order():
    scene = Scene()
    entity = scene.enroll_entity()
    scene.add_component(entity, Flag())
    calls = []

    class Ordered(System):
        def __init__(self, label):
            super().__init__([Flag])
            self.label = label

        def on_update_entity(self, ts, entity, components):
            calls.append(self.label)

    scene.register_system(Ordered("first"))
    scene.register_system(Ordered("second"))
    scene.tick(0.1)
    assert calls == ["first", "second"]


def test_gravity_update_matches_listing_arithmetic():
    scene = Scene()
    scene.register_system(GravitySystem())
    entity = scene.enroll_entity()
    scene.add_component(entity, GravityComponent(force=5.0))
    transform = scene.add_component(entity, TransformComponent())
    before = transform.y
    scene.tick(0.016)
    assert transform.y == before - 5.0 * 0.016  # same fp expression, exact


def test_gravity_zero_timestep_is_noop():
    scene = Scene()
    scene.register_system(GravitySystem())
    entity = scene.enroll_entity()
    scene.add_component(entity, GravityComponent(force=5.0))
    transform = scene.add_component(entity, TransformComponent())
    scene.tick(0.0)
    assert transform.y == 0.0


def test_gravity_two_ticks_closed_form():
    scene = Scene()
    scene.register_system(GravitySystem())
    entity = scene.enroll_entity()
    scene.add_component(entity, GravityComponent(force=5.0))
    transform = scene.add_component(entity, TransformComponent())
    scene.tick(0.1)
    scene.tick(0.1)
    assert transform.y == pytest.approx(-1.0, abs=1e-12)


def test_tick_rejects_negative_timestep():
    with pytest.raises(ValueError):
        Scene().tick(-0.1)


def test_tick_visits_in_enrollment_order():
    scene = Scene()
    system = CountingSystem([Flag])
    scene.register_system(system)
    entities = []
    for _ in range(5):
        entity = scene.enroll_entity()
        scene.add_component(entity, Flag())
        entities.append(entity)
    scene.tick(0.5)
    assert [e for e, _ in system.updated] == entities


def test_change_scene_preserves_state():
    manager = SceneManager()
    scene_a, scene_b = Scene("a"), Scene("b")
    manager.add_scene("a", scene_a)
    manager.add_scene("b", scene_b)
    assert manager.active_name == "a"
    entity = scene_a.enroll_entity()
    transform = scene_a.add_component(entity, TransformComponent(translation=(1, 2, 3)))
    snapshot = transform.translation.copy()
    manager.change_scene("b")
    manager.change_scene("a")
    assert (transform.translation == snapshot).all()
    assert manager.active_scene is scene_a


def test_change_scene_unknown_name_errors():
    manager = SceneManager()
    manager.add_scene("a", Scene("a"))
    with pytest.raises(KeyError):
        manager.change_scene("missing")
    assert manager.active_name == "a"


def test_manager_ticks_only_active_scene():
    manager = SceneManager()
    scene_a, scene_b = Scene("a"), Scene("b")
    system_a, system_b = CountingSystem([Flag]), CountingSystem([Flag])
    scene_a.register_system(system_a)
    scene_b.register_system(system_b)
    for scene in (scene_a, scene_b):
        entity = scene.enroll_entity()
        scene.add_component(entity, Flag())
    manager.add_scene("a", scene_a)
    manager.add_scene("b", scene_b)
    manager.tick(0.1)
    assert len(system_a.updated) == 1 and len(system_b.updated) == 0
    manager.change_scene("b")
    manager.tick(0.1)
    assert len(system_a.updated) == 1 and len(system_b.updated) == 1


class _A(Component):
    pass


class _B(Component):
    pass


class _C(Component):
    pass


class _D(Component):
    pass


class _E(Component):
    pass


RANDOM_TYPES = [_A, _B, _C, _D, _E]


def test_randomized_ops_match_brute_force_every_step():
    rng = random.Random(20240817)
    scene = Scene()
    scene.register_system(CountingSystem([_A, _B]))
    scene.register_system(CountingSystem([_C]))
    scene.register_system(CountingSystem([_B, _D, _E]))
    entities = [scene.enroll_entity() for _ in range(8)]
    for step in range(1000):
        op = rng.random()
        if op < 0.1 or not entities:
            entities.append(scene.enroll_entity())
        elif op < 0.6:
            scene.add_component(rng.choice(entities), rng.choice(RANDOM_TYPES)())
        elif op < 0.9:
            scene.remove_component(rng.choice(entities), rng.choice(RANDOM_TYPES))
        else:
            scene.register_system(CountingSystem(rng.sample(RANDOM_TYPES, rng.randint(0, 3))))
        assert_cache_coherent(scene)
        assert_store_refs_bijection(scene)


def test_identical_op_sequences_are_deterministic():
    def run():
        scene = Scene()
        system = CountingSystem([_A])
        scene.register_system(system)
        order = []
        entities = [scene.enroll_entity() for _ in range(6)]
        for i, entity in enumerate(entities):
            if i % 2 == 0:
                scene.add_component(entity, _A())
        scene.remove_component(entities[2], _A)
        scene.add_component(entities[2], _A())
        scene.tick(0.25)
        for entity, _ts in system.updated:
            order.append(entities.index(entity))
        return order

    assert run() == run()
