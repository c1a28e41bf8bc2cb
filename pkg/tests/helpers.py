"""Shared test utilities: brute-force oracles and invariant checkers."""

import numpy as np

from renderlab.ecs import Scene


def brute_force_members(scene: Scene, required) -> list:
    """Independent filter oracle: entities whose refs cover ``required``,
    in enrollment order."""
    required = set(required)
    return [e for e in scene.entities if required <= set(scene.refs[e])]


def assert_cache_coherent(scene: Scene):
    """Every system cache must equal the brute-force filter, in order, and
    cached component tuples must alias the stored components."""
    for system in scene.systems:
        expected = brute_force_members(scene, system.required)
        got = [entity for entity, _ in system.cache]
        assert got == expected, f"cache {got} != brute force {expected}"
        for entity, components in system.cache:
            for ctype, component in zip(system.required, components):
                stored = scene.stores[ctype][scene.refs[entity][ctype]]
                assert component is stored


def assert_store_refs_bijection(scene: Scene):
    """Sum of ref counts equals sum of store lengths; refs resolve in-bounds;
    each stored component is referenced exactly once."""
    total_refs = sum(len(ref) for ref in scene.refs.values())
    total_components = sum(len(store) for store in scene.stores.values())
    assert total_refs == total_components
    seen = set()
    for entity, ref in scene.refs.items():
        for ctype, index in ref.items():
            assert 0 <= index < len(scene.stores[ctype])
            key = (ctype, index)
            assert key not in seen, "two entities reference one component"
            seen.add(key)
    for ctype, store in scene.stores.items():
        for index in range(len(store)):
            assert (ctype, index) in seen, "orphaned component in store"


def mean_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Mean absolute per-channel difference between two RGBA8 images."""
    return float(np.mean(np.abs(a.astype(np.int64) - b.astype(np.int64))))


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> int:
    return int(np.max(np.abs(a.astype(np.int64) - b.astype(np.int64))))
