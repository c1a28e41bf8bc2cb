"""Entity-Component-System kernel.

Entities are bare UUIDs, components are plain data objects grouped into one
contiguous store per type, and systems own all behavior over entities that
carry every component type the system requires. A per-entity reference map
(component type -> index into that type's store) keeps lookups O(1).
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Optional, Type


class UnknownEntityError(KeyError):
    """Raised when an operation names an entity that is not enrolled."""


@dataclass(frozen=True)
class Entity:
    """Opaque unique identifier enrolling a thing into a Scene."""

    id: uuid.UUID = field(default_factory=uuid.uuid4)

    def __repr__(self):
        return f"Entity({str(self.id)[:8]})"


class Component:
    """Base class for components. Components are data only, no behavior."""


class System:
    """Behavior unit over entities possessing all ``required`` component types.

    The matching (entity, components) pairs are cached in enrollment order and
    kept up to date as components are added and removed at runtime.
    ``on_create_entity`` fires whenever an entity enters the cache (including
    re-entry after a remove/add round trip); ``on_update_entity`` runs once per
    cached entity per tick.
    """

    def __init__(self, required: Iterable[Type[Component]]):
        self.required: tuple = tuple(required)
        self.cache: list = []  # [(Entity, (components in required order)), ...]
        self.scene: Optional["Scene"] = None
        self._members: set = set()

    def on_create_entity(self, entity: Entity, components):
        pass

    def on_update_entity(self, ts: float, entity: Entity, components):
        pass

    def update(self, ts: float):
        """Run the per-entity update hook over a snapshot of the cache."""
        for entity, components in list(self.cache):
            self.on_update_entity(ts, entity, components)


class Scene:
    """Container for entities, component stores, reference maps, and systems."""

    def __init__(self, name: str = "scene"):
        self.name = name
        self.entities: list[Entity] = []
        self.stores: dict[type, list] = {}
        self.refs: dict[Entity, dict[type, int]] = {}
        self.systems: list[System] = []
        self._order: dict[Entity, int] = {}
        self._owners: dict[type, list[Entity]] = {}

    # -- entities ----------------------------------------------------------

    def enroll_entity(self) -> Entity:
        """Create a new entity with an empty reference map."""
        return self.enroll_existing(Entity())

    def enroll_existing(self, entity: Entity) -> Entity:
        """Enroll an entity object that already has an id (scene loading)."""
        if entity in self.refs:
            raise ValueError(f"{entity!r} is already enrolled")
        self._order[entity] = len(self.entities)
        self.entities.append(entity)
        self.refs[entity] = {}
        self._refresh_entity(entity)  # empty-required systems match immediately
        return entity

    def is_enrolled(self, entity: Entity) -> bool:
        return entity in self.refs

    def _check_enrolled(self, entity: Entity):
        if entity not in self.refs:
            raise UnknownEntityError(f"{entity!r} is not enrolled in scene {self.name!r}")

    # -- components --------------------------------------------------------

    def add_component(self, entity: Entity, component: Component):
        """Attach ``component`` to ``entity``; replaces a prior value of the same type."""
        self._check_enrolled(entity)
        ctype = type(component)
        store = self.stores.setdefault(ctype, [])
        owners = self._owners.setdefault(ctype, [])
        ref = self.refs[entity]
        if ctype in ref:
            store[ref[ctype]] = component  # replace in place, refs stay valid
        else:
            ref[ctype] = len(store)
            store.append(component)
            owners.append(entity)
        self._refresh_entity(entity)
        return component

    def get_component(self, entity: Entity, ctype: Type[Component]):
        """Return the stored component of ``ctype`` or None when absent."""
        self._check_enrolled(entity)
        ref = self.refs[entity]
        if ctype not in ref:
            return None
        return self.stores[ctype][ref[ctype]]

    def has_component(self, entity: Entity, ctype: Type[Component]) -> bool:
        self._check_enrolled(entity)
        return ctype in self.refs[entity]

    def remove_component(self, entity: Entity, ctype: Type[Component]) -> bool:
        """Detach ``ctype`` from ``entity``. Returns False when it was absent."""
        self._check_enrolled(entity)
        ref = self.refs[entity]
        if ctype not in ref:
            return False
        index = ref.pop(ctype)
        store = self.stores[ctype]
        owners = self._owners[ctype]
        last = len(store) - 1
        if index != last:
            # keep the store dense: swap-with-last and patch the moved owner's ref
            store[index] = store[last]
            owners[index] = owners[last]
            self.refs[owners[index]][ctype] = index
        store.pop()
        owners.pop()
        self._refresh_entity(entity)
        return True

    def component_types(self, entity: Entity) -> set:
        self._check_enrolled(entity)
        return set(self.refs[entity])

    def query(self, *ctypes: Type[Component]) -> Iterator[tuple]:
        """Yield (entity, components...) for entities carrying all ``ctypes``,
        in enrollment order."""
        for entity in self.entities:
            ref = self.refs[entity]
            if all(ct in ref for ct in ctypes):
                yield (entity, *(self.stores[ct][ref[ct]] for ct in ctypes))

    # -- systems -----------------------------------------------------------

    def register_system(self, system: System):
        """Append ``system`` and filter all current entities into its cache."""
        system.scene = self
        self.systems.append(system)
        for entity in self.entities:
            self._refresh_entity_for(system, entity)

    def _matches(self, system: System, entity: Entity) -> bool:
        ref = self.refs[entity]
        return all(ct in ref for ct in system.required)

    def _components_for(self, system: System, entity: Entity) -> tuple:
        ref = self.refs[entity]
        return tuple(self.stores[ct][ref[ct]] for ct in system.required)

    def _refresh_entity_for(self, system: System, entity: Entity):
        was = entity in system._members
        now = self._matches(system, entity)
        if now and not was:
            components = self._components_for(system, entity)
            order = self._order[entity]
            at = 0
            for at, (cached, _) in enumerate(system.cache):
                if self._order[cached] > order:
                    break
            else:
                at = len(system.cache)
            system.cache.insert(at, (entity, components))
            system._members.add(entity)
            system.on_create_entity(entity, components)
        elif was and not now:
            system.cache = [(e, c) for e, c in system.cache if e != entity]
            system._members.discard(entity)
        elif was and now:
            # component replacement: refresh the cached tuple in place
            components = self._components_for(system, entity)
            system.cache = [
                (e, components if e == entity else c) for e, c in system.cache
            ]

    def _refresh_entity(self, entity: Entity):
        for system in self.systems:
            self._refresh_entity_for(system, entity)

    # -- ticking -----------------------------------------------------------

    def tick(self, ts: float):
        """Run every system's update hook, in registration order."""
        if ts < 0:
            raise ValueError(f"tick timestep must be >= 0, got {ts}")
        for system in self.systems:
            system.update(ts)


class SceneManager:
    """Named collection of scenes with exactly one active when nonempty."""

    def __init__(self):
        self.scenes: dict[str, Scene] = {}
        self.active_name: Optional[str] = None

    def add_scene(self, name: str, scene: Scene) -> Scene:
        self.scenes[name] = scene
        if self.active_name is None:
            self.active_name = name
        return scene

    def change_scene(self, name: str):
        """Make ``name`` the active scene; other scenes keep their state."""
        if name not in self.scenes:
            raise KeyError(f"unknown scene {name!r}")
        self.active_name = name

    @property
    def active_scene(self) -> Optional[Scene]:
        if self.active_name is None:
            return None
        return self.scenes[self.active_name]

    def tick(self, ts: float):
        """Tick only the active scene."""
        scene = self.active_scene
        if scene is not None:
            scene.tick(ts)


class InfoComponent(Component):
    """Free-form label attached to an entity."""

    def __init__(self, tag: str = ""):
        self.tag = tag


class GravityComponent(Component):
    """Constant downward acceleration, in units per second."""

    def __init__(self, force: float = 5.0):
        self.force = force


class GravitySystem(System):
    """Pulls the transform of every (Gravity, Transform) entity down each tick."""

    def __init__(self, required=None):
        if required is None:
            from .scenegraph import TransformComponent

            required = [GravityComponent, TransformComponent]
        super().__init__(required)

    def on_update_entity(self, ts, entity, components):
        gravity, transform = components
        transform.y -= gravity.force * ts
