"""Transform and parent-link components plus world-matrix propagation."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .ecs import Component, Entity, Scene, System, UnknownEntityError
from .math3d import compose_trs


class CycleError(ValueError):
    """Raised when a reparent operation would make an entity its own ancestor."""


class TransformComponent(Component):
    """Translation / Euler rotation (XYZ, degrees) / scale, plus cached matrices.

    Fields are float64; the GPU boundary converts to float32. ``x``/``y``/``z``
    alias the translation components so systems can write e.g. ``transform.y``.
    """

    def __init__(self, translation=(0.0, 0.0, 0.0), rotation=(0.0, 0.0, 0.0),
                 scale=(1.0, 1.0, 1.0)):
        self.translation = np.asarray(translation, dtype=np.float64)
        self.rotation = np.asarray(rotation, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)
        self.local_matrix = np.eye(4)
        self.world_matrix = np.eye(4)

    @property
    def x(self) -> float:
        return float(self.translation[0])

    @x.setter
    def x(self, value: float):
        self.translation[0] = value

    @property
    def y(self) -> float:
        return float(self.translation[1])

    @y.setter
    def y(self, value: float):
        self.translation[1] = value

    @property
    def z(self) -> float:
        return float(self.translation[2])

    @z.setter
    def z(self, value: float):
        self.translation[2] = value


class LinkComponent(Component):
    """Parent reference; None marks a hierarchy root."""

    def __init__(self, parent: Optional[Entity] = None):
        self.parent = parent


def _is_ancestor(scene: Scene, candidate: Entity, of: Entity) -> bool:
    seen = set()
    current = of
    while current is not None and current not in seen:
        seen.add(current)
        link = scene.get_component(current, LinkComponent)
        current = link.parent if link is not None else None
        if current == candidate:
            return True
    return False


def set_parent(scene: Scene, entity: Entity, parent: Optional[Entity]):
    """Point ``entity``'s link at ``parent`` (or None), refusing cycles."""
    if not scene.is_enrolled(entity):
        raise UnknownEntityError(f"{entity!r} is not enrolled")
    if parent is not None:
        if not scene.is_enrolled(parent):
            raise UnknownEntityError(f"parent {parent!r} is not enrolled")
        if parent == entity or _is_ancestor(scene, entity, parent):
            raise CycleError(f"setting {parent!r} as parent of {entity!r} creates a cycle")
    link = scene.get_component(entity, LinkComponent)
    if link is None:
        scene.add_component(entity, LinkComponent(parent))
    else:
        link.parent = parent


def propagate(scene: Scene):
    """Recompute local and world matrices, parents before children.

    Entities without a LinkComponent (or with parent=None) are hierarchy
    roots. An entity without a TransformComponent passes its parent's world
    matrix through unchanged. Idempotent: a second call without mutation
    changes nothing.
    """
    transforms = {entity: t for entity, t in scene.query(TransformComponent)}
    children: dict[Entity, list[Entity]] = {}
    roots: list[Entity] = []
    for entity in scene.entities:
        link = scene.get_component(entity, LinkComponent)
        parent = link.parent if link is not None else None
        if parent is None:
            roots.append(entity)
        else:
            if not scene.is_enrolled(parent):
                raise UnknownEntityError(
                    f"{entity!r} links to dangling parent {parent!r}"
                )
            children.setdefault(parent, []).append(entity)

    visited = 0
    stack = [(root, np.eye(4)) for root in reversed(roots)]
    while stack:
        entity, parent_world = stack.pop()
        visited += 1
        transform = transforms.get(entity)
        if transform is not None:
            transform.local_matrix = compose_trs(
                transform.translation, transform.rotation, transform.scale
            )
            transform.world_matrix = parent_world @ transform.local_matrix
            world = transform.world_matrix
        else:
            world = parent_world
        for child in reversed(children.get(entity, [])):
            stack.append((child, world))
    if visited != len(scene.entities):
        raise CycleError("transform hierarchy contains a cycle")


class TransformSystem(System):
    """Registered system wrapper that runs propagation once per tick."""

    def __init__(self):
        super().__init__([TransformComponent, LinkComponent])

    def update(self, ts):
        if self.scene is not None:
            propagate(self.scene)
