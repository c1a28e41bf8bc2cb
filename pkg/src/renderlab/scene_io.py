"""Deterministic text serialization of scenes (.pgscene files).

The format is a line-oriented, human-readable subset inspired by USD's text
layering: one block per entity holding typed component records driven by
per-type field schemas, plus a resource manifest naming every mesh, material,
texture, and cubemap the components reference. Saving is byte-stable; loading
is all-or-nothing and never touches the resource registries.

Wire format (UTF-8, version header bit-exact on line 1):

    pygandalf-scene v1
    scene "name"
    resource texture "checker" "textures/checker.png"
    entity "8d2f..." {
      TransformComponent {
        translation = (0.0, 0.0, 0.0)
        ...
      }
    }
"""

from __future__ import annotations

import json
import re
import uuid
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import resources
from .components import (
    CameraComponent,
    LightComponent,
    MaterialComponent,
    MeshComponent,
    SkyboxComponent,
)
from .ecs import Entity, GravityComponent, InfoComponent, Scene
from .scenegraph import LinkComponent, TransformComponent

FORMAT_HEADER = "pygandalf-scene v1"
FILE_EXTENSION = ".pgscene"


class SceneFormatError(ValueError):
    """Document cannot be parsed / scene cannot be serialized."""


@dataclass
class FieldSpec:
    name: str
    kind: str  # float | int | bool | str | vec3 | vec4 | entity
    resource: Optional[str] = None  # resource kind this name refers to


@dataclass
class ComponentSchema:
    ctype: type
    tag: str
    fields: tuple
    editor_only: bool = False
    factory: Optional[Callable] = None

    def build(self, values: dict):
        if self.factory is not None:
            return self.factory(**values)
        return self.ctype(**values)


_SCHEMAS: dict[str, ComponentSchema] = {}
_SCHEMA_BY_TYPE: dict[type, ComponentSchema] = {}


def register_component(ctype, fields, tag=None, editor_only=False, factory=None):
    """Register a component type for serialization and schema-driven editing."""
    tag = tag or ctype.__name__
    schema = ComponentSchema(ctype, tag, tuple(fields), editor_only, factory)
    _SCHEMAS[tag] = schema
    _SCHEMA_BY_TYPE[ctype] = schema
    return schema


def component_schema(ctype_or_tag):
    if isinstance(ctype_or_tag, str):
        return _SCHEMAS.get(ctype_or_tag)
    return _SCHEMA_BY_TYPE.get(ctype_or_tag)


register_component(TransformComponent, [
    FieldSpec("translation", "vec3"),
    FieldSpec("rotation", "vec3"),
    FieldSpec("scale", "vec3"),
])
register_component(LinkComponent, [FieldSpec("parent", "entity")])
register_component(InfoComponent, [FieldSpec("tag", "str")])
register_component(GravityComponent, [FieldSpec("force", "float")])
register_component(MeshComponent, [FieldSpec("mesh", "str", resource="mesh")])
register_component(MaterialComponent, [FieldSpec("material", "str", resource="material")])
register_component(CameraComponent, [
    FieldSpec("projection", "str"),
    FieldSpec("fov_y", "float"),
    FieldSpec("near", "float"),
    FieldSpec("far", "float"),
    FieldSpec("primary", "bool"),
    FieldSpec("ortho_size", "float"),
])
register_component(LightComponent, [
    FieldSpec("direction", "vec3"),
    FieldSpec("color", "vec3"),
    FieldSpec("intensity", "float"),
    FieldSpec("casts_shadows", "bool"),
    FieldSpec("shadow_extent", "float"),
    FieldSpec("shadow_distance", "float"),
    FieldSpec("shadow_map_size", "int"),
])
register_component(SkyboxComponent, [FieldSpec("cubemap", "str", resource="texture")])


# ---------------------------------------------------------------------------
# saving
# ---------------------------------------------------------------------------

def _format_value(value, kind: str) -> str:
    if kind == "float":
        return repr(float(value))
    if kind == "int":
        return str(int(value))
    if kind == "bool":
        return "true" if value else "false"
    if kind == "str":
        return json.dumps(str(value))
    if kind in ("vec3", "vec4"):
        n = 3 if kind == "vec3" else 4
        parts = [repr(float(v)) for v in np.asarray(value).reshape(-1)[:n]]
        return "(" + ", ".join(parts) + ")"
    if kind == "entity":
        if value is None:
            return "none"
        return json.dumps(str(value.id))
    raise SceneFormatError(f"unknown field kind {kind!r}")


def save_scene(scene: Scene) -> str:
    """Serialize ``scene`` deterministically; same scene -> identical bytes."""
    manifest: dict[tuple, str] = {}
    blocks: list[str] = []

    for entity in scene.entities:
        ref = scene.refs[entity]
        schemas = []
        skip = False
        for ctype in ref:
            schema = _SCHEMA_BY_TYPE.get(ctype)
            if schema is None:
                raise SceneFormatError(
                    f"component type {ctype.__name__} has no registered schema"
                )
            if schema.editor_only:
                skip = True
                break
            schemas.append((schema, scene.stores[ctype][ref[ctype]]))
        if skip:
            continue  # editor panels and friends are never serialized

        lines = [f'entity "{entity.id}" {{']
        for schema, component in schemas:
            lines.append(f"  {schema.tag} {{")
            for spec in schema.fields:
                value = getattr(component, spec.name)
                if spec.resource is not None:
                    name = str(value)
                    handle = resources.lookup(spec.resource, name)
                    if handle is None:
                        raise SceneFormatError(
                            f"{schema.tag}.{spec.name} references unregistered "
                            f"{spec.resource} {name!r}"
                        )
                    source = getattr(handle, "source", None) or "-"
                    manifest[(spec.resource, name)] = source
                lines.append(f"    {spec.name} = {_format_value(value, spec.kind)}")
            lines.append("  }")
        lines.append("}")
        blocks.append("\n".join(lines))

    out = [FORMAT_HEADER, f'scene {json.dumps(scene.name)}']
    for (kind, name), source in sorted(manifest.items()):
        out.append(f"resource {kind} {json.dumps(name)} {json.dumps(source)}")
    out.extend(blocks)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

_RESOURCE_RE = re.compile(r'^resource (\w+) ("(?:[^"\\]|\\.)*") ("(?:[^"\\]|\\.)*")$')
_ENTITY_RE = re.compile(r'^entity ("(?:[^"\\]|\\.)*") \{$')
_SCENE_RE = re.compile(r'^scene ("(?:[^"\\]|\\.)*")$')
_COMPONENT_RE = re.compile(r'^(\w+) \{$')
_FIELD_RE = re.compile(r'^(\w+) = (.+)$')
_VEC_RE = re.compile(r'^\(([^)]*)\)$')


def _parse_value(token: str, kind: str, line_no: int):
    try:
        if kind == "float":
            return float(token)
        if kind == "int":
            return int(token)
        if kind == "bool":
            if token in ("true", "false"):
                return token == "true"
            raise ValueError(token)
        if kind == "str":
            return json.loads(token)
        if kind in ("vec3", "vec4"):
            match = _VEC_RE.match(token)
            if not match:
                raise ValueError(token)
            parts = [float(p.strip()) for p in match.group(1).split(",")]
            expected = 3 if kind == "vec3" else 4
            if len(parts) != expected:
                raise ValueError(token)
            return tuple(parts)
        if kind == "entity":
            if token == "none":
                return None
            return uuid.UUID(json.loads(token))
    except SceneFormatError:
        raise
    except Exception as exc:
        raise SceneFormatError(
            f"line {line_no}: cannot parse {kind} value from {token!r}"
        ) from exc
    raise SceneFormatError(f"line {line_no}: unknown field kind {kind!r}")


def load_scene(text: str) -> Scene:
    """Parse a document into a fresh Scene; raises SceneFormatError on any
    defect without partial effects."""
    lines = text.split("\n")
    if not lines or lines[0] != FORMAT_HEADER:
        got = lines[0] if lines else ""
        raise SceneFormatError(
            f"unknown version header {got!r}; expected {FORMAT_HEADER!r}"
        )

    scene_name = "scene"
    manifest: dict[tuple, str] = {}
    # (entity uuid, [(schema, {field: value}, line_no)])
    entity_records: list[tuple] = []
    seen_ids: set = set()

    i = 1
    n = len(lines)

    def fail(line_no, message):
        raise SceneFormatError(f"line {line_no}: {message}")

    while i < n:
        raw = lines[i]
        line = raw.strip()
        i += 1
        if not line:
            continue
        match = _SCENE_RE.match(line)
        if match:
            scene_name = json.loads(match.group(1))
            continue
        match = _RESOURCE_RE.match(line)
        if match:
            manifest[(match.group(1), json.loads(match.group(2)))] = json.loads(match.group(3))
            continue
        match = _ENTITY_RE.match(line)
        if not match:
            fail(i, f"expected an entity block, got {line!r}")
        try:
            entity_id = uuid.UUID(json.loads(match.group(1)))
        except ValueError as exc:
            fail(i, f"bad entity id: {exc}")
        if entity_id in seen_ids:
            fail(i, f"duplicate entity id {entity_id}")
        seen_ids.add(entity_id)

        components = []
        closed = False
        while i < n:
            line = lines[i].strip()
            i += 1
            if not line:
                continue
            if line == "}":
                closed = True
                break
            match = _COMPONENT_RE.match(line)
            if not match:
                fail(i, f"expected a component block, got {line!r}")
            tag = match.group(1)
            schema = _SCHEMAS.get(tag)
            if schema is None:
                fail(i, f"unknown component type tag {tag!r}")
            specs = {spec.name: spec for spec in schema.fields}
            values: dict = {}
            comp_closed = False
            while i < n:
                line = lines[i].strip()
                i += 1
                if not line:
                    continue
                if line == "}":
                    comp_closed = True
                    break
                fmatch = _FIELD_RE.match(line)
                if not fmatch:
                    fail(i, f"expected 'field = value', got {line!r}")
                fname, token = fmatch.group(1), fmatch.group(2)
                if fname not in specs:
                    fail(i, f"unknown field {fname!r} on {tag}")
                values[fname] = _parse_value(token, specs[fname].kind, i)
            if not comp_closed:
                fail(i, f"unterminated component block {tag!r}")
            missing = set(specs) - set(values)
            if missing:
                fail(i, f"{tag} is missing fields {sorted(missing)}")
            for spec in schema.fields:
                if spec.resource is not None:
                    key = (spec.resource, values[spec.name])
                    if key not in manifest:
                        fail(
                            i,
                            f"{tag}.{spec.name} references {spec.resource} "
                            f"{values[spec.name]!r} absent from the manifest",
                        )
            components.append((schema, values))
        if not closed:
            fail(i, f"unterminated entity block {entity_id}")
        entity_records.append((entity_id, components))

    # second phase: build the scene; parent links resolve within the document
    by_id: dict[uuid.UUID, Entity] = {}
    for entity_id, _components in entity_records:
        by_id[entity_id] = Entity(entity_id)
    for entity_id, components in entity_records:
        for schema, values in components:
            for spec in schema.fields:
                if spec.kind == "entity" and values[spec.name] is not None:
                    target = by_id.get(values[spec.name])
                    if target is None:
                        raise SceneFormatError(
                            f"dangling parent id {values[spec.name]} on entity {entity_id}"
                        )
                    values[spec.name] = target

    scene = Scene(scene_name)
    for entity_id, components in entity_records:
        entity = scene.enroll_existing(by_id[entity_id])
        for schema, values in components:
            scene.add_component(entity, schema.build(values))
    return scene


def save_scene_file(scene: Scene, path):
    text = save_scene(scene)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_scene_file(path) -> Scene:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scene(fh.read())


def scenes_equal(a: Scene, b: Scene) -> bool:
    """Component-wise semantic equality used by round-trip checks."""
    if len(a.entities) != len(b.entities):
        return False
    for ea, eb in zip(a.entities, b.entities):
        if ea.id != eb.id:
            return False
        ref_a, ref_b = a.refs[ea], b.refs[eb]
        if set(ref_a) != set(ref_b):
            return False
        for ctype in ref_a:
            schema = _SCHEMA_BY_TYPE.get(ctype)
            if schema is None:
                return False
            ca = a.stores[ctype][ref_a[ctype]]
            cb = b.stores[ctype][ref_b[ctype]]
            for spec in schema.fields:
                va, vb = getattr(ca, spec.name), getattr(cb, spec.name)
                if spec.kind in ("vec3", "vec4"):
                    if not np.array_equal(np.asarray(va, float), np.asarray(vb, float)):
                        return False
                elif spec.kind == "entity":
                    ida = va.id if va is not None else None
                    idb = vb.id if vb is not None else None
                    if ida != idb:
                        return False
                else:
                    if va != vb:
                        return False
    return True
