"""JSON input schemas, loaders and artifact serialization."""
from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .algebra import Algebra, AlgebraError, Quiver, Relation, RelationError, path_algebra
from .cleft import CleftInstance, InstanceError
from .rep import Bimodule, Module, ThetaData, actions_from_generators

_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_name = {"type": ["string", "integer"]}

QUIVER_SCHEMA = {
    "type": "object",
    "required": ["field", "vertices", "arrows"],
    "properties": {
        "field": {"enum": [2, 3, 5, 7]},
        "vertices": {"type": "array", "items": _name, "minItems": 1},
        "arrows": {"type": "array", "items": {
            "type": "object", "required": ["name", "source", "target"],
            "properties": {"name": {"type": "string"}, "source": _name, "target": _name},
            "additionalProperties": False}},
        "relations": {"type": "array", "items": {"type": "array", "minItems": 1, "items": {
            "type": "object", "required": ["coeff", "path"],
            "properties": {"coeff": {"type": "integer"},
                           "path": {"type": "array", "items": {"type": "string"}, "minItems": 1}},
            "additionalProperties": False}}},
        "length_bound": {"type": "integer", "minimum": 1},
        "name": {"type": "string"},
    },
    "additionalProperties": False,
}

BIMODULE_SCHEMA = {
    "type": "object",
    "required": ["dim", "left_action", "right_action"],
    "properties": {
        "dim": {"type": "integer", "minimum": 0},
        "basis": {"type": "array", "items": {"type": "string"}},
        "left_action": {"type": "object", "additionalProperties": _matrix},
        "right_action": {"type": "object", "additionalProperties": _matrix},
        "name": {"type": "string"},
    },
    "additionalProperties": False,
}

THETA_SCHEMA = {
    "type": "object",
    "required": ["table"],
    "properties": {
        "table": {"type": "array", "items": {"type": "array", "items": {
            "type": "array", "items": {"type": "integer"}}}},
        "nilpotency": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

MODULE_SCHEMA = {
    "type": "object",
    "oneOf": [
        {"required": ["dim", "action"], "not": {"anyOf": [{"required": ["vertex_dims"]},
                                                         {"required": ["arrow_maps"]}]}},
        {"required": ["vertex_dims"], "not": {"required": ["action"]}},
    ],
    "properties": {
        "dim": {"type": "integer", "minimum": 0},
        "action": {"type": "object", "additionalProperties": _matrix},
        "vertex_dims": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "arrow_maps": {"type": "object", "additionalProperties": _matrix},
        "name": {"type": "string"},
    },
    "additionalProperties": False,
}

SCHEMAS = {"quiver": QUIVER_SCHEMA, "bimodule": BIMODULE_SCHEMA, "theta": THETA_SCHEMA, "module": MODULE_SCHEMA}


class SchemaError(ValueError):
    """Input does not match its schema; ``location`` is a JSON path."""

    def __init__(self, msg, location="$"):
        super().__init__(f"{location}: {msg}")
        self.location = location


def _loc(path) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)


def validate(kind: str, data) -> None:
    try:
        jsonschema.validate(data, SCHEMAS[kind])
    except jsonschema.ValidationError as e:
        raise SchemaError(e.message, _loc(e.absolute_path)) from None


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON ({e.msg})", f"{path}:{e.lineno}:{e.colno}") from None


def _mat(m, rows: int, cols: int, p: int, where: str) -> np.ndarray:
    a = np.array(m, dtype=np.int64)
    if a.size == 0 and rows * cols == 0:
        return np.zeros((rows, cols), dtype=np.int64)
    if a.shape != (rows, cols):
        raise SchemaError(f"expected a {rows}x{cols} matrix, got shape {a.shape}", where)
    return a % p


# ----------------------------------------------------------------- loaders

def algebra_from_quiver(data: dict) -> Algebra:
    """Raises :class:`SchemaError` for malformed input, including non-parallel relations."""
    validate("quiver", data)
    p = data["field"]
    try:
        q = Quiver(tuple(str(v) for v in data["vertices"]),
                   tuple((a["name"], str(a["source"]), str(a["target"])) for a in data["arrows"]))
    except AlgebraError as e:
        raise SchemaError(str(e), "$.arrows") from None
    rels = []
    for i, r in enumerate(data.get("relations", [])):
        rel = Relation(tuple((t["coeff"], tuple(t["path"])) for t in r))
        try:
            rel.check(q)
        except RelationError as e:
            raise SchemaError(str(e), f"$.relations[{i}]") from None
        rels.append(rel)
    return path_algebra(q, rels, data.get("length_bound", 2), p, name=data.get("name", ""))


def _actions(a: Algebra, table: dict, dim: int, where: str, right: bool = False) -> np.ndarray:
    keys = set(table)
    if keys == set(a.labels):
        return np.stack([_mat(table[l], dim, dim, a.p, f"{where}.{l}") for l in a.labels]) if a.dim else \
            np.zeros((0, dim, dim), dtype=np.int64)
    if keys == set(a.generator_labels):
        mats = [_mat(table[l], dim, dim, a.p, f"{where}.{l}") for l in a.generator_labels]
        if right:
            # a right action reverses products
            return actions_from_generators(a, [m.T for m in mats]).transpose(0, 2, 1).copy()
        return actions_from_generators(a, mats)
    missing = sorted(set(a.generator_labels) - keys)
    extra = sorted(keys - set(a.labels) - set(a.generator_labels))
    raise SchemaError(f"action must be keyed by all basis labels {list(a.labels)} or all generators "
                      f"{list(a.generator_labels)}; missing {missing}, unknown {extra}", where)


def module_from_json(data: dict, a: Algebra) -> Module:
    validate("module", data)
    name = data.get("name", "")
    if "vertex_dims" in data:
        unknown = set(data["vertex_dims"]) - set(a.vertices)
        if unknown:
            raise SchemaError(f"unknown vertices {sorted(unknown)}", "$.vertex_dims")
        arrows = {label for _, _, _, label in a.arrows}
        bad = set(data.get("arrow_maps", {})) - arrows
        if bad:
            raise SchemaError(f"unknown arrows {sorted(bad)}", "$.arrow_maps")
        dims = {v: data["vertex_dims"].get(v, 0) for v in a.vertices}
        maps = {}
        for vec, s, t, label in a.arrows:
            if label in data.get("arrow_maps", {}):
                maps[label] = _mat(data["arrow_maps"][label], dims[a.vertices[t]], dims[a.vertices[s]], a.p,
                                   f"$.arrow_maps.{label}")
        return Module.from_vertex_maps(a, dims, maps, check=True, name=name)
    d = data["dim"]
    return Module(a, _actions(a, data["action"], d, "$.action"), check=True, name=name)


def bimodule_from_json(data: dict, a: Algebra) -> Bimodule:
    validate("bimodule", data)
    d = data["dim"]
    labels = data.get("basis")
    if labels is not None and len(labels) != d:
        raise SchemaError(f"basis has {len(labels)} labels, dim is {d}", "$.basis")
    left = _actions(a, data["left_action"], d, "$.left_action")
    right = _actions(a, data["right_action"], d, "$.right_action", right=True)
    return Bimodule(a, a, left, right, labels, check=True, name=data.get("name", "M"))


def theta_from_json(data: dict, m: Bimodule) -> ThetaData:
    validate("theta", data)
    d = m.dim
    t = np.array(data["table"], dtype=np.int64) if d else np.zeros((0, 0, 0), dtype=np.int64)
    if t.shape != (d, d, d):
        raise SchemaError(f"table must have shape ({d}, {d}, {d}), got {t.shape}", "$.table")
    return ThetaData(m, t % m.p, data.get("nilpotency"))


# --------------------------------------------------------------- artifacts

def algebra_to_json(a: Algebra) -> dict:
    return {"name": a.name, "field": a.p, "dim": a.dim, "labels": list(a.labels), "vertices": list(a.vertices),
            "mult": a.mult.tolist(), "unit": a.unit.tolist(), "idempotents": a.idempotents.tolist(),
            "radical": a.radical.tolist()}


def algebra_from_artifact(d: dict) -> Algebra:
    n = d["dim"]
    rad = np.array(d["radical"], dtype=np.int64).reshape(n, -1) if n else np.zeros((0, 0), dtype=np.int64)
    return Algebra(d["mult"], d["unit"], d["idempotents"], rad, d["field"], d["labels"], d["vertices"], d["name"])


def module_to_json(x: Module) -> dict:
    return {"dim": x.dim, "action": {l: x.action[i].tolist() for i, l in enumerate(x.algebra.labels)},
            **({"name": x.name} if x.name else {})}


def instance_to_json(inst: CleftInstance) -> dict:
    m = inst.bimodule
    return {"kind": "instance", "name": inst.name, "base": algebra_to_json(inst.base),
            "bimodule": {"dim": m.dim, "basis": list(m.labels), "name": m.name,
                         "left_action": {l: m.left[i].tolist() for i, l in enumerate(inst.base.labels)},
                         "right_action": {l: m.right[i].tolist() for i, l in enumerate(inst.base.labels)}},
            "theta": {"table": inst.theta.table.tolist(),
                      **({"nilpotency": inst.theta.nilpotency} if inst.theta.nilpotency else {})},
            "total": algebra_to_json(inst.total)}


def instance_from_artifact(d: dict) -> CleftInstance:
    r = algebra_from_artifact(d["base"])
    m = bimodule_from_json(d["bimodule"], r)
    th = theta_from_json(d["theta"], m)
    inst = CleftInstance(r, th, algebra_from_artifact(d["total"]), d.get("name", ""))
    rep = inst.validate()
    if not rep.ok:
        raise InstanceError(f"instance invalid: {[c.name for c in rep.failures]}", rep)
    return inst


def load_artifact(path):
    """``Algebra`` or ``CleftInstance`` from a file written by ``cleftlab build``."""
    d = read_json(path)
    kind = d.get("kind")
    if kind == "algebra":
        return algebra_from_artifact(d["algebra"])
    if kind == "instance":
        return instance_from_artifact(d)
    raise SchemaError(f"unknown artifact kind {kind!r}", "$.kind")


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1) + "\n"
