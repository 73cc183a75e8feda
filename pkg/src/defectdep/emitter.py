"""Canonical istarml emission.

Output is UTF-8, one element per line with two-space indentation, a fixed
attribute order for schema elements, and name-sorted attributes for opaque
annotations, so that emitting the same model always yields identical bytes
and ``parse(emit(m))`` reproduces ``m``.
"""

from __future__ import annotations

from .errors import InvalidModel
from .model import Actor, Dependency, Dependum, Diagram, OpaqueNode, SDModel
from .validation import validate

_ATTR_ESCAPES = {
    "&": "&amp;",
    "<": "&lt;",
    ">": "&gt;",
    '"': "&quot;",
    "\n": "&#10;",
    "\t": "&#9;",
    "\r": "&#13;",
}


def _attr(value: str) -> str:
    return '"' + "".join(_ATTR_ESCAPES.get(c, c) for c in value) + '"'


def _text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _tag(name: str, attrs: list[tuple[str, str]]) -> str:
    parts = [name] + [f"{k}={_attr(v)}" for k, v in attrs]
    return " ".join(parts)


def emit_istarml(model: SDModel, *, check: bool = True) -> bytes:
    """Serialize a model to canonical istarml XML.

    Raises InvalidModel when the model fails validation (warnings are
    allowed, error findings are not).  Pass ``check=False`` to serialize
    known-good models without re-validating.
    """
    if check:
        report = validate(model)
        if not report.ok:
            first = report.errors()[0]
            raise InvalidModel(
                f"model fails validation: {first.code} at {first.location}: {first.message}"
            )

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    _open(lines, 0, _tag("istarml", [("version", model.version)]))
    for diagram in model.diagrams:
        _emit_diagram(lines, 1, diagram)
    for node in model.annotations:
        _emit_opaque(lines, 1, node)
    lines.append("</istarml>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _open(lines: list[str], depth: int, tag: str) -> None:
    lines.append("  " * depth + f"<{tag}>")


def _leaf(lines: list[str], depth: int, tag: str) -> None:
    lines.append("  " * depth + f"<{tag}/>")


def _close(lines: list[str], depth: int, name: str) -> None:
    lines.append("  " * depth + f"</{name}>")


def _emit_diagram(lines: list[str], depth: int, diagram: Diagram) -> None:
    tag = _tag("diagram", [("name", diagram.name)])
    if not (diagram.dependums or diagram.actors or diagram.dependencies or diagram.annotations):
        _leaf(lines, depth, tag)
        return
    _open(lines, depth, tag)
    for dependum in diagram.dependums:
        _emit_dependum(lines, depth + 1, dependum)
    for actor in diagram.actors:
        _emit_actor(lines, depth + 1, actor)
    for dependency in diagram.dependencies:
        _emit_dependency(lines, depth + 1, dependency)
    for node in diagram.annotations:
        _emit_opaque(lines, depth + 1, node)
    _close(lines, depth, "diagram")


def _emit_dependum(lines: list[str], depth: int, dependum: Dependum) -> None:
    tag = _tag("ielement", [("type", dependum.kind), ("id", dependum.id), ("name", dependum.name)])
    if not dependum.annotations:
        _leaf(lines, depth, tag)
        return
    _open(lines, depth, tag)
    for node in dependum.annotations:
        _emit_opaque(lines, depth + 1, node)
    _close(lines, depth, "ielement")


def _emit_actor(lines: list[str], depth: int, actor: Actor) -> None:
    tag = _tag("actor", [("type", actor.actor_type), ("id", actor.id), ("name", actor.name)])
    if not (actor.dependencies or actor.annotations):
        _leaf(lines, depth, tag)
        return
    _open(lines, depth, tag)
    for dependency in actor.dependencies:
        _emit_dependency(lines, depth + 1, dependency)
    for node in actor.annotations:
        _emit_opaque(lines, depth + 1, node)
    _close(lines, depth, "actor")


def _emit_dependency(lines: list[str], depth: int, dependency: Dependency) -> None:
    if not (dependency.endpoints or dependency.annotations):
        _leaf(lines, depth, "dependency")
        return
    _open(lines, depth, "dependency")
    for endpoint in dependency.endpoints:
        tag = _tag(endpoint.role.value, [("iref", endpoint.iref), ("aref", endpoint.aref)])
        if endpoint.annotations:
            _open(lines, depth + 1, tag)
            for node in endpoint.annotations:
                _emit_opaque(lines, depth + 2, node)
            _close(lines, depth + 1, endpoint.role.value)
        else:
            _leaf(lines, depth + 1, tag)
    for node in dependency.annotations:
        _emit_opaque(lines, depth + 1, node)
    _close(lines, depth, "dependency")


def _emit_opaque(lines: list[str], depth: int, node: OpaqueNode) -> None:
    tag = _tag(node.tag, list(node.attrs))
    if not node.children and node.text is None:
        _leaf(lines, depth, tag)
        return
    if not node.children:
        lines.append("  " * depth + f"<{tag}>{_text(node.text)}</{node.tag}>")
        return
    _open(lines, depth, tag)
    if node.text is not None:
        lines.append("  " * (depth + 1) + _text(node.text))
    for child in node.children:
        _emit_opaque(lines, depth + 1, child)
    _close(lines, depth, node.tag)
