"""istarml XML parsing.

The canonical schema accepted here (and produced by the emitter):

* ``istarml`` root with a ``version="1.0"`` attribute, containing ``diagram``
  elements.
* ``ielement`` (attrs ``type``/``id``/``name``) declares a dependum; ``actor``
  (attrs ``type``/``id``/``name``) declares an actor.  Declarations nested
  inside other actors or ielements are hoisted to their diagram.
* ``dependency`` blocks live under an actor (the owner) or directly under a
  diagram, and contain ``depender``/``dependee`` entries whose ``iref`` names
  the dependum and whose ``aref`` names the actor-side participant.
* Everything else (``graphic``, SR-level links, foreign markup) is retained
  as an opaque annotation and ignored by analytics.

Input must be UTF-8; other declared encodings and DOCTYPE declarations are
rejected.  Parsing is total: any input yields either an SDModel or a typed
error, never a crash.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .errors import DanglingReference, InvalidModel, MalformedXml, UnsupportedVersion
from .model import (
    Actor,
    Dependency,
    Dependum,
    Diagram,
    Endpoint,
    EndpointRole,
    OpaqueNode,
    SDModel,
)

_ENCODING_RE = re.compile(rb"""<\?xml[^>]*?encoding\s*=\s*["']([A-Za-z0-9._-]+)["']""")

SUPPORTED_VERSION = "1.0"


def parse_istarml(document: bytes | str, *, strict: bool = False, source_id: str = "") -> SDModel:
    """Parse an istarml document into an SDModel.

    In tolerant mode (the default) any well-formed XML with the right root and
    version parses; semantic problems are left for ``validate`` to report.
    In strict mode dangling references raise :class:`DanglingReference` and
    any other validation error raises :class:`InvalidModel`.
    """
    data = document.encode("utf-8") if isinstance(document, str) else bytes(document)

    if b"<!DOCTYPE" in data:
        raise MalformedXml("document type declarations are not supported")
    declared = _ENCODING_RE.search(data[:256])
    if declared and declared.group(1).lower() not in (b"utf-8", b"utf8"):
        raise MalformedXml(
            f"declared encoding {declared.group(1).decode('ascii')!r} is not supported; use UTF-8"
        )

    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(f"not well-formed XML: {exc}") from exc
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedXml(f"undecodable XML input: {exc}") from exc

    if root.tag != "istarml":
        raise MalformedXml(f"root element must be 'istarml', got {root.tag!r}")
    version = root.get("version")
    if version != SUPPORTED_VERSION:
        raise UnsupportedVersion(
            f"istarml version attribute must be {SUPPORTED_VERSION!r}, got {version!r}"
        )

    diagrams = []
    annotations = []
    for child in root:
        if child.tag == "diagram":
            diagrams.append(_parse_diagram(child))
        else:
            annotations.append(_opaque(child))

    model = SDModel(
        version=version,
        diagrams=tuple(diagrams),
        annotations=tuple(annotations),
        source_id=source_id,
    )

    if strict:
        from .validation import validate

        report = validate(model)
        for finding in report.findings:
            if finding.severity != "error":
                continue
            message = f"{finding.code} at {finding.location}: {finding.message}"
            if finding.code in ("dangling-iref", "dangling-aref"):
                raise DanglingReference(message)
            raise InvalidModel(message)

    return model


def _opaque(element: ET.Element) -> OpaqueNode:
    text = element.text.strip() if element.text and element.text.strip() else None
    return OpaqueNode(
        tag=element.tag,
        attrs=tuple(sorted(element.attrib.items())),
        text=text,
        children=tuple(_opaque(c) for c in element),
    )


class _DiagramBuilder:
    def __init__(self):
        self.dependums: list[Dependum] = []
        self.actors: list[Actor] = []
        self.dependencies: list[Dependency] = []
        self.annotations: list[OpaqueNode] = []


def _parse_diagram(element: ET.Element) -> Diagram:
    builder = _DiagramBuilder()
    for child in element:
        _dispatch(child, builder, owner="")
    return Diagram(
        name=element.get("name", ""),
        dependums=tuple(builder.dependums),
        actors=tuple(builder.actors),
        dependencies=tuple(builder.dependencies),
        annotations=tuple(builder.annotations),
    )


def _dispatch(element: ET.Element, builder: _DiagramBuilder, owner: str) -> None:
    if element.tag == "ielement":
        _parse_ielement(element, builder)
    elif element.tag == "actor":
        _parse_actor(element, builder)
    elif element.tag == "dependency":
        builder.dependencies.append(_parse_dependency(element, owner))
    else:
        builder.annotations.append(_opaque(element))


def _parse_ielement(element: ET.Element, builder: _DiagramBuilder) -> None:
    annotations = []
    for child in element:
        if child.tag in ("ielement", "actor"):
            _dispatch(child, builder, owner="")  # hoist nested declarations
        else:
            annotations.append(_opaque(child))
    builder.dependums.append(
        Dependum(
            id=element.get("id", ""),
            name=element.get("name", ""),
            kind=element.get("type", ""),
            annotations=tuple(annotations),
        )
    )


def _parse_actor(element: ET.Element, builder: _DiagramBuilder) -> None:
    actor_id = element.get("id", "")
    dependencies = []
    annotations = []
    for child in element:
        if child.tag == "dependency":
            dependencies.append(_parse_dependency(child, owner=actor_id))
        elif child.tag in ("ielement", "actor"):
            _dispatch(child, builder, owner="")  # hoist nested declarations
        else:
            annotations.append(_opaque(child))
    builder.actors.append(
        Actor(
            id=actor_id,
            name=element.get("name", ""),
            actor_type=element.get("type", "plain"),
            dependencies=tuple(dependencies),
            annotations=tuple(annotations),
        )
    )


def _parse_dependency(element: ET.Element, owner: str) -> Dependency:
    endpoints = []
    annotations = []
    for child in element:
        if child.tag in ("depender", "dependee"):
            endpoints.append(
                Endpoint(
                    role=EndpointRole(child.tag),
                    iref=child.get("iref", ""),
                    aref=child.get("aref", ""),
                    annotations=tuple(_opaque(c) for c in child),
                )
            )
        else:
            annotations.append(_opaque(child))
    return Dependency(
        owner_actor=owner,
        endpoints=tuple(endpoints),
        annotations=tuple(annotations),
    )
