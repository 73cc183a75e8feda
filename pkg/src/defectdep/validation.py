"""Semantic validation of parsed SD models.

Findings are data, never exceptions.  Error codes:

* ``empty-id`` — actor or ielement without an id
* ``duplicate-id`` — id reused anywhere in the model
* ``unknown-actor-type`` — actor type outside {role, agent, position, plain}
* ``unknown-dependum-kind`` — ielement type outside {goal, task, resource, softgoal}
* ``dangling-iref`` / ``dangling-aref`` — endpoint reference that resolves to
  no declared element
* ``missing-depender`` / ``missing-dependee`` — dependency lacking one side

plus the ``empty-name`` warning.  Every finding's location is a path of the
form ``/diagram[0]/actor[1]/dependency[0]/dependee[0]`` that resolves to a
real node of the model (see :func:`resolve_location`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import ACTOR_TYPES, DEPENDUM_KINDS, Dependency, SDModel


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    findings: tuple[Finding, ...]

    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}


def validate(model: SDModel) -> ValidationReport:
    findings: list[Finding] = []
    seen_ids: dict[str, str] = {}
    known_ids = model.element_ids()
    known_ids.discard("")

    def check_id(node_id: str, name: str, location: str, label: str) -> None:
        if not node_id:
            findings.append(
                Finding("error", "empty-id", location, f"{label} has no id")
            )
        elif node_id in seen_ids:
            findings.append(
                Finding(
                    "error",
                    "duplicate-id",
                    location,
                    f"id {node_id!r} already declared at {seen_ids[node_id]}",
                )
            )
        else:
            seen_ids[node_id] = location
        if not name:
            findings.append(
                Finding("warning", "empty-name", location, f"{label} has an empty name")
            )

    def check_dependency(dep: Dependency, location: str) -> None:
        if not dep.dependers:
            findings.append(
                Finding("error", "missing-depender", location, "dependency has no depender entry")
            )
        if not dep.dependees:
            findings.append(
                Finding("error", "missing-dependee", location, "dependency has no dependee entry")
            )
        for role in ("depender", "dependee"):
            entries = dep.dependers if role == "depender" else dep.dependees
            for k, endpoint in enumerate(entries):
                loc = f"{location}/{role}[{k}]"
                if endpoint.iref not in known_ids:
                    findings.append(
                        Finding(
                            "error",
                            "dangling-iref",
                            loc,
                            f"iref {endpoint.iref!r} resolves to no declared element",
                        )
                    )
                if endpoint.aref not in known_ids:
                    findings.append(
                        Finding(
                            "error",
                            "dangling-aref",
                            loc,
                            f"aref {endpoint.aref!r} resolves to no declared element",
                        )
                    )

    for i, diagram in enumerate(model.diagrams):
        dloc = f"/diagram[{i}]"
        for j, dependum in enumerate(diagram.dependums):
            loc = f"{dloc}/ielement[{j}]"
            check_id(dependum.id, dependum.name, loc, "ielement")
            if dependum.kind not in DEPENDUM_KINDS:
                findings.append(
                    Finding(
                        "error",
                        "unknown-dependum-kind",
                        loc,
                        f"ielement type {dependum.kind!r} is not one of {'/'.join(DEPENDUM_KINDS)}",
                    )
                )
        for j, actor in enumerate(diagram.actors):
            loc = f"{dloc}/actor[{j}]"
            check_id(actor.id, actor.name, loc, "actor")
            if actor.actor_type not in ACTOR_TYPES:
                findings.append(
                    Finding(
                        "error",
                        "unknown-actor-type",
                        loc,
                        f"actor type {actor.actor_type!r} is not one of {'/'.join(ACTOR_TYPES)}",
                    )
                )
            for k, dep in enumerate(actor.dependencies):
                check_dependency(dep, f"{loc}/dependency[{k}]")
        for j, dep in enumerate(diagram.dependencies):
            check_dependency(dep, f"{dloc}/dependency[{j}]")

    ok = not any(f.severity == "error" for f in findings)
    return ValidationReport(ok=ok, findings=tuple(findings))


_SEGMENT_RE = re.compile(r"^(diagram|ielement|actor|dependency|depender|dependee)\[(\d+)\]$")


def resolve_location(model: SDModel, location: str):
    """Return the model node addressed by a finding's location path.

    Raises ValueError when the path does not resolve; used to prove
    validation soundness.
    """
    node = model
    for segment in location.strip("/").split("/"):
        match = _SEGMENT_RE.match(segment)
        if not match:
            raise ValueError(f"bad path segment {segment!r} in {location!r}")
        tag, index = match.group(1), int(match.group(2))
        try:
            if tag == "diagram":
                node = node.diagrams[index]
            elif tag == "ielement":
                node = node.dependums[index]
            elif tag == "actor":
                node = node.actors[index]
            elif tag == "dependency":
                node = node.dependencies[index]
            elif tag == "depender":
                node = node.dependers[index]
            else:
                node = node.dependees[index]
        except (AttributeError, IndexError) as exc:
            raise ValueError(f"{location!r} does not resolve at {segment!r}") from exc
    return node
