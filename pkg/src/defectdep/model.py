"""Typed in-memory representation of istarml strategic dependency models.

All node classes are frozen dataclasses holding tuples, so parsed models are
immutable and safe to share across threads.  Structural equality is provided
by :func:`structurally_equal`, which ignores element order and the ingest
``source_id``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

ACTOR_TYPES = ("role", "agent", "position", "plain")
DEPENDUM_KINDS = ("goal", "task", "resource", "softgoal")


class EndpointRole(str, Enum):
    DEPENDER = "depender"
    DEPENDEE = "dependee"


@dataclass(frozen=True)
class OpaqueNode:
    """Unrecognized or presentation-only XML element kept verbatim.

    Covers ``graphic`` elements and SR-level constructs (means-ends,
    decomposition, contribution links); these survive round-trips but are
    invisible to all analytics.
    """

    tag: str
    attrs: tuple[tuple[str, str], ...] = ()
    text: str | None = None
    children: tuple["OpaqueNode", ...] = ()


@dataclass(frozen=True)
class Actor:
    id: str
    name: str
    actor_type: str  # one of ACTOR_TYPES for valid models; kept verbatim otherwise
    dependencies: tuple["Dependency", ...] = ()
    annotations: tuple[OpaqueNode, ...] = ()


@dataclass(frozen=True)
class Dependum:
    id: str
    name: str
    kind: str  # one of DEPENDUM_KINDS for valid models; kept verbatim otherwise
    annotations: tuple[OpaqueNode, ...] = ()


@dataclass(frozen=True)
class Endpoint:
    """One ``depender`` or ``dependee`` entry: iref names the dependum
    (ielement), aref names the actor-side participant."""

    role: EndpointRole
    iref: str
    aref: str
    annotations: tuple[OpaqueNode, ...] = ()


@dataclass(frozen=True)
class Dependency:
    """A ``dependency`` block: endpoint entries grouped around shared dependums.

    ``owner_actor`` is the id of the enclosing actor block, or ``""`` when the
    dependency sits directly under a diagram.
    """

    owner_actor: str = ""
    endpoints: tuple[Endpoint, ...] = ()
    annotations: tuple[OpaqueNode, ...] = ()

    @property
    def dependers(self) -> tuple[Endpoint, ...]:
        return tuple(e for e in self.endpoints if e.role is EndpointRole.DEPENDER)

    @property
    def dependees(self) -> tuple[Endpoint, ...]:
        return tuple(e for e in self.endpoints if e.role is EndpointRole.DEPENDEE)


@dataclass(frozen=True)
class DependencyLink:
    """Analytic view of a dependency: who depends on whom via which dependum."""

    dependum_ref: str
    depender_ref: str
    dependee_ref: str
    owner_actor: str = ""

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.dependum_ref, self.depender_ref, self.dependee_ref)


@dataclass(frozen=True)
class Diagram:
    name: str
    dependums: tuple[Dependum, ...] = ()
    actors: tuple[Actor, ...] = ()
    dependencies: tuple[Dependency, ...] = ()  # diagram-level blocks
    annotations: tuple[OpaqueNode, ...] = ()


@dataclass(frozen=True)
class SDModel:
    version: str = "1.0"
    diagrams: tuple[Diagram, ...] = ()
    annotations: tuple[OpaqueNode, ...] = ()
    source_id: str = field(default="", compare=False)

    def all_actors(self) -> Iterator[Actor]:
        for diagram in self.diagrams:
            yield from diagram.actors

    def all_dependums(self) -> Iterator[Dependum]:
        for diagram in self.diagrams:
            yield from diagram.dependums

    def all_dependencies(self) -> Iterator[Dependency]:
        for diagram in self.diagrams:
            yield from diagram.dependencies
            for actor in diagram.actors:
                yield from actor.dependencies

    def actor_ids(self) -> set[str]:
        return {a.id for a in self.all_actors()}

    def dependum_ids(self) -> set[str]:
        return {d.id for d in self.all_dependums()}

    def element_ids(self) -> set[str]:
        return self.actor_ids() | self.dependum_ids()

    def links(self) -> list[DependencyLink]:
        """All depender->dependee pairings, one link per pair per dependency."""
        out = []
        for dep in self.all_dependencies():
            for der in dep.dependers:
                for dee in dep.dependees:
                    out.append(
                        DependencyLink(
                            dependum_ref=der.iref or dee.iref,
                            depender_ref=der.aref,
                            dependee_ref=dee.aref,
                            owner_actor=dep.owner_actor,
                        )
                    )
        return out


def _canonical_opaque(node: OpaqueNode):
    return (
        node.tag,
        tuple(sorted(node.attrs)),
        node.text,
        tuple(sorted(_canonical_opaque(c) for c in node.children)),
    )


def _canonical_endpoint(ep: Endpoint):
    return (
        ep.role.value,
        ep.iref,
        ep.aref,
        tuple(sorted(_canonical_opaque(a) for a in ep.annotations)),
    )


def _canonical_dependency(dep: Dependency):
    return (
        dep.owner_actor,
        tuple(sorted(_canonical_endpoint(e) for e in dep.endpoints)),
        tuple(sorted(_canonical_opaque(a) for a in dep.annotations)),
    )


def _canonical_actor(actor: Actor):
    return (
        actor.id,
        actor.name,
        actor.actor_type,
        tuple(sorted(_canonical_dependency(d) for d in actor.dependencies)),
        tuple(sorted(_canonical_opaque(a) for a in actor.annotations)),
    )


def _canonical_dependum(dep: Dependum):
    return (
        dep.id,
        dep.name,
        dep.kind,
        tuple(sorted(_canonical_opaque(a) for a in dep.annotations)),
    )


def _canonical_diagram(diagram: Diagram):
    return (
        diagram.name,
        tuple(sorted(_canonical_dependum(d) for d in diagram.dependums)),
        tuple(sorted(_canonical_actor(a) for a in diagram.actors)),
        tuple(sorted(_canonical_dependency(d) for d in diagram.dependencies)),
        tuple(sorted(_canonical_opaque(a) for a in diagram.annotations)),
    )


def canonical_form(model: SDModel):
    """Order-insensitive structural fingerprint of a model (hashable tuple)."""
    return (
        model.version,
        tuple(sorted(_canonical_diagram(d) for d in model.diagrams)),
        tuple(sorted(_canonical_opaque(a) for a in model.annotations)),
    )


def structurally_equal(a: SDModel, b: SDModel) -> bool:
    """True when two models carry the same content, ignoring element order
    within collections and the ingest source_id."""
    return canonical_form(a) == canonical_form(b)
