"""Graph view over SD models: endpoint counting and defect-flow extraction.

Counting follows what the XML file contains: actors are distinct actor ids,
dependers/dependees are endpoint entries (a dependum shared by two
dependencies contributes each entry separately).  Dependums are not counted.

A defect flow is the depth-bounded breadth-first closure over dependency
links starting from the defect's seed actors: each round pulls in every link
touching a reached participant together with the opposite participant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Actor, Dependency, DependencyLink, Diagram, Endpoint, SDModel

DEFAULT_FLOW_DEPTH = 1


@dataclass(frozen=True)
class DependencyCounts:
    actors: int = 0
    dependees: int = 0
    dependers: int = 0

    def __le__(self, other: "DependencyCounts") -> bool:
        return (
            self.actors <= other.actors
            and self.dependees <= other.dependees
            and self.dependers <= other.dependers
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "actors": self.actors,
            "dependees": self.dependees,
            "dependers": self.dependers,
        }


@dataclass(frozen=True)
class DefectFlow:
    defect_id: str
    seed_actors: tuple[str, ...]
    depth: int
    subgraph: SDModel
    unknown_seeds: tuple[str, ...] = field(default=(), compare=False)


def count(model: SDModel) -> DependencyCounts:
    dependers = 0
    dependees = 0
    for dep in model.all_dependencies():
        dependers += len(dep.dependers)
        dependees += len(dep.dependees)
    return DependencyCounts(
        actors=len(model.actor_ids()),
        dependees=dependees,
        dependers=dependers,
    )


def extract_defect_flow(
    product: SDModel,
    seeds: list[str] | tuple[str, ...],
    depth: int = DEFAULT_FLOW_DEPTH,
    *,
    defect_id: str = "",
) -> DefectFlow:
    """Extract the defect-flow subgraph reachable from seed actors.

    Seeds absent from the product are reported in ``unknown_seeds`` and the
    extraction proceeds with the rest.  The returned subgraph is built in a
    canonical (id-sorted) order, so it is independent of the product's
    element order.
    """
    if depth < 1:
        raise ValueError(f"flow depth must be >= 1, got {depth}")

    actor_ids = product.actor_ids()
    seed_set = set(seeds)
    unknown = tuple(sorted(seed_set - actor_ids))
    reached = seed_set & actor_ids

    links = product.links()
    included: set[int] = set()
    for _ in range(depth):
        added = set()
        for idx, link in enumerate(links):
            if idx in included:
                continue
            if link.depender_ref in reached or link.dependee_ref in reached:
                included.add(idx)
                added.add(link.depender_ref)
                added.add(link.dependee_ref)
        if not added - reached:
            break
        reached |= added

    included_links = [links[idx] for idx in included]
    subgraph = _build_subgraph(product, reached, included_links)
    return DefectFlow(
        defect_id=defect_id,
        seed_actors=tuple(sorted(seed_set)),
        depth=depth,
        subgraph=subgraph,
        unknown_seeds=unknown,
    )


def _included_pairs(links: list[DependencyLink]) -> set[tuple[str, str, str, str]]:
    return {(l.owner_actor, l.dependum_ref, l.depender_ref, l.dependee_ref) for l in links}


def _build_subgraph(
    product: SDModel, reached: set[str], included_links: list[DependencyLink]
) -> SDModel:
    pairs = _included_pairs(included_links)
    # include every id a kept link touches, so endpoint refs keep resolving
    keep_ids = set(reached)
    for link in included_links:
        keep_ids.update(link.triple)

    diagrams = []
    for diagram in product.diagrams:
        dependums = tuple(
            sorted((d for d in diagram.dependums if d.id in keep_ids), key=lambda d: d.id)
        )
        actors = []
        loose: list[Dependency] = []
        for actor in sorted(diagram.actors, key=lambda a: a.id):
            kept_deps = _filter_dependencies(actor.dependencies, pairs)
            if actor.id in keep_ids:
                actors.append(
                    Actor(
                        id=actor.id,
                        name=actor.name,
                        actor_type=actor.actor_type,
                        dependencies=kept_deps,
                        annotations=actor.annotations,
                    )
                )
            else:
                # owner fell outside the flow: keep its surviving dependencies
                # at diagram level
                loose.extend(
                    Dependency(owner_actor="", endpoints=d.endpoints, annotations=d.annotations)
                    for d in kept_deps
                )
            diagram_deps = list(_filter_dependencies(diagram.dependencies, pairs))
        diagram_deps.extend(loose)
        diagram_deps.sort(key=_dependency_sort_key)
        diagrams.append(
            Diagram(
                name=diagram.name,
                dependums=dependums,
                actors=tuple(actors),
                dependencies=tuple(diagram_deps),
                annotations=diagram.annotations,
            )
        )
    return SDModel(
        version=product.version,
        diagrams=tuple(diagrams),
        annotations=product.annotations,
        source_id=product.source_id,
    )


def _dependency_sort_key(dep: Dependency):
    return tuple(sorted((e.role.value, e.iref, e.aref) for e in dep.endpoints))


def _filter_dependencies(
    dependencies: tuple[Dependency, ...],
    pairs: set[tuple[str, str, str, str]],
) -> tuple[Dependency, ...]:
    kept = []
    for dep in dependencies:
        endpoints = _filter_endpoints(dep, pairs)
        if endpoints:
            kept.append(
                Dependency(
                    owner_actor=dep.owner_actor,
                    endpoints=endpoints,
                    annotations=dep.annotations,
                )
            )
    return tuple(kept)


def _filter_endpoints(
    dep: Dependency, pairs: set[tuple[str, str, str, str]]
) -> tuple[Endpoint, ...]:
    keep: list[Endpoint] = []
    for der in dep.dependers:
        for dee in dep.dependees:
            key = (dep.owner_actor, der.iref or dee.iref, der.aref, dee.aref)
            if key in pairs:
                for endpoint in (der, dee):
                    if endpoint not in keep:
                        keep.append(endpoint)
    # preserve document order of the surviving entries
    return tuple(e for e in dep.endpoints if e in keep)
