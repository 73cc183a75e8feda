"""Random valid SD model generation for property and oracle tests."""

from __future__ import annotations

import random

from defectdep.model import (
    Actor,
    Dependency,
    Dependum,
    Diagram,
    Endpoint,
    EndpointRole,
    OpaqueNode,
    SDModel,
)

NAME_POOL = (
    "Stock Data",
    "Order Router",
    "Ledger <&> Sync",
    "Préférences утилита",
    "Quote \"Feed\"",
    "Risk Engine",
    "Back Office",
    "Clearing",
)


def _maybe_graphic(rng: random.Random):
    if rng.random() < 0.3:
        return (OpaqueNode(tag="graphic", attrs=(("content", "SVG"),)),)
    return ()


def random_model(rng: random.Random, max_actors: int = 8) -> SDModel:
    """A validate-clean model: unique ids, resolving refs, every dependum used."""
    n_actors = rng.randint(1, max_actors)
    n_dependums = rng.randint(1, max_actors)
    actor_ids = [f"a{i}" for i in range(n_actors)]
    dependum_ids = [f"g{i}" for i in range(n_dependums)]

    dependums = tuple(
        Dependum(
            id=did,
            name=rng.choice(NAME_POOL),
            kind=rng.choice(("goal", "task", "resource", "softgoal")),
            annotations=_maybe_graphic(rng),
        )
        for did in dependum_ids
    )

    dependencies: list[Dependency] = []

    def make_dependency(dependum: str) -> Dependency:
        endpoints = [
            Endpoint(EndpointRole.DEPENDER, iref=dependum, aref=rng.choice(actor_ids),
                     annotations=_maybe_graphic(rng)),
            Endpoint(EndpointRole.DEPENDEE, iref=dependum, aref=rng.choice(actor_ids),
                     annotations=_maybe_graphic(rng)),
        ]
        # occasionally widen one side with an extra endpoint entry
        if rng.random() < 0.2:
            role = rng.choice((EndpointRole.DEPENDER, EndpointRole.DEPENDEE))
            endpoints.append(Endpoint(role, iref=dependum, aref=rng.choice(actor_ids)))
        rng.shuffle(endpoints)
        return Dependency(endpoints=tuple(endpoints))

    for did in dependum_ids:
        dependencies.append(make_dependency(did))
    for _ in range(rng.randint(0, max_actors)):
        dependencies.append(make_dependency(rng.choice(dependum_ids)))

    # distribute: most dependencies under an owner actor, some at diagram level
    owned: dict[str, list[Dependency]] = {aid: [] for aid in actor_ids}
    diagram_level = []
    for dep in dependencies:
        if rng.random() < 0.15:
            diagram_level.append(dep)
        else:
            owner = rng.choice(actor_ids)
            owned[owner].append(
                Dependency(owner_actor=owner, endpoints=dep.endpoints,
                           annotations=dep.annotations)
            )

    actors = tuple(
        Actor(
            id=aid,
            name=rng.choice(NAME_POOL),
            actor_type=rng.choice(("role", "agent", "position", "plain")),
            dependencies=tuple(owned[aid]),
            annotations=_maybe_graphic(rng),
        )
        for aid in actor_ids
    )

    annotations = ()
    if rng.random() < 0.2:
        annotations = (
            OpaqueNode(
                tag="meansEnds",
                attrs=(("from", rng.choice(dependum_ids)), ("to", rng.choice(actor_ids))),
            ),
        )

    diagram = Diagram(
        name=f"diagram-{rng.randint(0, 99)}",
        dependums=dependums,
        actors=actors,
        dependencies=tuple(diagram_level),
        annotations=annotations,
    )
    return SDModel(version="1.0", diagrams=(diagram,))


def shuffled_copy(model: SDModel, rng: random.Random) -> SDModel:
    """Same content, permuted element order (for determinism properties)."""
    diagrams = []
    for diagram in model.diagrams:
        dependums = list(diagram.dependums)
        actors = list(diagram.actors)
        dependencies = list(diagram.dependencies)
        rng.shuffle(dependums)
        rng.shuffle(actors)
        rng.shuffle(dependencies)
        shuffled_actors = []
        for actor in actors:
            deps = list(actor.dependencies)
            rng.shuffle(deps)
            shuffled_actors.append(
                Actor(
                    id=actor.id,
                    name=actor.name,
                    actor_type=actor.actor_type,
                    dependencies=tuple(deps),
                    annotations=actor.annotations,
                )
            )
        diagrams.append(
            Diagram(
                name=diagram.name,
                dependums=tuple(dependums),
                actors=tuple(shuffled_actors),
                dependencies=tuple(dependencies),
                annotations=diagram.annotations,
            )
        )
    return SDModel(version=model.version, diagrams=tuple(diagrams), annotations=model.annotations)


def random_seeds(rng: random.Random, model: SDModel) -> list[str]:
    ids = sorted(model.actor_ids())
    k = rng.randint(0, len(ids))
    return rng.sample(ids, k)
