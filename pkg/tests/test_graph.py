"""Counting and defect-flow extraction against independent oracles."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defectdep.emitter import emit_istarml
from defectdep.graph import DependencyCounts, count, extract_defect_flow
from defectdep.model import (
    Actor,
    Dependency,
    Dependum,
    Diagram,
    Endpoint,
    EndpointRole,
    SDModel,
    structurally_equal,
)
from defectdep.parser import parse_istarml

from genmodels import random_model, random_seeds, shuffled_copy
from oracles import reference_flow, tally_counts


def chain_model(n: int = 4) -> SDModel:
    """Actors c0..c(n-1), one dependency between each consecutive pair."""
    actors = []
    dependums = []
    for i in range(n):
        deps = ()
        if i + 1 < n:
            dependums.append(Dependum(id=f"g{i}", name=f"G{i}", kind="goal"))
            deps = (
                Dependency(
                    owner_actor=f"c{i}",
                    endpoints=(
                        Endpoint(EndpointRole.DEPENDER, f"g{i}", f"c{i}"),
                        Endpoint(EndpointRole.DEPENDEE, f"g{i}", f"c{i + 1}"),
                    ),
                ),
            )
        actors.append(Actor(id=f"c{i}", name=f"C{i}", actor_type="role", dependencies=deps))
    return SDModel(diagrams=(Diagram(name="chain", dependums=tuple(dependums),
                                     actors=tuple(actors)),))


def test_count_stock_fixture(stock_xml):
    assert count(parse_istarml(stock_xml)) == DependencyCounts(2, 2, 2)


def test_count_empty():
    assert count(SDModel()) == DependencyCounts(0, 0, 0)


def test_count_random_models_match_enumeration_oracle():
    rng = random.Random(11)
    for _ in range(50):
        model = random_model(rng, max_actors=20)
        xml = emit_istarml(model)
        actors_n, dependees_n, dependers_n = tally_counts(xml)
        assert count(model) == DependencyCounts(actors_n, dependees_n, dependers_n)


def test_extract_empty_seeds(exchange_xml):
    flow = extract_defect_flow(parse_istarml(exchange_xml), [], 1)
    assert count(flow.subgraph) == DependencyCounts(0, 0, 0)
    assert flow.subgraph.links() == []


def test_extract_chain_depth_one():
    model = chain_model(4)
    flow = extract_defect_flow(model, ["c1"], 1)
    assert {a.id for a in flow.subgraph.all_actors()} == {"c0", "c1", "c2"}
    assert len(flow.subgraph.links()) == 2
    assert count(flow.subgraph) == DependencyCounts(3, 2, 2)


def test_extract_chain_depth_grows():
    model = chain_model(4)
    assert {a.id for a in extract_defect_flow(model, ["c1"], 2).subgraph.all_actors()} == {
        "c0", "c1", "c2", "c3",
    }


def test_extract_full_coverage_equals_product(exchange_xml):
    product = parse_istarml(exchange_xml)
    flow = extract_defect_flow(product, sorted(product.actor_ids()), 3)
    assert structurally_equal(flow.subgraph, product)


def test_extract_unknown_seed_reported(exchange_xml):
    product = parse_istarml(exchange_xml)
    flow = extract_defect_flow(product, ["ghost", "portfolio"], 1)
    assert flow.unknown_seeds == ("ghost",)
    assert {a.id for a in flow.subgraph.all_actors()} == {"trader", "portfolio", "sdm"}


def test_extract_depth_must_be_positive(exchange_xml):
    with pytest.raises(ValueError):
        extract_defect_flow(parse_istarml(exchange_xml), ["trader"], 0)


def test_extract_orphan_owner_moves_dependency_to_diagram_level():
    # dependency owned by an actor that the flow never reaches
    model = SDModel(
        diagrams=(
            Diagram(
                name="d",
                dependums=(Dependum(id="g", name="G", kind="goal"),),
                actors=(
                    Actor(id="a", name="A", actor_type="role"),
                    Actor(id="b", name="B", actor_type="role"),
                    Actor(id="owner", name="O", actor_type="role", dependencies=(
                        Dependency(
                            owner_actor="owner",
                            endpoints=(
                                Endpoint(EndpointRole.DEPENDER, "g", "a"),
                                Endpoint(EndpointRole.DEPENDEE, "g", "b"),
                            ),
                        ),
                    )),
                ),
            ),
        )
    )
    flow = extract_defect_flow(model, ["a"], 1)
    assert {a.id for a in flow.subgraph.all_actors()} == {"a", "b"}
    diagram = flow.subgraph.diagrams[0]
    assert len(diagram.dependencies) == 1
    assert diagram.dependencies[0].owner_actor == ""
    # link triples are still a subset of the product's
    product_triples = {l.triple for l in model.links()}
    assert {l.triple for l in flow.subgraph.links()} <= product_triples


@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(1, 3))
@settings(max_examples=80, deadline=None)
def test_subgraph_containment_and_subset(seed, depth):
    rng = random.Random(seed)
    product = random_model(rng)
    seeds = random_seeds(rng, product)
    flow = extract_defect_flow(product, seeds, depth)
    assert count(flow.subgraph) <= count(product)
    assert flow.subgraph.actor_ids() <= product.actor_ids()
    assert flow.subgraph.dependum_ids() <= product.dependum_ids()
    assert {l.triple for l in flow.subgraph.links()} <= {l.triple for l in product.links()}
    # every surviving seed appears in the subgraph
    assert (set(seeds) & product.actor_ids()) <= flow.subgraph.actor_ids()


@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(1, 3))
@settings(max_examples=80, deadline=None)
def test_depth_monotonicity(seed, depth):
    rng = random.Random(seed)
    product = random_model(rng)
    seeds = random_seeds(rng, product)
    shallow = count(extract_defect_flow(product, seeds, depth).subgraph)
    deep = count(extract_defect_flow(product, seeds, depth + 1).subgraph)
    assert shallow <= deep


@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(1, 3))
@settings(max_examples=80, deadline=None)
def test_seed_monotonicity(seed, depth):
    rng = random.Random(seed)
    product = random_model(rng)
    larger = random_seeds(rng, product)
    smaller = [s for s in larger if rng.random() < 0.5]
    small_counts = count(extract_defect_flow(product, smaller, depth).subgraph)
    large_counts = count(extract_defect_flow(product, larger, depth).subgraph)
    assert small_counts <= large_counts


@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_extraction_deterministic_under_element_order(seed, depth):
    rng = random.Random(seed)
    product = random_model(rng)
    seeds = random_seeds(rng, product)
    permuted = shuffled_copy(product, rng)
    flow_a = extract_defect_flow(product, seeds, depth)
    flow_b = extract_defect_flow(permuted, list(reversed(seeds)), depth)
    assert structurally_equal(flow_a.subgraph, flow_b.subgraph)
    assert count(flow_a.subgraph) == count(flow_b.subgraph)


@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(1, 4))
@settings(max_examples=100, deadline=None)
def test_extraction_matches_reference_traversal(seed, depth):
    rng = random.Random(seed)
    product = random_model(rng)  # <= 8 actors
    seeds = random_seeds(rng, product)
    xml = emit_istarml(product)
    reached, oracle_counts = reference_flow(xml, seeds, depth)
    flow = extract_defect_flow(product, seeds, depth)
    assert flow.subgraph.actor_ids() == reached
    assert count(flow.subgraph) == DependencyCounts(*oracle_counts)
