import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import graphgen
from procco import (
    CanonicalParseError,
    CompositionCycleError,
    DuplicateEntityError,
    FrozenGraphError,
    InstanceGraph,
    InvalidCompositionError,
    InvalidRelationshipError,
    InvalidTermError,
    MissingEntityError,
    Scalar,
    export_canonical,
    import_canonical,
)


def small_graph() -> InstanceGraph:
    g = InstanceGraph()
    g.add_entity("wp1", "WorkProcess", {"name": "Build"})
    g.add_entity("a1", "Activity")
    g.add_entity("t1", "Task", {"steps_specification": "1. do it"})
    g.add_entity("pe1", "NaturalProduct")
    g.add_entity("r1", "Role")
    g.add_composition("wp1", "a1")
    g.add_composition("a1", "t1")
    g.add_relation("consumes", "wp1", "pe1")
    g.add_relation("involves", "t1", "r1")
    return g


def test_add_entity():
    g = InstanceGraph()
    g.add_entity("t1", "Task", {"name": "Review spec"})
    assert len(g.entities) == 1
    assert g.entity("t1").kind == "Task"
    assert g.entity("t1").attributes["name"] == Scalar.text("Review spec")


def test_add_entity_duplicate():
    g = InstanceGraph()
    g.add_entity("t1", "Task")
    with pytest.raises(DuplicateEntityError):
        g.add_entity("t1", "Task")


def test_add_entity_unknown_kind():
    g = InstanceGraph()
    with pytest.raises(InvalidTermError):
        g.add_entity("x", "Workflow")


def test_add_entity_bad_id_or_attr_name():
    g = InstanceGraph()
    with pytest.raises(ValueError):
        g.add_entity("has space", "Task")
    with pytest.raises(ValueError):
        g.add_entity("", "Task")
    with pytest.raises(ValueError):
        g.add_entity("t1", "Task", {"bad name": "x"})


def test_scalar_coercion():
    assert Scalar.coerce(42) == Scalar("number", "42")
    assert Scalar.coerce("x") == Scalar.text("x")
    assert Scalar.coerce(-0.5) == Scalar("number", "-0.5")
    with pytest.raises(TypeError):
        Scalar.coerce(True)
    with pytest.raises(ValueError):
        Scalar.date("not-a-date")
    with pytest.raises(ValueError):
        Scalar("number", "12e4")


def test_add_relation():
    g = InstanceGraph()
    g.add_entity("agent1", "HumanAgent")
    g.add_entity("t1", "Task")
    g.add_relation("performs", "agent1", "t1")
    assert len(g.relations) == 1
    g.add_relation("performs", "agent1", "t1")  # idempotent
    assert len(g.relations) == 1


def test_add_relation_errors():
    g = InstanceGraph()
    g.add_entity("agent1", "HumanAgent")
    g.add_entity("t1", "Task")
    with pytest.raises(InvalidRelationshipError):
        g.add_relation("perform", "agent1", "t1")
    with pytest.raises(MissingEntityError):
        g.add_relation("consumes", "agent1", "ghost")


@pytest.mark.parametrize("parent_kind,child_kind,flavor", [
    ("WorkProcess", "WorkProcess", "subProcessOf"),
    ("WorkProcess", "Activity", "activityPartOf"),
    ("Activity", "Activity", "subActivityOf"),
    ("Activity", "Task", "taskPartOf"),
])
def test_composition_flavors(parent_kind, child_kind, flavor):
    g = InstanceGraph()
    g.add_entity("p", parent_kind)
    g.add_entity("c", child_kind)
    g.add_composition("p", "c")
    edge = next(iter(g.composition))
    assert edge.flavor == flavor


@pytest.mark.parametrize("parent_kind,child_kind", [
    ("Task", "Activity"),        # tasks are atomic
    ("Activity", "WorkProcess"),
    ("WorkProcess", "Task"),     # tasks hang under activities only
    ("Role", "Task"),
])
def test_composition_illegal_kinds(parent_kind, child_kind):
    g = InstanceGraph()
    g.add_entity("p", parent_kind)
    g.add_entity("c", child_kind)
    with pytest.raises(InvalidCompositionError):
        g.add_composition("p", "c")


def test_composition_cycles():
    g = InstanceGraph()
    g.add_entity("wp1", "WorkProcess")
    g.add_entity("wp2", "WorkProcess")
    g.add_entity("wp3", "WorkProcess")
    with pytest.raises(CompositionCycleError):
        g.add_composition("wp1", "wp1")
    g.add_composition("wp1", "wp2")
    g.add_composition("wp2", "wp3")
    with pytest.raises(CompositionCycleError):
        g.add_composition("wp3", "wp1")


def test_composition_dag_allows_shared_parts():
    g = InstanceGraph()
    g.add_entity("wp1", "WorkProcess")
    g.add_entity("wp2", "WorkProcess")
    g.add_entity("a1", "Activity")
    g.add_composition("wp1", "a1")
    g.add_composition("wp2", "a1")  # sharing is legal (strict mode warns)
    assert len(g.composition) == 2


def test_freeze_blocks_mutation():
    g = small_graph().freeze()
    assert g.frozen
    g.freeze()  # idempotent
    with pytest.raises(FrozenGraphError):
        g.add_entity("x", "Task")
    with pytest.raises(FrozenGraphError):
        g.add_relation("consumes", "wp1", "pe1")
    with pytest.raises(FrozenGraphError):
        g.add_composition("wp1", "a1")


def test_structural_equality_ignores_freeze_and_history():
    a = small_graph()
    b = small_graph().freeze()
    assert a == b
    b2 = small_graph()
    b2.add_entity("extra", "Time")
    assert a != b2


def test_export_empty():
    assert export_canonical(InstanceGraph()) == "procco-graph v1\n"
    assert import_canonical("procco-graph v1\n") == InstanceGraph()


def test_export_import_round_trip():
    g = small_graph()
    text = export_canonical(g)
    assert import_canonical(text) == g
    assert export_canonical(g) == text  # determinism


def test_export_insertion_order_independent():
    g1 = small_graph()
    g2 = InstanceGraph()
    g2.add_entity("r1", "Role")
    g2.add_entity("pe1", "NaturalProduct")
    g2.add_entity("t1", "Task", {"steps_specification": "1. do it"})
    g2.add_entity("a1", "Activity")
    g2.add_entity("wp1", "WorkProcess", {"name": "Build"})
    g2.add_relation("involves", "t1", "r1")
    g2.add_relation("consumes", "wp1", "pe1")
    g2.add_composition("a1", "t1")
    g2.add_composition("wp1", "a1")
    assert export_canonical(g1) == export_canonical(g2)


@pytest.mark.parametrize("text,line", [
    ("nonsense\n", 1),
    ("procco-graph v1\nentity t1\n", 2),
    ("procco-graph v1\nblob t1 Task\n", 2),
    ("procco-graph v1\nentity t1 Task\nattr ghost name text \"x\"\n", 3),
    ("procco-graph v1\nentity t1 Task\nattr t1 name number abc\n", 3),
    ("procco-graph v1\nentity wp1 WorkProcess\nentity a1 Activity\ncomp wp1 a1 subProcessOf\n", 4),
])
def test_import_errors_carry_line(text, line):
    with pytest.raises(CanonicalParseError) as exc:
        import_canonical(text)
    assert exc.value.line == line


def test_import_text_escapes():
    g = InstanceGraph()
    g.add_entity("t1", "Task", {"name": 'a "quoted"\nline\twith \\ stuff\r'})
    assert import_canonical(export_canonical(g)) == g


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_canonical_round_trip_random(seed):
    g = graphgen.random_attr_graph(random.Random(seed))
    text = export_canonical(g)
    assert import_canonical(text) == g
    assert export_canonical(g) == text


_OPS = st.lists(st.tuples(st.sampled_from(["entity", "rel", "comp"]),
                          st.integers(0, 7), st.integers(0, 7)), max_size=40)


@settings(max_examples=60, deadline=None)
@given(_OPS, st.integers(0, 10_000))
def test_random_edits_keep_invariants(ops, seed):
    rng = random.Random(seed)
    g = InstanceGraph()
    kinds = graphgen.WORK_KINDS + ["Role", "NaturalProduct"]
    for op, i, j in ops:
        try:
            if op == "entity":
                g.add_entity(f"e{i}", rng.choice(kinds))
            elif op == "rel":
                g.add_relation(rng.choice(graphgen.AXIOM_RELS), f"e{i}", f"e{j}")
            else:
                g.add_composition(f"e{i}", f"e{j}")
        except (ValueError, DuplicateEntityError, MissingEntityError,
                InvalidCompositionError, CompositionCycleError):
            pass
        # Referential integrity after every mutation.
        for edge in g.relations:
            assert edge.source in g.entities and edge.target in g.entities
        for edge in g.composition:
            assert edge.parent in g.entities and edge.child in g.entities
    # Composition stays acyclic: a DFS from every node never revisits it.
    for start in g.entities:
        stack, seen = list(g.children(start)), set()
        while stack:
            node = stack.pop()
            assert node != start, "composition cycle"
            if node in seen:
                continue
            seen.add(node)
            stack.extend(g.children(node))
