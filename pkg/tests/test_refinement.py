import random

import graphgen
from procco import (
    InstanceGraph,
    Multiplicity,
    builtin_matrix,
    check_schema_refinement,
    lift,
    matrix_row,
)
from procco.refinement import classify_cards, render_matrix_canonical, render_matrix_text
from procco.schema import TfoName

STAR = Multiplicity(0, None)
ONE_PLUS = Multiplicity(1, None)
ONE = Multiplicity(1, 1)


def test_matrix_has_18_unique_rows():
    rows = builtin_matrix()
    assert len(rows) == 18
    names = [r.pco.name for r in rows]
    assert len(set(names)) == 18


def test_matrix_table_order():
    rows = builtin_matrix()
    assert rows[0].pco.name == "consumes"
    assert rows[-1].pco.name == "uses"
    labels = [r.pco.display_name for r in rows]
    assert labels == sorted(labels)


def test_row_lookups():
    assert matrix_row("consumes").tfo.name is TfoName.INTERACTS_WITH_OTHER
    assert matrix_row("sets precondition").tfo.name is TfoName.DEFINES
    assert matrix_row("uses").tfo.name is TfoName.INTERACTS_WITH_OTHER
    assert matrix_row("pertains to product category").tfo.name is TfoName.BELONGS_TO


def test_five_parent_relations_cover_matrix():
    used = {r.tfo.name for r in builtin_matrix()}
    assert used == set(TfoName)


def test_printed_term_quirk_preserved():
    row = matrix_row("pertains_to_resource_category")
    assert row.pco_target_term == "Resource Entity Category"
    assert row.pco.target_kind == "ResourceCategory"


def test_classify_cards():
    assert classify_cards(STAR, STAR) == "equal"
    assert classify_cards(ONE_PLUS, STAR) == "narrowing"
    assert classify_cards(ONE, ONE_PLUS) == "narrowing"
    assert classify_cards(STAR, ONE_PLUS) == "widening"


def test_involves_narrows_without_finding():
    row = matrix_row("involves")
    assert classify_cards(row.pco_source_card, row.tfo.source_card) == "narrowing"
    assert classify_cards(row.pco_target_card, row.tfo.target_card) == "narrowing"
    assert not [f for f in check_schema_refinement() if "involves" in f.message]


def test_relates_equal_without_finding():
    row = matrix_row("relates")
    assert classify_cards(row.pco_source_card, row.tfo.source_card) == "equal"
    assert not [f for f in check_schema_refinement() if "'relates'" in f.message]


def test_widenings_reported():
    findings = check_schema_refinement()
    assert all(f.code == "R001" and f.severity == "warning" for f in findings)
    widened = sorted(f.message.split("'")[1] + ":" + f.message.split()[1] for f in findings)
    assert widened == [
        "consumes:source",
        "is_assigned_to:target",
        "is_related_with:target",
        "is_required_by:source",
    ]
    assert check_schema_refinement() == findings  # deterministic


def test_lift_single_edge():
    g = InstanceGraph()
    g.add_entity("agent1", "HumanAgent")
    g.add_entity("tool1", "Tool")
    g.add_relation("uses", "agent1", "tool1")
    g.freeze()
    assert lift(g) == [("interacts_with_other", "agent1", "tool1")]


def test_lift_belongs_to():
    g = InstanceGraph()
    g.add_entity("pe1", "NaturalProduct")
    g.add_entity("cat1", "ProductCategory")
    g.add_relation("pertains_to_product_category", "pe1", "cat1")
    g.freeze()
    assert lift(g) == [("belongs_to", "pe1", "cat1")]


def test_lift_empty():
    assert lift(InstanceGraph().freeze()) == []


def test_lift_edge_preserving_on_random_graphs():
    for seed in range(30):
        g = graphgen.random_graph(random.Random(seed))
        lifted = lift(g)
        assert len(lifted) == len(g.relations)
        assert lifted == sorted(lifted)


def test_matrix_rendering_deterministic():
    assert render_matrix_text() == render_matrix_text()
    canonical = render_matrix_canonical()
    assert canonical == render_matrix_canonical()
    lines = canonical.splitlines()
    assert lines[0] == "procco-matrix\tv1"
    assert len(lines) == 19
    assert all(len(line.split("\t")) == 10 for line in lines[1:])
