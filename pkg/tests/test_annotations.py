"""Sidecar parsing, relevance rules, topic stack, moves, shallow analysis."""

import dataclasses
import random

import pytest

from prosomark.annotations import (ClauseFeatures, IntegrityError,
                                   SidecarError, TopicRecord, TopicStack,
                                   classify_relevance, derive_moves, fold_topics,
                                   parse_sidecar, render_sidecar, shallow_analyze,
                                   update_topic_stack)
from prosomark.ingest import split_document, tokenize
from conftest import load


EDGE_PROP = load("edge_prop.ann")
EDGE_DISC = load("edge_disc.ann")


def test_parse_clause_row():
    ann = parse_sidecar(
        "CLAUSE\t26\tmain/prop\texternal\tfactive\tculminated\tforeground"
        "\tactivity\tuse\tperf\tcause\tobjective\t26-26\n")
    c = ann.clause(26)
    assert c.pred == "use"
    assert c.change == "culminated"
    assert c.relevance == "foreground"
    assert c.tense == "perf"
    assert c.disc_rel == "cause"


def test_parse_empty():
    ann = parse_sidecar("")
    assert ann.clauses == [] and ann.topics == [] and ann.nodes == []


def test_dangling_topic_reference():
    text = ("CLAUSE\t1\tmain/prop\texternal\tfactive\tnull\tbackground"
            "\tactivity\trun\tpres\tnarration\tobjective\t0-1\n"
            "TOPIC\tpoten\t99\tcat\tid1\t3,nil,nil\tobject\ttheme\n")
    with pytest.raises(IntegrityError):
        parse_sidecar(text)


def test_malformed_line_reports_line_number():
    with pytest.raises(SidecarError) as err:
        parse_sidecar("# comment\nCLAUSE\t1\tbroken\n")
    assert err.value.line_no == 2


def test_unknown_enum_rejected():
    with pytest.raises(SidecarError):
        parse_sidecar(
            "CLAUSE\t1\tmain/prop\texternal\tfactive\tWRONG\tbackground"
            "\tactivity\trun\tpres\tnarration\tobjective\t0-1\n")


def test_graded_state_combination_rejected():
    with pytest.raises(SidecarError):
        parse_sidecar(
            "CLAUSE\t1\tmain/prop\texternal\tfactive\tgraded\tbackground"
            "\tstate\tbe\tpres\tnarration\tobjective\t0-1\n")


def test_render_parse_round_trip():
    for text in (EDGE_PROP, EDGE_DISC, load("belling_cat.ann")):
        ann = parse_sidecar(text)
        again = parse_sidecar(render_sidecar(ann))
        assert render_sidecar(again) == render_sidecar(ann)
        assert [c.pred for c in again.clauses] == [c.pred for c in ann.clauses]
        assert again.clause_spans == ann.clause_spans


# Relevance -------------------------------------------------------------------

def test_relevance_use_perf_culminated():
    feats = ClauseFeatures(1, pred="use", change="culminated", tense="perf")
    assert classify_relevance(feats) == "foreground"


def test_relevance_be_pres_null():
    feats = ClauseFeatures(1, pred="be", change="null", tense="pres")
    assert classify_relevance(feats) == "background"


def test_relevance_reproduces_propositional_table():
    ann = parse_sidecar(EDGE_PROP)
    rows = [c for c in ann.clauses if c.clause_no != 29]  # 29 is synthesized
    assert len(rows) == 18
    for c in rows:
        blind = dataclasses.replace(c, relevance=None)
        assert classify_relevance(blind) == c.relevance, c.clause_no


def test_relevance_discourse_table_overrides():
    # the discourse table marks two present/null clauses foreground, which
    # the change-driven default cannot produce: the ruleset override covers it
    ann = parse_sidecar(EDGE_DISC)
    exceptions = [c for c in ann.clauses if c.pred in ("come", "stare")]
    assert all(c.relevance == "foreground" for c in exceptions)
    for c in exceptions:
        blind = dataclasses.replace(c, relevance=None)
        assert classify_relevance(blind) == "background"  # known discrepancy
    override = [({"pred": "come"}, "foreground"),
                ({"pred": "stare"}, "foreground"),
                ({"change": "culminated"}, "foreground"),
                ({}, "background")]
    for c in exceptions:
        blind = dataclasses.replace(c, relevance=None)
        assert classify_relevance(blind, override) == "foreground"


@pytest.mark.xfail(reason="discourse-table foreground rows contradict the "
                          "change-driven default; covered by the override "
                          "ruleset above", strict=True)
def test_relevance_discourse_table_with_default_rules():
    ann = parse_sidecar(EDGE_DISC)
    for c in ann.clauses:
        blind = dataclasses.replace(c, relevance=None)
        assert classify_relevance(blind) == c.relevance


def test_relevance_depends_only_on_change():
    for change in ("null", "graded", "culminated"):
        seen = set()
        for tense in ("pres", "past", "perf", "nil"):
            for aspect in ("activity", "accomplishment", "achievement"):
                feats = ClauseFeatures(1, change=change, tense=tense, aspect=aspect)
                seen.add(classify_relevance(feats))
        assert len(seen) == 1


# Topic stack -----------------------------------------------------------------

def test_topic_stack_edge_trace():
    ann = parse_sidecar(EDGE_PROP)
    states = fold_topics(ann)
    assert states[1].main == "id1"
    assert states[3].main == "id2"
    assert states[15].main == "id2"
    assert states[15].persistence["id7"] == 2
    assert states[max(states)].main == "id2"


def test_topic_stack_single_mention_seeds_main():
    stack = update_topic_stack(TopicStack(), [TopicRecord("main", 1, "edge", "id1")])
    assert stack.main == "id1"
    assert stack.secondary is None and stack.potential is None


def test_topic_stack_never_repeated_stays_potential():
    stack = TopicStack()
    stack = update_topic_stack(stack, [TopicRecord("main", 1, "edge", "id1")])
    stack = update_topic_stack(stack, [TopicRecord("poten", 2, "scroll", "id3")])
    assert stack.potential == "id3"
    stack = update_topic_stack(stack, [TopicRecord("poten", 3, "toga", "id6")])
    assert stack.potential == "id6"
    assert "id3" not in (stack.main, stack.secondary)


def test_topic_stack_no_duplicate_slots_random():
    rng = random.Random(99)
    ids = [f"id{i}" for i in range(1, 9)]
    for _ in range(1000):
        stack = TopicStack()
        for clause_no in range(1, rng.randint(2, 12)):
            mentions = [TopicRecord("poten", clause_no, f"w{sid}", sid)
                        for sid in rng.sample(ids, rng.randint(1, 4))]
            stack = update_topic_stack(stack, mentions)
            slots = stack.slots()
            assert len(slots) == len(set(slots))


# Discourse moves -------------------------------------------------------------

def test_derive_moves_discourse_table_rows():
    ann = parse_sidecar(EDGE_DISC)
    nodes = derive_moves(ann.clauses, ann.topics)
    by = {n.clause_no: n for n in nodes}
    assert by[31].move == "up"
    assert by[31].attach == (1, 31)
    assert by[38].move == "level"


def test_derive_moves_degenerate_document():
    clause = ClauseFeatures(1, pred="run", relevance="background")
    nodes = derive_moves([clause], [])
    assert len(nodes) == 1
    assert nodes[0].move == "up"
    assert nodes[0].attach == (None, 1)


def test_derive_moves_one_node_per_clause():
    ann = parse_sidecar(EDGE_DISC)
    nodes = derive_moves(ann.clauses, ann.topics)
    assert len(nodes) == len(ann.clauses)
    assert sorted(n.clause_no for n in nodes) == sorted(c.clause_no for c in ann.clauses)
    nil_origin = [n for n in nodes if n.attach[0] is None]
    assert len(nil_origin) == 1 and nil_origin[0].move == "up"
    known = set()
    ordered = sorted(nodes, key=lambda n: n.clause_no)
    for n in ordered:
        if n.attach[0] is not None:
            assert n.attach[0] in known
            assert n.attach[0] < n.attach[1]
        known.add(n.clause_no)


# Shallow fallback ------------------------------------------------------------

def _doc(text, config, title="off"):
    return split_document(tokenize(text, config.multiwords), text, title)


def test_shallow_two_clause_sentence(config):
    doc = _doc("The mice looked at one another and nobody spoke.", config)
    ann = shallow_analyze(doc)
    assert len(ann.clauses) == 2
    for c in ann.clauses:
        assert c.tense == "past"
        assert c.change == "culminated"
        assert c.relevance == "foreground"


def test_shallow_empty(config):
    ann = shallow_analyze(_doc("", config))
    assert ann.clauses == [] and ann.topics == []


def test_shallow_marker_relations(config):
    doc = _doc("She left because he stayed.", config)
    ann = shallow_analyze(doc)
    assert any(c.disc_rel == "cause" for c in ann.clauses)


def test_shallow_boundary_overlap_with_gold(config, fable_result):
    doc = fable_result.doc
    shallow = shallow_analyze(doc)
    gold_starts = {span[0] for span in fable_result.ann.clause_spans.values()}
    shallow_starts = {span[0] for span in shallow.clause_spans.values()}
    # oracle: a gold clause agrees when a shallow boundary falls within one
    # token of its span start
    agreed = [g for g in gold_starts
              if any(abs(g - s) <= 1 for s in shallow_starts)]
    assert len(agreed) / len(gold_starts) >= 0.80


def test_shallow_never_emits_subjective_or_internal(config):
    doc = _doc(load("belling_cat.txt"), config, title="auto")
    ann = shallow_analyze(doc)
    assert all(c.subjectivity == "objective" for c in ann.clauses)
    assert all(c.view == "external" for c in ann.clauses)
    assert all(c.factivity == "factive" for c in ann.clauses)
