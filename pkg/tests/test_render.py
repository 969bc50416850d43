import json
import re

import pytest

from xasp.engine import evaluate
from xasp.explain import build_justification_tree, explain_program, select_explanations
from xasp.render import (
    RenderOptions,
    answer_set_to_obj,
    atoms_to_text,
    explanation_to_obj,
    explanation_to_text,
    explanations_to_dot,
    explanations_to_text,
    program_to_source,
    to_json,
    tree_to_dot,
    tree_to_obj,
    tree_to_text,
)
from xasp.syntax import parse_atom, parse_program

CN_LP_13 = ("cn_lp(1,3)-is_supported_by-([cn_lp(1,3)]-[node(1),node(3)]-"
            "[not edge(1,3),1!=3,n=#count{X:c(X,1,3)}])")
MATCH_31 = "match(3,1)-is_supported_by-([match(3,1)]-[test(3,1),cn_lp(3,1)]-[])"


def one(result, text):
    [e] = select_explanations(result.explanations, atom=parse_atom(text))
    return e


def tree(result, text):
    return build_justification_tree(parse_atom(text), result.explanations, result.answer_set)


class TestExplanationText:
    def test_cn_lp(self, didactic_result):
        assert explanation_to_text(one(didactic_result, "cn_lp(1,3)")) == CN_LP_13

    def test_match(self, didactic_result):
        assert explanation_to_text(one(didactic_result, "match(3,1)")) == MATCH_31

    def test_attribute_rule(self, didactic_result):
        text = explanation_to_text(one(didactic_result, "cn_lp(2,4)"))
        assert text.endswith("n_attrib=#count{X:c_attrib(X,2,4)}])")

    def test_wrapping(self, didactic_result):
        wrapped = explanation_to_text(one(didactic_result, "cn_lp(1,3)"), width=40)
        lines = wrapped.split("\n")
        assert len(lines) > 1
        assert all(line.startswith("   ") for line in lines[1:])
        assert "".join(line.strip() for line in lines) == CN_LP_13

    def test_wide_enough_is_one_line(self, didactic_result):
        assert explanation_to_text(one(didactic_result, "cn_lp(1,3)"), width=500) == CN_LP_13

    def test_listing(self, didactic_result):
        text = explanations_to_text(didactic_result.explanations)
        assert len(text.splitlines()) == 24
        assert CN_LP_13 in text.splitlines()


class TestJson:
    def test_empty_answer_set(self):
        assert to_json(evaluate(parse_program(""))) == '{"atoms":[],"meta":{}}'

    def test_answer_set(self):
        obj = json.loads(to_json(evaluate(parse_program("a. b(1) :- a."))))
        assert obj["atoms"] == [{"pred": "a", "args": []}, {"pred": "b", "args": ["1"]}]
        assert obj["meta"]["b(1)"] == {"stratum": 0, "round": 1, "fact": False}

    def test_shown_subset(self, didactic, didactic_result):
        shown = [a for a in didactic_result.answer_set if a.name == "match"]
        obj = answer_set_to_obj(didactic_result.answer_set, shown)
        assert len(obj["atoms"]) == 4 and set(obj["meta"]) == {str(a) for a in shown}

    def test_explanation(self, didactic_result):
        obj = explanation_to_obj(one(didactic_result, "cn_lp(1,3)"))
        assert obj["theta"] == {"Y": "1", "Z": "3"}
        assert obj["rule"] == 6 and obj["pos"] == ["node(1)", "node(3)"]
        assert '"theta":{"Y":"1","Z":"3"}' in to_json(one(didactic_result, "cn_lp(1,3)"))

    def test_explanation_list(self, didactic_result):
        assert len(json.loads(to_json(didactic_result.explanations))) == 24

    def test_fact_tree(self, didactic_result):
        assert to_json(tree(didactic_result, "node(1)")) == \
            '{"atom":"node(1)","support":"fact","children":[],"tests":[]}'

    def test_rule_tree(self, didactic_result):
        obj = tree_to_obj(tree(didactic_result, "cn_lp(1,3)"))
        assert obj["support"] == {"rule": 6, "theta": {"Y": "1", "Z": "3"}}
        assert len(obj["tests"]) == 3
        assert tree_to_obj(tree(didactic_result, "cn_lp(1,3)"), show_test_leaves=False)["tests"] == []


class TestDot:
    def test_cn_lp_tree(self, didactic_result):
        dot = tree_to_dot(tree(didactic_result, "cn_lp(1,3)"))
        assert dot.startswith("digraph justification {")
        assert len(re.findall(r"^\s+n\d+ \[label=", dot, re.M)) == 6
        edges = [l for l in dot.splitlines() if "->" in l]
        assert len(edges) == 5
        assert sum("dashed" in l for l in edges) == 3

    def test_without_tests(self, didactic_result):
        dot = tree_to_dot(tree(didactic_result, "cn_lp(1,3)"), show_test_leaves=False)
        assert dot.count("->") == 2 and "dashed" not in dot

    def test_single_fact(self, didactic_result):
        dot = tree_to_dot(tree(didactic_result, "node(1)"))
        assert dot.count("[label=") == 1 and "->" not in dot

    def test_quoting(self, didactic_result):
        dot = tree_to_dot(tree(didactic_result, "cn_lp(1,3)"))
        assert '"n=#count{X:c(X,1,3)}"' in dot

    def test_explanation_graph(self, didactic_result):
        match = select_explanations(didactic_result.explanations, {("match", 2)})
        dot = explanations_to_dot(match)
        assert dot.startswith("digraph explanations {")
        assert dot.count("->") == 8
        # A body atom used by several explanations is drawn once.
        assert dot.count('label="test(1,3)"') == 1


class TestTreeText:
    def test_match(self, didactic_result):
        lines = tree_to_text(tree(didactic_result, "match(1,3)")).splitlines()
        assert lines[0] == "match(1,3)  [rule 8]"
        assert lines[1] == "  test(1,3)  [fact]"
        assert "    1!=3  [tested]" in lines
        assert len(lines) == 8

    def test_no_tests(self, didactic_result):
        assert "tested" not in tree_to_text(tree(didactic_result, "match(1,3)"), show_test_leaves=False)


class TestProgramSource:
    def test_empty(self):
        assert program_to_source(parse_program("")) == ""

    def test_instrumented_round_trip(self, didactic_result):
        ext = didactic_result.instrumented.extended
        text = program_to_source(ext)
        assert parse_program(text) == ext
        assert "rule_fired(6, Y, Z) :- cn_lp(Y, Z), node(Y), node(Z), not edge(Y, Z), Y!=Z, " \
               "n=#count{X:c(X, Y, Z)}." in text
        assert "#show rule_fired/3." in text

    def test_atoms_line(self, didactic, didactic_result):
        shown = [a for a in didactic_result.answer_set if a.name in ("cn_lp", "match")]
        assert atoms_to_text(shown) == ("cn_lp(1,3) cn_lp(2,4) cn_lp(3,1) cn_lp(4,2) "
                                        "match(1,3) match(2,4) match(3,1) match(4,2)")


class TestDeterminism:
    def test_repeat(self, didactic):
        first = explain_program(didactic)
        second = explain_program(didactic)
        assert to_json(first.explanations) == to_json(second.explanations)
        assert explanations_to_dot(first.explanations) == explanations_to_dot(second.explanations)


def test_render_options():
    assert RenderOptions().format == "text"
    with pytest.raises(ValueError):
        RenderOptions(format="yaml")
