import pytest
from hypothesis import given, settings

from generators import programs
from oracles import ground_instances
from xasp import corpus
from xasp.engine import evaluate, literal_holds
from xasp.errors import ArityMismatchError, DepthExceededError, NotInAnswerSetError
from xasp.explain import (
    FACT,
    RuleInstance,
    all_supports,
    build_justification_tree,
    explain_program,
    extract_substitution,
    is_sound,
    select_explanations,
    strip_extension,
)
from xasp.instrument import instrument_program
from xasp.syntax import Number, parse_atom, parse_program, substitute_atom


def atom(text):
    return parse_atom(text)


def explanation_instances(result):
    return {(e.rule_id, tuple(sorted(e.theta.items()))) for e in result.explanations}


def firing_instances(program, answer_set, rule_ids):
    """Ground instances of each numbered rule whose whole body holds in ``answer_set``."""
    ids = {r: i for i, r in rule_ids.items()}
    out = set()
    for rule, theta in ground_instances(program):
        if rule.is_fact:
            continue
        if all(literal_holds(lit, answer_set, theta, program.consts) for lit in rule.body):
            if substitute_atom(rule.head, theta) in answer_set:
                out.add((ids[rule.source_index], tuple(sorted(theta.items()))))
    return out


def _check_sound_and_complete(program):
    result = explain_program(program)
    atoms = result.answer_set.atoms
    for e in result.explanations:
        assert is_sound(e, atoms, program.consts), e
    by_source = {rid: r.source_index for rid, r in result.instrumented.rule_id_map.items()}
    assert explanation_instances(result) == firing_instances(program, atoms, by_source)
    return result


class TestStripExtension:
    def test_recovers_answer_set(self, didactic, didactic_result):
        assert didactic_result.answer_set.atoms == evaluate(didactic).atoms
        assert len(didactic_result.extended_answer_set) == 56

    def test_keeps_metadata(self, didactic_result):
        stripped = strip_extension(didactic_result.extended_answer_set)
        assert stripped.meta[atom("cn_lp(1,3)")] == didactic_result.extended_answer_set.meta[atom("cn_lp(1,3)")]


class TestExtractSubstitution:
    def test_cn_lp(self, didactic_result):
        rule_id, theta = extract_substitution(atom("rule_fired(6,1,3)"), didactic_result.instrumented.rule_id_map)
        assert rule_id == 6 and theta == {"Y": Number(1), "Z": Number(3)}

    def test_ground_rule(self):
        inst = instrument_program(parse_program("a. b :- a."))
        assert extract_substitution(atom("rule_fired(1)"), inst.rule_id_map) == (1, {})

    def test_arity_mismatch(self, didactic_result):
        ids = didactic_result.instrumented.rule_id_map
        with pytest.raises(ArityMismatchError):
            extract_substitution(atom("rule_fired(6,1)"), ids)
        with pytest.raises(ArityMismatchError):
            extract_substitution(atom("rule_fired(99,1,3)"), ids)
        with pytest.raises(ArityMismatchError):
            extract_substitution(atom("rule_fired(x,1,3)"), ids)


class TestBuildExplanations:
    def test_didactic_counts(self, didactic_result):
        assert len(didactic_result.explanations) == 24
        shown = select_explanations(didactic_result.explanations, {("cn_lp", 2), ("match", 2)})
        assert len(shown) == 8

    def test_cn_lp_13(self, didactic_result):
        [e] = select_explanations(didactic_result.explanations, atom=atom("cn_lp(1,3)"))
        assert e.rule_id == 6
        assert [str(a) for a in e.positive_body] == ["node(1)", "node(3)"]
        assert [str(t) for t in e.test_body] == ["not edge(1,3)", "1!=3", "n=#count{X:c(X,1,3)}"]

    def test_ordering(self, didactic_result):
        keys = [e.sort_key for e in didactic_result.explanations]
        assert keys == sorted(keys)

    def test_facts_only(self):
        assert explain_program(parse_program("a. b(1).")).explanations == []


class TestSelect:
    def test_by_predicate(self, didactic_result):
        assert len(select_explanations(didactic_result.explanations, {("match", 2)})) == 4

    def test_empty_selection(self, didactic_result):
        assert select_explanations(didactic_result.explanations, set()) == []

    def test_predicate_and_atom(self, didactic_result):
        hits = select_explanations(didactic_result.explanations, {("cn_lp", 2)}, atom("cn_lp(1,3)"))
        assert len(hits) == 1

    def test_pattern(self, didactic_result):
        hits = select_explanations(didactic_result.explanations, atom=atom("match(X,X)"))
        assert hits == []
        hits = select_explanations(didactic_result.explanations, atom=atom("match(1,Y)"))
        assert [str(e.head) for e in hits] == ["match(1,3)"]


class TestAllSupports:
    def test_multi_support(self):
        result = explain_program(parse_program(corpus.read("multi_support")))
        supports = all_supports(atom("p"), result.explanations)
        assert [e.rule_id for e in supports] == [1, 2]
        assert len(all_supports(atom("q(2)"), result.explanations)) == 2

    def test_single(self, didactic_result):
        assert len(all_supports(atom("match(1,3)"), didactic_result.explanations)) == 1
        assert len(all_supports(atom("cn_lp(1,3)"), didactic_result.explanations)) == 1

    def test_underivable(self, didactic_result):
        assert all_supports(atom("match(1,2)"), didactic_result.explanations) == []


class TestJustificationTree:
    def tree(self, result, text, **kw):
        return build_justification_tree(atom(text), result.explanations, result.answer_set, **kw)

    def test_fact(self, didactic_result):
        t = self.tree(didactic_result, "node(1)")
        assert t.is_fact and t.children == () and t.node_count() == 1

    def test_cn_lp(self, didactic_result):
        t = self.tree(didactic_result, "cn_lp(1,3)")
        assert t.support == RuleInstance(6, {"Y": Number(1), "Z": Number(3)})
        assert [c.support for c in t.children] == [FACT, FACT]
        assert len(t.test_leaves) == 3
        assert t.node_count() == 6

    def test_match(self, didactic_result):
        t = self.tree(didactic_result, "match(1,3)")
        assert t.support.rule_id == 8
        assert [str(c.root) for c in t.children] == ["test(1,3)", "cn_lp(1,3)"]
        assert t.depth() == 3

    def test_derived_symmetric_test_atom(self, didactic_result):
        t = self.tree(didactic_result, "match(3,1)")
        first = t.children[0]
        assert str(first.root) == "test(3,1)" and first.support.rule_id == 3
        assert [str(c.root) for c in first.children] == ["test(1,3)"]

    def test_fact_beats_rule(self, didactic_result):
        # edge(1,2) is both a fact and the head of a fired instance of the symmetry rule.
        assert self.tree(didactic_result, "edge(1,2)").is_fact

    def test_not_in_answer_set(self, didactic_result):
        with pytest.raises(NotInAnswerSetError):
            self.tree(didactic_result, "match(1,2)")

    def test_depth_limit(self, didactic_result):
        assert self.tree(didactic_result, "match(1,3)", max_depth=3).depth() == 3
        with pytest.raises(DepthExceededError):
            self.tree(didactic_result, "match(1,3)", max_depth=2)

    def test_positive_cycle_terminates(self):
        result = explain_program(parse_program(corpus.read("reachability")))
        for a in result.answer_set:
            t = build_justification_tree(a, result.explanations, result.answer_set)
            assert t.depth() <= len(result.answer_set)

    def test_canonical_choice(self):
        result = explain_program(parse_program(corpus.read("multi_support")))
        t = build_justification_tree(atom("p"), result.explanations, result.answer_set)
        assert t.support.rule_id == 1


class TestSoundComplete:
    def test_corpus(self, corpus_programs):
        for prog in corpus_programs.values():
            _check_sound_and_complete(prog)

    @settings(max_examples=100, deadline=None)
    @given(programs)
    def test_random(self, prog):
        result = _check_sound_and_complete(prog)
        for a in result.answer_set:
            t = build_justification_tree(a, result.explanations, result.answer_set)
            assert t.root == a
            assert all(n in result.answer_set for n in t.atoms())
