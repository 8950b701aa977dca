import random

import pytest

from helpers_match import brute_force_match, random_rule, random_sentence
from ruletag.kernel import available_backends
from ruletag.matcher import Matcher, group_candidates, match_rule, satisfies
from ruletag.model import Parse, Sentence, Token
from ruletag.ruledsl import Constraint, parse_rule

EVIN = [
    Parse.make({"root": "ev", "cat": "N", "poss": "2SG", "lex": "evin"}),
    Parse.make({"root": "ev", "cat": "N", "case": "GEN", "lex": "evin"}),
    Parse.make({"root": "evin", "cat": "N", "lex": "evin"}),
]

DERIN = [
    Parse.make({"root": "deri", "cat": "N", "poss": "2SG"}),
    Parse.make({"root": "derin", "cat": "ADJ"}),
    Parse.make({"root": "der", "cat": "V", "modality": "IMP", "agr": "2PL"}),
    Parse.make({"root": "de", "cat": "V", "finalcat": "N", "poss": "2SG"}),
    Parse.make({"root": "de", "cat": "V", "finalcat": "N", "case": "GEN"}),
]


def sentence_of(*tokens):
    return Sentence(tuple(tokens))


class TestSatisfies:
    def test_bound_variable_match(self):
        p = Parse.make({"root": "sonra", "cat": "POSTP", "subcat": "ABL"})
        b = satisfies(p, Constraint("subcat", "_C", is_var=True), {"_C": "ABL"})
        assert b == {"_C": "ABL"}

    def test_fresh_variable_binds(self):
        p = Parse.make({"root": "ev", "cat": "N", "case": "GEN"})
        b = satisfies(p, Constraint("case", "_C", is_var=True), {})
        assert b == {"_C": "GEN"}

    def test_bound_variable_mismatch(self):
        p = Parse.make({"root": "ev", "cat": "N", "case": "LOC"})
        assert satisfies(p, Constraint("case", "_C", is_var=True), {"_C": "GEN"}) is None

    def test_variable_requires_presence(self):
        p = Parse.make({"root": "gel", "cat": "V"})
        assert satisfies(p, Constraint("case", "_C", is_var=True), {}) is None

    def test_atom(self):
        p = Parse.make({"root": "ev", "cat": "N", "case": "GEN"})
        assert satisfies(p, Constraint("case", "GEN"), {}) == {}
        assert satisfies(p, Constraint("case", "LOC"), {}) is None

    def test_input_binding_never_mutated(self):
        p = Parse.make({"root": "ev", "cat": "N", "case": "GEN"})
        b = {}
        satisfies(p, Constraint("case", "_C", is_var=True), b)
        assert b == {}


class TestGroupCandidates:
    def test_evin_genitive(self):
        s = sentence_of(Token("evin", tuple(EVIN)))
        group = parse_rule("Case = GEN .").groups[0]
        assert group_candidates(s, 0, group, {}) == [(1, {})]

    def test_derin_adjective(self):
        s = sentence_of(Token("derin", tuple(DERIN)))
        group = parse_rule("Cat = ADJ, Finalcat = ADJ .").groups[0]
        assert group_candidates(s, 0, group, {}) == [(1, {})]

    def test_sp_end_wrong_position(self):
        s = sentence_of(Token("a", tuple(EVIN)), Token("b", tuple(EVIN)))
        group = parse_rule("SP = END, Cat = N .").groups[0]
        assert group_candidates(s, 0, group, {}) == []
        assert group_candidates(s, 1, group, {}) != []

    def test_out_of_range(self):
        s = sentence_of(Token("a", tuple(EVIN)))
        group = parse_rule("Cat = N .").groups[0]
        assert group_candidates(s, 5, group, {}) == []


class TestMatchRule:
    def test_genitive_possessive_agreement(self):
        senin = Token("senin", (
            Parse.make({"root": "sen", "cat": "PN", "case": "GEN", "agr": "2SG"}),
        ))
        evin = Token("evin", tuple(EVIN))
        rule = parse_rule(
            "LP = 0, Cat = PN, Case = GEN, Agr = _A : Output ; LP = 1, Poss = _A : Output ."
        )
        results = match_rule(rule, sentence_of(senin, evin))
        assert len(results) == 1
        result = results[0]
        assert result.anchor == 0
        assert result.binding == {"_A": "2SG"}
        assert result.per_group == ((0, (0,)), (1, (0,)))

    def test_compose_rule_on_verb_pair(self, sample_lexicon, demo_rules):
        from ruletag.lexicon import analyze

        tokens = []
        for surface in ["İşten", "döner", "dönmez", "evimizin"]:
            tokens.append(Token(surface, analyze(sample_lexicon, surface)))
        rule = demo_rules[0]
        results = match_rule(rule, sentence_of(*tokens))
        assert len(results) == 1
        result = results[0]
        assert result.anchor == 1
        assert result.binding == {"_W1": "döner", "_R1": "dön", "_W2": "dönmez"}
        assert result.per_group == ((1, (1,)), (2, (0,)))

    def test_no_postposition_no_match(self, sample_lexicon, demo_rules):
        from ruletag.lexicon import analyze

        tokens = [
            Token(s, analyze(sample_lexicon, s))
            for s in ["evimizin", "yakınında", "bulunan"]
        ]
        postp_rule = demo_rules[1]
        assert match_rule(postp_rule, sentence_of(*tokens)) == []

    def test_variable_rename_symmetry(self):
        rng = random.Random(5)
        for _ in range(50):
            s = random_sentence(rng)
            rule = random_rule(rng)
            renamed_text = (
                "".join(
                    part if i % 2 == 0 else {"_V0": "_Q7", "_V1": "_Zz"}[part]
                    for i, part in enumerate(
                        __import__("re").split(r"(_V[01])", rule_to_text(rule))
                    )
                )
            )
            renamed = parse_rule(renamed_text)
            a = match_rule(rule, s)
            b = match_rule(renamed, s)
            assert [(r.anchor, r.per_group) for r in a] == [
                (r.anchor, r.per_group) for r in b
            ]


def rule_to_text(rule):
    from ruletag.ruledsl import serialize_rule

    return serialize_rule(rule)


def assert_results_equal(kernel_results, oracle_results, context):
    assert len(kernel_results) == len(oracle_results), context
    for got, want in zip(kernel_results, oracle_results):
        assert got.anchor == want.anchor, context
        assert got.per_group == want.per_group, context
        assert got.binding == want.binding, context


@pytest.mark.parametrize("backend", available_backends())
class TestOracle:
    def test_small_oracle_equivalence(self, backend):
        rng = random.Random(123)
        matcher = Matcher(backend=backend)
        for i in range(1500):
            s = random_sentence(rng)
            rule = random_rule(rng)
            got = matcher.match(rule, s)
            want = brute_force_match(rule, s)
            assert_results_equal(got, want, f"instance {i} on {backend}")

    def test_soundness_via_satisfies(self, backend):
        # Reported parse sets are unions over all consistent bindings, so
        # each parse must (a) satisfy its group with variables free, and
        # (b) the reported binding must be witnessed by at least one parse
        # per group that satisfies the group under it without extension.
        rng = random.Random(77)
        matcher = Matcher(backend=backend)
        for _ in range(300):
            s = random_sentence(rng)
            rule = random_rule(rng)
            for result in matcher.match(rule, s):
                for group, (t, picks) in zip(rule.groups, result.per_group):
                    assert picks, "reported group with empty parse set"
                    witnesses = 0
                    for pick in picks:
                        parse = s.tokens[t].parses[pick]
                        free = {}
                        for constraint in group.constraints:
                            free = satisfies(parse, constraint, free)
                            if free is None:
                                break
                        assert free is not None
                        under = result.binding
                        for constraint in group.constraints:
                            under = satisfies(parse, constraint, under)
                            if under is None:
                                break
                        if under == result.binding:
                            witnesses += 1
                    assert witnesses >= 1


def test_backends_agree_exactly():
    backends = available_backends()
    if len(backends) < 2:
        pytest.skip("compiled backend not built")
    rng = random.Random(31)
    matchers = [Matcher(backend=b) for b in backends]
    for _ in range(800):
        s = random_sentence(rng)
        rule = random_rule(rng)
        outputs = [m.match(rule, s) for m in matchers]
        assert outputs[0] == outputs[1]


def test_wide_token_falls_back_to_pure_kernel():
    # the compiled kernel tracks parse choices in a 64-bit mask; wider
    # tokens must still match correctly via the fallback path
    parses = tuple(
        Parse.make({"root": f"r{i}", "cat": "N" if i % 2 else "V"})
        for i in range(70)
    )
    s = Sentence((Token("wide", parses),))
    rule = parse_rule("Cat = N : Output .")
    results = match_rule(rule, s)
    assert len(results) == 1
    assert results[0].per_group[0][1] == tuple(i for i in range(70) if i % 2)


def test_determinism_byte_for_byte():
    rng = random.Random(8)
    for _ in range(100):
        s = random_sentence(rng)
        rule = random_rule(rng)
        assert repr(match_rule(rule, s)) == repr(match_rule(rule, s))
