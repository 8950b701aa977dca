"""Match engine: find anchors and variable bindings where a rule applies.

``match_rule`` scans anchors left to right.  An anchor matches when every
condition group finds at least one parse at its offset token such that all
variable occurrences unify to a single value; the reported parse sets are
the union over all globally consistent combinations, and the reported
binding is the first consistent one in group-then-parse order.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernel
from .encode import (
    MAX_PARSES_COMPILED,
    EncodedRule,
    EncodedSentence,
    SentenceEncoder,
    SymbolTable,
    encode_rule,
)
from .model import Binding, Parse, Sentence, feature_get, word_bounds
from .ruledsl import ConditionGroup, Constraint, Rule

FAIL = None


@dataclass(frozen=True)
class MatchResult:
    anchor: int
    binding: Binding
    per_group: tuple[tuple[int, tuple[int, ...]], ...]  # (token index, parse indices)


def satisfies(parse: Parse, constraint: Constraint, binding: Binding) -> Binding | None:
    """Test one feature constraint against one parse under a binding.

    Atoms require the feature to be present and equal.  A bound variable
    behaves like its value; an unbound variable binds to the feature's
    value, which must be present (absent features never match a variable).
    Returns the (possibly extended) binding, or None on failure; the input
    binding is never mutated.
    """
    value = feature_get(parse, constraint.key)
    if value is None:
        return FAIL
    if not constraint.is_var:
        return binding if value == constraint.value else FAIL
    bound = binding.get(constraint.value)
    if bound is None:
        extended = dict(binding)
        extended[constraint.value] = value
        return extended
    return binding if bound == value else FAIL


def group_candidates(
    sentence: Sentence, t: int, group: ConditionGroup, binding: Binding
) -> list[tuple[int, Binding]]:
    """Parses of token ``t`` satisfying all of the group's constraints.

    Checks the group's sentence-position constraint here: BEGIN and END
    resolve to the first and last word token of the sentence.
    """
    if not 0 <= t < len(sentence.tokens):
        return []
    if group.sp is not None:
        begin, end = word_bounds(sentence)
        if group.sp == "BEGIN" and t != begin:
            return []
        if group.sp == "END" and t != end:
            return []
    out = []
    for i, parse in enumerate(sentence.tokens[t].parses):
        b: Binding | None = binding
        for constraint in group.constraints:
            b = satisfies(parse, constraint, b)
            if b is None:
                break
        if b is not None:
            out.append((i, b))
    return out


class Matcher:
    """A matching session: shared symbol table plus per-rule encoding cache.

    Stateless apart from interning, so one Matcher may serve a whole
    tagging run; separate sentences can be matched concurrently.
    """

    def __init__(self, backend: str | None = None):
        self.symtab = SymbolTable()
        self._kernel = kernel.load_backend(backend)
        # keyed by object identity; the stored rule reference keeps ids stable
        self._rules: dict[int, tuple[Rule, EncodedRule]] = {}
        self._encoder = SentenceEncoder(self.symtab)
        self._last: tuple[Sentence, EncodedSentence] | None = None

    @property
    def backend(self) -> str:
        return self._kernel.BACKEND

    def _encoded(self, rule: Rule) -> EncodedRule:
        cached = self._rules.get(id(rule))
        if cached is not None and cached[0] is rule:
            return cached[1]
        enc = encode_rule(rule, self.symtab)
        self._rules[id(rule)] = (rule, enc)
        return enc

    def _encoded_sentence(self, sentence: Sentence) -> EncodedSentence:
        last = self._last
        if last is not None and last[0] is sentence:
            return last[1]
        es = self._encoder.encode(sentence)
        self._last = (sentence, es)
        return es

    def match(self, rule: Rule, sentence: Sentence) -> list[MatchResult]:
        er = self._encoded(rule)
        es = self._encoded_sentence(sentence)
        impl = self._kernel
        if impl.BACKEND == "compiled" and es.max_parses > MAX_PARSES_COMPILED:
            impl = kernel.load_backend("pure")
        raw = impl.match_anchors(es, er)
        results = []
        for anchor, var_ids, per_group in raw:
            binding = {
                name: self.symtab.lookup(vid)
                for name, vid in zip(er.var_names, var_ids)
                if vid >= 0
            }
            groups = tuple(
                (anchor + rule.groups[g].offset, tuple(indices))
                for g, indices in enumerate(per_group)
            )
            results.append(MatchResult(anchor, binding, groups))
        return results


def match_rule(rule: Rule, sentence: Sentence) -> list[MatchResult]:
    """One-shot convenience wrapper around :class:`Matcher`."""
    return Matcher().match(rule, sentence)
