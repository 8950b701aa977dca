"""Application of rule actions to sentences, with provenance and tracing.

Delete never empties a token's parse set (the last parse always survives);
Output narrows to the matching parses; Compose merges the matched span
into one token whose single parse is built from the rule's template.
A token reduced to exactly one parse records which mechanism resolved it,
feeding the disambiguation-method statistics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import ComposeError, ParseFormatError
from .matcher import Matcher, MatchResult
from .model import Binding, Parse, Resolution, Sentence, Token
from .ruledsl import ActionKind, ComposeTemplate, Rule, RuleKind

_VAR_REF = re.compile(r"_[A-Za-z][A-Za-z0-9]*")

# Template slots with fixed meanings; other slots map to their lowercase key.
_SLOT_KEYS = {"R": "root", "SUB": "sub"}


@dataclass(frozen=True)
class TraceEntry:
    rule_id: int
    sentence: int
    anchor: int
    token: int
    surface: str
    action: str
    before: int
    after: int

    def line(self) -> str:
        return (
            f"rule={self.rule_id}\tsentence={self.sentence}\tanchor={self.anchor}"
            f"\ttoken={self.token}\tsurface={self.surface}\taction={self.action}"
            f"\tbefore={self.before}\tafter={self.after}"
        )


def _resolve(token: Token, kind: Resolution) -> Token:
    # First resolution wins; later rules never rewrite provenance.
    if token.resolved_by is Resolution.NONE:
        return replace(token, resolved_by=kind)
    return token


def apply_output(token: Token, matching: set[int], resolved_as: Resolution) -> Token:
    """Keep only the matching parses; record resolution at cardinality 1."""
    if not matching:
        raise ValueError("output requires a non-empty matching set")
    kept = tuple(p for i, p in enumerate(token.parses) if i in matching)
    if len(kept) != len(matching):
        raise ValueError("matching set contains out-of-range parse indices")
    out = token if len(kept) == len(token.parses) else replace(token, parses=kept)
    if len(kept) == 1:
        out = _resolve(out, resolved_as)
    return out


def apply_delete(token: Token, matching: set[int], resolved_as: Resolution) -> Token:
    """Remove matching parses in ascending order, never below one parse."""
    survivors = list(range(len(token.parses)))
    for i in sorted(matching):
        if len(survivors) == 1:
            break
        if i in survivors:
            survivors.remove(i)
    if len(survivors) == len(token.parses):
        return token
    out = replace(token, parses=tuple(token.parses[i] for i in survivors))
    if len(survivors) == 1:
        out = _resolve(out, resolved_as)
    return out


def _interpolate(pattern: str, binding: Binding) -> str:
    def sub(match: re.Match) -> str:
        name = match.group(0)
        value = binding.get(name)
        if value is None:
            raise ComposeError(f"unbound variable {name} in compose template")
        return value

    return _VAR_REF.sub(sub, pattern)


def apply_compose(
    sentence: Sentence, result: MatchResult, template: ComposeTemplate
) -> Sentence:
    """Replace the matched span with one composed token.

    The group token indices must be contiguous and ascending.  The CAT slot
    fills both the category and the final category of the new parse.
    """
    indices = [t for t, _ in result.per_group]
    for a, b in zip(indices, indices[1:]):
        if b != a + 1:
            raise ComposeError(f"compose span is not contiguous: {indices}")
    lo, hi = indices[0], indices[-1]
    features: dict[str, str] = {}
    for slot, pattern in template.pairs:
        value = _interpolate(pattern, result.binding)
        if slot == "CAT":
            features["cat"] = value
            features["finalcat"] = value
        else:
            features[_SLOT_KEYS.get(slot, slot.lower())] = value
    constituents = sentence.tokens[lo : hi + 1]
    surface = " ".join(tok.surface for tok in constituents)
    features.setdefault("lex", surface)
    try:
        parse = Parse.make(features)
    except ParseFormatError as exc:
        raise ComposeError(f"invalid composed parse: {exc}") from exc
    composed = Token(
        surface=surface,
        parses=(parse,),
        span=sum(tok.span for tok in constituents),
        resolved_by=Resolution.MULTIWORD,
        is_word=True,
    )
    tokens = sentence.tokens[:lo] + (composed,) + sentence.tokens[hi + 1 :]
    return Sentence(tokens, sentence.index)


def _apply_match(
    rule: Rule, sentence: Sentence, result: MatchResult, resolved_as: Resolution
) -> tuple[Sentence, list[TraceEntry], int]:
    """Apply every group's action for one match; return the resume anchor."""
    entries: list[TraceEntry] = []
    current = sentence
    composed_at: int | None = None
    for gi, group in enumerate(rule.groups):
        if composed_at is not None:
            break  # the compose consumed the whole matched span
        action = group.action
        if action.kind is ActionKind.NULL:
            continue
        t_idx, parse_set = result.per_group[gi]
        if action.kind is ActionKind.COMPOSE:
            span_before = sum(
                len(current.tokens[t].parses) for t, _ in result.per_group
            )
            current = apply_compose(current, result, action.template)
            lo = min(t for t, _ in result.per_group)
            entries.append(
                TraceEntry(
                    rule.id, current.index, result.anchor, lo,
                    current.tokens[lo].surface, "compose", span_before, 1,
                )
            )
            composed_at = lo
            continue
        token = current.tokens[t_idx]
        if action.kind is ActionKind.OUTPUT:
            new_token = apply_output(token, set(parse_set), resolved_as)
        else:
            new_token = apply_delete(token, set(parse_set), resolved_as)
        entries.append(
            TraceEntry(
                rule.id, current.index, result.anchor, t_idx, token.surface,
                action.kind.value.lower(), len(token.parses), len(new_token.parses),
            )
        )
        if new_token is not token:
            tokens = list(current.tokens)
            tokens[t_idx] = new_token
            current = Sentence(tuple(tokens), current.index)
    resume = composed_at + 1 if composed_at is not None else result.anchor + 1
    return current, entries, resume


def apply_rule(
    rule: Rule, sentence: Sentence, matcher: Matcher | None = None
) -> tuple[Sentence, list[TraceEntry]]:
    """Apply one rule across a sentence, anchors left to right.

    The sentence is re-matched after each applied match, so later anchors
    always see the effects of earlier actions; after a compose, scanning
    resumes at the token following the merged one.
    """
    m = matcher or Matcher()
    resolved_as = (
        Resolution.MULTIWORD if rule.kind is RuleKind.MULTIWORD else Resolution.CONSTRAINT
    )
    entries: list[TraceEntry] = []
    current = sentence
    anchor = 0
    while anchor < len(current.tokens):
        hit = None
        for result in m.match(rule, current):
            if result.anchor >= anchor:
                hit = result
                break
        if hit is None:
            break
        current, new_entries, anchor = _apply_match(rule, current, hit, resolved_as)
        entries.extend(new_entries)
    return current, entries
