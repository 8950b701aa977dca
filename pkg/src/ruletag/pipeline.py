"""End-to-end tagging: tokenize, analyze, apply rules, resolve, report.

The parse-count histogram is measured on post-analysis, pre-rule counts
over word tokens (punctuation is excluded from all statistics).  Residual
multi-parse tokens are resolved by the configured policy; the method
breakdown (multiword / constraint / user / fallback) partitions the
initially ambiguous words exactly.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .actions import TraceEntry, apply_rule
from .errors import AlignmentError, RuletagError
from .lexicon import Lexicon, UnknownLog, analyze
from .matcher import Matcher
from .model import Parse, Resolution, Sentence, Token, serialize_parse
from .ruledsl import RuleSet

SENTENCE_TERMINATORS = frozenset(".!?")

HIST_BUCKETS = ("0", "1", "2", "3", "4", "5+")

POLICY_MODES = ("first", "frequency", "interactive", "leave")


@dataclass(frozen=True)
class ResolutionPolicy:
    """How residual ambiguity is resolved after all rules have run."""

    mode: str = "first"
    root_frequencies: Mapping[str, int] | None = None

    def __post_init__(self):
        if self.mode not in POLICY_MODES:
            raise ValueError(f"unknown policy mode {self.mode!r}")
        if self.mode == "frequency" and self.root_frequencies is None:
            raise ValueError("frequency policy requires root frequencies")


# --------------------------------------------------------------------------
# tokenization


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _split_edges(raw: str) -> tuple[str, str, str]:
    i, j = 0, len(raw)
    while i < j and _is_punct_char(raw[i]):
        i += 1
    while j > i and _is_punct_char(raw[j - 1]):
        j -= 1
    return raw[:i], raw[i:j], raw[j:]


def tokenize(text: str) -> list[Sentence]:
    """Whitespace word split; edge punctuation becomes separate tokens and
    a terminal ``.``, ``!`` or ``?`` ends the sentence."""
    sentences: list[list[Token]] = []
    current: list[Token] = []
    for raw in text.split():
        lead, core, trail = _split_edges(raw)
        for ch in lead:
            current.append(Token(ch, is_word=False))
        if core:
            current.append(Token(core))
        for ch in trail:
            current.append(Token(ch, is_word=False))
        terminal_chars = trail if core else raw
        if any(ch in SENTENCE_TERMINATORS for ch in terminal_chars) and current:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return [Sentence(tuple(toks), i) for i, toks in enumerate(sentences)]


# --------------------------------------------------------------------------
# analysis

_SANITIZE = str.maketrans({";": "_", "\t": "_", "\n": "_"})


def _synthetic(surface: str, cat: str) -> Parse:
    safe = surface.translate(_SANITIZE)
    return Parse.make({"root": safe, "cat": cat, "lex": safe})


def analyze_sentence(
    sentence: Sentence, lexicon: Lexicon, unknown: UnknownLog | None = None
) -> tuple[Sentence, tuple[int, ...]]:
    """Attach candidate parses to every token.

    Returns the analyzed sentence and the per-token analyzer parse counts
    (-1 for punctuation tokens).  Unknown word forms are logged and carry
    a synthetic UNKNOWN parse so downstream output stays total.
    """
    tokens = []
    counts = []
    for t_idx, token in enumerate(sentence.tokens):
        if not token.is_word:
            tokens.append(replace(token, parses=(_synthetic(token.surface, "PUNCT"),)))
            counts.append(-1)
            continue
        parses = analyze(lexicon, token.surface)
        counts.append(len(parses))
        if not parses:
            if unknown is not None:
                unknown.add(token.surface, sentence.index, t_idx)
            parses = (_synthetic(token.surface, "UNKNOWN"),)
        tokens.append(replace(token, parses=parses))
    return Sentence(tuple(tokens), sentence.index), tuple(counts)


# --------------------------------------------------------------------------
# residual resolution


def _pick_by_frequency(token: Token, freqs: Mapping[str, int]) -> int:
    best, best_count = 0, -1
    for i, parse in enumerate(token.parses):
        count = freqs.get(parse.get("root") or "", 0)
        if count > best_count:
            best, best_count = i, count
    return best


def resolve_residual(token: Token, policy: ResolutionPolicy) -> Token:
    """Apply the fallback policy to one still-ambiguous token."""
    if len(token.parses) <= 1:
        return token
    if policy.mode == "leave" or policy.mode == "interactive":
        return token
    if policy.mode == "first":
        pick = 0
    else:
        pick = _pick_by_frequency(token, policy.root_frequencies)
    return replace(
        token, parses=(token.parses[pick],), resolved_by=Resolution.FALLBACK
    )


def resolve_by_user(sentence: Sentence, token_index: int, parse_index: int) -> Sentence:
    """Commit a user's choice for one pending token."""
    token = sentence.tokens[token_index]
    if not 0 <= parse_index < len(token.parses):
        raise ValueError(
            f"parse index {parse_index} out of range for {token.surface!r}"
        )
    new_token = replace(
        token, parses=(token.parses[parse_index],), resolved_by=Resolution.USER
    )
    tokens = list(sentence.tokens)
    tokens[token_index] = new_token
    return Sentence(tuple(tokens), sentence.index)


# --------------------------------------------------------------------------
# tagging


@dataclass
class SentenceResult:
    sentence: Sentence
    pre_counts: tuple[int, ...]  # analyzer parse counts per original token
    pre_words: tuple[bool, ...]  # word flags per original token
    trace: list[TraceEntry]
    pending: list[int]  # token indices awaiting a user choice


def tag_sentence(
    sentence: Sentence,
    rules: RuleSet,
    lexicon: Lexicon,
    policy: ResolutionPolicy,
    matcher: Matcher | None = None,
    unknown: UnknownLog | None = None,
) -> SentenceResult:
    m = matcher or Matcher()
    analyzed, counts = analyze_sentence(sentence, lexicon, unknown)
    words = tuple(tok.is_word for tok in sentence.tokens)
    current = analyzed
    trace: list[TraceEntry] = []
    for rule in rules:
        current, entries = apply_rule(rule, current, m)
        trace.extend(entries)
    tokens = []
    pending = []
    for i, token in enumerate(current.tokens):
        resolved = resolve_residual(token, policy)
        if policy.mode == "interactive" and len(resolved.parses) > 1:
            pending.append(i)
        tokens.append(resolved)
    return SentenceResult(
        sentence=Sentence(tuple(tokens), current.index),
        pre_counts=counts,
        pre_words=words,
        trace=trace,
        pending=pending,
    )


@dataclass
class CorpusResult:
    sentences: list[Sentence]
    pre_counts: list[tuple[int, ...]]
    pre_words: list[tuple[bool, ...]]
    trace: list[TraceEntry]
    unknown: UnknownLog
    pending: list[tuple[int, int]]  # (sentence index, token index)

    def replace_sentence(self, index: int, sentence: Sentence) -> None:
        self.sentences[index] = sentence


def tag_corpus(
    text: str,
    rules: RuleSet,
    lexicon: Lexicon,
    policy: ResolutionPolicy,
    matcher: Matcher | None = None,
) -> CorpusResult:
    m = matcher or Matcher()
    unknown = UnknownLog()
    result = CorpusResult([], [], [], [], unknown, [])
    for sentence in tokenize(text):
        sr = tag_sentence(sentence, rules, lexicon, policy, m, unknown)
        result.sentences.append(sr.sentence)
        result.pre_counts.append(sr.pre_counts)
        result.pre_words.append(sr.pre_words)
        result.trace.extend(sr.trace)
        result.pending.extend((sentence.index, t) for t in sr.pending)
    return result


# --------------------------------------------------------------------------
# statistics


@dataclass
class StatsReport:
    total_words: int
    hist_counts: dict[str, int]
    parse_histogram: dict[str, float]
    n_unambiguous: int
    n_multiword: int
    n_constraint: int
    n_user: int
    n_fallback: int
    n_unresolved: int
    unknown: list[tuple[str, int, int]]
    root_frequencies: dict[str, int]
    accuracy_vs_gold: float | None = None

    def to_json(self) -> dict:
        total = self.total_words or 1
        return {
            "total_words": self.total_words,
            "parse_histogram_counts": dict(self.hist_counts),
            "parse_histogram": dict(self.parse_histogram),
            "method_counts": {
                "unambiguous": self.n_unambiguous,
                "multiword": self.n_multiword,
                "constraint": self.n_constraint,
                "user": self.n_user,
                "fallback": self.n_fallback,
                "unresolved": self.n_unresolved,
            },
            # Fractions use all word tokens as the denominator.
            "resolved_auto_fraction": (self.n_multiword + self.n_constraint) / total,
            "resolved_user_fraction": self.n_user / total,
            "resolved_by_multiword_fraction": self.n_multiword / total,
            "resolved_by_constraint_fraction": self.n_constraint / total,
            "accuracy_vs_gold": self.accuracy_vs_gold,
            "unknown_forms": [list(item) for item in self.unknown],
            "root_frequencies": dict(sorted(self.root_frequencies.items())),
        }

    def to_text(self) -> str:
        total = self.total_words or 1
        dist = "  ".join(
            f"{bucket}: {100.0 * self.hist_counts[bucket] / total:.1f}%"
            for bucket in HIST_BUCKETS
        )
        lines = [
            f"words: {self.total_words}",
            f"parse distribution: {dist}",
            (
                f"resolved automatically: "
                f"{100.0 * (self.n_multiword + self.n_constraint) / total:.1f}% "
                f"(multiword {100.0 * self.n_multiword / total:.1f}%, "
                f"constraints {100.0 * self.n_constraint / total:.1f}%)"
            ),
            (
                f"resolved by user: {100.0 * self.n_user / total:.1f}%  "
                f"fallback: {100.0 * self.n_fallback / total:.1f}%  "
                f"unresolved: {100.0 * self.n_unresolved / total:.1f}%  "
                f"already unambiguous: {100.0 * self.n_unambiguous / total:.1f}%"
            ),
            f"unknown forms: {len(self.unknown)}",
        ]
        if self.accuracy_vs_gold is not None:
            lines.append(f"accuracy vs gold: {100.0 * self.accuracy_vs_gold:.1f}%")
        return "\n".join(lines)


class StatsAccumulator:
    """Per-sentence partial statistics; merge is associative and commutative."""

    def __init__(self):
        self.total_words = 0
        self.hist = {bucket: 0 for bucket in HIST_BUCKETS}
        self.methods = {
            "unambiguous": 0,
            "multiword": 0,
            "constraint": 0,
            "user": 0,
            "fallback": 0,
            "unresolved": 0,
        }
        self.unknown: list[tuple[str, int, int]] = []
        self.roots: dict[str, int] = {}

    @staticmethod
    def _bucket(count: int) -> str:
        return HIST_BUCKETS[count] if count < 5 else "5+"

    def add_sentence(
        self,
        tagged: Sentence,
        pre_counts: tuple[int, ...],
        pre_words: tuple[bool, ...],
    ) -> None:
        pos = 0
        for token in tagged.tokens:
            covered = range(pos, pos + token.span)
            pos += token.span
            if token.is_word and token.parses:
                root = token.parses[0].get("root") or ""
                self.roots[root] = self.roots.get(root, 0) + 1
            for orig in covered:
                if not pre_words[orig]:
                    continue
                count = pre_counts[orig]
                self.total_words += 1
                self.hist[self._bucket(count)] += 1
                self.methods[self._method(token, count)] += 1
        if pos != len(pre_counts):
            raise RuletagError(
                f"token spans cover {pos} positions, expected {len(pre_counts)}"
            )

    @staticmethod
    def _method(token: Token, pre_count: int) -> str:
        if pre_count <= 1:
            return "unambiguous"
        if token.span > 1:
            return "multiword"
        if token.resolved_by is Resolution.MULTIWORD:
            return "multiword"
        if token.resolved_by is Resolution.CONSTRAINT:
            return "constraint"
        if token.resolved_by is Resolution.USER:
            return "user"
        if token.resolved_by is Resolution.FALLBACK:
            return "fallback"
        return "unresolved"

    def merge(self, other: "StatsAccumulator") -> "StatsAccumulator":
        merged = StatsAccumulator()
        for acc in (self, other):
            merged.total_words += acc.total_words
            for key in merged.hist:
                merged.hist[key] += acc.hist[key]
            for key in merged.methods:
                merged.methods[key] += acc.methods[key]
            merged.unknown.extend(acc.unknown)
            for root, count in acc.roots.items():
                merged.roots[root] = merged.roots.get(root, 0) + count
        merged.unknown.sort(key=lambda item: (item[1], item[2]))
        return merged

    def report(self, accuracy: float | None = None) -> StatsReport:
        total = self.total_words or 1
        return StatsReport(
            total_words=self.total_words,
            hist_counts=dict(self.hist),
            parse_histogram={k: v / total for k, v in self.hist.items()},
            n_unambiguous=self.methods["unambiguous"],
            n_multiword=self.methods["multiword"],
            n_constraint=self.methods["constraint"],
            n_user=self.methods["user"],
            n_fallback=self.methods["fallback"],
            n_unresolved=self.methods["unresolved"],
            unknown=sorted(self.unknown, key=lambda item: (item[1], item[2])),
            root_frequencies=dict(self.roots),
            accuracy_vs_gold=accuracy,
        )


def compile_stats(result: CorpusResult, accuracy: float | None = None) -> StatsReport:
    acc = StatsAccumulator()
    for sentence, counts, words in zip(
        result.sentences, result.pre_counts, result.pre_words
    ):
        acc.add_sentence(sentence, counts, words)
    acc.unknown.extend(result.unknown.items)
    return acc.report(accuracy)


# --------------------------------------------------------------------------
# output and gold scoring


def render_tsv(sentences: Iterable[Sentence]) -> str:
    """One token per line: surface, parse(s), resolution; blank line between
    sentences.  Residually ambiguous tokens list all parses ``|``-joined."""
    blocks = []
    for sentence in sentences:
        lines = []
        for token in sentence.tokens:
            parses = "|".join(serialize_parse(p) for p in token.parses)
            lines.append(f"{token.surface}\t{parses}\t{token.resolved_by.value}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def parse_tsv(text: str) -> list[Sentence]:
    """Read tagged output back into sentences (e.g. a gold file)."""
    from .model import deserialize_parse

    sentences = []
    for i, block in enumerate(text.strip("\n").split("\n\n")):
        if not block.strip():
            continue
        tokens = []
        for line in block.splitlines():
            fields = line.split("\t")
            if len(fields) != 3:
                raise RuletagError(f"malformed tagged line: {line!r}")
            surface, parse_field, resolved = fields
            parses = tuple(
                deserialize_parse(chunk) for chunk in parse_field.split("|")
            )
            is_word = not all(_is_punct_char(ch) for ch in surface)
            tokens.append(
                Token(
                    surface=surface,
                    parses=parses,
                    span=len(surface.split(" ")),
                    resolved_by=Resolution(resolved),
                    is_word=is_word,
                )
            )
        sentences.append(Sentence(tuple(tokens), i))
    return sentences


def score_against_gold(tagged: list[Sentence], gold: list[Sentence]) -> float:
    """Fraction of aligned tokens whose single parse equals the gold parse.

    Token streams are compared in document order; surfaces must agree at
    every position (a composed token only aligns with an identically
    composed gold token), otherwise an AlignmentError reports the first
    mismatching position.
    """
    flat_tagged = [tok for sentence in tagged for tok in sentence.tokens]
    flat_gold = [tok for sentence in gold for tok in sentence.tokens]
    if len(flat_tagged) != len(flat_gold):
        raise AlignmentError(
            f"token counts differ: {len(flat_tagged)} tagged vs {len(flat_gold)} gold",
            position=min(len(flat_tagged), len(flat_gold)),
        )
    if not flat_gold:
        return 1.0
    correct = 0
    for pos, (tok, ref) in enumerate(zip(flat_tagged, flat_gold)):
        if tok.surface != ref.surface:
            raise AlignmentError(
                f"surface mismatch: {tok.surface!r} vs gold {ref.surface!r}",
                position=pos,
            )
        if len(tok.parses) == 1 and len(ref.parses) == 1:
            if serialize_parse(tok.parses[0]) == serialize_parse(ref.parses[0]):
                correct += 1
    return correct / len(flat_gold)


def load_root_frequencies(path: str) -> dict[str, int]:
    """Read a ``root<TAB>count`` file."""
    freqs: dict[str, int] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise RuletagError(f"line {lineno}: malformed frequency record")
            try:
                freqs[fields[0]] = int(fields[1])
            except ValueError:
                raise RuletagError(
                    f"line {lineno}: count must be an integer"
                ) from None
    return freqs
