"""Domain types shared across the engine: parses, tokens, sentences, bindings.

A Parse is an immutable feature-value map describing one morphological
analysis of a surface form.  Feature keys are lowercase identifiers; values
are grammatical atoms normalized to uppercase, except for keys that hold
real word material (``root``, ``lex``, ``deriv``) which keep their casing.
All types here are immutable after construction and safe to share between
concurrent workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping

from .errors import ParseFormatError

FEATURE_KEY_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

# Keys whose values are word material rather than closed-class atoms.
CASE_PRESERVING_KEYS = frozenset({"root", "lex", "deriv"})

# Structural characters that can never appear inside a feature value
# (they would break the canonical serialization and the lexicon format).
_VALUE_BANNED = ("\t", "\n", ";")


class Resolution(Enum):
    """How a token ended up with a single parse."""

    NONE = "none"
    MULTIWORD = "multiword"
    CONSTRAINT = "constraint"
    USER = "user"
    FALLBACK = "fallback"


def normalize_key(key: str) -> str:
    k = key.strip().lower()
    if not FEATURE_KEY_RE.match(k):
        raise ParseFormatError(f"invalid feature key {key!r}")
    return k


def normalize_value(key: str, value: str) -> str:
    v = value.strip()
    if not v:
        raise ParseFormatError(f"empty value for feature {key!r}")
    for ch in _VALUE_BANNED:
        if ch in v:
            raise ParseFormatError(f"illegal character {ch!r} in value {value!r}")
    if key not in CASE_PRESERVING_KEYS:
        v = v.upper()
    return v


@dataclass(frozen=True)
class Parse:
    """One morphological analysis as a sorted, immutable feature map.

    ``root`` and ``cat`` are always present; ``finalcat`` (the category
    after derivation) defaults to ``cat`` when the analyzer omits it.
    """

    features: tuple[tuple[str, str], ...]
    display: str | None = field(default=None, compare=False)

    @classmethod
    def make(
        cls,
        features: Mapping[str, str] | Iterable[tuple[str, str]],
        display: str | None = None,
    ) -> "Parse":
        items = features.items() if isinstance(features, Mapping) else features
        feats: dict[str, str] = {}
        for key, value in items:
            k = normalize_key(key)
            if k in feats:
                raise ParseFormatError(f"duplicate feature key {k!r}")
            feats[k] = normalize_value(k, value)
        if "root" not in feats:
            raise ParseFormatError("parse is missing required feature 'root'")
        if "cat" not in feats:
            raise ParseFormatError("parse is missing required feature 'cat'")
        feats.setdefault("finalcat", feats["cat"])
        return cls(tuple(sorted(feats.items())), display)

    @cached_property
    def as_dict(self) -> dict[str, str]:
        return dict(self.features)

    def get(self, key: str) -> str | None:
        return self.as_dict.get(key)

    def __str__(self) -> str:
        return serialize_parse(self)


def feature_get(parse: Parse, key: str) -> str | None:
    """Value of ``key`` in ``parse``, or None when the feature is absent."""
    return parse.as_dict.get(key.strip().lower())


def serialize_parse(parse: Parse) -> str:
    """Canonical one-line form: ``key=VALUE`` pairs sorted by key, ``;``-joined."""
    return ";".join(f"{k}={v}" for k, v in parse.features)


def deserialize_parse(text: str) -> Parse:
    """Inverse of :func:`serialize_parse`.

    Fails on duplicate keys, empty values, or pairs without ``=``.
    """
    pairs = []
    seen = set()
    for chunk in text.split(";"):
        if "=" not in chunk:
            raise ParseFormatError(f"malformed pair {chunk!r} in {text!r}")
        key, _, value = chunk.partition("=")
        k = normalize_key(key)
        if k in seen:
            raise ParseFormatError(f"duplicate key {k!r} in {text!r}")
        seen.add(k)
        pairs.append((k, value))
    return Parse.make(pairs)


_DISPLAY_ORDER = (
    "deriv",
    "poss",
    "case",
    "agr",
    "aspect",
    "tense",
    "voice",
    "modality",
    "sense",
    "subcat",
    "sub",
    "sem",
)
_DISPLAY_SKIP = frozenset({"root", "cat", "finalcat", "lex"})


def render_display(parse: Parse) -> str:
    """Human-readable rendering, e.g. ``N(ev)+GEN`` or ``ADJ(yakın)+3SG-POSS+LOC``."""
    if parse.display:
        return parse.display
    feats = parse.as_dict
    parts = [f"{feats['cat']}({feats['root']})"]
    rest = {k: v for k, v in feats.items() if k not in _DISPLAY_SKIP}
    for key in _DISPLAY_ORDER:
        if key in rest:
            value = rest.pop(key)
            parts.append(f"{value}-POSS" if key == "poss" else value)
    for key in sorted(rest):
        parts.append(rest[key])
    return "+".join(parts)


@dataclass(frozen=True)
class Token:
    """A surface form with its current candidate parses.

    ``span`` counts the original surface tokens covered (>1 after a
    compose action merged adjacent words).  ``is_word`` is False for
    punctuation tokens, which carry a synthetic PUNCT parse and are
    ignored by the statistics.
    """

    surface: str
    parses: tuple[Parse, ...] = ()
    span: int = 1
    resolved_by: Resolution = Resolution.NONE
    is_word: bool = True

    def __post_init__(self):
        if self.span < 1:
            raise ValueError("token span must be >= 1")


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    index: int = 0

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")

    def __len__(self) -> int:
        return len(self.tokens)


def word_bounds(sentence: Sentence) -> tuple[int, int]:
    """Indices of the first and last word token, or (-1, -1) if none.

    Sentence-position constraints (BEGIN/END) resolve against word tokens
    so that e.g. a sentence-final rule still targets the verb in front of
    the closing period.
    """
    begin = end = -1
    for i, tok in enumerate(sentence.tokens):
        if tok.is_word:
            if begin < 0:
                begin = i
            end = i
    return begin, end


# A variable environment threaded through a match attempt: variable name
# (including the leading underscore) to the atom it unified with.  A
# variable, once bound, never rebinds to a different value within one
# attempt; the matcher enforces this by never mutating an existing binding.
Binding = dict[str, str]
