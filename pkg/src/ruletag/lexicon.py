"""Lexicon-backed morphological analyzer.

The analysis interface is a boundary: any external analyzer can be
substituted by emitting this file format or implementing ``analyze``.
Records are one surface form per line, tab-separated::

    surface<TAB>parse(<TAB>parse)*

where each parse is a canonical ``key=VALUE;...`` string.  ``#`` starts a
comment line; ``# @name`` and ``# @language`` set the lexicon metadata.
On load, every parse receives a ``lex`` feature holding the entry's
surface form (so rules can bind surfaces with ``Lex = _W``) and a
``finalcat`` defaulting to ``cat``.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, field

from .errors import LexiconError, ParseFormatError
from .model import Parse, deserialize_parse

log = logging.getLogger(__name__)


def _norm_surface(surface: str, fold_case: bool) -> str:
    s = unicodedata.normalize("NFC", surface)
    return s.casefold() if fold_case else s


@dataclass
class Lexicon:
    """Immutable after load; concurrent lookups are safe."""

    entries: dict[str, tuple[Parse, ...]]
    name: str = ""
    language: str = ""
    fold_case: bool = False

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class UnknownLog:
    """Append-only record of surfaces the analyzer could not analyze."""

    items: list[tuple[str, int, int]] = field(default_factory=list)

    def add(self, surface: str, sentence_index: int, token_index: int) -> None:
        self.items.append((surface, sentence_index, token_index))

    def lines(self) -> list[str]:
        return [f"{s}\t{si}\t{ti}" for s, si, ti in self.items]


def analyze(lexicon: Lexicon, surface: str) -> tuple[Parse, ...]:
    """All stored analyses for ``surface``, in emission order; () if unknown."""
    return lexicon.entries.get(_norm_surface(surface, lexicon.fold_case), ())


def load_lexicon(path: str, fold_case: bool = False) -> Lexicon:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    lexicon = parse_lexicon(text, name=str(path), fold_case=fold_case)
    return lexicon


def parse_lexicon(text: str, name: str = "", fold_case: bool = False) -> Lexicon:
    entries: dict[str, list[Parse]] = {}
    meta = {"name": name, "language": ""}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            stripped = line.lstrip("# ").strip()
            for key in ("name", "language"):
                prefix = f"@{key} "
                if stripped.startswith(prefix):
                    meta[key] = stripped[len(prefix) :].strip()
            continue
        fields = line.split("\t")
        surface = fields[0].strip()
        if not surface:
            raise LexiconError("empty surface form", lineno)
        if len(fields) < 2:
            raise LexiconError(f"no parses for surface {surface!r}", lineno)
        parses = []
        for chunk in fields[1:]:
            chunk = chunk.strip()
            if not chunk:
                raise LexiconError(f"empty parse field for {surface!r}", lineno)
            try:
                parse = deserialize_parse(chunk)
                feats = dict(parse.features)
                feats.setdefault("lex", surface)
                parses.append(Parse.make(feats))
            except ParseFormatError as exc:
                raise LexiconError(str(exc), lineno) from exc
        key = _norm_surface(surface, fold_case)
        entries.setdefault(key, []).extend(parses)
    if not entries:
        log.warning("lexicon %s contains no entries", name or "<string>")
    return Lexicon(
        entries={k: tuple(v) for k, v in entries.items()},
        name=meta["name"],
        language=meta["language"],
        fold_case=fold_case,
    )
