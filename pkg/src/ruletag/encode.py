"""Integer encoding of rules and sentences for the matching kernels.

Feature keys, atoms, and variable names are interned into one symbol table
so the kernels compare plain ints.  Sentences become CSR-style arrays:
token -> parse rows -> (key, value) pairs.  The same encoded form feeds the
compiled kernel and the pure-Python fallback.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from .model import Sentence, word_bounds
from .ruledsl import ActionKind, Rule

SP_NONE, SP_BEGIN, SP_END = 0, 1, 2
KIND_ATOM, KIND_VAR = 0, 1

# The compiled kernel tracks per-group parse choices in a 64-bit mask.
MAX_PARSES_COMPILED = 64


class SymbolTable:
    """Bidirectional string <-> int interning, shared across one session."""

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._strings: list[str] = []

    def intern(self, s: str) -> int:
        sid = self._ids.get(s)
        if sid is None:
            sid = len(self._strings)
            self._ids[s] = sid
            self._strings.append(s)
        return sid

    def lookup(self, sid: int) -> str:
        return self._strings[sid]

    def __len__(self) -> int:
        return len(self._strings)


@dataclass
class EncodedRule:
    n_groups: int
    n_vars: int
    offsets: array  # int per group
    sps: array  # SP_* per group
    con_start: array  # len n_groups+1, CSR into constraint arrays
    con_key: array
    con_kind: array  # KIND_ATOM | KIND_VAR
    con_arg: array  # value id (atom) or variable slot (var)
    var_names: tuple[str, ...]


@dataclass
class EncodedSentence:
    n_tokens: int
    tok_start: array  # len n_tokens+1, CSR into parse rows
    parse_start: array  # len n_parses+1, CSR into feature arrays
    feat_key: array
    feat_val: array
    begin_idx: int
    end_idx: int
    max_parses: int


def encode_rule(rule: Rule, symtab: SymbolTable) -> EncodedRule:
    offsets = array("i")
    sps = array("i")
    con_start = array("i", [0])
    con_key = array("i")
    con_kind = array("i")
    con_arg = array("i")
    var_slots: dict[str, int] = {}
    for group in rule.groups:
        offsets.append(group.offset)
        sps.append(
            SP_BEGIN if group.sp == "BEGIN" else SP_END if group.sp == "END" else SP_NONE
        )
        for c in group.constraints:
            con_key.append(symtab.intern(c.key))
            if c.is_var:
                slot = var_slots.setdefault(c.value, len(var_slots))
                con_kind.append(KIND_VAR)
                con_arg.append(slot)
            else:
                con_kind.append(KIND_ATOM)
                con_arg.append(symtab.intern(c.value))
        con_start.append(len(con_key))
    names = sorted(var_slots, key=var_slots.get)
    return EncodedRule(
        n_groups=len(rule.groups),
        n_vars=len(var_slots),
        offsets=offsets,
        sps=sps,
        con_start=con_start,
        con_key=con_key,
        con_kind=con_kind,
        con_arg=con_arg,
        var_names=tuple(names),
    )


def encode_sentence(sentence: Sentence, symtab: SymbolTable) -> EncodedSentence:
    return SentenceEncoder(symtab).encode(sentence)


class SentenceEncoder:
    """Sentence encoding with identity-keyed caches.

    Tokens and parses are immutable, and rule actions rebuild sentences out
    of mostly the same token objects, so per-token encoded blocks are cached
    by object identity (the cache holds a strong reference, keeping ids
    stable).  Matching re-encodes a sentence after every applied action;
    with the block cache that is a handful of array copies.
    """

    _TOKEN_CACHE_LIMIT = 100_000

    def __init__(self, symtab: SymbolTable):
        self.symtab = symtab
        self._tokens: dict[int, tuple] = {}

    def _token_block(self, token) -> tuple:
        cached = self._tokens.get(id(token))
        if cached is not None and cached[0] is token:
            return cached
        intern = self.symtab.intern
        counts = array("i")
        keys = array("i")
        vals = array("i")
        for parse in token.parses:
            counts.append(len(parse.features))
            for key, value in parse.features:
                keys.append(intern(key))
                vals.append(intern(value))
        block = (token, counts, keys, vals)
        if len(self._tokens) >= self._TOKEN_CACHE_LIMIT:
            self._tokens.clear()
        self._tokens[id(token)] = block
        return block

    def encode(self, sentence: Sentence) -> EncodedSentence:
        tok_start = array("i", [0])
        parse_start = array("i", [0])
        feat_key = array("i")
        feat_val = array("i")
        max_parses = 0
        total_feats = 0
        for token in sentence.tokens:
            _, counts, keys, vals = self._token_block(token)
            if len(counts) > max_parses:
                max_parses = len(counts)
            feat_key.extend(keys)
            feat_val.extend(vals)
            for count in counts:
                total_feats += count
                parse_start.append(total_feats)
            tok_start.append(len(parse_start) - 1)
        begin_idx, end_idx = word_bounds(sentence)
        return EncodedSentence(
            n_tokens=len(sentence.tokens),
            tok_start=tok_start,
            parse_start=parse_start,
            feat_key=feat_key,
            feat_val=feat_val,
            begin_idx=begin_idx,
            end_idx=end_idx,
            max_parses=max_parses,
        )
