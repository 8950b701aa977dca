"""Parser and serializer for the condition-action rule language.

A rule is an ordered sequence of condition groups terminated by a period::

    LP = 0, Case = _C : Output ; LP = 1, Cat = POSTP, Subcat = _C : Output .

Each group constrains one lexical form (feature atoms, ``_X`` unification
variables, an ``LP`` relative position, an ``SP`` sentence position) and
carries one action: Null, Delete, Output, or Compose.  A group without an
explicit action defaults to Null.  Groups without an explicit ``LP`` target
the token at their own 0-based group index relative to the anchor.

Rule files (``.mr``) are UTF-8 text; ``#`` starts a line comment.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum

from .errors import ParseFormatError, RuleSyntaxError
from .model import CASE_PRESERVING_KEYS, normalize_key, normalize_value

log = logging.getLogger(__name__)

VAR_RE = re.compile(r"_[A-Za-z][A-Za-z0-9]*\Z")
SLOT_RE = re.compile(r"[A-Z][A-Z0-9]*\Z")

_ATOM_EXTRA = "_+-"


class ActionKind(Enum):
    NULL = "Null"
    DELETE = "Delete"
    OUTPUT = "Output"
    COMPOSE = "Compose"


class RuleKind(Enum):
    MULTIWORD = "multiword"
    CONSTRAINT = "constraint"


@dataclass(frozen=True)
class ComposeTemplate:
    """Slots of the parse built for a merged multi-word token.

    Each pair maps a slot name to a value pattern; ``_X`` tokens inside a
    pattern are replaced with the variable's bound value at apply time.
    """

    pairs: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    template: ComposeTemplate | None = None


@dataclass(frozen=True)
class Constraint:
    """One ``Key = value`` feature test; ``value`` is an atom or a variable."""

    key: str
    value: str
    is_var: bool = False


@dataclass(frozen=True)
class ConditionGroup:
    constraints: tuple[Constraint, ...]
    action: Action
    offset: int
    sp: str | None = None  # "BEGIN" | "END"
    lp_explicit: bool = False


@dataclass(frozen=True)
class Rule:
    id: int
    groups: tuple[ConditionGroup, ...]
    kind: RuleKind

    @property
    def is_multiword(self) -> bool:
        return self.kind is RuleKind.MULTIWORD


RuleSet = list[Rule]


# --------------------------------------------------------------------------
# tokenizer


@dataclass(frozen=True)
class _Tok:
    kind: str  # "name" | "var" | "string" | one of , ; : . ( ) * =
    text: str
    line: int
    col: int


def _is_atom_char(ch: str) -> bool:
    return ch.isalnum() or ch in _ATOM_EXTRA


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 1
            if j >= n or text[j] != '"':
                raise RuleSyntaxError("unterminated string", line, col)
            toks.append(_Tok("string", text[i + 1 : j], line, col))
            col += j - i + 1
            i = j + 1
            continue
        if ch in ",;:.()*=":
            toks.append(_Tok(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if _is_atom_char(ch):
            j = i
            while j < n and _is_atom_char(text[j]):
                j += 1
            word = text[i:j]
            kind = "var" if word.startswith("_") else "name"
            if kind == "var" and not VAR_RE.match(word):
                raise RuleSyntaxError(f"invalid variable name {word!r}", line, col)
            toks.append(_Tok(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise RuleSyntaxError(f"unexpected character {ch!r}", line, col)
    return toks


# --------------------------------------------------------------------------
# parser

_ACTION_NAMES = {a.value.lower(): a for a in ActionKind}


class _Parser:
    def __init__(self, toks: list[_Tok], ordinal: int | None = None):
        self.toks = toks
        self.pos = 0
        self.ordinal = ordinal

    def _err(self, message: str) -> RuleSyntaxError:
        if self.pos < len(self.toks):
            t = self.toks[self.pos]
            return RuleSyntaxError(message, t.line, t.col, self.ordinal)
        last = self.toks[-1] if self.toks else None
        return RuleSyntaxError(
            message + " (at end of input)",
            last.line if last else None,
            last.col if last else None,
            self.ordinal,
        )

    def _peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _next(self) -> _Tok:
        tok = self._peek()
        if tok is None:
            raise self._err("unexpected end of rule")
        self.pos += 1
        return tok

    def _expect(self, kind: str) -> _Tok:
        tok = self._peek()
        if tok is None or tok.kind != kind:
            raise self._err(f"expected {kind!r}")
        return self._next()

    def parse_rule(self, rule_id: int) -> Rule:
        raw_groups = [self._parse_group()]
        while True:
            tok = self._peek()
            if tok is None:
                raise self._err("rule is not terminated by '.'")
            if tok.kind == ";":
                self._next()
                raw_groups.append(self._parse_group())
            elif tok.kind == ".":
                self._next()
                break
            else:
                raise self._err(f"expected ';' or '.' after group, got {tok.text!r}")
        if self._peek() is not None:
            raise self._err("trailing input after rule terminator")
        return self._build(rule_id, raw_groups)

    def _parse_group(self):
        constraints: list[tuple[_Tok, str, _Tok]] = []
        while True:
            key_tok = self._peek()
            if key_tok is None or key_tok.kind != "name":
                raise self._err("expected a constraint key")
            self._next()
            self._expect("=")
            val_tok = self._peek()
            if val_tok is None or val_tok.kind not in ("name", "var", "string"):
                raise self._err("expected an atom, variable, or string value")
            self._next()
            constraints.append((key_tok, key_tok.text, val_tok))
            nxt = self._peek()
            if nxt is not None and nxt.kind == ",":
                self._next()
                continue
            break
        action = Action(ActionKind.NULL)
        nxt = self._peek()
        if nxt is not None and nxt.kind == ":":
            self._next()
            action = self._parse_action()
        return constraints, action

    def _parse_action(self) -> Action:
        tok = self._peek()
        if tok is None or tok.kind != "name":
            raise self._err("expected an action name")
        kind = _ACTION_NAMES.get(tok.text.lower())
        if kind is None:
            raise self._err(f"unknown action name {tok.text!r}")
        self._next()
        if kind is not ActionKind.COMPOSE:
            return Action(kind)
        self._expect("=")
        return Action(kind, self._parse_template())

    def _parse_template(self) -> ComposeTemplate:
        self._expect("(")
        pairs: list[tuple[str, str]] = []
        while True:
            tok = self._peek()
            if tok is None:
                raise self._err("unterminated compose template")
            if tok.kind == ")":
                self._next()
                break
            self._expect("(")
            self._expect("*")
            name_tok = self._peek()
            if name_tok is None or name_tok.kind != "name":
                raise self._err("expected a slot name")
            slot = name_tok.text.upper()
            if not SLOT_RE.match(slot):
                raise self._err(f"invalid slot name {name_tok.text!r}")
            self._next()
            self._expect("*")
            val_tok = self._peek()
            if val_tok is None or val_tok.kind not in ("name", "var", "string"):
                raise self._err("expected a slot value")
            self._next()
            self._expect(")")
            pairs.append((slot, val_tok.text))
        if not pairs:
            raise self._err("compose template must have at least one slot")
        return ComposeTemplate(tuple(pairs))

    def _build(self, rule_id: int, raw_groups) -> Rule:
        groups: list[ConditionGroup] = []
        n_compose = 0
        for index, (raw_constraints, action) in enumerate(raw_groups):
            feats: list[Constraint] = []
            offset: int | None = None
            sp: str | None = None
            for key_tok, key_text, val_tok in raw_constraints:
                upper = key_text.upper()
                if upper == "LP":
                    if offset is not None:
                        raise RuleSyntaxError(
                            "more than one LP constraint in a group",
                            key_tok.line, key_tok.col, self.ordinal,
                        )
                    try:
                        offset = int(val_tok.text)
                    except ValueError:
                        raise RuleSyntaxError(
                            f"LP value must be a signed integer, got {val_tok.text!r}",
                            val_tok.line, val_tok.col, self.ordinal,
                        ) from None
                    continue
                if upper == "SP":
                    if sp is not None:
                        raise RuleSyntaxError(
                            "more than one SP constraint in a group",
                            key_tok.line, key_tok.col, self.ordinal,
                        )
                    value = val_tok.text.upper()
                    if value not in ("BEGIN", "END"):
                        raise RuleSyntaxError(
                            f"SP value must be BEGIN or END, got {val_tok.text!r}",
                            val_tok.line, val_tok.col, self.ordinal,
                        )
                    sp = value
                    continue
                try:
                    key = normalize_key(key_text)
                except ParseFormatError as exc:
                    raise RuleSyntaxError(
                        str(exc), key_tok.line, key_tok.col, self.ordinal
                    ) from None
                if val_tok.kind == "var":
                    feats.append(Constraint(key, val_tok.text, is_var=True))
                else:
                    try:
                        value = normalize_value(key, val_tok.text)
                    except ParseFormatError as exc:
                        raise RuleSyntaxError(
                            str(exc), val_tok.line, val_tok.col, self.ordinal
                        ) from None
                    feats.append(Constraint(key, value))
            if action.kind is ActionKind.COMPOSE:
                n_compose += 1
                if n_compose > 1:
                    raise RuleSyntaxError(
                        "Compose may appear in at most one group",
                        ordinal=self.ordinal,
                    )
            groups.append(
                ConditionGroup(
                    constraints=tuple(feats),
                    action=action,
                    offset=offset if offset is not None else index,
                    sp=sp,
                    lp_explicit=offset is not None,
                )
            )
        offsets = [g.offset for g in groups]
        if len(set(offsets)) != len(offsets):
            raise RuleSyntaxError(
                "two condition groups target the same offset", ordinal=self.ordinal
            )
        kind = RuleKind.MULTIWORD if n_compose else RuleKind.CONSTRAINT
        return Rule(rule_id, tuple(groups), kind)


def parse_rule(text: str, rule_id: int = 1) -> Rule:
    """Parse one ``.``-terminated rule."""
    toks = _tokenize(text)
    if not toks:
        raise RuleSyntaxError("empty rule", ordinal=rule_id)
    return _Parser(toks, ordinal=rule_id).parse_rule(rule_id)


def parse_rule_file(text: str) -> RuleSet:
    """Parse a rule file into an ordered RuleSet.

    Errors in individual rules are aggregated and reported together with
    each rule's ordinal.  An empty file yields an empty RuleSet with a
    warning.
    """
    toks = _tokenize(text)
    rules: RuleSet = []
    errors: list[str] = []
    ordinal = 0
    start = 0
    for i, tok in enumerate(toks):
        if tok.kind != ".":
            continue
        ordinal += 1
        segment = toks[start : i + 1]
        start = i + 1
        try:
            rules.append(_Parser(segment, ordinal=ordinal).parse_rule(ordinal))
        except RuleSyntaxError as exc:
            errors.append(str(exc))
    if start < len(toks):
        ordinal += 1
        errors.append(f"rule {ordinal}: not terminated by '.'")
    if errors:
        raise RuleSyntaxError("; ".join(errors))
    if not rules:
        log.warning("rule file contains no rules")
    return rules


# --------------------------------------------------------------------------
# serializer


def _render_key(key: str) -> str:
    return key[:1].upper() + key[1:]


def _atom_safe(value: str) -> bool:
    return bool(value) and not value.startswith("_") and all(
        _is_atom_char(ch) for ch in value
    )


def _render_value(value: str) -> str:
    return value if _atom_safe(value) else f'"{value}"'


def _render_action(action: Action) -> str:
    if action.kind is ActionKind.NULL:
        return ""
    if action.kind is not ActionKind.COMPOSE:
        return f" : {action.kind.value}"
    pairs = " ".join(
        f"(*{slot}* {_render_value(pattern)})" for slot, pattern in action.template.pairs
    )
    return f" : Compose = ({pairs})"


def serialize_rule(rule: Rule) -> str:
    """Canonical text form; re-parsing yields a structurally equal rule."""
    groups = []
    for group in rule.groups:
        items = []
        if group.lp_explicit:
            items.append(f"LP = {group.offset}")
        if group.sp:
            items.append(f"SP = {group.sp}")
        for c in group.constraints:
            value = c.value if c.is_var else _render_value(c.value)
            items.append(f"{_render_key(c.key)} = {value}")
        groups.append(", ".join(items) + _render_action(group.action))
    return " ; ".join(groups) + " ."


def rule_variables(rule: Rule) -> list[str]:
    """Variable names in order of first occurrence (constraints, then templates)."""
    seen: list[str] = []
    for group in rule.groups:
        for c in group.constraints:
            if c.is_var and c.value not in seen:
                seen.append(c.value)
    for group in rule.groups:
        if group.action.template is not None:
            for _, pattern in group.action.template.pairs:
                for var in re.findall(r"_[A-Za-z][A-Za-z0-9]*", pattern):
                    if var not in seen:
                        seen.append(var)
    return seen


def lint_rules(rules: RuleSet) -> list[str]:
    """Non-fatal diagnostics: variables that occur only once constrain nothing."""
    warnings = []
    for rule in rules:
        counts: dict[str, int] = {}
        for group in rule.groups:
            for c in group.constraints:
                if c.is_var:
                    counts[c.value] = counts.get(c.value, 0) + 1
            if group.action.template is not None:
                for _, pattern in group.action.template.pairs:
                    for var in re.findall(r"_[A-Za-z][A-Za-z0-9]*", pattern):
                        counts[var] = counts.get(var, 0) + 1
        for var, count in counts.items():
            if count == 1:
                warnings.append(
                    f"rule {rule.id}: variable {var} occurs only once"
                )
    return warnings
