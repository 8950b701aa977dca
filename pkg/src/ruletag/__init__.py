"""Constraint-based morphological disambiguation and tagging engine.

Ordered condition-action rules with unification variables select, delete,
or compose morphological parses produced by a pluggable lexicon-backed
analyzer; a pipeline compiles parse-distribution and disambiguation-method
statistics, and an HTTP service exposes interactive resolution of residual
ambiguity.
"""

from importlib import resources

from .errors import (
    AlignmentError,
    ComposeError,
    LexiconError,
    ParseFormatError,
    RuleSyntaxError,
    RuletagError,
)
from .lexicon import Lexicon, UnknownLog, analyze, load_lexicon, parse_lexicon
from .matcher import MatchResult, Matcher, group_candidates, match_rule, satisfies
from .model import (
    Parse,
    Resolution,
    Sentence,
    Token,
    deserialize_parse,
    feature_get,
    render_display,
    serialize_parse,
)
from .pipeline import (
    CorpusResult,
    ResolutionPolicy,
    StatsReport,
    compile_stats,
    parse_tsv,
    render_tsv,
    score_against_gold,
    tag_corpus,
    tag_sentence,
    tokenize,
)
from .ruledsl import (
    Rule,
    RuleKind,
    RuleSet,
    lint_rules,
    parse_rule,
    parse_rule_file,
    serialize_rule,
)

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a bundled data file (demo rules, sample lexicon, gold output)."""
    return resources.files(__name__).joinpath("data", name)


__all__ = [
    "AlignmentError",
    "ComposeError",
    "CorpusResult",
    "Lexicon",
    "LexiconError",
    "MatchResult",
    "Matcher",
    "Parse",
    "ParseFormatError",
    "Resolution",
    "ResolutionPolicy",
    "Rule",
    "RuleKind",
    "RuleSet",
    "RuleSyntaxError",
    "RuletagError",
    "Sentence",
    "StatsReport",
    "Token",
    "UnknownLog",
    "analyze",
    "compile_stats",
    "data_path",
    "deserialize_parse",
    "feature_get",
    "group_candidates",
    "lint_rules",
    "load_lexicon",
    "match_rule",
    "parse_lexicon",
    "parse_rule",
    "parse_rule_file",
    "parse_tsv",
    "render_display",
    "render_tsv",
    "satisfies",
    "score_against_gold",
    "serialize_parse",
    "serialize_rule",
    "tag_corpus",
    "tag_sentence",
    "tokenize",
]
