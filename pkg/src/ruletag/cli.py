"""Command-line interface: batch tagging, rule checking, and the service.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable files,
malformed rules or lexicon, misaligned gold).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import RuletagError
from .lexicon import load_lexicon
from .matcher import Matcher
from .pipeline import (
    ResolutionPolicy,
    compile_stats,
    load_root_frequencies,
    parse_tsv,
    render_tsv,
    resolve_by_user,
    score_against_gold,
    tag_corpus,
)
from .ruledsl import RuleKind, lint_rules, parse_rule_file

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ruletag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    tag = sub.add_parser("tag", help="tag a corpus file")
    tag.add_argument("--rules", required=True, help="rule file (.mr)")
    tag.add_argument("--lexicon", required=True, help="lexicon file (.lex)")
    tag.add_argument("--input", required=True, help="plain-text corpus to tag")
    tag.add_argument("--output", required=True, help="tagged TSV destination")
    tag.add_argument(
        "--policy",
        choices=["first", "frequency", "interactive", "leave"],
        default="first",
        help="residual ambiguity policy (default: first)",
    )
    tag.add_argument("--freq", help="root<TAB>count file for --policy frequency")
    tag.add_argument("--answers", help="scripted choices for --policy interactive")
    tag.add_argument("--stats", help="write a JSON statistics report here")
    tag.add_argument("--gold", help="gold TSV to score against")
    tag.add_argument("--trace", help="write rule application trace here")
    tag.add_argument("--unknown-log", help="write unknown surface forms here")
    tag.add_argument(
        "--fold-case", action="store_true", help="case-fold lexicon lookups"
    )

    check = sub.add_parser("check-rules", help="parse and lint a rule file")
    check.add_argument("--rules", required=True)

    serve = sub.add_parser("serve", help="run the interactive resolution service")
    serve.add_argument("--rules", required=True)
    serve.add_argument("--lexicon", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--fold-case", action="store_true")
    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, content: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(content)


def _load_answers(path: str) -> list[tuple[str | None, int]]:
    """Answer script: one choice per line, ``index`` or ``surface<TAB>index``."""
    answers = []
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        try:
            if len(fields) == 1:
                answers.append((None, int(fields[0])))
            elif len(fields) == 2:
                answers.append((fields[0], int(fields[1])))
            else:
                raise ValueError
        except ValueError:
            raise RuletagError(
                f"answers line {lineno}: expected 'index' or 'surface<TAB>index'"
            ) from None
    return answers


def _apply_answers(result, answers) -> None:
    if len(answers) != len(result.pending):
        raise RuletagError(
            f"{len(result.pending)} pending tokens but {len(answers)} answers"
        )
    for (surface, parse_index), (si, ti) in zip(answers, result.pending):
        sentence = result.sentences[si]
        token = sentence.tokens[ti]
        if surface is not None and surface != token.surface:
            raise RuletagError(
                f"answer surface {surface!r} does not match pending token "
                f"{token.surface!r} (sentence {si}, token {ti})"
            )
        try:
            result.replace_sentence(si, resolve_by_user(sentence, ti, parse_index))
        except ValueError as exc:
            raise RuletagError(str(exc)) from None
    result.pending.clear()


def _cmd_tag(args) -> int:
    rules = parse_rule_file(_read(args.rules))
    lexicon = load_lexicon(args.lexicon, fold_case=args.fold_case)
    freqs = load_root_frequencies(args.freq) if args.freq else None
    if args.policy == "frequency" and freqs is None:
        print("ruletag: error: --policy frequency requires --freq", file=sys.stderr)
        return USAGE_ERROR
    if args.policy == "interactive" and not args.answers:
        print(
            "ruletag: error: --policy interactive requires --answers in batch mode "
            "(use 'serve' for a live session)",
            file=sys.stderr,
        )
        return USAGE_ERROR
    policy = ResolutionPolicy(args.policy, freqs)
    result = tag_corpus(_read(args.input), rules, lexicon, policy, Matcher())
    if args.answers:
        _apply_answers(result, _load_answers(args.answers))

    accuracy = None
    if args.gold:
        accuracy = score_against_gold(result.sentences, parse_tsv(_read(args.gold)))
    stats = compile_stats(result, accuracy)

    _write(args.output, render_tsv(result.sentences))
    if args.stats:
        _write(args.stats, json.dumps(stats.to_json(), indent=2, sort_keys=True) + "\n")
    if args.trace:
        _write(args.trace, "".join(entry.line() + "\n" for entry in result.trace))
    if args.unknown_log:
        _write(
            args.unknown_log, "".join(line + "\n" for line in result.unknown.lines())
        )

    n_tokens = sum(len(s.tokens) for s in result.sentences)
    print(f"tagged {len(result.sentences)} sentences, {n_tokens} tokens")
    print(stats.to_text())
    return 0


def _cmd_check_rules(args) -> int:
    rules = parse_rule_file(_read(args.rules))
    n_multi = sum(1 for r in rules if r.kind is RuleKind.MULTIWORD)
    print(
        f"{len(rules)} rules parsed "
        f"({n_multi} multiword, {len(rules) - n_multi} constraint)"
    )
    warnings = lint_rules(rules)
    for warning in warnings:
        print(f"warning: {warning}")
    if not warnings:
        print("no lint warnings")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    rules = parse_rule_file(_read(args.rules))
    lexicon = load_lexicon(args.lexicon, fold_case=args.fold_case)
    app = create_app(rules, lexicon)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "tag": _cmd_tag,
        "check-rules": _cmd_check_rules,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (RuletagError, OSError) as exc:
        print(f"ruletag: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
