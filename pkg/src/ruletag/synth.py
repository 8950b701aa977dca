"""Synthetic lexicon/corpus/rule generation for stress tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .lexicon import Lexicon
from .model import Parse

_CATS = ("N", "V", "ADJ", "ADV", "POSTP")
_CASES = ("NOM", "ACC", "DAT", "LOC", "ABL", "GEN")
_AGRS = ("1SG", "2SG", "3SG", "1PL", "2PL", "3PL")
_ASPECTS = ("AOR", "PROG", "PAST", "NARR")


@dataclass
class SyntheticData:
    lexicon: Lexicon
    corpus: str
    rules_text: str
    n_tokens: int


def _random_parse(rng: random.Random, root: str, surface: str) -> Parse:
    feats = {"root": root, "cat": rng.choice(_CATS), "lex": surface}
    if rng.random() < 0.6:
        feats["case"] = rng.choice(_CASES)
    if rng.random() < 0.5:
        feats["agr"] = rng.choice(_AGRS)
    if rng.random() < 0.3:
        feats["aspect"] = rng.choice(_ASPECTS)
    if rng.random() < 0.2:
        feats["finalcat"] = rng.choice(_CATS)
    return Parse.make(feats)


def build_synthetic(
    n_tokens: int = 10_000,
    n_surfaces: int = 1_000,
    n_rules: int = 50,
    seed: int = 7,
    sentence_len: tuple[int, int] = (8, 15),
) -> SyntheticData:
    rng = random.Random(seed)
    entries: dict[str, tuple[Parse, ...]] = {}
    surfaces = []
    for i in range(n_surfaces):
        surface = f"w{i:04d}"
        root = f"r{rng.randrange(n_surfaces // 2):04d}"
        parses = tuple(
            _random_parse(rng, root, surface) for _ in range(rng.randint(1, 5))
        )
        entries[surface] = parses
        surfaces.append(surface)
    lexicon = Lexicon(entries=entries, name="synthetic", language="und")

    words = []
    count = 0
    while count < n_tokens:
        length = rng.randint(*sentence_len)
        words.extend(rng.choice(surfaces) for _ in range(length))
        words.append(words.pop() + ".")
        count += length
    corpus = " ".join(words)

    rules = []
    for _ in range(n_rules):
        n_groups = rng.randint(1, 2)
        groups = []
        use_var = rng.random() < 0.3 and n_groups == 2
        for g in range(n_groups):
            cons = [f"Cat = {rng.choice(_CATS)}"]
            if use_var:
                cons.append("Case = _C")
            elif rng.random() < 0.5:
                cons.append(f"Case = {rng.choice(_CASES)}")
            action = rng.choice(("Output", "Delete", "Null"))
            groups.append(", ".join(cons) + (f" : {action}" if action != "Null" else ""))
        rules.append(" ; ".join(groups) + " .")
    return SyntheticData(
        lexicon=lexicon,
        corpus=corpus,
        rules_text="\n".join(rules),
        n_tokens=count,
    )
