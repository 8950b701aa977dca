#!/usr/bin/env python3
"""Benchmark the matching kernels on a synthetic tagging workload.

Runs the same corpus through the compiled extension and the pure-Python
fallback and reports throughput for each.

    python3 benchmarks/bench_match.py [--tokens N] [--surfaces N] [--rules N]
"""

import argparse
import time

from ruletag.kernel import available_backends
from ruletag.matcher import Matcher
from ruletag.pipeline import ResolutionPolicy, compile_stats, tag_corpus
from ruletag.ruledsl import parse_rule_file
from ruletag.synth import build_synthetic


def run(backend: str, data, rules, repeats: int) -> tuple[float, int]:
    best = float("inf")
    words = 0
    for _ in range(repeats):
        matcher = Matcher(backend=backend)
        start = time.perf_counter()
        result = tag_corpus(
            data.corpus, rules, data.lexicon, ResolutionPolicy("first"), matcher
        )
        elapsed = time.perf_counter() - start
        best = min(best, elapsed)
        words = compile_stats(result).total_words
    return best, words


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tokens", type=int, default=10_000)
    parser.add_argument("--surfaces", type=int, default=1_000)
    parser.add_argument("--rules", type=int, default=50)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    data = build_synthetic(
        n_tokens=args.tokens,
        n_surfaces=args.surfaces,
        n_rules=args.rules,
        seed=args.seed,
    )
    rules = parse_rule_file(data.rules_text)
    backends = available_backends()
    print(
        f"workload: {data.n_tokens} tokens, {len(data.lexicon)} surfaces, "
        f"{len(rules)} rules, best of {args.repeats}"
    )
    timings = {}
    for backend in backends:
        elapsed, words = run(backend, data, rules, args.repeats)
        timings[backend] = elapsed
        print(f"{backend:>9}: {elapsed:6.2f}s   {words / elapsed:>10.0f} words/s")
    if "compiled" in timings and "pure" in timings:
        print(f" speedup: {timings['pure'] / timings['compiled']:.2f}x")
    elif "compiled" not in timings:
        print("compiled backend not built; run: python3 setup.py build_ext --inplace")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
