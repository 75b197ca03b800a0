#!/usr/bin/env python3
"""Watermark strength versus text length: mean Z per bucket, both modes."""

import argparse

from textmark.config import WatermarkConfig
from textmark.evaluation import length_sweep, write_results
from textmark.providers import Lexicon, LexiconProvider
from textmark.synthetic import content_words, load_wordlist, make_corpus, make_lexicon
from textmark.textmodel import analyze, bundled_exclusions


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="results CSV")
    parser.add_argument("--lengths", type=int, nargs="+",
                        default=[50, 100, 200, 300])
    parser.add_argument("--docs-per-bucket", type=int, default=100)
    parser.add_argument("--coverage", type=float, default=0.6,
                        help="fraction of vocabulary with synonyms")
    parser.add_argument("--synonyms")
    parser.add_argument("--vectors")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    excl = bundled_exclusions("en")
    words = content_words(load_wordlist(), excl)
    if args.synonyms and args.vectors:
        lexicon = Lexicon.load(args.synonyms, args.vectors)
    else:
        lexicon = make_lexicon(words, coverage=args.coverage, seed=args.seed)
    cfg = WatermarkConfig(provider=LexiconProvider(lexicon), exclusion=excl)

    buckets = {}
    for i, length in enumerate(args.lengths):
        texts = make_corpus(words, args.docs_per_bucket, length,
                            seed=args.seed + i, sentence_len=20)
        buckets[length] = [analyze(t, excl) for t in texts]

    rows = []
    for length, fast_z, precise_z in length_sweep(buckets, cfg):
        rows.append(("length_sweep", f"length={length}", "mean_fast_z", fast_z))
        rows.append(("length_sweep", f"length={length}", "mean_precise_z", precise_z))
        print(f"length {length:4d}: fast Z {fast_z:6.2f}   precise Z {precise_z:6.2f}")
    write_results(args.out, rows)


if __name__ == "__main__":
    main()
