#!/usr/bin/env python3
"""Build an on-disk synonym lexicon for CLI experiments.

The ``ideal`` profile gives every content word same-vector synonyms, so all
similarity scores are 1 and the default thresholds pass; use it to study the
encoding and detection machinery in isolation. The ``noisy`` profile draws
random unit vectors with in-group noise, which behaves more like real
embeddings: pair it with a low blend weight (for example ``--lambda 0.15``)
because window-mean contextual scores sit far below transformer ones.
"""

import argparse

from textmark.synthetic import (
    content_words,
    dump_lexicon,
    load_wordlist,
    make_lexicon,
    noisy_lexicon,
)
from textmark.textmodel import bundled_exclusions


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--synonyms-out", required=True)
    parser.add_argument("--vectors-out", required=True)
    parser.add_argument("--profile", choices=["ideal", "noisy"], default="ideal")
    parser.add_argument("--synonyms-per-word", type=int, default=3)
    parser.add_argument("--coverage", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    words = content_words(load_wordlist(), bundled_exclusions("en"))
    if args.profile == "ideal":
        lex = make_lexicon(words, synonyms_per_word=args.synonyms_per_word,
                           coverage=args.coverage, seed=args.seed)
    else:
        lex = noisy_lexicon(words, synonyms_per_word=args.synonyms_per_word,
                            seed=args.seed)
    dump_lexicon(lex, args.synonyms_out, args.vectors_out)
    print(f"wrote {len(lex.synonym_map)} synonym entries "
          f"and {len(lex.vectors)} vectors")


if __name__ == "__main__":
    main()
