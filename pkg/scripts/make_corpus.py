#!/usr/bin/env python3
"""Generate a random-word corpus in the line-record format."""

import argparse
import json

from textmark.synthetic import content_words, load_wordlist, make_corpus
from textmark.textmodel import bundled_exclusions


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--length", type=int, default=200, help="words per document")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--sentence-len", type=int, default=20,
                        help="words per sentence; 0 for no punctuation")
    parser.add_argument("--content-only", action="store_true",
                        help="restrict to words the POS filter keeps eligible")
    args = parser.parse_args()

    words = load_wordlist()
    if args.content_only:
        words = content_words(words, bundled_exclusions("en"))
    texts = make_corpus(words, args.docs, args.length, seed=args.seed,
                        sentence_len=args.sentence_len)
    with open(args.out, "w", encoding="utf-8") as fh:
        for i, text in enumerate(texts):
            fh.write(json.dumps({"id": f"doc-{i:05d}", "text": text}) + "\n")
    print(f"wrote {len(texts)} documents to {args.out}")


if __name__ == "__main__":
    main()
