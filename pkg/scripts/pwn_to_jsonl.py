#!/usr/bin/env python3
"""Convert Princeton WordNet 3.0 ``data.*`` files to the JSON-lines synset format.

Usage::

    python scripts/pwn_to_jsonl.py WORDNET_DIR -o pwn.jsonl [--only 09426788-n,...]

With ``--only``, just the listed synsets are written (in the given order);
their relation pointers are kept verbatim, so links leaving the selection
show up as dangling when the file is loaded.
"""
import argparse
import json
import re
import sys
from pathlib import Path

DATA_FILES = ("data.noun", "data.verb", "data.adj", "data.adv")
HYPERNYM = {"@", "@i"}
HYPONYM = {"~", "~i"}
_ADJ_MARKER = re.compile(r"\((a|p|ip)\)$")


def parse_data_line(line):
    fields = line.split()
    offset, _lexfile, ss_type = fields[0], fields[1], fields[2]
    w_cnt = int(fields[3], 16)
    words = [_ADJ_MARKER.sub("", fields[4 + 2 * i]) for i in range(w_cnt)]
    i = 4 + 2 * w_cnt
    p_cnt = int(fields[i])
    i += 1
    pointers = []
    for _ in range(p_cnt):
        symbol, target, pos = fields[i], fields[i + 1], fields[i + 2]
        pointers.append((symbol, target, pos))
        i += 4
    return offset, ss_type, words, pointers


def read_wordnet(wn_dir):
    synsets = {}
    ss_types = {}
    for name in DATA_FILES:
        with open(Path(wn_dir) / name, encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("  "):
                    continue
                offset, ss_type, words, pointers = parse_data_line(line)
                synsets[f"{offset}-{ss_type}"] = (words, pointers)
                ss_types[(offset, "a" if ss_type == "s" else ss_type)] = ss_type
    records = {}
    for key, (words, pointers) in synsets.items():
        hyper, hypo = [], []
        for symbol, target, pos in pointers:
            if symbol not in HYPERNYM and symbol not in HYPONYM:
                continue
            target_pos = ss_types.get((target, "a" if pos == "s" else pos), pos)
            ref = f"{target}-{target_pos}"
            (hyper if symbol in HYPERNYM else hypo).append(ref)
        records[key] = {"id": key, "lemmas": words, "hypernyms": hyper, "hyponyms": hypo}
    return records


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("wordnet_dir")
    ap.add_argument("-o", "--output", required=True)
    ap.add_argument("--only", help="comma-separated offset-POS ids to keep")
    args = ap.parse_args(argv)
    records = read_wordnet(args.wordnet_dir)
    keys = args.only.split(",") if args.only else list(records)
    with open(args.output, "w", encoding="utf-8") as out:
        for key in keys:
            out.write(json.dumps(records[key], ensure_ascii=False) + "\n")
    print(f"wrote {len(keys)} synsets to {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
