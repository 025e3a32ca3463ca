"""Command-line entry point: ``lexgen <subcommand> ...``.

Exit status is 0 on success, 1 on bad input (missing files, malformed data,
unknown flags) and 2 when a pipeline finished but skipped entries because
translation failed. A JSON run report goes to ``--report PATH`` or stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Optional

from lexgen import plotting
from lexgen.dictionary import (
    DictFormatError,
    atomic_write_text,
    dumps_dict,
    load_dict,
    load_pos_map,
    merge_dicts,
)
from lexgen.pivot import PivotConfig, PivotReport, build_pivot_dict
from lexgen.reversal import SimConfig, reverse_dr, reverse_drws, round_trip_integrate
from lexgen.thesaurus import (
    CoverageReport,
    ThresholdPolicy,
    build_thesaurus,
    drop_empty,
    dumps_jsonl,
    dumps_tsv,
    loads_jsonl,
)
from lexgen.translate import make_backend
from lexgen.wordnet import (
    WordnetFormatError,
    detect_format,
    load_wordnet,
    read_core_list,
    wordnet_stats,
)

logger = logging.getLogger("lexgen")

EXIT_OK, EXIT_INPUT, EXIT_PARTIAL = 0, 1, 2
COMMANDS = ("wn-stats", "dict-reverse", "dict-integrate", "dict-pivot", "dict-merge", "thesaurus-build", "validate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


class Run:
    """Collects what a subcommand read, wrote and warned about."""

    def __init__(self, command: str):
        self.command = command
        self.inputs: list = []
        self.outputs: list = []
        self.warnings: Counter = Counter()
        self.start = time.perf_counter()

    def read(self, path) -> Path:
        path = Path(path)
        if not path.is_file():
            raise UsageError(f"input file not found: {path}")
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        self.inputs.append([str(path), digest])
        return path

    def write(self, path, text: str, count: int) -> None:
        atomic_write_text(path, text)
        self.outputs.append([str(path), count])

    def report(self, status: int) -> dict:
        return {
            "command": self.command,
            "status": status,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "warnings": dict(sorted(self.warnings.items())),
            "duration": round(time.perf_counter() - self.start, 4),
        }


def _pairs(text: str) -> dict[str, str]:
    """``eng=a.jsonl,fin=b.tab`` -> {"eng": "a.jsonl", "fin": "b.tab"}."""
    out = {}
    for item in filter(None, (x.strip() for x in text.split(","))):
        lang, sep, path = item.partition("=")
        if not sep or not lang or not path:
            raise UsageError(f"expected LANG=PATH, got {item!r}")
        out[lang] = path
    return out


def _load_wordnets(run: Run, wordnets) -> dict:
    paths = _pairs(wordnets) if isinstance(wordnets, str) else dict(wordnets)
    if "eng" not in paths:
        raise UsageError("--wordnets must include eng=PATH")
    eng = load_wordnet(run.read(paths["eng"]), "eng")
    run.warnings.update({f"wordnet_{k}": v for k, v in eng.warnings.items()})
    indexes = {"eng": eng}
    for lang, path in paths.items():
        if lang != "eng":
            index = load_wordnet(run.read(path), lang, relations=eng)
            run.warnings.update({f"wordnet_{k}": v for k, v in index.warnings.items()})
            indexes[lang] = index
    return indexes


def _load_dict(run: Run, path, args, **kw):
    pos_map = load_pos_map(run.read(args.pos_map)) if getattr(args, "pos_map", None) else None
    return load_dict(run.read(path), pos_map=pos_map, warnings=run.warnings, **kw)


def _sim_config(args) -> SimConfig:
    return SimConfig(threshold=args.threshold, word_similarity=args.similarity)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) in (None, ""):
            raise UsageError(f"--{name.replace('_', '-')} is required")


def cmd_wn_stats(args, run: Run) -> int:
    core = read_core_list(run.read(args.core)) if args.core else None
    all_stats = []
    for item in args.wordnets:
        lang, sep, path = item.partition("=")
        if not sep:
            lang, path = args.lang, item
        index = load_wordnet(run.read(path), lang)
        all_stats.append(wordnet_stats(index, core))
    lines = ["\t".join(["stat"] + [st.language for st in all_stats])]
    names = [k for k, _ in all_stats[0].rows()]
    rows = [dict(st.rows()) for st in all_stats]
    for name in names[1:]:
        lines.append("\t".join([name] + [r.get(name, "") for r in rows]))
    text = "\n".join(lines) + "\n"
    if args.output:
        run.write(args.output, text, len(all_stats))
    else:
        sys.stdout.write(text)
    if args.figures:
        fig = plotting.plot_wordnet_stats(all_stats, Path(args.figures) / "wordnet_pos.png")
        run.outputs.append([str(fig), len(all_stats)])
    return EXIT_OK


def cmd_dict_reverse(args, run: Run) -> int:
    _require(args, "output")
    d = _load_dict(run, args.input, args)
    if args.mode == "dr":
        out = reverse_dr(d)
    else:
        _require(args, "wordnet")
        eng = load_wordnet(run.read(args.wordnet), "eng")
        out = reverse_drws(d, eng, _sim_config(args), run.warnings)
    run.write(args.output, dumps_dict(out), len(out))
    return EXIT_OK


def cmd_dict_integrate(args, run: Run) -> int:
    _require(args, "output", "wordnet")
    d = _load_dict(run, args.input, args)
    eng = load_wordnet(run.read(args.wordnet), "eng")
    out = round_trip_integrate(d, eng, _sim_config(args), run.warnings)
    run.warnings["entries_added"] += len(out) - len(d)
    run.write(args.output, dumps_dict(out), len(out))
    return EXIT_OK


def cmd_dict_merge(args, run: Run) -> int:
    _require(args, "output")
    out = merge_dicts(_load_dict(run, args.a, args), _load_dict(run, args.b, args))
    run.write(args.output, dumps_dict(out), len(out))
    return EXIT_OK


def cmd_dict_pivot(args, run: Run) -> int:
    _require(args, "output", "wordnets", "target", "backend")
    src = _load_dict(run, args.input, args)
    indexes = _load_wordnets(run, args.wordnets)
    helpers = tuple(args.helpers.split(",")) if args.helpers else tuple(indexes)
    cfg = PivotConfig.parse_policy(args.policy, helper_langs=helpers)
    _, _, backend_arg = args.backend.partition(":")
    if backend_arg:
        run.read(backend_arg)
    backend = make_backend(args.backend, cache=args.cache)
    report = PivotReport()
    out = build_pivot_dict(src, indexes, backend, args.target, cfg, jobs=args.jobs, report=report)
    run.warnings.update(report.warnings)
    run.write(args.output, dumps_dict(out), len(out))
    failures_path = args.failures or f"{args.output}.failures.jsonl"
    if report.failures:
        text = "".join(json.dumps(f, ensure_ascii=False) + "\n" for f in report.failures)
        run.write(failures_path, text, len(report.failures))
    if args.figures:
        fig = plotting.plot_rank_histogram(report.accepted_ranks, Path(args.figures) / "pivot_ranks.png")
        run.outputs.append([str(fig), len(report.accepted_ranks)])
    return EXIT_PARTIAL if report.failures else EXIT_OK


def cmd_thesaurus_build(args, run: Run) -> int:
    _require(args, "output", "wordnets", "dicts")
    indexes = _load_wordnets(run, args.wordnets)
    dicts = {lang: _load_dict(run, path, args) for lang, path in _pairs(args.dicts).items()}
    policy = ThresholdPolicy.parse(args.policy)
    coverage = CoverageReport()
    entries = build_thesaurus(indexes, dicts, policy, language=args.language, jobs=args.jobs, report=coverage)
    language = next(iter(entries[0].syn)) if entries else args.language
    if args.drop_empty:
        entries = drop_empty(entries, language)
    text = dumps_tsv(entries) if args.format == "tsv" else dumps_jsonl(entries)
    run.write(args.output, text, len(entries))
    run.warnings["empty_entries"] += coverage.empty_entries
    run.warnings.update({f"untranslated_{k}": v for k, v in coverage.untranslated.items()})
    if args.coverage:
        run.write(args.coverage, json.dumps(coverage.to_json(), indent=2, sort_keys=True) + "\n", 1)
    if args.figures:
        sizes = {lang: [len(e.syn.get(lang, ())) for e in entries] for lang in (entries[0].syn if entries else {})}
        fig = plotting.plot_synset_sizes(sizes, Path(args.figures) / "thesaurus_sizes.png")
        run.outputs.append([str(fig), len(entries)])
    return EXIT_OK


def cmd_validate(args, run: Run) -> int:
    path = run.read(args.input)
    kind = args.kind
    if kind == "auto":
        name = path.name
        if name.endswith(".tsv"):
            kind = "dict"
        elif name.endswith(".tab"):
            kind = "wordnet"
        else:
            with open(path, encoding="utf-8") as fh:
                first = next((line for line in fh if line.strip()), "")
            kind = "thesaurus" if '"syn"' in first else "wordnet"
    if kind == "dict":
        count = len(load_dict(path, args.source, args.target, warnings=run.warnings))
    elif kind == "thesaurus":
        with open(path, encoding="utf-8") as fh:
            entries = loads_jsonl(fh.read())
        ids = [e.id for e in entries]
        if ids != list(range(1, len(ids) + 1)):
            raise UsageError(f"{path}: ids are not 1..{len(ids)}")
        for e in entries:
            if e.pos != e.offset_pos.pos:
                raise UsageError(f"{path}: entry {e.id} POS {e.pos} does not match {e.offset_pos}")
        count = len(entries)
    else:
        count = len(load_wordnet(path, args.lang, detect_format(path)))
    run.warnings["validated_records"] += count
    print(f"{path}: ok ({kind}, {count} records)")
    return EXIT_OK


def _common(p: argparse.ArgumentParser, *, jobs=False, figures=False, pos_map=True):
    p.add_argument("--report", help="write the JSON run report here instead of stderr")
    p.add_argument("--config", help="JSON file supplying defaults for any flag")
    p.add_argument("-v", "--verbose", action="store_true")
    if pos_map:
        p.add_argument("--pos-map", help="JSON map from source POS tags to n/v/a/r/s/unknown")
    if jobs:
        p.add_argument("--jobs", type=int, default=1, help="worker threads (output does not depend on it)")
    if figures:
        p.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")


def _similarity(p):
    p.add_argument("--threshold", type=float, default=0.9, help="simValue merge threshold (default 0.9)")
    p.add_argument("--similarity", choices=("overlap", "jaccard"), default="overlap")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexgen", description="Generate dictionaries and thesauruses from one bilingual dictionary.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("wn-stats", help="synset/lemma counts and core coverage")
    p.add_argument("wordnets", nargs="+", metavar="[LANG=]PATH")
    p.add_argument("--lang", default="eng", help="language for PATH given without LANG=")
    p.add_argument("--core", help="file of core offset-POS ids")
    p.add_argument("-o", "--output")
    _common(p, figures=True, pos_map=False)
    p.set_defaults(func=cmd_wn_stats)

    p = sub.add_parser("dict-reverse", help="reverse a dictionary (DR or DRwS)")
    p.add_argument("input")
    p.add_argument("--mode", choices=("dr", "drws"), default="drws")
    p.add_argument("--wordnet", help="English Wordnet (needed for drws)")
    p.add_argument("-o", "--output")
    _similarity(p)
    _common(p)
    p.set_defaults(func=cmd_dict_reverse)

    p = sub.add_parser("dict-integrate", help="merge a dictionary with the reverse of its reverse")
    p.add_argument("input")
    p.add_argument("--wordnet")
    p.add_argument("-o", "--output")
    _similarity(p)
    _common(p)
    p.set_defaults(func=cmd_dict_integrate)

    p = sub.add_parser("dict-pivot", help="build Dict(S,T) from Dict(S,eng)")
    p.add_argument("input")
    p.add_argument("--wordnets", help="eng=PATH,fin=PATH,...")
    p.add_argument("--helpers", help="helper languages in order (default: all --wordnets)")
    p.add_argument("--target")
    p.add_argument("--backend", help="table:PATH or http:CONFIG.json")
    p.add_argument("--cache", help="persistent translation cache (JSON lines)")
    p.add_argument("--policy", default="argmax", help="argmax or threshold:THETA")
    p.add_argument("--failures", help="failure report path (default OUT.failures.jsonl)")
    p.add_argument("-o", "--output")
    _common(p, jobs=True, figures=True)
    p.set_defaults(func=cmd_dict_pivot)

    p = sub.add_parser("dict-merge", help="union of two dictionaries")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    _common(p)
    p.set_defaults(func=cmd_dict_merge)

    p = sub.add_parser("thesaurus-build", help="multilingual thesaurus over aligned synsets")
    p.add_argument("--wordnets", help="eng=PATH,fin=PATH,...")
    p.add_argument("--dicts", help="eng=PATH,fin=PATH,... each translating into the target language")
    p.add_argument("--language", help="target language (default: from the dictionaries)")
    p.add_argument("--policy", default="above-average", help="above-average or fixed:ALPHA")
    p.add_argument("--drop-empty", action="store_true", help="omit entries without target words")
    p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
    p.add_argument("--coverage", help="write a JSON coverage report here")
    p.add_argument("-o", "--output")
    _common(p, jobs=True, figures=True, pos_map=False)
    p.set_defaults(func=cmd_thesaurus_build)

    p = sub.add_parser("validate", help="check a dictionary, thesaurus or Wordnet file")
    p.add_argument("input")
    p.add_argument("--kind", choices=("auto", "dict", "thesaurus", "wordnet"), default="auto")
    p.add_argument("--lang", default="eng")
    p.add_argument("--source")
    p.add_argument("--target")
    _common(p, pos_map=False)
    p.set_defaults(func=cmd_validate)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config or not argv or argv[0] not in COMMANDS:
        return
    try:
        with open(known.config, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sub.choices[argv[0]].set_defaults(**{k.replace("-", "_"): v for k, v in config.items()})


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except UsageError as exc:
        print(f"lexgen: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    run = Run(args.command)
    try:
        status = args.func(args, run)
    except (UsageError, DictFormatError, WordnetFormatError, ValueError, OSError) as exc:
        print(f"lexgen {args.command}: error: {exc}", file=sys.stderr)
        status = EXIT_INPUT
    report = json.dumps(run.report(status), indent=2, ensure_ascii=False)
    if args.report:
        atomic_write_text(args.report, report + "\n")
    else:
        print(report, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
