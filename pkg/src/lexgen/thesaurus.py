"""Multilingual thesaurus over aligned Wordnet synsets.

Every synset of the English Wordnet becomes one entry. Its aligned lemma
sets in the helper languages are looked up in the created ``Dict(L, S)``
dictionaries, the resulting words in ``S`` are tallied, and those whose rank
clears the threshold policy form the entry's ``S`` synonym set.
"""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from lexgen.dictionary import BilingualDict, atomic_write_text, indexed
from lexgen.pivot import ENG, CandidateTally
from lexgen.reversal import SimConfig, reverse_dr, reverse_drws
from lexgen.wordnet import OffsetPos, WordnetIndex


@dataclass(frozen=True)
class ThresholdPolicy:
    kind: str = "above_average"
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("above_average", "fixed"):
            raise ValueError(f"unknown threshold policy {self.kind!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")

    @classmethod
    def parse(cls, text: str) -> "ThresholdPolicy":
        """``above-average`` or ``fixed:<alpha>``."""
        kind, _, value = text.partition(":")
        if kind in ("above-average", "above_average") and not value:
            return cls("above_average")
        if kind == "fixed":
            return cls("fixed", float(value))
        raise ValueError(f"policy must be above-average or fixed:ALPHA, got {text!r}")

    def accept(self, tally: CandidateTally) -> list[str]:
        total, distinct = tally.total, len(tally)
        if not distinct:
            return []
        if self.kind == "above_average":
            # mean of the distinct ranks is 1/distinct; compare in integers
            return sorted(c for c, n in tally.counts.items() if n * distinct > total)
        return sorted(c for c, n in tally.counts.items() if n / total > self.alpha)


@dataclass(frozen=True)
class ThesaurusEntry:
    id: int
    offset_pos: OffsetPos
    pos: str
    syn: Mapping[str, tuple]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "offset_pos": str(self.offset_pos),
            "pos": self.pos,
            "syn": {lang: list(words) for lang, words in self.syn.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ThesaurusEntry":
        return cls(
            id=int(obj["id"]),
            offset_pos=OffsetPos.parse(obj["offset_pos"]),
            pos=obj["pos"],
            syn={lang: tuple(words) for lang, words in obj["syn"].items()},
        )


@dataclass
class CoverageReport:
    untranslated: Counter = field(default_factory=Counter)
    members: Counter = field(default_factory=Counter)
    missing_dict: set = field(default_factory=set)
    empty_entries: int = 0

    def to_json(self) -> dict:
        return {
            "members": dict(self.members),
            "untranslated": dict(self.untranslated),
            "missing_dict": sorted(self.missing_dict),
            "empty_entries": self.empty_entries,
        }


def _target_language(dicts: Mapping[str, BilingualDict], language: Optional[str]) -> str:
    targets = {d.target_lang for d in dicts.values()}
    if language:
        targets.add(language)
    if len(targets) != 1:
        raise ValueError(f"dictionaries disagree on the target language: {sorted(targets)}")
    return targets.pop()


def build_thesaurus(
    indexes: Mapping[str, WordnetIndex],
    dicts: Mapping[str, BilingualDict],
    policy: ThresholdPolicy = ThresholdPolicy(),
    *,
    language: Optional[str] = None,
    jobs: int = 1,
    report: Optional[CoverageReport] = None,
) -> list[ThesaurusEntry]:
    """One entry per English synset, ids 1..N in offset-POS order.

    ``dicts`` maps each helper language L to a Dict(L, S); ``language`` names
    S when ``dicts`` is empty.
    """
    if ENG not in indexes:
        raise ValueError("indexes must contain eng")
    target = _target_language(dicts, language)
    report = report if report is not None else CoverageReport()
    langs = [ENG] + [lang for lang in indexes if lang != ENG]
    lookups = {lang: indexed(d) for lang, d in dicts.items()}
    for lang, d in dicts.items():
        if d.source_lang != lang:
            raise ValueError(f"dictionary given for {lang} translates from {d.source_lang}")
    report.missing_dict.update(lang for lang in langs if lang not in dicts)
    ids = sorted(indexes[ENG].synsets, key=str)

    def work(sid: OffsetPos):
        syn = {lang: sorted(indexes[lang].lemmas_of(sid)) for lang in langs}
        raw, members, untranslated = [], Counter(), Counter()
        for lang in langs:
            lookup = lookups.get(lang)
            if lookup is None:
                continue
            for word in syn[lang]:
                found = lookup(word, sid.pos)
                members[lang] += 1
                if not found:
                    untranslated[lang] += 1
                raw.extend(found)
        accepted = policy.accept(CandidateTally.of(raw))
        return syn, accepted, members, untranslated

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, ids))
    else:
        results = [work(sid) for sid in ids]

    entries = []
    for n, (sid, (syn, accepted, members, untranslated)) in enumerate(zip(ids, results), 1):
        report.members.update(members)
        report.untranslated.update(untranslated)
        if not accepted:
            report.empty_entries += 1
        full = {target: tuple(accepted)}
        full.update((lang, tuple(words)) for lang, words in syn.items())
        entries.append(ThesaurusEntry(n, sid, sid.pos, full))
    return entries


def derive_helper_dicts(
    dict_s_eng: BilingualDict,
    pivot_dicts: Mapping[str, BilingualDict],
    eng_index: WordnetIndex,
    cfg: SimConfig = SimConfig(),
) -> dict[str, BilingualDict]:
    """Dict(L, S) for English (via DRwS) and each pivot language (via DR)."""
    out = {ENG: reverse_drws(dict_s_eng, eng_index, cfg)}
    for lang, d in pivot_dicts.items():
        if d.source_lang != dict_s_eng.source_lang or d.target_lang != lang:
            raise ValueError(f"pivot dictionary for {lang} has pair {d.pair}")
        out[lang] = reverse_dr(d)
    return out


def drop_empty(entries: Iterable[ThesaurusEntry], language: str) -> list[ThesaurusEntry]:
    """Keep entries with a non-empty ``language`` set, renumbered from 1."""
    kept = [e for e in entries if e.syn.get(language)]
    return [ThesaurusEntry(i, e.offset_pos, e.pos, e.syn) for i, e in enumerate(kept, 1)]


def dumps_jsonl(entries: Iterable[ThesaurusEntry]) -> str:
    return "".join(json.dumps(e.to_json(), ensure_ascii=False) + "\n" for e in entries)


def loads_jsonl(text: str) -> list[ThesaurusEntry]:
    return [ThesaurusEntry.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]


def dumps_tsv(entries: list[ThesaurusEntry]) -> str:
    langs: list[str] = []
    for e in entries:
        langs.extend(lang for lang in e.syn if lang not in langs)
    lines = ["\t".join(["id", "offset_pos", "pos", *langs])]
    for e in entries:
        cols = ["|".join(e.syn.get(lang, ())) for lang in langs]
        lines.append("\t".join([str(e.id), str(e.offset_pos), e.pos, *cols]))
    return "\n".join(lines) + "\n"


def loads_tsv(text: str) -> list[ThesaurusEntry]:
    rows = [line.split("\t") for line in text.splitlines() if line]
    header, body = rows[0], rows[1:]
    langs = header[3:]
    return [
        ThesaurusEntry(
            int(row[0]),
            OffsetPos.parse(row[1]),
            row[2],
            {lang: tuple(col.split("|")) if col else () for lang, col in zip(langs, row[3:])},
        )
        for row in body
    ]


def serialize_thesaurus(entries: list[ThesaurusEntry], path, format: str = "jsonl") -> None:
    if format == "jsonl":
        atomic_write_text(path, dumps_jsonl(entries))
    elif format == "tsv":
        atomic_write_text(path, dumps_tsv(entries))
    else:
        raise ValueError(f"format must be jsonl or tsv, got {format!r}")


def load_thesaurus(path) -> list[ThesaurusEntry]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads_tsv(text) if str(path).endswith(".tsv") else loads_jsonl(text)
