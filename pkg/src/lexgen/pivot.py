"""Build Dict(S, T) from Dict(S, eng) through aligned Wordnets and a translator.

For each entry ``(s, pos, e)`` the English word is expanded to its synonyms,
the synonyms are carried into every helper language through shared synsets,
every word of every helper language is machine-translated into ``T``, and
the translations are tallied. A candidate's rank is its count divided by the
tally total.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from lexgen.dictionary import UNKNOWN, BilingualDict, DictEntry, normalize_text, resolve_pos
from lexgen.translate import TranslationBackend, TranslationError
from lexgen.wordnet import WordnetIndex, display_lemma, normalize_lemma, synonyms

logger = logging.getLogger(__name__)

ENG = "eng"
DEFAULT_HELPERS = ("eng", "fin", "fra", "jpn")


@dataclass(frozen=True)
class CandidateTally:
    counts: Mapping[str, int]

    @classmethod
    def of(cls, raw: Iterable[str]) -> "CandidateTally":
        return cls(Counter(raw))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __len__(self) -> int:
        return len(self.counts)

    def rank(self, candidate: str) -> float:
        total = self.total
        return self.counts.get(candidate, 0) / total if total else 0.0

    def ranked(self) -> list[tuple[str, float]]:
        """Candidates by descending rank; ties in ascending string order."""
        total = self.total
        order = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(cand, count / total) for cand, count in order]

    def argmax(self) -> list[str]:
        if not self.counts:
            return []
        top = max(self.counts.values())
        return sorted(c for c, n in self.counts.items() if n == top)

    def above(self, theta: float) -> list[str]:
        total = self.total
        return sorted(c for c, n in self.counts.items() if n / total > theta)


def rank_candidates(raw: Iterable[str]) -> list[tuple[str, float]]:
    return CandidateTally.of(raw).ranked()


@dataclass(frozen=True)
class PivotConfig:
    helper_langs: tuple = DEFAULT_HELPERS
    rank_policy: str = "argmax"
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "helper_langs", tuple(self.helper_langs))
        if ENG not in self.helper_langs:
            raise ValueError("helper_langs must include eng")
        if self.rank_policy not in ("argmax", "threshold"):
            raise ValueError(f"unknown rank policy {self.rank_policy!r}")
        if self.rank_policy == "threshold" and not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must be in [0, 1], got {self.theta}")

    @classmethod
    def parse_policy(cls, text: str, **kwargs) -> "PivotConfig":
        """``argmax`` or ``threshold:<theta>``."""
        kind, _, value = text.partition(":")
        if kind == "threshold":
            return cls(rank_policy="threshold", theta=float(value), **kwargs)
        if kind == "argmax" and not value:
            return cls(rank_policy="argmax", **kwargs)
        raise ValueError(f"policy must be argmax or threshold:THETA, got {text!r}")

    def accept(self, tally: CandidateTally) -> list[str]:
        if self.rank_policy == "argmax":
            return tally.argmax()
        return tally.above(self.theta)


@dataclass
class PivotReport:
    failures: list = field(default_factory=list)
    warnings: Counter = field(default_factory=Counter)
    accepted_ranks: list = field(default_factory=list)


def expand_synonyms(
    e: str, pos: Optional[str], indexes: Mapping[str, WordnetIndex]
) -> dict[str, set[str]]:
    """SYN_L for every language in ``indexes``.

    English gets ``e`` plus its synonyms. Every other language gets the
    lemmas of all synsets that contain any of those English words.
    """
    eng = indexes[ENG]
    syn_eng = {display_lemma(normalize_lemma(e))} | synonyms(eng, e, pos)
    offsets = {sid for word in syn_eng for sid in eng.senses(word, pos)}
    out = {ENG: syn_eng}
    for lang, index in indexes.items():
        if lang != ENG:
            out[lang] = set().union(*(index.lemmas_of(sid) for sid in offsets))
    return out


def _collect(
    syn: Mapping[str, set[str]],
    cfg: PivotConfig,
    backend: TranslationBackend,
    target: str,
    skipped_langs: set,
) -> list[str]:
    raw = []
    for lang in cfg.helper_langs:
        words = syn.get(lang)
        if not words:
            continue
        if lang == target:
            raw.extend(normalize_text(w) for w in sorted(words))
            continue
        if not backend.supports(lang, target):
            skipped_langs.add(lang)
            continue
        for word in sorted(words):
            raw.extend(backend.translate(word, lang, target))
    return raw


def build_pivot_dict(
    src: BilingualDict,
    indexes: Mapping[str, WordnetIndex],
    backend: TranslationBackend,
    target: str,
    cfg: PivotConfig = PivotConfig(),
    *,
    jobs: int = 1,
    report: Optional[PivotReport] = None,
) -> BilingualDict:
    """Pivot ``src`` (S -> eng) into ``target`` through the helper Wordnets.

    Entries whose translation fails are skipped and listed in
    ``report.failures``; entries without any candidate produce nothing.
    """
    if src.target_lang != ENG:
        raise ValueError(f"source dictionary must translate into eng, not {src.target_lang}")
    report = report if report is not None else PivotReport()
    eng = indexes[ENG]
    skipped_langs: set = set()

    def work(entry: DictEntry):
        pos = resolve_pos(entry, eng) if entry.pos == UNKNOWN else entry.pos
        syn = expand_synonyms(entry.translation, pos, indexes)
        try:
            raw = _collect(syn, cfg, backend, target, skipped_langs)
        except TranslationError as exc:
            return entry, pos, None, str(exc)
        return entry, pos, CandidateTally.of(raw), None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, src.entries))
    else:
        results = [work(entry) for entry in src.entries]

    out = []
    for entry, pos, tally, error in results:
        if error is not None:
            report.failures.append(
                {"headword": entry.headword, "pos": entry.pos, "translation": entry.translation, "error": error}
            )
            report.warnings["translation_failure"] += 1
            continue
        if entry.pos == UNKNOWN:
            report.warnings["pos_resolved"] += 1
        if not tally:
            report.warnings["no_candidates"] += 1
            continue
        for cand in cfg.accept(tally):
            out.append(DictEntry(entry.headword, pos, cand))
            report.accepted_ranks.append(tally.rank(cand))
    for lang in sorted(skipped_langs):
        logger.warning("backend has no %s->%s pair; %s synonyms skipped", lang, target, lang)
        report.warnings[f"unsupported_pair_{lang}"] += 1
    return BilingualDict(src.source_lang, target, tuple(out))
