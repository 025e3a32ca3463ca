"""Loading and querying Wordnets aligned to the Princeton Wordnet.

Two on-disk formats are understood:

``pwn-data``
    JSON lines, one synset per line::

        {"id": "09426788-n", "lemmas": ["sea"], "hypernyms": [...], "hyponyms": [...]}

``omw-tab``
    Open Multilingual Wordnet tab files::

        09426788-n<TAB>fra:lemma<TAB>mer

    Only ``lemma`` rows are read; definitions and examples are ignored.
    These files carry no relations, so hypernym/hyponym queries on them go
    through an English index that shares the same offset-POS keys.

Lemmas are stored NFC-normalized, case-folded and with spaces replaced by
underscores. Every query accepts either spelling and returns lemmas with
spaces.
"""
from __future__ import annotations

import json
import logging
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional

logger = logging.getLogger(__name__)

POS_TAGS = ("n", "v", "a", "r", "s")
PWN_DATA = "pwn-data"
OMW_TAB = "omw-tab"
FORMATS = (PWN_DATA, OMW_TAB)

ALL_PARTS = frozenset({"synset", "synonyms", "hyponyms", "hypernyms"})

_OFFSET_POS = re.compile(r"^(\d{1,8})-([nvars])$")


class WordnetFormatError(ValueError):
    """A Wordnet file does not conform to its declared format."""

    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


class OffsetPos(NamedTuple):
    offset: str
    pos: str

    @classmethod
    def parse(cls, text: str) -> "OffsetPos":
        m = _OFFSET_POS.match(text.strip())
        if m is None:
            raise ValueError(f"not an offset-POS id: {text!r}")
        return cls(m.group(1).zfill(8), m.group(2))

    def __str__(self) -> str:
        return f"{self.offset}-{self.pos}"


def normalize_lemma(lemma: str) -> str:
    """Internal lemma key: NFC, case-folded, whitespace runs -> ``_``."""
    text = unicodedata.normalize("NFC", lemma).casefold()
    return "_".join(text.replace("_", " ").split())


def display_lemma(lemma: str) -> str:
    return lemma.replace("_", " ")


@dataclass(frozen=True)
class Synset:
    id: OffsetPos
    lemmas: tuple[str, ...]
    hypernyms: tuple[OffsetPos, ...] = ()
    hyponyms: tuple[OffsetPos, ...] = ()

    @property
    def pos(self) -> str:
        return self.id.pos

    def words(self) -> list[str]:
        return [display_lemma(lemma) for lemma in self.lemmas]


@dataclass(frozen=True)
class WordnetStats:
    language: str
    synsets: int
    lemmas: int
    senses: int
    per_pos: Mapping[str, int]
    core_size: int = 0
    core_covered: int = 0

    @property
    def core_coverage(self) -> Optional[float]:
        if not self.core_size:
            return None
        return 100.0 * self.core_covered / self.core_size

    def rows(self) -> list[tuple[str, str]]:
        rows = [
            ("language", self.language),
            ("synsets", str(self.synsets)),
            ("lemmas", str(self.lemmas)),
            ("senses", str(self.senses)),
        ]
        rows += [(f"synsets_{pos}", str(self.per_pos.get(pos, 0))) for pos in POS_TAGS]
        if self.core_size:
            rows.append(("core_size", str(self.core_size)))
            rows.append(("core_covered", str(self.core_covered)))
            rows.append(("core_coverage_pct", f"{self.core_coverage:.2f}"))
        return rows


class WordnetIndex:
    """Immutable synset store for one language.

    ``synsets`` keeps file order, which is also sense order: the first synset
    of a lemma in the file is its first sense.
    """

    def __init__(
        self,
        language: str,
        synsets: Iterable[Synset],
        *,
        relations: Optional["WordnetIndex"] = None,
        warnings: Optional[Mapping[str, int]] = None,
    ):
        table: dict[OffsetPos, Synset] = {}
        for synset in synsets:
            table[synset.id] = synset
        lemma_index: dict[tuple[str, str], list[OffsetPos]] = {}
        for synset in table.values():
            for lemma in synset.lemmas:
                lemma_index.setdefault((lemma, synset.pos), []).append(synset.id)
        self._language = language
        self._synsets = MappingProxyType(table)
        self._lemma_index = MappingProxyType({k: tuple(v) for k, v in lemma_index.items()})
        self._position = MappingProxyType({sid: i for i, sid in enumerate(table)})
        self._relations = relations
        self._warnings = MappingProxyType(dict(warnings or {}))

    def __repr__(self) -> str:
        return f"<WordnetIndex {self._language} synsets={len(self._synsets)}>"

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, sid) -> bool:
        return _as_id(sid) in self._synsets

    def __iter__(self):
        return iter(self._synsets.values())

    @property
    def language(self) -> str:
        return self._language

    @property
    def synsets(self) -> Mapping[OffsetPos, Synset]:
        return self._synsets

    @property
    def lemma_index(self) -> Mapping[tuple[str, str], tuple[OffsetPos, ...]]:
        return self._lemma_index

    @property
    def warnings(self) -> Mapping[str, int]:
        return self._warnings

    @property
    def relations(self) -> Optional["WordnetIndex"]:
        return self._relations

    def with_relations(self, relations: "WordnetIndex") -> "WordnetIndex":
        """Copy of this index that borrows hypernym/hyponym links from ``relations``."""
        return WordnetIndex(
            self._language, self._synsets.values(), relations=relations, warnings=self._warnings
        )

    def synset(self, sid) -> Optional[Synset]:
        return self._synsets.get(_as_id(sid))

    def lemmas_of(self, sid) -> set[str]:
        synset = self.synset(sid)
        return set(synset.words()) if synset else set()

    def senses(self, lemma: str, pos: Optional[str] = None) -> list[OffsetPos]:
        """Synset ids containing ``lemma``, in file order."""
        key = normalize_lemma(lemma)
        if pos is not None:
            return list(self._lemma_index.get((key, pos), ()))
        found = [sid for p in POS_TAGS for sid in self._lemma_index.get((key, p), ())]
        return sorted(found, key=self._position.__getitem__)

    def hypernyms(self, sid) -> tuple[OffsetPos, ...]:
        return self._links(sid, "hypernyms")

    def hyponyms(self, sid) -> tuple[OffsetPos, ...]:
        return self._links(sid, "hyponyms")

    def _links(self, sid, attr: str) -> tuple[OffsetPos, ...]:
        sid = _as_id(sid)
        own = self._synsets.get(sid)
        if own is not None and getattr(own, attr):
            return getattr(own, attr)
        if self._relations is not None and self._relations is not self:
            other = self._relations.synset(sid)
            if other is not None:
                return getattr(other, attr)
        return ()

    def rebuild_lemma_index(self) -> dict[tuple[str, str], tuple[OffsetPos, ...]]:
        rebuilt: dict[tuple[str, str], list[OffsetPos]] = {}
        for synset in self._synsets.values():
            for lemma in synset.lemmas:
                rebuilt.setdefault((lemma, synset.pos), []).append(synset.id)
        return {k: tuple(v) for k, v in rebuilt.items()}


def _as_id(sid) -> OffsetPos:
    if isinstance(sid, OffsetPos):
        return sid
    if isinstance(sid, tuple):
        return OffsetPos(*sid)
    return OffsetPos.parse(sid)


def detect_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".jsonl", ".json", ".ndjson"):
        return PWN_DATA
    return OMW_TAB


def load_wordnet(
    source, language: str = "eng", format: Optional[str] = None, *, relations: Optional[WordnetIndex] = None
) -> WordnetIndex:
    """Read a Wordnet file into a :class:`WordnetIndex`.

    Malformed lines raise :class:`WordnetFormatError` carrying the line
    number. Repeated (offset-POS, lemma) pairs are dropped and counted under
    ``warnings["duplicate_lemma"]``; relation targets missing from the file
    are dropped and counted under ``warnings["dangling_relation"]``.
    """
    format = format or detect_format(source)
    if format not in FORMATS:
        raise ValueError(f"unknown Wordnet format {format!r}; expected one of {FORMATS}")
    warnings: Counter = Counter()
    if format == PWN_DATA:
        records = _read_pwn_data(source, warnings)
    else:
        records = _read_omw_tab(source, language, warnings)

    known = set(records)
    synsets = []
    for sid, (lemmas, hyper, hypo) in records.items():
        kept_hyper = tuple(t for t in hyper if t in known)
        kept_hypo = tuple(t for t in hypo if t in known)
        warnings["dangling_relation"] += len(hyper) - len(kept_hyper) + len(hypo) - len(kept_hypo)
        synsets.append(Synset(sid, tuple(lemmas), kept_hyper, kept_hypo))
    warnings = +warnings
    if warnings:
        logger.info("loaded %s (%s): %s", source, language, dict(warnings))
    return WordnetIndex(language, synsets, relations=relations, warnings=warnings)


def _add_lemmas(lemmas: list[str], new: Iterable[str], warnings: Counter) -> None:
    for raw in new:
        lemma = normalize_lemma(raw)
        if not lemma:
            continue
        if lemma in lemmas:
            warnings["duplicate_lemma"] += 1
        else:
            lemmas.append(lemma)


def _read_pwn_data(path, warnings: Counter) -> dict:
    records: dict[OffsetPos, tuple[list, list, list]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
                sid = OffsetPos.parse(obj["id"])
                lemmas = obj.get("lemmas", [])
                hyper = [OffsetPos.parse(x) for x in obj.get("hypernyms", [])]
                hypo = [OffsetPos.parse(x) for x in obj.get("hyponyms", [])]
            except (ValueError, KeyError, TypeError, AttributeError) as exc:
                raise WordnetFormatError(path, lineno, str(exc)) from None
            if not isinstance(lemmas, list) or not all(isinstance(x, str) for x in lemmas):
                raise WordnetFormatError(path, lineno, "lemmas must be a list of strings")
            entry = records.setdefault(sid, ([], [], []))
            _add_lemmas(entry[0], lemmas, warnings)
            entry[1].extend(h for h in hyper if h not in entry[1])
            entry[2].extend(h for h in hypo if h not in entry[2])
    return records


def _read_omw_tab(path, language: str, warnings: Counter) -> dict:
    records: dict[OffsetPos, tuple[list, list, list]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise WordnetFormatError(path, lineno, f"expected 3 tab-separated fields, got {len(fields)}")
            try:
                sid = OffsetPos.parse(fields[0])
            except ValueError as exc:
                raise WordnetFormatError(path, lineno, str(exc)) from None
            kind = fields[1].rsplit(":", 1)[-1]
            if kind != "lemma":
                continue
            entry = records.setdefault(sid, ([], [], []))
            _add_lemmas(entry[0], [fields[2]], warnings)
    return records


def synonyms(index: WordnetIndex, lemma: str, pos: Optional[str] = None) -> set[str]:
    """All lemmas sharing a synset with ``lemma``, excluding ``lemma`` itself."""
    query = display_lemma(normalize_lemma(lemma))
    out: set[str] = set()
    for sid in index.senses(lemma, pos):
        out.update(index.synsets[sid].words())
    out.discard(query)
    return out


def expansion_set(
    index: WordnetIndex,
    lemma: str,
    pos: Optional[str] = None,
    parts: Iterable[str] = ALL_PARTS,
) -> set[str]:
    """Union of the requested lemma sets over every sense of ``lemma``.

    Hypernyms and hyponyms are followed one level only. The query lemma is
    always part of the result, so an unknown word expands to itself.
    """
    parts = frozenset(parts)
    if not parts:
        raise ValueError("parts must be non-empty")
    unknown = parts - ALL_PARTS
    if unknown:
        raise ValueError(f"unknown expansion parts: {sorted(unknown)}")
    query = display_lemma(normalize_lemma(lemma))
    out = {query}
    for sid in index.senses(lemma, pos):
        if "synset" in parts or "synonyms" in parts:
            out.update(index.synsets[sid].words())
        if "hypernyms" in parts:
            for target in index.hypernyms(sid):
                out |= index.lemmas_of(target)
        if "hyponyms" in parts:
            for target in index.hyponyms(sid):
                out |= index.lemmas_of(target)
    return out


def aligned_lemmas(indexes: Mapping[str, WordnetIndex], sid) -> dict[str, set[str]]:
    """Lemma sets of one offset-POS in every language."""
    if not indexes:
        raise ValueError("indexes must be non-empty")
    sid = _as_id(sid)
    return {lang: index.lemmas_of(sid) for lang, index in indexes.items()}


def wordnet_stats(index: WordnetIndex, core_list: Optional[Iterable] = None) -> WordnetStats:
    per_pos = Counter(sid.pos for sid in index.synsets)
    lemmas = {lemma for lemma, _pos in index.lemma_index}
    senses = sum(len(s.lemmas) for s in index)
    core_size = covered = 0
    if core_list is not None:
        core = {_as_id(x) for x in core_list}
        core_size = len(core)
        covered = sum(1 for sid in core if sid in index.synsets)
    return WordnetStats(
        language=index.language,
        synsets=len(index),
        lemmas=len(lemmas),
        senses=senses,
        per_pos=dict(per_pos),
        core_size=core_size,
        core_covered=covered,
    )


def read_core_list(path) -> list[OffsetPos]:
    """One offset-POS per line; blank lines and ``#`` comments skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(OffsetPos.parse(line.split()[0]))
    return out
