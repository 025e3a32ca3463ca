"""Bilingual dictionaries: data model, TSV I/O and merging.

A dictionary file is UTF-8 TSV with one translation per line::

    # lexgen-dict source=chr target=eng
    amequohi	n	ocean
    ustalanali	n	sea

The header comment is optional; without it the language pair must be passed
to :func:`load_dict` or be recoverable from a ``<name>.<src>-<tgt>.tsv``
file name.
"""
from __future__ import annotations

import json
import logging
import os
import re
import tempfile
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional

from lexgen.wordnet import POS_TAGS, WordnetIndex

logger = logging.getLogger(__name__)

UNKNOWN = "unknown"
POS_VOCAB = POS_TAGS + (UNKNOWN,)

_HEADER = re.compile(r"^#\s*lexgen-dict\b(.*)$")
_PAIR_IN_NAME = re.compile(r"(?:^|[._])([a-z]{2,3})-([a-z]{2,3})$")


class DictFormatError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


def normalize_text(text: str) -> str:
    """NFC, case-fold, collapse whitespace. Used for headwords and translations."""
    return " ".join(unicodedata.normalize("NFC", text).casefold().split())


def is_multiword(text: str) -> bool:
    return " " in normalize_text(text)


@dataclass(frozen=True, order=True)
class DictEntry:
    headword: str
    pos: str
    translation: str

    @classmethod
    def make(cls, headword: str, pos: str, translation: str) -> "DictEntry":
        headword, translation = normalize_text(headword), normalize_text(translation)
        if not headword or not translation:
            raise ValueError("headword and translation must be non-empty")
        pos = pos if pos in POS_VOCAB else UNKNOWN
        return cls(headword, pos, translation)

    def swapped(self) -> "DictEntry":
        return DictEntry(self.translation, self.pos, self.headword)


@dataclass(frozen=True)
class BilingualDict:
    """Canonical (sorted, duplicate-free) list of entries for one language pair."""

    source_lang: str
    target_lang: str
    entries: tuple[DictEntry, ...] = ()

    def __post_init__(self):
        if self.source_lang == self.target_lang:
            raise ValueError(f"source and target language are both {self.source_lang!r}")
        object.__setattr__(self, "entries", tuple(sorted(set(self.entries))))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[DictEntry]:
        return iter(self.entries)

    @property
    def pair(self) -> tuple[str, str]:
        return (self.source_lang, self.target_lang)

    def headwords(self) -> list[tuple[str, str]]:
        return sorted({(e.headword, e.pos) for e in self.entries})

    def translations(self) -> dict[tuple[str, str], list[str]]:
        """(headword, pos) -> translations, in canonical order."""
        out: dict[tuple[str, str], list[str]] = {}
        for e in self.entries:
            out.setdefault((e.headword, e.pos), []).append(e.translation)
        return out

    def lookup(self, headword: str, pos: Optional[str] = None) -> list[str]:
        """Translations of ``headword``.

        With ``pos``, entries of exactly that POS are preferred; when there are
        none, every entry for the headword is used regardless of POS.
        """
        return _Lookup(self)(headword, pos)

    def replace(self, entries: Iterable[DictEntry]) -> "BilingualDict":
        return BilingualDict(self.source_lang, self.target_lang, tuple(entries))


class _Lookup:
    """Headword-keyed view of a dictionary for repeated lookups."""

    def __init__(self, d: BilingualDict):
        self._by_key: dict[tuple[str, str], list[str]] = {}
        self._by_head: dict[str, list[str]] = {}
        for e in d.entries:
            self._by_key.setdefault((e.headword, e.pos), []).append(e.translation)
            self._by_head.setdefault(e.headword, []).append(e.translation)

    def __call__(self, headword: str, pos: Optional[str]) -> list[str]:
        key = normalize_text(headword)
        if pos is not None and (key, pos) in self._by_key:
            return self._by_key[(key, pos)]
        return self._by_head.get(key, [])


def indexed(d: BilingualDict) -> _Lookup:
    return _Lookup(d)


def load_pos_map(path) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        mapping = json.load(fh)
    bad = {k: v for k, v in mapping.items() if v not in POS_VOCAB}
    if bad:
        raise ValueError(f"POS map targets must be in {POS_VOCAB}: {bad}")
    return mapping


def _pair_from_name(path) -> Optional[tuple[str, str]]:
    stem = Path(path).name
    if stem.endswith(".tsv"):
        stem = stem[:-4]
    m = _PAIR_IN_NAME.search(stem)
    return (m.group(1), m.group(2)) if m else None


def load_dict(
    path,
    source_lang: Optional[str] = None,
    target_lang: Optional[str] = None,
    *,
    pos_map: Optional[Mapping[str, str]] = None,
    warnings: Optional[Counter] = None,
) -> BilingualDict:
    """Read a dictionary TSV file.

    Raises :class:`DictFormatError` on a malformed line. POS tags outside the
    fixed vocabulary are mapped through ``pos_map`` when given, otherwise
    kept as ``unknown`` and counted under ``warnings["unknown_pos"]``.
    """
    warnings = warnings if warnings is not None else Counter()
    header_pair: dict[str, str] = {}
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if line.startswith("#"):
                m = _HEADER.match(line)
                if m:
                    header_pair.update(kv.split("=", 1) for kv in m.group(1).split() if "=" in kv)
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise DictFormatError(path, lineno, f"expected 3 tab-separated fields, got {len(fields)}")
            headword, pos, translation = fields
            pos = pos.strip()
            if pos_map and pos in pos_map:
                pos = pos_map[pos]
            elif pos not in POS_VOCAB:
                warnings["unknown_pos"] += 1
                pos = UNKNOWN
            try:
                entries.append(DictEntry.make(headword, pos, translation))
            except ValueError as exc:
                raise DictFormatError(path, lineno, str(exc)) from None

    from_name = _pair_from_name(path) or (None, None)
    source_lang = source_lang or header_pair.get("source") or from_name[0]
    target_lang = target_lang or header_pair.get("target") or from_name[1]
    if not source_lang or not target_lang:
        raise DictFormatError(path, 0, "language pair unknown: add a header or pass source/target")
    if len(entries) != len(set(entries)):
        warnings["duplicate_entry"] += len(entries) - len(set(entries))
    return BilingualDict(source_lang, target_lang, tuple(entries))


def dumps_dict(d: BilingualDict) -> str:
    lines = [f"# lexgen-dict source={d.source_lang} target={d.target_lang}"]
    lines += [f"{e.headword}\t{e.pos}\t{e.translation}" for e in d.entries]
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def save_dict(d: BilingualDict, path) -> None:
    atomic_write_text(path, dumps_dict(d))


def merge_dicts(a: BilingualDict, b: BilingualDict) -> BilingualDict:
    """Deduplicated union of two dictionaries for the same language pair."""
    if a.pair != b.pair:
        raise ValueError(f"cannot merge {a.pair} with {b.pair}")
    return a.replace(a.entries + b.entries)


def resolve_pos(entry: DictEntry, eng_index: WordnetIndex, side: str = "translation") -> str:
    """POS of the first sense of the entry's English word; ``n`` when absent.

    ``side`` names which field holds the English word.
    """
    if entry.pos != UNKNOWN:
        return entry.pos
    word = entry.translation if side == "translation" else entry.headword
    senses = eng_index.senses(word)
    return senses[0].pos if senses else "n"
