"""Reverse dictionaries: plain swap (DR) and similarity-merged swap (DRwS).

DRwS first drops entries whose translation is a multiword expression, swaps
the remaining ones, and then lets every pair of English headwords whose
phrase similarity reaches the threshold share their translations. Sharing is
pairwise: if a~b and b~c but not a~c, ``a`` does not pick up what ``c`` only
had through ``b``.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Optional

from lexgen.dictionary import UNKNOWN, BilingualDict, DictEntry, is_multiword, merge_dicts, normalize_text
from lexgen.wordnet import ALL_PARTS, WordnetIndex, expansion_set

logger = logging.getLogger(__name__)

WORD_SIMILARITIES = ("overlap", "jaccard")


@dataclass(frozen=True)
class SimConfig:
    threshold: float = 0.9
    parts: frozenset = field(default=ALL_PARTS)
    word_similarity: str = "overlap"

    def __post_init__(self):
        if not 0.0 <= self.threshold:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")
        if self.word_similarity not in WORD_SIMILARITIES:
            raise ValueError(f"word_similarity must be one of {WORD_SIMILARITIES}")
        object.__setattr__(self, "parts", frozenset(self.parts))


def overlap_coefficient(a: set, b: set) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / min(len(a), len(b))


def jaccard(a: set, b: set) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


_WORD_SIM: dict[str, Callable[[set, set], float]] = {"overlap": overlap_coefficient, "jaccard": jaccard}


def _tokens(phrase: str) -> list[str]:
    words = normalize_text(phrase).split()
    if not words:
        raise ValueError("phrase is empty")
    return words


def _directional(left: list[set], right: list[set], word_sim) -> float:
    return sum(max(word_sim(a, b) for b in right) for a in left) / len(left)


def sim_value(
    p1: str,
    p2: str,
    eng_index: WordnetIndex,
    cfg: SimConfig = SimConfig(),
    pos: Optional[str] = None,
) -> float:
    """Phrase similarity in [0, 1] from expansion-set overlap.

    Each word is scored by its best match in the other phrase; the per-word
    scores are averaged, and the two directions are averaged again.
    """
    e1 = [expansion_set(eng_index, w, pos, cfg.parts) for w in _tokens(p1)]
    e2 = [expansion_set(eng_index, w, pos, cfg.parts) for w in _tokens(p2)]
    return _phrase_sim(e1, e2, _WORD_SIM[cfg.word_similarity])


def _phrase_sim(e1: list[set], e2: list[set], word_sim) -> float:
    return 0.5 * (_directional(e1, e2, word_sim) + _directional(e2, e1, word_sim))


def reverse_dr(d: BilingualDict) -> BilingualDict:
    """Swap headword and translation of every entry."""
    return BilingualDict(d.target_lang, d.source_lang, tuple(e.swapped() for e in d.entries))


def similar_pairs(
    headwords: list[tuple[str, str]],
    eng_index: WordnetIndex,
    cfg: SimConfig,
) -> list[tuple[tuple[str, str], tuple[str, str], float]]:
    """Pairs of (headword, pos) keys with similarity >= ``cfg.threshold``.

    Only keys sharing a POS are compared, and ``unknown`` POS keys are never
    paired. Candidates come from an inverted index over expansion members, so
    pairs with disjoint expansions are not scored at all.
    """
    by_pos: dict[str, list[str]] = defaultdict(list)
    for head, pos in headwords:
        if pos != UNKNOWN:
            by_pos[pos].append(head)

    word_sim = _WORD_SIM[cfg.word_similarity]
    found = []
    for pos in sorted(by_pos):
        heads = sorted(set(by_pos[pos]))
        expansions = {
            head: [expansion_set(eng_index, w, pos, cfg.parts) for w in _tokens(head)] for head in heads
        }
        if cfg.threshold <= 0.0:
            candidates = itertools.combinations(heads, 2)
        else:
            members: dict[str, set[str]] = defaultdict(set)
            for head in heads:
                for member in set().union(*expansions[head]):
                    members[member].add(head)
            pairs = set()
            for group in members.values():
                if len(group) > 1:
                    pairs.update(itertools.combinations(sorted(group), 2))
            candidates = sorted(pairs)
        for h1, h2 in candidates:
            score = _phrase_sim(expansions[h1], expansions[h2], word_sim)
            if score >= cfg.threshold:
                found.append(((h1, pos), (h2, pos), score))
    return found


def reverse_drws(
    d: BilingualDict,
    eng_index: WordnetIndex,
    cfg: SimConfig = SimConfig(),
    warnings: Optional[Counter] = None,
) -> BilingualDict:
    """Reverse ``d`` (whose target side is English) and merge similar headwords."""
    kept = [e for e in d.entries if not is_multiword(e.translation)]
    if warnings is not None:
        warnings["multiword_skipped"] += len(d.entries) - len(kept)
    base = reverse_dr(d.replace(kept))
    own = base.translations()
    merged = {key: set(values) for key, values in own.items()}
    pairs = similar_pairs(list(own), eng_index, cfg)
    for a, b, _score in pairs:
        merged[a].update(own[b])
        merged[b].update(own[a])
    if warnings is not None:
        warnings["similar_pairs"] += len(pairs)
    entries = [DictEntry(head, pos, t) for (head, pos), values in merged.items() for t in values]
    return base.replace(entries)


def round_trip_integrate(
    d: BilingualDict,
    eng_index: WordnetIndex,
    cfg: SimConfig = SimConfig(),
    warnings: Optional[Counter] = None,
) -> BilingualDict:
    """Grow ``d`` with the reverse of its own DRwS reverse."""
    return merge_dicts(d, reverse_dr(reverse_drws(d, eng_index, cfg, warnings)))
