"""Lexical resources for low-resource languages from a single bilingual dictionary."""
from lexgen.dictionary import BilingualDict, DictEntry, load_dict, merge_dicts, resolve_pos, save_dict
from lexgen.pivot import CandidateTally, PivotConfig, build_pivot_dict, expand_synonyms, rank_candidates
from lexgen.reversal import SimConfig, reverse_dr, reverse_drws, round_trip_integrate, sim_value
from lexgen.thesaurus import ThesaurusEntry, ThresholdPolicy, build_thesaurus, derive_helper_dicts, serialize_thesaurus
from lexgen.translate import CachedBackend, HttpBackend, TableBackend, batch_translate, translate
from lexgen.wordnet import (
    OffsetPos,
    Synset,
    WordnetIndex,
    aligned_lemmas,
    expansion_set,
    load_wordnet,
    synonyms,
    wordnet_stats,
)

__version__ = "0.1.0"
