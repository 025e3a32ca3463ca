"""Straight-line reference implementations used as test oracles.

Nothing here imports lexgen: every oracle reads the raw fixture files itself
and recomputes the result by brute force, so agreement with the pipeline is
evidence rather than tautology.
"""
import json
import unicodedata
from collections import Counter


def norm(text):
    return " ".join(unicodedata.normalize("NFC", text).casefold().replace("_", " ").split())


def read_eng(path):
    """List of (sid, lemmas, hypernyms, hyponyms) in file order."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                r = json.loads(line)
                lemmas = []
                for lemma in r["lemmas"]:
                    if norm(lemma) not in lemmas:
                        lemmas.append(norm(lemma))
                out.append((r["id"], lemmas, r.get("hypernyms", []), r.get("hyponyms", [])))
    return out


def read_tab(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            sid, kind, lemma = line.rstrip("\n").split("\t")
            if kind.endswith(":lemma"):
                words = out.setdefault(sid, [])
                if norm(lemma) not in words:
                    words.append(norm(lemma))
    return out


def read_dict_rows(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            h, p, t = line.rstrip("\n").split("\t")
            rows.append((norm(h), p if p in ("n", "v", "a", "r", "s") else "unknown", norm(t)))
    return sorted(set(rows))


def read_table(path):
    table = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            src, dst, word, trans = line.rstrip("\n").split("\t")
            values = table.setdefault((src, dst, norm(word)), [])
            if norm(trans) not in values:
                values.append(norm(trans))
    return table


# --- similarity -------------------------------------------------------------

def expansion(eng, word, pos):
    word = norm(word)
    by_id = {sid: lemmas for sid, lemmas, _, _ in eng}
    out = {word}
    for sid, lemmas, hyper, hypo in eng:
        if word in lemmas and (pos is None or sid.endswith("-" + pos)):
            out.update(lemmas)
            for target in hyper + hypo:
                out.update(by_id.get(target, []))
    return out


def sim_oracle(eng, p1, p2, pos=None, measure="overlap"):
    def word_sim(a, b):
        inter = len(a & b)
        return inter / (min(len(a), len(b)) if measure == "overlap" else len(a | b))

    e1 = [expansion(eng, w, pos) for w in norm(p1).split()]
    e2 = [expansion(eng, w, pos) for w in norm(p2).split()]
    forward = sum(max(word_sim(a, b) for b in e2) for a in e1) / len(e1)
    backward = sum(max(word_sim(b, a) for a in e1) for b in e2) / len(e2)
    return (forward + backward) / 2


# --- pivot ------------------------------------------------------------------

def pivot_oracle(dict_rows, eng, tabs, table, target, helpers, policy="argmax", theta=0.0):
    """Return sorted (headword, pos, candidate) triples."""
    pairs = {(src, dst) for src, dst, _ in table}
    out = set()
    for s, pos, e in dict_rows:
        if pos == "unknown":
            pos = "n"
            for sid, lemmas, _, _ in eng:
                if norm(e) in lemmas:
                    pos = sid[-1]
                    break
        syn_eng = {norm(e)}
        for sid, lemmas, _, _ in eng:
            if sid.endswith("-" + pos) and norm(e) in lemmas:
                syn_eng.update(lemmas)
        offsets = set()
        for sid, lemmas, _, _ in eng:
            if sid.endswith("-" + pos) and syn_eng & set(lemmas):
                offsets.add(sid)
        syn = {"eng": syn_eng}
        for lang, tab in tabs.items():
            syn[lang] = set()
            for sid in offsets:
                syn[lang].update(tab.get(sid, []))
        raw = []
        for lang in helpers:
            for word in sorted(syn.get(lang, ())):
                if lang == target:
                    raw.append(word)
                elif (lang, target) in pairs:
                    raw.extend(table.get((lang, target, word), []))
        if not raw:
            continue
        counts = Counter(raw)
        total = len(raw)
        if policy == "argmax":
            best = max(counts.values())
            accepted = [c for c in counts if counts[c] == best]
        else:
            accepted = [c for c in counts if counts[c] / total > theta]
        for c in accepted:
            out.add((s, pos, c))
    return sorted(out)


# --- thesaurus (one pass per synset) ----------------------------------------

def thesaurus_oracle(eng, tabs, dict_rows_by_lang, target, policy="above_average", alpha=0.0):
    """Return list of JSON-ready dicts."""
    entries = []
    ids = sorted(sid for sid, _, _, _ in eng)
    lemmas_of = {sid: lemmas for sid, lemmas, _, _ in eng}
    langs = ["eng"] + [lang for lang in tabs]
    next_id = 0
    for sid in ids:
        next_id += 1
        pos = sid.split("-")[1]
        syn = {"eng": sorted(set(lemmas_of[sid]))}
        for lang in tabs:
            syn[lang] = sorted(set(tabs[lang].get(sid, [])))
        candidates = []
        for lang in langs:
            rows = dict_rows_by_lang.get(lang)
            if rows is None:
                continue
            for word in syn[lang]:
                exact = [t for h, p, t in rows if h == word and p == pos]
                if not exact:
                    exact = [t for h, p, t in rows if h == word]
                candidates.extend(exact)
        syn_s = []
        if candidates:
            counts = Counter(candidates)
            total = len(candidates)
            ranks = {c: counts[c] / total for c in counts}
            cut = sum(ranks.values()) / len(ranks) if policy == "above_average" else alpha
            for c in counts:
                if policy == "above_average":
                    if counts[c] * len(counts) > total:
                        syn_s.append(c)
                elif ranks[c] > cut:
                    syn_s.append(c)
        full = {target: sorted(syn_s)}
        full.update(syn)
        entries.append({"id": next_id, "offset_pos": sid, "pos": pos, "syn": full})
    return entries
