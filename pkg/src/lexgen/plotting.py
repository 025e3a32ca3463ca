"""Figures written next to the CLI's tabular outputs."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from lexgen.wordnet import POS_TAGS, WordnetStats  # noqa: E402

POS_NAMES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv", "s": "adj sat."}

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_wordnet_stats(stats: Sequence[WordnetStats], path) -> Path:
    """Grouped bars of synsets per POS, one group per language."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        width = 0.8 / max(len(stats), 1)
        for i, st in enumerate(stats):
            xs = [p + i * width for p in range(len(POS_TAGS))]
            ax.bar(xs, [st.per_pos.get(pos, 0) for pos in POS_TAGS], width, label=f"{st.language} ({st.synsets})")
        ax.set_xticks([p + 0.4 - width / 2 for p in range(len(POS_TAGS))])
        ax.set_xticklabels([POS_NAMES[p] for p in POS_TAGS])
        ax.set_ylabel("synsets")
        if stats:
            ax.legend(frameon=False)
        return _save(fig, path)


def plot_rank_histogram(ranks: Iterable[float], path, title: str = "accepted candidate ranks") -> Path:
    ranks = list(ranks)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.hist(ranks, bins=20, range=(0.0, 1.0), color="C0")
        ax.set_xlabel("rank")
        ax.set_ylabel("entries")
        ax.set_title(f"{title} (n={len(ranks)})")
        return _save(fig, path)


def plot_synset_sizes(sizes: dict[str, list[int]], path) -> Path:
    """Distribution of synonym-set sizes per language."""
    langs = list(sizes)
    top = max((max(v) for v in sizes.values() if v), default=0)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3.5))
        width = 0.8 / max(len(langs), 1)
        for i, lang in enumerate(langs):
            counts = [sizes[lang].count(k) for k in range(top + 1)]
            ax.bar([k + i * width for k in range(top + 1)], counts, width, label=lang)
        ax.set_xlabel("words in synonym set")
        ax.set_ylabel("entries")
        if langs:
            ax.legend(frameon=False)
        return _save(fig, path)
