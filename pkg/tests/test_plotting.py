import warnings

import pytest

from lexgen import plotting
from lexgen.wordnet import wordnet_stats


@pytest.mark.parametrize("empty", [True, False])
def test_figures_are_written(tmp_path, eng, empty):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        paths = [
            plotting.plot_wordnet_stats([] if empty else [wordnet_stats(eng)], tmp_path / "a" / "wn.png"),
            plotting.plot_rank_histogram([] if empty else [0.5, 0.25, 1.0], tmp_path / "ranks.png"),
            plotting.plot_synset_sizes({} if empty else {"eng": [1, 2, 2], "chr": [0, 1, 0]}, tmp_path / "sizes.png"),
        ]
    for p in paths:
        assert p.read_bytes().startswith(b"\x89PNG")
