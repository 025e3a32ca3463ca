from pathlib import Path

import pytest

from lexgen.dictionary import load_dict
from lexgen.translate import TableBackend
from lexgen.wordnet import load_wordnet

FIXTURES = Path(__file__).parent / "fixtures"

# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixtures():
    return FIXTURES


@pytest.fixture(scope="session")
def eng():
    return load_wordnet(FIXTURES / "mini-eng.jsonl", "eng")


@pytest.fixture(scope="session")
def indexes(eng):
    out = {"eng": eng}
    for lang in ("fin", "fra", "jpn"):
        out[lang] = load_wordnet(FIXTURES / f"mini-{lang}.tab", lang, relations=eng)
    return out


@pytest.fixture(scope="session")
def seaocean():
    return load_dict(FIXTURES / "seaocean.chr-eng.tsv")


@pytest.fixture(scope="session")
def throat_backend():
    return TableBackend.from_file(FIXTURES / "throat-table.tsv")
