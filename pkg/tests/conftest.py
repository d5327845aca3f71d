import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # tests.oracle et al.

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def golden_sentences():
    from fict.conllu import parse_conllu

    with (FIXTURES / "golden.conllu").open(encoding="utf-8") as f:
        return list(parse_conllu(f))


@pytest.fixture(scope="session")
def golden_labels():
    labels = {}
    lines = (FIXTURES / "golden_labels.tsv").read_text(encoding="utf-8").splitlines()
    for line in lines[1:]:
        sent_id, names, _text = line.split("\t")
        labels[sent_id] = frozenset() if names == "-" else frozenset(names.split(";"))
    return labels
