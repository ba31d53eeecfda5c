import json
from pathlib import Path

import pytest

from amor import _pykernels
from amor.manifest import manifest_from_dict, parse_manifest

FIXTURES = Path(__file__).parent / "fixtures"

try:
    from amor import _speedups
except ImportError:  # extension not built
    _speedups = None

BACKENDS = [pytest.param(_pykernels, id="python")]
if _speedups is not None:
    BACKENDS.append(pytest.param(_speedups, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def five_authors():
    return parse_manifest((FIXTURES / "five_authors.json").read_text(encoding="utf-8"))


def make_manifest(n=None, ids=None, **extra):
    """Manifest with authors A, B, C, ... and no affiliations."""
    ids = ids or [chr(ord("A") + i) for i in range(n)]
    doc = {"authors": [{"id": i, "display_name": f"Author {i}"} for i in ids]}
    doc.update(extra)
    return manifest_from_dict(doc)


# -- acceptance summary --------------------------------------------------------

ACCEPTANCE_RESULTS = {}


def record_acceptance(number, title, ok, detail=""):
    line = f"[AC{number:02d}] {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_RESULTS[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(ACCEPTANCE_RESULTS[number])


def load_json(name):
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))
