import json
import subprocess
import sys

import pytest

from amor.cli import run
from amor.pdfgen import inspect_pdf
from conftest import FIXTURES

FIVE = str(FIXTURES / "five_authors.json")
REFS = str(FIXTURES / "refs.bib")


def write_manifest(tmp_path, doc, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def simple_doc(n=3, **extra):
    doc = {"authors": [{"id": c, "display_name": f"Author {c}"} for c in "ABCDEFGH"[:n]]}
    doc.update(extra)
    return doc


def test_build_five_authors(tmp_path):
    out = tmp_path / "paper.pdf"
    assert run(["build", FIVE, "-o", str(out)]) == 0
    report = inspect_pdf(out.read_bytes())
    assert report.frame_count == 120


def test_build_overrides(tmp_path):
    out = tmp_path / "o.pdf"
    assert run(["build", FIVE, "-o", str(out), "--frames", "10", "--fps", "3", "--seed", "0x10"]) == 0
    report = inspect_pdf(out.read_bytes())
    assert (report.frame_count, report.fps) == (10, 3.0)


def test_build_is_deterministic(tmp_path, monkeypatch):
    monkeypatch.setenv("AMOR_CLOCK_MS", "1700000000123")
    a, b = tmp_path / "a.pdf", tmp_path / "b.pdf"
    assert run(["build", FIVE, "-o", str(a)]) == 0
    assert run(["build", FIVE, "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_clock_changes_default_layer(tmp_path, monkeypatch):
    out = tmp_path / "x.pdf"
    on = set()
    for clock in ("0", "84", "168"):
        monkeypatch.setenv("AMOR_CLOCK_MS", clock)
        assert run(["build", FIVE, "-o", str(out)]) == 0
        on.add(tuple(inspect_pdf(out.read_bytes()).default_on))
    assert on == {(0,), (1,), (2,)}


def test_static(tmp_path):
    out = tmp_path / "s.pdf"
    assert run(["static", FIVE, "-o", str(out), "--mode", "alpha_family"]) == 0
    report = inspect_pdf(out.read_bytes())
    assert report.frame_texts == ["Kurt Gödel, Grace Hopper, Ada Lovelace, Emmy Noether, Zippy Zonkers"]


def test_emit_latex(tmp_path):
    assert run(["emit-latex", FIVE, "-o", str(tmp_path / "tex")]) == 0
    tex = (tmp_path / "tex" / "main.tex").read_text()
    assert "\\animategraphics[controls,loop,autoplay]{12}{frames/frame_}{1}{120}" in tex
    assert len(list((tmp_path / "tex" / "frames").glob("frame_*.pdf"))) == 120


def test_schedule_stdout(capsys):
    assert run(["schedule", FIVE, "--frames", "120"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["frames"]) == 120 and doc["mode"] == "enumeration"


def test_verify_table_and_json(capsys):
    assert run(["verify", FIVE]) == 0
    assert "result: OK" in capsys.readouterr().out
    assert run(["verify", FIVE, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["violation_count"] == 0


def test_verify_failing_schedule(tmp_path, capsys):
    m = write_manifest(tmp_path, simple_doc(3, constraints={"never_adjacent": [["A", "B"]]}))
    sched = tmp_path / "s.json"
    assert run(["schedule", m, "-o", str(sched)]) == 0
    doc = json.loads(sched.read_text())
    doc["frames"][0] = ["A", "B", "C"]
    sched.write_text(json.dumps(doc))
    assert run(["verify", m, "--schedule", str(sched)]) == 3
    assert "violation" in capsys.readouterr().err


def test_cite(capsys):
    assert run(["cite", REFS]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "aa: Weiherer et al."
    assert "solo: Zonkers" in lines
    assert run(["cite", REFS, "--epoch", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "aa: Zonkers et al."


def test_cite_shuffle(tmp_path):
    a, b = tmp_path / "a.bib", tmp_path / "b.bib"
    assert run(["cite", REFS, "--shuffle", "--seed", "5", "-o", str(a)]) == 0
    assert run(["cite", REFS, "--shuffle", "--seed", "5", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "@article{aa," in a.read_text()


# -- exit codes ------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["build", FIVE, "-o", "x.pdf", "--bogus"],
    [],
    ["frobnicate"],
    ["build", FIVE],
    ["build", FIVE, "-o", "x.pdf", "--seed", "-1"],
    ["build", FIVE, "-o", "x.pdf", "--fps", "0"],
    ["build", FIVE, "-o", "x.pdf", "--frames", "0"],
    ["build", FIVE, "-o", "x.pdf", "--mode", "reverse"],
    ["cite", REFS, "--epoch", "-2"],
])
def test_usage_errors_exit_1(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 1
    assert capsys.readouterr().err


def test_bad_clock_env_exit_1(tmp_path, monkeypatch):
    monkeypatch.setenv("AMOR_CLOCK_MS", "soon")
    assert run(["build", FIVE, "-o", str(tmp_path / "x.pdf")]) == 1


def test_help_exits_0(capsys):
    assert run(["--help"]) == 0
    assert "build" in capsys.readouterr().out


def test_dangling_reference_exit_2(tmp_path, capsys):
    m = write_manifest(tmp_path, simple_doc(2, constraints={"never_together": [["A", "ghost"]]}))
    assert run(["build", m, "-o", str(tmp_path / "x.pdf")]) == 2
    assert "ghost" in capsys.readouterr().err


@pytest.mark.parametrize("text", [
    '{"authors": [',
    '{"authors": [{"id": "a", "display_name": "A", "p_appear": 1.5}]}',
    '{"authors": [], "extra": 1}',
    '{"authors": []}',
])
def test_manifest_errors_exit_2(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert run(["schedule", str(path)]) == 2


def test_bad_bib_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.bib"
    path.write_text("@article{a, title = {x}}\n@article{a, title = {y}}\n")
    assert run(["cite", str(path)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_infeasible_exit_3(tmp_path, capsys):
    m = write_manifest(tmp_path, simple_doc(2, constraints={"never_adjacent": [["A", "B"]]}))
    assert run(["build", m, "-o", str(tmp_path / "x.pdf")]) == 3
    assert "'A', 'B'" in capsys.readouterr().err


def test_overflowing_line_exit_3(tmp_path):
    m = write_manifest(tmp_path, {"authors": [{"id": "a", "display_name": "W" * 100}]})
    assert run(["build", m, "-o", str(tmp_path / "x.pdf")]) == 3


def test_large_constrained_manifest_samples_instead_of_enumerating(tmp_path, capsys):
    # 10! exceeds the enumeration guard, so shuffle mode must fall back to sampling
    doc = simple_doc(8, constraints={"never_adjacent": [["A", "B"]]})
    doc["authors"] += [{"id": f"x{i}", "display_name": f"X{i}"} for i in range(2)]
    m = write_manifest(tmp_path, doc)
    assert run(["schedule", m]) == 0
    assert json.loads(capsys.readouterr().out)["mode"] == "sampling"


def test_missing_manifest_exit_4(tmp_path, capsys):
    assert run(["build", str(tmp_path / "nope.json"), "-o", str(tmp_path / "x.pdf")]) == 4
    assert "nope.json" in capsys.readouterr().err


def test_unwritable_output_exit_4(tmp_path):
    assert run(["build", FIVE, "-o", str(tmp_path / "no" / "such" / "dir.pdf")]) == 4


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.pdf"
    proc = subprocess.run([sys.executable, "-m", "amor", "build", FIVE, "-o", str(out), "--frames", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert inspect_pdf(out.read_bytes()).frame_count == 5
