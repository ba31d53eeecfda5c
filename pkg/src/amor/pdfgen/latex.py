"""LaTeX bundle for the animate package: one PDF per frame plus ``main.tex``."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

from amor.layout import RenderedFrame
from amor.manifest import AuthorManifest
from amor.pdfgen.animated import PdfBuildError, build_static_pdf
from amor.pdfgen.objects import format_number
from amor.permute import Schedule

FRAME_DIR = "frames"
FRAME_STEM = "frame_"


def animate_options(schedule: Schedule) -> list[str]:
    opts = []
    if schedule.controls:
        opts.append("controls")
    if schedule.loop:
        opts.append("loop")
    if schedule.autoplay:
        opts.append("autoplay")
    return opts


def animategraphics_command(schedule: Schedule) -> str:
    opts = animate_options(schedule)
    head = "\\animategraphics" + (f"[{','.join(opts)}]" if opts else "")
    fps = format_number(float(schedule.fps)).decode()
    return f"{head}{{{fps}}}{{{FRAME_DIR}/{FRAME_STEM}}}{{1}}{{{len(schedule.frames)}}}"


def _escape_tex(text: str) -> str:
    repl = {"\\": r"\textbackslash{}", "{": r"\{", "}": r"\}", "$": r"\$", "&": r"\&",
            "#": r"\#", "_": r"\_", "%": r"\%", "~": r"\textasciitilde{}", "^": r"\textasciicircum{}"}
    return "".join(repl.get(c, c) for c in text)


def main_tex(schedule: Schedule, manifest: AuthorManifest) -> str:
    heading = []
    if manifest.title:
        heading = [r"\begin{center}", f"{{\Large {_escape_tex(manifest.title)}\par}}", r"\end{center}"]
    return "\n".join([
        r"\documentclass{article}",
        r"\usepackage[T1]{fontenc}",
        r"\usepackage{graphicx}",
        r"\usepackage{animate}",
        r"\begin{document}",
        *heading,
        r"\begin{figure}[ht]",
        r"\centering",
        r"\resizebox{\linewidth}{!}{%",
        animategraphics_command(schedule) + "%",
        "}",
        r"\end{figure}",
        r"\end{document}",
        "",
    ])


def emit_latex(schedule: Schedule, rendered: Sequence[RenderedFrame], manifest: AuthorManifest,
               out_dir, *, clock_ms: int = 0) -> list[Path]:
    """Write ``frames/frame_<k>.pdf`` (k = 1..F) and ``main.tex``; return the paths written."""
    if len(rendered) != len(schedule.frames):
        raise PdfBuildError(f"{len(rendered)} rendered frames for a {len(schedule.frames)}-frame schedule")
    out = Path(out_dir)
    frames_dir = out / FRAME_DIR
    frames_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for k, frame in enumerate(rendered, start=1):
        path = frames_dir / f"{FRAME_STEM}{k}.pdf"
        path.write_bytes(build_static_pdf(frame, manifest, clock_ms=clock_ms))
        written.append(path)
    tex = out / "main.tex"
    tex.write_text(main_tex(schedule, manifest), encoding="utf-8")
    written.append(tex)
    return written
