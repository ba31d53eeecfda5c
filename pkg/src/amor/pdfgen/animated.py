"""Animated and static author-block PDFs.

Each frame's author line is a form XObject.  In the animated file every
XObject carries its own optional content group (OCG); exactly one group is
on by default and a document-level script switches groups on a timer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

from amor.layout import RenderedFrame, encode_winansi, layout_static
from amor.manifest import AuthorManifest
from amor.pdfgen.objects import Name, PdfWriter, Ref, Stream, format_coord, serialize
from amor.pdfgen.script import LAYER_PREFIX, viewer_script
from amor.permute import Schedule

PDF_VERSION = "1.5"
PRODUCER = "amor"
START_MODES = ("viewing_time", "fixed")

BUTTON_WIDTH = 60.0
BUTTON_HEIGHT = 20.0
BUTTON_Y = 30.0


class PdfBuildError(ValueError):
    pass


@dataclass(frozen=True)
class AnimationPlan:
    frame_count: int
    fps: float
    loop: bool = True
    autoplay: bool = True
    controls: bool = True
    start_mode: str = "viewing_time"
    start_frame: int = 0

    def __post_init__(self):
        if self.frame_count < 1:
            raise PdfBuildError("an animation needs at least one frame")
        if not (self.fps > 0 and math.isfinite(self.fps)):
            raise PdfBuildError(f"fps must be positive, got {self.fps!r}")
        if self.start_mode not in START_MODES:
            raise PdfBuildError(f"unknown start mode {self.start_mode!r}")
        if not 0 <= self.start_frame < self.frame_count:
            raise PdfBuildError(f"start frame {self.start_frame} outside 0..{self.frame_count - 1}")

    @classmethod
    def from_schedule(cls, schedule: Schedule, start_mode: str = "viewing_time",
                      start_frame: int = 0) -> "AnimationPlan":
        return cls(len(schedule.frames), schedule.fps, schedule.loop, schedule.autoplay,
                   schedule.controls, start_mode, start_frame)

    def initial_frame(self, clock_ms: int) -> int:
        if self.start_mode == "viewing_time":
            return start_index(clock_ms, self.fps, self.frame_count)
        return self.start_frame


def start_index(clock_ms: float, fps: float, frame_count: int) -> int:
    """Frame on screen at ``clock_ms``; same float expression as the viewer script."""
    return math.floor(clock_ms / (1000 / fps)) % frame_count


def pdf_date(clock_ms: int) -> str:
    dt = datetime.fromtimestamp(clock_ms // 1000, tz=timezone.utc)
    return dt.strftime("D:%Y%m%d%H%M%SZ")


def _text_ops(runs) -> bytes:
    out = bytearray()
    for run in runs:
        body_y = run.y_pt - run.rise_pt
        out += b"BT /F1 %s Tf %s Ts 1 0 0 1 %s %s Tm %s Tj ET\n" % (
            format_coord(run.size_pt), format_coord(run.rise_pt),
            format_coord(run.x_pt), format_coord(body_y),
            serialize(encode_winansi(run.text)))
    return bytes(out)


def _button_appearance(label: str, font: Ref) -> Stream:
    text_w = len(label) * 5.5
    data = (b"0.9 g 0 0 %s %s re f 0 G 0.5 w 0.25 0.25 %s %s re S\n"
            b"BT 0 g /F1 10 Tf 0 Ts 1 0 0 1 %s 6 Tm %s Tj ET\n") % (
        format_coord(BUTTON_WIDTH), format_coord(BUTTON_HEIGHT),
        format_coord(BUTTON_WIDTH - 0.5), format_coord(BUTTON_HEIGHT - 0.5),
        format_coord((BUTTON_WIDTH - text_w) / 2), serialize(encode_winansi(label)))
    return Stream(data, Type=Name("XObject"), Subtype=Name("Form"),
                  BBox=[0, 0, BUTTON_WIDTH, BUTTON_HEIGHT],
                  Resources={Name("Font"): {Name("F1"): font}})


def _document(manifest: AuthorManifest, frames: Sequence[RenderedFrame],
              plan: AnimationPlan | None, clock_ms: int) -> bytes:
    if clock_ms < 0:
        raise PdfBuildError("clock value must be non-negative")
    w, h = manifest.style.page_width_pt, manifest.style.page_height_pt
    static_lines = layout_static(manifest)

    pdf = PdfWriter(PDF_VERSION)
    catalog = pdf.reserve()
    pages = pdf.reserve()
    page = pdf.reserve()
    font = pdf.add({Name("Type"): Name("Font"), Name("Subtype"): Name("Type1"),
                    Name("BaseFont"): Name("Helvetica"), Name("Encoding"): Name("WinAnsiEncoding")})
    info = pdf.add({
        Name("Producer"): PRODUCER,
        Name("Title"): encode_winansi(manifest.title),
        Name("CreationDate"): pdf_date(clock_ms),
        Name("ModDate"): pdf_date(clock_ms),
    })

    ocgs: list[Ref] = []
    xobjects: dict = {}
    for k, frame in enumerate(frames, start=1):
        entries = dict(Type=Name("XObject"), Subtype=Name("Form"), BBox=[0, 0, w, h],
                       Resources={Name("Font"): {Name("F1"): font}})
        if plan is not None:
            ocg = pdf.add({Name("Type"): Name("OCG"), Name("Name"): f"{LAYER_PREFIX}{k}"})
            ocgs.append(ocg)
            entries["OC"] = ocg
        xobjects[Name(f"Fr{k}")] = pdf.add(Stream(_text_ops(frame.runs), **entries))

    content = bytearray()
    for line in static_lines:
        content += _text_ops(line.runs)
    for k in range(1, len(frames) + 1):
        content += b"q /Fr%d Do Q\n" % k
    contents = pdf.add(Stream(bytes(content)))

    page_dict = {
        Name("Type"): Name("Page"),
        Name("Parent"): pages,
        Name("MediaBox"): [0, 0, w, h],
        Name("Resources"): {Name("Font"): {Name("F1"): font}, Name("XObject"): xobjects},
        Name("Contents"): contents,
    }
    cat = {Name("Type"): Name("Catalog"), Name("Pages"): pages}

    if plan is not None:
        on = plan.initial_frame(clock_ms)
        cat[Name("OCProperties")] = {
            Name("OCGs"): ocgs,
            Name("D"): {
                Name("Name"): "AMOR frames",
                Name("BaseState"): Name("OFF"),
                Name("ON"): [ocgs[on]],
                Name("OFF"): [r for i, r in enumerate(ocgs) if i != on],
                Name("Order"): ocgs,
            },
        }
        cat[Name("AMORPlayback")] = {
            Name("Frames"): plan.frame_count,
            Name("FPS"): plan.fps,
            Name("Loop"): plan.loop,
            Name("Autoplay"): plan.autoplay,
            Name("Controls"): plan.controls,
            Name("StartMode"): Name(plan.start_mode),
            Name("StartFrame"): plan.start_frame,
        }
        if plan.frame_count > 1:
            script = viewer_script(plan.frame_count, plan.fps, plan.loop, plan.autoplay,
                                   plan.controls, plan.start_mode, plan.start_frame)
            js = pdf.add(Stream(script.encode("ascii")))
            action = pdf.add({Name("S"): Name("JavaScript"), Name("JS"): js})
            cat[Name("Names")] = {Name("JavaScript"): {Name("Names"): ["AMOR", action]}}
            if plan.controls:
                widgets = []
                x0 = (w - 2 * BUTTON_WIDTH - 8) / 2
                for i, (label, call) in enumerate((("Play", "AMOR_play();"), ("Pause", "AMOR_pause();"))):
                    x = x0 + i * (BUTTON_WIDTH + 8)
                    widgets.append(pdf.add({
                        Name("Type"): Name("Annot"),
                        Name("Subtype"): Name("Widget"),
                        Name("FT"): Name("Btn"),
                        Name("Ff"): 65536,
                        Name("T"): f"amor_{label.lower()}",
                        Name("Rect"): [x, BUTTON_Y, x + BUTTON_WIDTH, BUTTON_Y + BUTTON_HEIGHT],
                        Name("F"): 4,
                        Name("P"): page,
                        Name("MK"): {Name("CA"): label},
                        Name("AP"): {Name("N"): pdf.add(_button_appearance(label, font))},
                        Name("A"): {Name("S"): Name("JavaScript"), Name("JS"): call},
                    }))
                page_dict[Name("Annots")] = widgets
                cat[Name("AcroForm")] = {
                    Name("Fields"): widgets,
                    Name("DA"): "/Helv 0 Tf 0 g",
                    Name("DR"): {Name("Font"): {Name("Helv"): font}},
                }

    pdf.set(page, page_dict)
    pdf.set(pages, {Name("Type"): Name("Pages"), Name("Kids"): [page], Name("Count"): 1})
    pdf.set(catalog, cat)
    return pdf.to_bytes(catalog, info)


def build_animated_pdf(schedule: Schedule, rendered: Sequence[RenderedFrame],
                       manifest: AuthorManifest, *, start_mode: str = "viewing_time",
                       start_frame: int = 0, clock_ms: int = 0) -> bytes:
    """Single-page PDF cycling through ``rendered`` in schedule order.

    ``clock_ms`` fixes the creation date and, in ``viewing_time`` mode, which
    layer is on by default for viewers that do not run the script.
    """
    if len(rendered) != len(schedule.frames):
        raise PdfBuildError(f"{len(rendered)} rendered frames for a {len(schedule.frames)}-frame schedule")
    plan = AnimationPlan.from_schedule(schedule, start_mode, start_frame)
    return _document(manifest, rendered, plan, clock_ms)


def build_static_pdf(frame: RenderedFrame, manifest: AuthorManifest, *, clock_ms: int = 0) -> bytes:
    """One page, one author line, no layers and no script."""
    return _document(manifest, [frame], None, clock_ms)
