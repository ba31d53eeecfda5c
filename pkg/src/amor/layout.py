"""Single-line author block layout with Helvetica metrics.

Widths come from ``data/helvetica_winansi.txt``: one ``<code> <width>`` pair
per line, code being the WinAnsi (cp1252) byte and width in 1/1000 em.
Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Sequence

from amor.manifest import AuthorManifest

SUPERSCRIPT_SCALE = 0.7
SUPERSCRIPT_RISE = 0.33
TITLE_SCALE = 1.5
AFFILIATION_SCALE = 0.8
TOP_MARGIN_PT = 72.0


class LayoutError(ValueError):
    pass


class UnmappableCharacterError(LayoutError):
    def __init__(self, char: str, text: str):
        super().__init__(f"character {char!r} (U+{ord(char):04X}) in {text!r} has no WinAnsi Helvetica glyph")
        self.char = char


class LineOverflowError(LayoutError):
    def __init__(self, width: float, page_width: float, text: str):
        super().__init__(f"line {text!r} is {width:.2f}pt wide, page is {page_width:.2f}pt")
        self.width = width
        self.page_width = page_width


@lru_cache(maxsize=None)
def helvetica_widths() -> dict[int, int]:
    table = {}
    text = resources.files("amor").joinpath("data/helvetica_winansi.txt").read_text("ascii")
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code, width = line.split()
        table[int(code)] = int(width)
    return table


def encode_winansi(text: str) -> bytes:
    """Encode for a WinAnsi Helvetica show-text operator; raises on unmappable characters."""
    widths = helvetica_widths()
    out = bytearray()
    for ch in text:
        try:
            b = ch.encode("cp1252")
        except UnicodeEncodeError:
            raise UnmappableCharacterError(ch, text) from None
        if b[0] not in widths:
            raise UnmappableCharacterError(ch, text)
        out += b
    return bytes(out)


def measure_text(text: str, size_pt: float) -> float:
    widths = helvetica_widths()
    units = sum(widths[b] for b in encode_winansi(text))
    return units * size_pt / 1000.0


@dataclass(frozen=True)
class TextRun:
    text: str
    x_pt: float
    y_pt: float
    size_pt: float
    superscript: bool = False
    width_pt: float = 0.0

    @property
    def rise_pt(self) -> float:
        """Offset of ``y_pt`` above the line's body baseline."""
        return SUPERSCRIPT_RISE * self.size_pt / SUPERSCRIPT_SCALE if self.superscript else 0.0


@dataclass(frozen=True)
class RenderedFrame:
    runs: tuple[TextRun, ...]
    line_width_pt: float
    page_width_pt: float

    @property
    def left_margin_pt(self) -> float:
        return self.runs[0].x_pt if self.runs else self.page_width_pt / 2

    @property
    def right_margin_pt(self) -> float:
        return self.page_width_pt - self.left_margin_pt - self.line_width_pt

    @property
    def text(self) -> str:
        """Body text with superscripts dropped."""
        return "".join(r.text for r in self.runs if not r.superscript)


def title_baseline(manifest: AuthorManifest) -> float:
    size = manifest.style.font_size_pt
    return manifest.style.page_height_pt - TOP_MARGIN_PT - TITLE_SCALE * size


def author_baseline(manifest: AuthorManifest) -> float:
    return title_baseline(manifest) - 2.5 * manifest.style.font_size_pt


def _affiliation_label(indices: Sequence[int]) -> str:
    return ",".join(str(i) for i in indices)


def _place(parts: list[tuple[str, float, bool]], y: float, page_width: float) -> RenderedFrame:
    widths = [measure_text(text, size) for text, size, _ in parts]
    line_width = math.fsum(widths)
    if line_width > page_width:
        raise LineOverflowError(line_width, page_width, "".join(t for t, _, _ in parts))
    x = (page_width - line_width) / 2
    runs = []
    for (text, size, sup), w in zip(parts, widths):
        rise = SUPERSCRIPT_RISE * size / SUPERSCRIPT_SCALE if sup else 0.0
        runs.append(TextRun(text, x, y + rise, size, sup, w))
        x += w
    return RenderedFrame(tuple(runs), line_width, page_width)


def layout_frame(frame, manifest: AuthorManifest) -> RenderedFrame:
    """Centered author line: name, superscript affiliation indices, separator."""
    style = manifest.style
    body = style.font_size_pt
    sup = SUPERSCRIPT_SCALE * body
    by_id = {a.id: a for a in manifest.authors}
    ids = list(frame)
    parts: list[tuple[str, float, bool]] = []
    for k, author_id in enumerate(ids):
        try:
            author = by_id[author_id]
        except KeyError:
            raise LayoutError(f"frame references unknown author id {author_id!r}") from None
        parts.append((author.display_name, body, False))
        if author.affiliations:
            parts.append((_affiliation_label(author.affiliations), sup, True))
        if k < len(ids) - 1 and style.separator:
            parts.append((style.separator, body, False))
    parts = [p for p in parts if p[0]]
    return _place(parts, author_baseline(manifest), style.page_width_pt)


def layout_static(manifest: AuthorManifest) -> list[RenderedFrame]:
    """Title line plus one line per affiliation; identical in every frame."""
    style = manifest.style
    body = style.font_size_pt
    lines = []
    if manifest.title:
        lines.append(_place([(manifest.title, TITLE_SCALE * body, False)],
                            title_baseline(manifest), style.page_width_pt))
    size = AFFILIATION_SCALE * body
    y = author_baseline(manifest) - 2.0 * body
    for i, name in enumerate(manifest.affiliations, start=1):
        parts = [(str(i), SUPERSCRIPT_SCALE * size, True), (name, size, False)]
        lines.append(_place([p for p in parts if p[0]], y, style.page_width_pt))
        y -= 1.4 * size
    return lines
