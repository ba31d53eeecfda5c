from amor.pdfgen.animated import (
    AnimationPlan,
    PdfBuildError,
    build_animated_pdf,
    build_static_pdf,
    start_index,
)
from amor.pdfgen.inspect import AnimationReport, inspect_pdf
from amor.pdfgen.latex import animategraphics_command, emit_latex
from amor.pdfgen.reader import PdfFormatError

__all__ = [
    "AnimationPlan",
    "AnimationReport",
    "PdfBuildError",
    "PdfFormatError",
    "animategraphics_command",
    "build_animated_pdf",
    "build_static_pdf",
    "emit_latex",
    "inspect_pdf",
    "start_index",
]
