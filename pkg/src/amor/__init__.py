"""Author order shuffled at viewing time: animated PDFs, fairness audit, rotating citations."""
from amor._kernels import BACKEND
from amor.cite import BibEntry, parse_bib, rotate_citation, serialize_bib, shuffle_bib
from amor.layout import RenderedFrame, TextRun, layout_frame, measure_text
from amor.manifest import (
    Author,
    AuthorManifest,
    ConstraintSet,
    parse_manifest,
    serialize_manifest,
    validate,
)
from amor.pdfgen import build_animated_pdf, build_static_pdf, emit_latex, inspect_pdf
from amor.permute import (
    Frame,
    Rng,
    Schedule,
    build_schedule,
    enumerate_valid,
    factorial_checked,
    is_valid_frame,
    rng_next,
    sample_visible,
    shuffle,
)
from amor.verify import audit, chi_square_uniform, position_histogram

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Author",
    "AuthorManifest",
    "BibEntry",
    "ConstraintSet",
    "Frame",
    "RenderedFrame",
    "Rng",
    "Schedule",
    "TextRun",
    "audit",
    "build_animated_pdf",
    "build_schedule",
    "build_static_pdf",
    "chi_square_uniform",
    "emit_latex",
    "enumerate_valid",
    "factorial_checked",
    "inspect_pdf",
    "is_valid_frame",
    "layout_frame",
    "measure_text",
    "parse_bib",
    "parse_manifest",
    "position_histogram",
    "rng_next",
    "rotate_citation",
    "sample_visible",
    "serialize_bib",
    "serialize_manifest",
    "shuffle",
    "shuffle_bib",
    "validate",
]
