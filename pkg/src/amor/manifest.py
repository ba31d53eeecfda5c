"""Author manifest: parsing, validation and canonical serialization.

The manifest is a JSON document::

    {
      "title": "...",
      "affiliations": ["Uni A", "Uni B"],
      "authors": [{"id": "zz", "display_name": "Zippy Zonkers",
                   "given_name": "Zippy", "family_name": "Zonkers",
                   "affiliations": [1], "p_appear": 1.0}],
      "constraints": {"never_together": [["a", "b"]], "never_adjacent": []},
      "style": {"font_size_pt": 12, "separator": ", ",
                "page_width_pt": 612, "page_height_pt": 792},
      "playback": {"fps": 12, "frame_budget": 120, "loop": true,
                   "autoplay": true, "controls": true, "seed": 0}
    }

Only ``authors`` (with ``id`` and ``display_name`` per author) is required.
Unknown keys are rejected at every level.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

U64_MAX = 2**64 - 1

DEFAULT_P_APPEAR = 1.0
DEFAULT_FPS = 12.0
DEFAULT_FRAME_BUDGET = 120
DEFAULT_SEED = 0
DEFAULT_SEPARATOR = ", "
DEFAULT_FONT_SIZE_PT = 12.0
# US Letter
DEFAULT_PAGE_WIDTH_PT = 612.0
DEFAULT_PAGE_HEIGHT_PT = 792.0


class ManifestError(ValueError):
    """Base class for manifest parse failures."""


class ManifestSyntaxError(ManifestError):
    def __init__(self, msg: str, line: int, column: int, pos: int):
        super().__init__(f"JSON syntax error at line {line}, column {column} (char {pos}): {msg}")
        self.line = line
        self.column = column
        self.pos = pos


class ManifestSchemaError(ManifestError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"schema violation at {path}: {msg}")
        self.path = path


class ManifestSemanticError(ManifestError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"semantic violation at {path}: {msg}")
        self.path = path


Pair = tuple[str, str]


def normalize_pair(a: str, b: str) -> Pair:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Author:
    id: str
    display_name: str
    given_name: str
    family_name: str
    affiliations: tuple[int, ...] = ()
    p_appear: float = DEFAULT_P_APPEAR


@dataclass(frozen=True)
class ConstraintSet:
    """Conflict-of-interest pairs, each stored as a lexicographically ordered tuple."""

    never_together: tuple[Pair, ...] = ()
    never_adjacent: tuple[Pair, ...] = ()

    @classmethod
    def from_pairs(cls, never_together: Iterable[Iterable[str]] = (),
                   never_adjacent: Iterable[Iterable[str]] = ()) -> "ConstraintSet":
        def norm(pairs):
            return tuple(sorted({normalize_pair(*p) for p in pairs}))
        return cls(norm(never_together), norm(never_adjacent))

    def is_empty(self) -> bool:
        return not self.never_together and not self.never_adjacent


@dataclass(frozen=True)
class Style:
    font_size_pt: float = DEFAULT_FONT_SIZE_PT
    separator: str = DEFAULT_SEPARATOR
    page_width_pt: float = DEFAULT_PAGE_WIDTH_PT
    page_height_pt: float = DEFAULT_PAGE_HEIGHT_PT


@dataclass(frozen=True)
class Playback:
    fps: float = DEFAULT_FPS
    frame_budget: int = DEFAULT_FRAME_BUDGET
    loop: bool = True
    autoplay: bool = True
    controls: bool = True
    seed: int = DEFAULT_SEED


@dataclass(frozen=True)
class AuthorManifest:
    authors: tuple[Author, ...]
    title: str = ""
    affiliations: tuple[str, ...] = ()
    constraints: ConstraintSet = field(default_factory=ConstraintSet)
    style: Style = field(default_factory=Style)
    playback: Playback = field(default_factory=Playback)

    @property
    def n(self) -> int:
        return len(self.authors)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.authors)

    def author(self, author_id: str) -> Author:
        for a in self.authors:
            if a.id == author_id:
                return a
        raise KeyError(author_id)

    def index_of(self) -> dict[str, int]:
        return {a.id: i for i, a in enumerate(self.authors)}


# -- parsing ---------------------------------------------------------------

_TOP_KEYS = {"title", "affiliations", "authors", "constraints", "style", "playback"}
_AUTHOR_KEYS = {"id", "display_name", "given_name", "family_name", "affiliations", "p_appear"}
_CONSTRAINT_KEYS = {"never_together", "never_adjacent"}
_STYLE_KEYS = {"font_size_pt", "separator", "page_width_pt", "page_height_pt"}
_PLAYBACK_KEYS = {"fps", "frame_budget", "loop", "autoplay", "controls", "seed"}


def _check_keys(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ManifestSchemaError(f"{path}.{key}" if path else key, "unknown field")


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ManifestSchemaError(path, f"expected object, got {type(value).__name__}")
    return value


def _expect_array(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ManifestSchemaError(path, f"expected array, got {type(value).__name__}")
    return value


def _expect_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ManifestSchemaError(path, f"expected string, got {type(value).__name__}")
    return value


def _expect_int(value: Any, path: str) -> int:
    # bool is an int subclass in Python; JSON true/false is not a number
    if isinstance(value, bool) or not isinstance(value, int):
        raise ManifestSchemaError(path, f"expected integer, got {type(value).__name__}")
    return value


def _expect_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ManifestSchemaError(path, f"expected number, got {type(value).__name__}")
    if not math.isfinite(value):
        raise ManifestSchemaError(path, "number must be finite")
    return float(value)


def _expect_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ManifestSchemaError(path, f"expected boolean, got {type(value).__name__}")
    return value


def _split_name(display_name: str) -> tuple[str, str]:
    parts = display_name.split()
    if not parts:
        return "", ""
    return " ".join(parts[:-1]), parts[-1]


def _parse_author(obj: Any, path: str) -> Author:
    obj = _expect_object(obj, path)
    _check_keys(obj, _AUTHOR_KEYS, path)
    for required in ("id", "display_name"):
        if required not in obj:
            raise ManifestSchemaError(f"{path}.{required}", "missing required field")
    author_id = _expect_str(obj["id"], f"{path}.id")
    display = _expect_str(obj["display_name"], f"{path}.display_name")
    given_default, family_default = _split_name(display)
    given = _expect_str(obj.get("given_name", given_default), f"{path}.given_name")
    family = _expect_str(obj.get("family_name", family_default), f"{path}.family_name")
    affs = _expect_array(obj.get("affiliations", []), f"{path}.affiliations")
    affs = tuple(_expect_int(v, f"{path}.affiliations[{i}]") for i, v in enumerate(affs))
    p = _expect_number(obj.get("p_appear", DEFAULT_P_APPEAR), f"{path}.p_appear")
    return Author(author_id, display, given, family, affs, p)


def _parse_pairs(value: Any, path: str) -> list[Pair]:
    pairs = []
    for i, item in enumerate(_expect_array(value, path)):
        item = _expect_array(item, f"{path}[{i}]")
        if len(item) != 2:
            raise ManifestSchemaError(f"{path}[{i}]", "expected a 2-element id array")
        a = _expect_str(item[0], f"{path}[{i}][0]")
        b = _expect_str(item[1], f"{path}[{i}][1]")
        pairs.append((a, b))
    return pairs


def manifest_from_dict(doc: Any) -> AuthorManifest:
    """Build a manifest from decoded JSON, applying defaults.

    Raises :class:`ManifestSchemaError` for structural problems and
    :class:`ManifestSemanticError` for duplicate ids or dangling constraint
    references.  Range checks are left to :func:`validate`.
    """
    doc = _expect_object(doc, "$")
    _check_keys(doc, _TOP_KEYS, "")
    if "authors" not in doc:
        raise ManifestSchemaError("authors", "missing required field")

    title = _expect_str(doc.get("title", ""), "title")
    affiliations = tuple(
        _expect_str(v, f"affiliations[{i}]")
        for i, v in enumerate(_expect_array(doc.get("affiliations", []), "affiliations"))
    )
    authors = tuple(
        _parse_author(a, f"authors[{i}]")
        for i, a in enumerate(_expect_array(doc["authors"], "authors"))
    )

    seen: set[str] = set()
    for i, a in enumerate(authors):
        if a.id in seen:
            raise ManifestSemanticError(f"authors[{i}].id", f"duplicate author id {a.id!r}")
        seen.add(a.id)

    cons = _expect_object(doc.get("constraints", {}), "constraints")
    _check_keys(cons, _CONSTRAINT_KEYS, "constraints")
    families = {}
    for name in ("never_together", "never_adjacent"):
        pairs = _parse_pairs(cons.get(name, []), f"constraints.{name}")
        for i, pair in enumerate(pairs):
            for j, ref in enumerate(pair):
                if ref not in seen:
                    raise ManifestSemanticError(
                        f"constraints.{name}[{i}][{j}]", f"unknown author id {ref!r}")
        families[name] = pairs
    constraints = ConstraintSet.from_pairs(families["never_together"], families["never_adjacent"])

    st = _expect_object(doc.get("style", {}), "style")
    _check_keys(st, _STYLE_KEYS, "style")
    style = Style(
        font_size_pt=_expect_number(st.get("font_size_pt", DEFAULT_FONT_SIZE_PT), "style.font_size_pt"),
        separator=_expect_str(st.get("separator", DEFAULT_SEPARATOR), "style.separator"),
        page_width_pt=_expect_number(st.get("page_width_pt", DEFAULT_PAGE_WIDTH_PT), "style.page_width_pt"),
        page_height_pt=_expect_number(st.get("page_height_pt", DEFAULT_PAGE_HEIGHT_PT), "style.page_height_pt"),
    )

    pb = _expect_object(doc.get("playback", {}), "playback")
    _check_keys(pb, _PLAYBACK_KEYS, "playback")
    playback = Playback(
        fps=_expect_number(pb.get("fps", DEFAULT_FPS), "playback.fps"),
        frame_budget=_expect_int(pb.get("frame_budget", DEFAULT_FRAME_BUDGET), "playback.frame_budget"),
        loop=_expect_bool(pb.get("loop", True), "playback.loop"),
        autoplay=_expect_bool(pb.get("autoplay", True), "playback.autoplay"),
        controls=_expect_bool(pb.get("controls", True), "playback.controls"),
        seed=_expect_int(pb.get("seed", DEFAULT_SEED), "playback.seed"),
    )

    return AuthorManifest(
        authors=authors,
        title=title,
        affiliations=affiliations,
        constraints=constraints,
        style=style,
        playback=playback,
    )


def parse_manifest(text: str | bytes) -> AuthorManifest:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ManifestSyntaxError(f"invalid UTF-8: {exc.reason}", 1, 1, exc.start) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestSyntaxError(exc.msg, exc.lineno, exc.colno, exc.pos) from exc
    return manifest_from_dict(doc)


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    path: str
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.severity}: {self.path}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)


def validate(manifest: AuthorManifest) -> ValidationReport:
    """Check every manifest invariant; findings are returned, never raised."""
    out: list[Finding] = []

    def err(path: str, msg: str) -> None:
        out.append(Finding(path, msg))

    if manifest.n < 1:
        err("authors", "at least one author is required")

    seen: set[str] = set()
    for i, a in enumerate(manifest.authors):
        if not a.id:
            err(f"authors[{i}].id", "id must be non-empty")
        elif a.id in seen:
            err(f"authors[{i}].id", f"duplicate author id {a.id!r}")
        seen.add(a.id)
        if not (0.0 <= a.p_appear <= 1.0):
            err(f"authors[{i}].p_appear", f"{a.p_appear!r} outside [0, 1]")
        for j, idx in enumerate(a.affiliations):
            if not (1 <= idx <= len(manifest.affiliations)):
                err(f"authors[{i}].affiliations[{j}]", f"no affiliation with index {idx}")

    families = {
        "never_together": manifest.constraints.never_together,
        "never_adjacent": manifest.constraints.never_adjacent,
    }
    for name, pairs in families.items():
        for k, (a, b) in enumerate(pairs):
            path = f"constraints.{name}[{k}]"
            if a == b:
                err(path, f"self-pair ({a!r}, {a!r})")
            for ref in (a, b):
                if ref not in seen:
                    err(path, f"unknown author id {ref!r}")
    together = {normalize_pair(*p) for p in families["never_together"]}
    for k, pair in enumerate(families["never_adjacent"]):
        if normalize_pair(*pair) in together:
            err(f"constraints.never_adjacent[{k}]",
                f"pair ({pair[0]!r}, {pair[1]!r}) also listed in never_together")

    st = manifest.style
    if not st.font_size_pt > 0:
        err("style.font_size_pt", "must be > 0")
    if not st.page_width_pt > 0:
        err("style.page_width_pt", "must be > 0")
    if not st.page_height_pt > 0:
        err("style.page_height_pt", "must be > 0")

    pb = manifest.playback
    if not (pb.fps > 0 and math.isfinite(pb.fps)):
        err("playback.fps", "must be > 0")
    if pb.frame_budget < 1:
        err("playback.frame_budget", "must be >= 1")
    if not (0 <= pb.seed <= U64_MAX):
        err("playback.seed", "must fit in 64 unsigned bits")

    return ValidationReport(tuple(out))


# -- serialization -----------------------------------------------------------

def manifest_to_dict(manifest: AuthorManifest) -> dict:
    return {
        "title": manifest.title,
        "affiliations": list(manifest.affiliations),
        "authors": [
            {
                "id": a.id,
                "display_name": a.display_name,
                "given_name": a.given_name,
                "family_name": a.family_name,
                "affiliations": list(a.affiliations),
                "p_appear": float(a.p_appear),
            }
            for a in manifest.authors
        ],
        "constraints": {
            "never_together": [list(normalize_pair(*p)) for p in sorted(manifest.constraints.never_together)],
            "never_adjacent": [list(normalize_pair(*p)) for p in sorted(manifest.constraints.never_adjacent)],
        },
        "style": {
            "font_size_pt": float(manifest.style.font_size_pt),
            "separator": manifest.style.separator,
            "page_width_pt": float(manifest.style.page_width_pt),
            "page_height_pt": float(manifest.style.page_height_pt),
        },
        "playback": {
            "fps": float(manifest.playback.fps),
            "frame_budget": manifest.playback.frame_budget,
            "loop": manifest.playback.loop,
            "autoplay": manifest.playback.autoplay,
            "controls": manifest.playback.controls,
            "seed": manifest.playback.seed,
        },
    }


def serialize_manifest(manifest: AuthorManifest) -> str:
    """Canonical JSON: sorted keys, every default written out, trailing newline."""
    return json.dumps(manifest_to_dict(manifest), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
