"""Rotating "X et al." citations over a small BibTeX subset.

Supported input: ``@type{key, name = {value} | "value" | bareword, ...}``
with balanced braces.  ``@string``, ``@preamble`` and ``crossref`` are
rejected; text between entries is ignored, as BibTeX does.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from amor._kernels import shuffle_indices, splitmix64_next
from amor.manifest import U64_MAX

_AND = re.compile(r"\s+and\s+", re.IGNORECASE)
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_\-]*")
_KEY = re.compile(r"[^\s,{}()\"=#%']+")
_BAREWORD = re.compile(r"[A-Za-z0-9_\-.:+/]+")


class BibParseError(ValueError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class BibEntry:
    key: str
    entry_type: str
    authors: tuple[str, ...]
    fields: dict[str, str] = field(default_factory=dict, compare=True, hash=False)


def split_authors(value: str) -> tuple[str, ...]:
    """Split on `` and `` at brace depth zero."""
    names = []
    depth = 0
    start = 0
    i = 0
    while i < len(value):
        c = value[i]
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
        elif depth == 0:
            m = _AND.match(value, i)
            if m and i > start:
                names.append(value[start:i].strip())
                start = i = m.end()
                continue
        i += 1
    tail = value[start:].strip()
    if tail:
        names.append(tail)
    return tuple(" ".join(n.split()) for n in names if n)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def line(self, pos: int | None = None) -> int:
        return self.text.count("\n", 0, self.pos if pos is None else pos) + 1

    def fail(self, msg: str, pos: int | None = None) -> BibParseError:
        return BibParseError(msg, self.line(pos))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise self.fail(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def braced(self) -> str:
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    self.pos += 1
                    return self.text[start + 1:self.pos - 1]
            self.pos += 1
        raise self.fail("unbalanced braces: '{' never closed", start)

    def quoted(self) -> str:
        start = self.pos
        self.pos += 1
        depth = 0
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth < 0:
                    raise self.fail("unbalanced braces: unexpected '}' in quoted value")
            elif c == '"' and depth == 0:
                self.pos += 1
                return self.text[start + 1:self.pos - 1]
            self.pos += 1
        raise self.fail("unterminated quoted value", start)

    def value(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise self.fail("missing field value")
        c = self.text[self.pos]
        if c == "{":
            return self.braced()
        if c == '"':
            return self.quoted()
        m = _BAREWORD.match(self.text, self.pos)
        if not m:
            raise self.fail(f"unexpected character {c!r} in field value")
        self.pos = m.end()
        return m.group(0)

    def entry(self) -> BibEntry:
        at = self.pos
        self.pos += 1  # @
        self.skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            raise self.fail("missing entry type after '@'")
        entry_type = m.group(0).lower()
        self.pos = m.end()
        if entry_type in ("string", "preamble"):
            raise self.fail(f"@{entry_type} is not supported", at)
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] not in "{(":
            raise self.fail("expected '{' after entry type")
        close = "}" if self.text[self.pos] == "{" else ")"
        body_start = self.pos
        self.pos += 1
        self.skip_ws()
        m = _KEY.match(self.text, self.pos)
        if not m:
            raise self.fail("missing citation key")
        key = m.group(0)
        self.pos = m.end()
        self.skip_ws()
        fields: dict[str, str] = {}
        while True:
            self.skip_ws()
            if self.pos >= len(self.text):
                raise self.fail(f"unbalanced braces: entry {key!r} never closed", body_start)
            c = self.text[self.pos]
            if c == close:
                self.pos += 1
                break
            if c != ",":
                raise self.fail(f"expected ',' or {close!r} in entry {key!r}, found {c!r}")
            self.pos += 1
            self.skip_ws()
            if self.text.startswith(close, self.pos):
                continue
            m = _IDENT.match(self.text, self.pos)
            if not m:
                if self.text.startswith("=", self.pos):
                    raise self.fail("missing field name")
                raise self.fail(f"bad field name in entry {key!r}")
            name = m.group(0).lower()
            self.pos = m.end()
            if name == "crossref":
                raise self.fail("crossref is not supported")
            self.expect("=")
            if name in fields:
                raise self.fail(f"duplicate field {name!r} in entry {key!r}")
            fields[name] = self.value()
        authors = ()
        if "author" in fields:
            authors = split_authors(fields["author"])
            fields["author"] = " and ".join(authors)
        return BibEntry(key, entry_type, authors, fields)

    def parse(self) -> list[BibEntry]:
        entries = []
        keys: dict[str, int] = {}
        while True:
            at = self.text.find("@", self.pos)
            if at < 0:
                stray = self.text.find("}", self.pos)
                if stray >= 0:
                    raise self.fail("unbalanced braces: stray '}'", stray)
                return entries
            stray = self.text.find("}", self.pos, at)
            if stray >= 0:
                raise self.fail("unbalanced braces: stray '}'", stray)
            self.pos = at
            line = self.line()
            if self.text[at + 1:at + 8].lower() == "comment":
                self.pos = at + 8
                self.skip_ws()
                if self.text.startswith("{", self.pos):
                    self.braced()
                continue
            e = self.entry()
            if e.key in keys:
                raise BibParseError(f"duplicate key {e.key!r} (first defined on line {keys[e.key]})", line)
            keys[e.key] = line
            entries.append(e)


def parse_bib(text: str) -> list[BibEntry]:
    return _Parser(text).parse()


def serialize_bib(entries) -> str:
    chunks = []
    for e in entries:
        fields = dict(e.fields)
        if e.authors:
            fields["author"] = " and ".join(e.authors)
        lines = [f"@{e.entry_type}{{{e.key},"]
        for name, value in fields.items():
            lines.append(f"  {name} = {{{value}}},")
        lines.append("}")
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + ("\n" if chunks else "")


def _strip_braces(s: str) -> str:
    return s.replace("{", "").replace("}", "")


def family_name(name: str) -> str:
    """Last whitespace-separated token, or the part before the comma in "Family, Given" form.

    Name particles (von, de, ...) are not treated specially.
    """
    depth = 0
    for i, c in enumerate(name):
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
        elif c == "," and depth == 0:
            return _strip_braces(name[:i].strip())
    # split on whitespace outside braces, so braced groups stay inside their token
    tokens = []
    current = ""
    depth = 0
    for c in name:
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
        if c.isspace() and depth == 0:
            if current:
                tokens.append(current)
            current = ""
        else:
            current += c
    if current:
        tokens.append(current)
    return _strip_braces(tokens[-1]) if tokens else ""


def rotate_citation(entry: BibEntry, epoch: int) -> str:
    if not entry.authors:
        raise ValueError(f"entry {entry.key!r} has no authors")
    if epoch < 0:
        raise ValueError("epoch must be non-negative")
    n = len(entry.authors)
    lead = family_name(entry.authors[epoch % n])
    return f"{lead} et al." if n > 1 else lead


def entry_seed(seed: int, key: str) -> int:
    """Mix the citation key into the seed, one SplitMix64 output per UTF-8 byte."""
    h = seed & U64_MAX
    for b in key.encode("utf-8"):
        _, h = splitmix64_next(h ^ b)
    return h


def shuffle_bib(entries, seed: int) -> list[BibEntry]:
    out = []
    for e in entries:
        if len(e.authors) > 1:
            _, order = shuffle_indices(entry_seed(seed, e.key), list(range(len(e.authors))))
            authors = tuple(e.authors[i] for i in order)
            e = BibEntry(e.key, e.entry_type, authors, {**e.fields, "author": " and ".join(authors)})
        out.append(e)
    return out
