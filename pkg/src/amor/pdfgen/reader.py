"""Tokenizer and object reader for the PDFs this package writes.

Not a general PDF reader: no compressed streams, object streams, xref
streams or incremental updates.  Every failure reports the byte offset.
"""
from __future__ import annotations

import re
from typing import Any

from amor.pdfgen.objects import Name, Ref, Stream

WHITESPACE = b"\x00\t\n\x0c\r "
DELIMITERS = b"()<>[]{}/%"
_ESCAPES = {ord("n"): 10, ord("r"): 13, ord("t"): 9, ord("b"): 8, ord("f"): 12,
            ord("("): 40, ord(")"): 41, ord("\\"): 92}


class PdfFormatError(ValueError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} at byte {offset}")
        self.offset = offset


class Keyword(str):
    """A bare token such as ``obj``, ``R`` or a content-stream operator."""


class Lexer:
    def __init__(self, data: bytes, pos: int = 0, end: int | None = None):
        self.data = data
        self.pos = pos
        self.end = len(data) if end is None else end

    def error(self, msg: str, at: int | None = None) -> PdfFormatError:
        return PdfFormatError(msg, self.pos if at is None else at)

    def skip_ws(self) -> None:
        data, end = self.data, self.end
        while self.pos < end:
            c = data[self.pos]
            if c in WHITESPACE:
                self.pos += 1
            elif c == 0x25:  # %
                while self.pos < end and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                break

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= self.end

    def token(self) -> Any:
        """Next primitive token (number, name, string, keyword or delimiter)."""
        self.skip_ws()
        if self.pos >= self.end:
            raise self.error("unexpected end of data")
        data = self.data
        start = self.pos
        c = data[start]
        if c == 0x2F:  # /
            self.pos += 1
            while self.pos < self.end and data[self.pos] not in WHITESPACE and data[self.pos] not in DELIMITERS:
                self.pos += 1
            raw = data[start + 1:self.pos]
            return Name(re.sub(rb"#([0-9A-Fa-f]{2})", lambda m: bytes([int(m.group(1), 16)]), raw).decode("utf-8"))
        if c == 0x28:  # (
            return self._literal_string()
        if c == 0x3C:  # <
            if data[start + 1:start + 2] == b"<":
                self.pos += 2
                return Keyword("<<")
            end = data.find(b">", start)
            if end < 0 or end > self.end:
                raise self.error("unterminated hex string")
            hexdigits = re.sub(rb"\s", b"", data[start + 1:end])
            self.pos = end + 1
            try:
                return bytes.fromhex((hexdigits + b"0" * (len(hexdigits) % 2)).decode("ascii"))
            except ValueError:
                raise self.error("bad hex string", start) from None
        if c == 0x3E:  # >
            if data[start + 1:start + 2] == b">":
                self.pos += 2
                return Keyword(">>")
            raise self.error("stray '>'")
        if c in b"[]{}":
            self.pos += 1
            return Keyword(chr(c))
        if c == 0x29:
            raise self.error("stray ')'")
        while self.pos < self.end and data[self.pos] not in WHITESPACE and data[self.pos] not in DELIMITERS:
            self.pos += 1
        word = data[start:self.pos].decode("latin-1")
        if re.fullmatch(r"[+-]?\d+", word):
            return int(word)
        if re.fullmatch(r"[+-]?(\d+\.\d*|\.\d+)", word):
            return float(word)
        return Keyword(word)

    def _literal_string(self) -> bytes:
        data = self.data
        start = self.pos
        self.pos += 1
        depth = 1
        out = bytearray()
        while True:
            if self.pos >= self.end:
                raise self.error("unterminated string", start)
            c = data[self.pos]
            self.pos += 1
            if c == 0x5C:  # backslash
                if self.pos >= self.end:
                    raise self.error("unterminated string", start)
                e = data[self.pos]
                self.pos += 1
                if e in _ESCAPES:
                    out.append(_ESCAPES[e])
                elif 0x30 <= e <= 0x37:
                    digits = bytes([e])
                    while len(digits) < 3 and self.pos < self.end and 0x30 <= data[self.pos] <= 0x37:
                        digits += data[self.pos:self.pos + 1]
                        self.pos += 1
                    out.append(int(digits, 8) & 0xFF)
                elif e == 0x0D:
                    if data[self.pos:self.pos + 1] == b"\n":
                        self.pos += 1
                elif e == 0x0A:
                    pass
                else:
                    out.append(e)
            elif c == 0x28:
                depth += 1
                out.append(c)
            elif c == 0x29:
                depth -= 1
                if depth == 0:
                    return bytes(out)
                out.append(c)
            else:
                out.append(c)

    def object(self) -> Any:
        """Parse one complete object, resolving ``n g R`` into :class:`Ref`."""
        start = self.pos
        tok = self.token()
        if isinstance(tok, Keyword):
            if tok == "[":
                items = []
                while True:
                    self.skip_ws()
                    if self.data[self.pos:self.pos + 1] == b"]":
                        self.pos += 1
                        return items
                    if self.pos >= self.end:
                        raise self.error("unterminated array", start)
                    items.append(self.object())
            if tok == "<<":
                d = {}
                while True:
                    self.skip_ws()
                    if self.data[self.pos:self.pos + 2] == b">>":
                        self.pos += 2
                        return d
                    if self.pos >= self.end:
                        raise self.error("unterminated dictionary", start)
                    key_at = self.pos
                    key = self.token()
                    if not isinstance(key, Name):
                        raise self.error("dictionary key is not a name", key_at)
                    d[key] = self.object()
            if tok == "true":
                return True
            if tok == "false":
                return False
            if tok == "null":
                return None
            raise self.error(f"unexpected token {tok!r}", start)
        if isinstance(tok, int) and not isinstance(tok, bool):
            save = self.pos
            try:
                gen = self.token()
                r = self.token()
            except PdfFormatError:
                self.pos = save
                return tok
            if isinstance(gen, int) and r == "R":
                return Ref(tok, gen)
            self.pos = save
        return tok


class PdfReader:
    def __init__(self, data: bytes):
        self.data = data
        if not data.startswith(b"%PDF-"):
            raise PdfFormatError("missing %PDF- header", 0)
        eol = data.find(b"\n")
        self.version = data[5:eol].decode("ascii", "replace").strip()
        self.offsets: dict[int, int] = {}
        self._cache: dict[int, Any] = {}
        self.trailer = self._read_xref()
        for num in self.offsets:
            self._check_header(num)
        if "Root" not in self.trailer:
            raise PdfFormatError("trailer has no /Root", len(data))
        self.root_ref = self.trailer["Root"]

    def _read_xref(self) -> dict:
        data = self.data
        tail = data.rfind(b"startxref")
        if tail < 0:
            raise PdfFormatError("no startxref", len(data))
        lex = Lexer(data, tail + len(b"startxref"))
        xref_at = lex.token()
        if not isinstance(xref_at, int) or not 0 <= xref_at < len(data):
            raise PdfFormatError("bad startxref offset", lex.pos)
        if data[lex.pos:].strip() != b"%%EOF":
            raise PdfFormatError("missing %%EOF marker", lex.pos)
        lex = Lexer(data, xref_at)
        if lex.token() != "xref":
            raise PdfFormatError("startxref does not point at an xref table", xref_at)
        while True:
            at = lex.pos
            first = lex.token()
            if first == "trailer":
                break
            count = lex.token()
            if not isinstance(first, int) or not isinstance(count, int):
                raise PdfFormatError("bad xref subsection header", at)
            for num in range(first, first + count):
                at = lex.pos
                offset, gen, kind = lex.token(), lex.token(), lex.token()
                if kind == "n":
                    if not isinstance(offset, int) or not 0 <= offset < len(data):
                        raise PdfFormatError(f"object {num} offset out of range", at)
                    self.offsets[num] = offset
                elif kind != "f":
                    raise PdfFormatError("bad xref entry", at)
        at = lex.pos
        trailer = lex.object()
        if not isinstance(trailer, dict):
            raise PdfFormatError("trailer is not a dictionary", at)
        return trailer

    def _check_header(self, num: int) -> None:
        at = self.offsets[num]
        m = re.match(rb"(\d+)\s+(\d+)\s+obj\b", self.data[at:at + 32])
        if not m or int(m.group(1)) != num:
            raise PdfFormatError(f"xref offset for object {num} does not point at '{num} 0 obj'", at)

    def get(self, num: int) -> Any:
        if num in self._cache:
            return self._cache[num]
        if num not in self.offsets:
            raise PdfFormatError(f"object {num} not in xref", len(self.data))
        at = self.offsets[num]
        lex = Lexer(self.data, at)
        lex.token(), lex.token(), lex.token()  # n g obj
        obj_at = lex.pos
        obj = lex.object()
        lex.skip_ws()
        if self.data.startswith(b"stream", lex.pos):
            if not isinstance(obj, dict):
                raise PdfFormatError("stream without dictionary", obj_at)
            p = lex.pos + len(b"stream")
            if self.data[p:p + 2] == b"\r\n":
                p += 2
            elif self.data[p:p + 1] == b"\n":
                p += 1
            length = obj.get("Length")
            if isinstance(length, Ref):
                length = self.get(length.num)
            if not isinstance(length, int) or p + length > len(self.data):
                raise PdfFormatError("bad stream /Length", obj_at)
            body = self.data[p:p + length]
            tail = Lexer(self.data, p + length)
            if tail.token() != "endstream":
                raise PdfFormatError("stream /Length does not reach endstream", p + length)
            lex = tail
            s = Stream(body)
            s.entries = {k: v for k, v in obj.items() if k != "Length"}
            obj = s
        if lex.token() != "endobj":
            raise PdfFormatError(f"object {num} lacks endobj", lex.pos)
        self._cache[num] = obj
        return obj

    def resolve(self, obj: Any) -> Any:
        seen = set()
        while isinstance(obj, Ref):
            if obj.num in seen:
                raise PdfFormatError(f"reference cycle at object {obj.num}", self.offsets.get(obj.num, 0))
            seen.add(obj.num)
            obj = self.get(obj.num)
        return obj

    @property
    def root(self) -> dict:
        return self.resolve(self.root_ref)

    def check_references(self) -> None:
        """Every indirect reference must point at an object in the xref."""
        def walk(obj):
            if isinstance(obj, Ref):
                if obj.num not in self.offsets:
                    raise PdfFormatError(f"dangling reference {obj.num} {obj.gen} R", len(self.data))
            elif isinstance(obj, dict):
                for v in obj.values():
                    walk(v)
            elif isinstance(obj, list):
                for v in obj:
                    walk(v)
            elif isinstance(obj, Stream):
                walk(obj.entries)
        walk(self.trailer)
        for num in self.offsets:
            walk(self.get(num))


def content_operations(data: bytes) -> list[tuple[str, list]]:
    """Split a content stream into ``(operator, operands)`` pairs."""
    lex = Lexer(data)
    ops = []
    operands: list = []
    while not lex.at_end():
        tok = lex.token()
        if isinstance(tok, Keyword) and tok in ("[", "<<"):
            lex.pos -= len(tok)
            operands.append(lex.object())
        elif isinstance(tok, Keyword) and tok not in ("true", "false", "null"):
            ops.append((str(tok), operands))
            operands = []
        else:
            operands.append(tok)
    if operands:
        raise PdfFormatError("operands without operator at end of content stream", len(data))
    return ops
