"""Minimal PDF object model and serializer (uncompressed, deterministic)."""
from __future__ import annotations

from decimal import Decimal
from typing import Any, NamedTuple


class Name(str):
    """A PDF name; serialized as ``/Value``."""


class Ref(NamedTuple):
    num: int
    gen: int = 0


class Stream:
    def __init__(self, data: bytes, **entries: Any):
        self.data = data
        self.entries = {Name(k): v for k, v in entries.items()}

    def dictionary(self) -> dict:
        d = dict(self.entries)
        d[Name("Length")] = len(self.data)
        return d


class Raw(bytes):
    """Pre-serialized bytes inserted verbatim."""


_NAME_DELIMS = set(b"()<>[]{}/%#")


def format_number(x: int | float) -> bytes:
    if isinstance(x, bool):
        raise TypeError("bool is not a PDF number")
    if isinstance(x, int):
        return str(x).encode()
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite number")
    if x == int(x) and abs(x) < 2**53:
        return str(int(x)).encode()
    # shortest round-tripping decimal, never in exponent form
    return format(Decimal(repr(x)), "f").encode()


def format_coord(x: float) -> bytes:
    """Coordinates at 1/10000 pt; enough for layout, keeps streams short."""
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return (s if s not in ("-0", "") else "0").encode()


def escape_string(data: bytes) -> bytes:
    out = bytearray(b"(")
    for b in data:
        if b in b"()\\":
            out += b"\\" + bytes([b])
        elif 32 <= b < 127:
            out.append(b)
        else:
            out += b"\\%03o" % b
    out += b")"
    return bytes(out)


def escape_name(name: str) -> bytes:
    out = bytearray(b"/")
    for b in name.encode("utf-8"):
        if b < 33 or b > 126 or b in _NAME_DELIMS:
            out += b"#%02X" % b
        else:
            out.append(b)
    return bytes(out)


def serialize(obj: Any) -> bytes:
    if isinstance(obj, Raw):
        return bytes(obj)
    if obj is None:
        return b"null"
    if obj is True:
        return b"true"
    if obj is False:
        return b"false"
    if isinstance(obj, Name):
        return escape_name(obj)
    if isinstance(obj, Ref):
        return b"%d %d R" % (obj.num, obj.gen)
    if isinstance(obj, (int, float)):
        return format_number(obj)
    if isinstance(obj, bytes):
        return escape_string(obj)
    if isinstance(obj, str):
        return escape_string(obj.encode("cp1252"))
    if isinstance(obj, (list, tuple)):
        return b"[" + b" ".join(serialize(v) for v in obj) + b"]"
    if isinstance(obj, dict):
        parts = [escape_name(k) + b" " + serialize(v) for k, v in obj.items()]
        return b"<<" + b" ".join(parts) + b">>"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class PdfWriter:
    """Collects numbered objects and writes a classic xref-table file."""

    def __init__(self, version: str = "1.5"):
        self.version = version
        self._objects: dict[int, Any] = {}
        self._next = 1

    def reserve(self) -> Ref:
        ref = Ref(self._next)
        self._next += 1
        return ref

    def set(self, ref: Ref, obj: Any) -> Ref:
        self._objects[ref.num] = obj
        return ref

    def add(self, obj: Any) -> Ref:
        return self.set(self.reserve(), obj)

    def to_bytes(self, root: Ref, info: Ref | None = None) -> bytes:
        missing = [n for n in range(1, self._next) if n not in self._objects]
        if missing:
            raise ValueError(f"reserved objects never set: {missing}")
        out = bytearray()
        out += b"%PDF-" + self.version.encode() + b"\n%\xe2\xe3\xcf\xd3\n"
        offsets = {}
        for num in range(1, self._next):
            offsets[num] = len(out)
            obj = self._objects[num]
            out += b"%d 0 obj\n" % num
            if isinstance(obj, Stream):
                out += serialize(obj.dictionary()) + b"\nstream\n" + obj.data + b"\nendstream"
            else:
                out += serialize(obj)
            out += b"\nendobj\n"
        xref_at = len(out)
        out += b"xref\n0 %d\n" % self._next
        out += b"0000000000 65535 f \n"
        for num in range(1, self._next):
            out += b"%010d 00000 n \n" % offsets[num]
        trailer = {Name("Size"): self._next, Name("Root"): root}
        if info is not None:
            trailer[Name("Info")] = info
        out += b"trailer\n" + serialize(trailer) + b"\nstartxref\n%d\n%%%%EOF\n" % xref_at
        return bytes(out)
