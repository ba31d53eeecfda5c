"""Read back a generated PDF: frames, playback parameters and per-frame text."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from amor.pdfgen.objects import Name, Ref, Stream
from amor.pdfgen.reader import PdfFormatError, PdfReader, content_operations
from amor.pdfgen.script import LAYER_PREFIX, parse_script_params


@dataclass(frozen=True)
class ExtractedRun:
    text: str
    x_pt: float
    y_pt: float
    size_pt: float
    rise_pt: float

    @property
    def superscript(self) -> bool:
        return self.rise_pt != 0


@dataclass
class AnimationReport:
    version: str
    frame_count: int
    ocg_count: int
    default_on: list[int]
    fps: float | None
    loop: bool | None
    autoplay: bool | None
    controls: bool | None
    start_mode: str | None
    start_frame: int | None
    has_script: bool
    script: str | None
    widgets: list[str]
    title: str
    frame_texts: list[str]
    frame_runs: list[list[ExtractedRun]] = field(repr=False)
    creation_date: str | None = None

    @property
    def animated(self) -> bool:
        return self.ocg_count > 0


def _decode(b) -> str:
    return b.decode("cp1252") if isinstance(b, bytes) else str(b)


def extract_runs(content: bytes) -> list[ExtractedRun]:
    runs = []
    size = 0.0
    rise = 0.0
    x = y = 0.0
    for op, args in content_operations(content):
        if op == "Tf":
            size = float(args[1])
        elif op == "Ts":
            rise = float(args[0])
        elif op == "Tm":
            x, y = float(args[4]), float(args[5])
        elif op == "Td":
            x, y = x + float(args[0]), y + float(args[1])
        elif op == "Tj":
            runs.append(ExtractedRun(_decode(args[0]), x, y + rise, size, rise))
        elif op == "TJ":
            text = "".join(_decode(v) for v in args[0] if isinstance(v, bytes))
            runs.append(ExtractedRun(text, x, y + rise, size, rise))
    return runs


def _frame_number(name: str) -> int | None:
    m = re.fullmatch(r"Fr(\d+)", name)
    return int(m.group(1)) if m else None


def inspect_pdf(data: bytes) -> AnimationReport:
    """Parse a PDF produced by this package.

    Raises :class:`PdfFormatError` (with byte offset) on structural faults or
    when the layers, script and playback dictionary disagree.
    """
    reader = PdfReader(data)
    reader.check_references()
    root = reader.root
    if not isinstance(root, dict) or root.get("Type") != "Catalog":
        raise PdfFormatError("root is not a catalog", reader.offsets.get(reader.root_ref.num, 0))

    def at(ref) -> int:
        return reader.offsets.get(ref.num, 0) if isinstance(ref, Ref) else 0

    pages = reader.resolve(root["Pages"])
    kids = pages.get("Kids", [])
    if len(kids) != 1:
        raise PdfFormatError(f"expected one page, found {len(kids)}", at(root["Pages"]))
    page = reader.resolve(kids[0])
    resources = reader.resolve(page.get("Resources", {}))
    xobjects = reader.resolve(resources.get("XObject", {}))

    numbered = {}
    for name, ref in xobjects.items():
        k = _frame_number(name)
        if k is not None:
            numbered[k] = ref
    if sorted(numbered) != list(range(1, len(numbered) + 1)):
        raise PdfFormatError("frame XObjects are not numbered 1..F", at(kids[0]))
    frame_count = len(numbered)

    frame_runs = []
    frame_ocgs = []
    for k in range(1, frame_count + 1):
        stream = reader.resolve(numbered[k])
        if not isinstance(stream, Stream):
            raise PdfFormatError(f"/Fr{k} is not a stream", at(numbered[k]))
        frame_runs.append(extract_runs(stream.data))
        frame_ocgs.append(stream.entries.get("OC"))

    contents = reader.resolve(page["Contents"])
    if not isinstance(contents, Stream):
        raise PdfFormatError("page /Contents is not a stream", at(page["Contents"]))
    extract_runs(contents.data)
    title = ""
    info = reader.resolve(reader.trailer.get("Info")) if "Info" in reader.trailer else {}
    if isinstance(info, dict) and "Title" in info:
        title = _decode(info["Title"])
    creation = _decode(info["CreationDate"]) if isinstance(info, dict) and "CreationDate" in info else None

    ocg_count = 0
    default_on: list[int] = []
    props = root.get("OCProperties")
    if props is not None:
        props = reader.resolve(props)
        ocg_refs = props.get("OCGs", [])
        ocg_count = len(ocg_refs)
        if ocg_count != frame_count:
            raise PdfFormatError(f"{ocg_count} OCGs for {frame_count} frames", at(reader.root_ref))
        for k, (oc, ref) in enumerate(zip(frame_ocgs, ocg_refs), start=1):
            if oc != ref:
                raise PdfFormatError(f"/Fr{k} is not bound to OCG {k}", at(numbered[k]))
            ocg = reader.resolve(ref)
            if _decode(ocg.get("Name", b"")) != f"{LAYER_PREFIX}{k}":
                raise PdfFormatError(f"OCG {k} has unexpected name", at(ref))
        d = reader.resolve(props.get("D", {}))
        on_refs = d.get("ON", [])
        if d.get("BaseState", Name("ON")) == "ON":
            off = set(d.get("OFF", []))
            on_refs = [r for r in ocg_refs if r not in off]
        default_on = [ocg_refs.index(r) for r in on_refs]
        if len(default_on) != 1:
            raise PdfFormatError(f"{len(default_on)} layers visible by default, expected 1", at(reader.root_ref))

    params = {}
    pb = root.get("AMORPlayback")
    if pb is not None:
        pb = reader.resolve(pb)
        params = {
            "frames": pb["Frames"], "fps": float(pb["FPS"]), "loop": pb["Loop"],
            "autoplay": pb["Autoplay"], "controls": pb["Controls"],
            "startMode": str(pb["StartMode"]), "startFrame": pb["StartFrame"],
        }

    script = None
    names = reader.resolve(root.get("Names", {}))
    if "JavaScript" in names:
        tree = reader.resolve(names["JavaScript"])
        pairs = tree.get("Names", [])
        for i in range(0, len(pairs), 2):
            if _decode(pairs[i]) == "AMOR":
                action = reader.resolve(pairs[i + 1])
                js = reader.resolve(action["JS"])
                script = js.data.decode("ascii") if isinstance(js, Stream) else _decode(js)
        if script is not None:
            try:
                from_script = parse_script_params(script)
            except ValueError as exc:
                raise PdfFormatError(str(exc), at(names["JavaScript"])) from None
            from_script = {k: v for k, v in from_script.items() if k != "prefix"}
            from_script["fps"] = float(from_script["fps"])
            if params and params != from_script:
                raise PdfFormatError("viewer script disagrees with /AMORPlayback", at(reader.root_ref))
            params = from_script

    if params and params["frames"] != frame_count:
        raise PdfFormatError(f"playback declares {params['frames']} frames, file has {frame_count}",
                             at(reader.root_ref))

    widgets = []
    for ref in page.get("Annots", []):
        annot = reader.resolve(ref)
        if annot.get("Subtype") == "Widget":
            widgets.append(_decode(annot.get("T", b"")))

    def body_text(runs):
        return "".join(r.text for r in runs if not r.superscript)

    return AnimationReport(
        version=reader.version,
        frame_count=frame_count,
        ocg_count=ocg_count,
        default_on=default_on,
        fps=params.get("fps"),
        loop=params.get("loop"),
        autoplay=params.get("autoplay"),
        controls=params.get("controls"),
        start_mode=params.get("startMode"),
        start_frame=params.get("startFrame"),
        has_script=script is not None,
        script=script,
        widgets=widgets,
        title=title,
        frame_texts=[body_text(r) for r in frame_runs],
        frame_runs=frame_runs,
        creation_date=creation,
    )
