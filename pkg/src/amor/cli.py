"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 manifest or bibliography parse /
validation error, 3 generation error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from amor.cite import BibParseError, parse_bib, rotate_citation, serialize_bib, shuffle_bib
from amor.layout import LayoutError, layout_frame
from amor.manifest import U64_MAX, AuthorManifest, ManifestError, parse_manifest, validate
from amor.pdfgen import PdfBuildError, build_animated_pdf, build_static_pdf, emit_latex
from amor.permute import Schedule, ScheduleError, build_schedule
from amor.verify import audit

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_GENERATION = 3
EXIT_IO = 4

CLOCK_ENV = "AMOR_CLOCK_MS"
CLI_MODES = ("shuffle", "alpha_given", "alpha_family", "fixed")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class AuditFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"{text} must be a positive number")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text} must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amor", description="Shuffle author order at viewing time.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def generation(p, output_help):
        p.add_argument("manifest", help="author manifest (JSON)")
        p.add_argument("-o", "--output", help=output_help)
        p.add_argument("--seed", type=_u64, help="override playback seed")
        p.add_argument("--fps", type=_positive_float, help="override frames per second")
        p.add_argument("--frames", type=_positive_int, help="override frame budget")
        p.add_argument("--mode", choices=CLI_MODES, default="shuffle")

    generation(sub.add_parser("build", help="write the animated PDF"), "output PDF path")
    generation(sub.add_parser("emit-latex", help="write main.tex and per-frame PDFs"), "output directory")
    generation(sub.add_parser("static", help="write a single-frame PDF"), "output PDF path")
    generation(sub.add_parser("schedule", help="print the schedule as JSON"), "write JSON here instead of stdout")
    p = sub.add_parser("verify", help="audit a schedule")
    generation(p, "write the report here instead of stdout")
    p.add_argument("--schedule", dest="schedule_path", help="audit this schedule JSON instead of building one")
    p.add_argument("--json", action="store_true", help="print the report as JSON")

    p = sub.add_parser("cite", help="print rotated citations")
    p.add_argument("bib", help="bibliography (.bib)")
    p.add_argument("-o", "--output", help="write output here instead of stdout")
    p.add_argument("--epoch", type=_non_negative_int, default=0)
    p.add_argument("--shuffle", action="store_true", help="emit the bibliography with shuffled author lists")
    p.add_argument("--seed", type=_u64, default=0)
    return parser


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_manifest(path: str) -> AuthorManifest:
    try:
        manifest = parse_manifest(_read(path))
    except ManifestError as exc:
        raise InputError(f"{path}: {exc}") from exc
    report = validate(manifest)
    if not report.ok:
        raise InputError(f"{path}: invalid manifest\n" + "\n".join(f"  {f}" for f in report))
    return manifest


def _clock_ms() -> int:
    raw = os.environ.get(CLOCK_ENV)
    if raw is None or raw == "":
        return 0
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{CLOCK_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError(f"{CLOCK_ENV} must be non-negative")
    return value


def _schedule(args, manifest: AuthorManifest) -> Schedule:
    return build_schedule(manifest, args.mode, seed=args.seed, fps=args.fps, frames=args.frames)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _require_output(args) -> str:
    if not args.output:
        raise UsageError(f"{args.command} requires -o/--output")
    return args.output


def _dispatch(args) -> None:
    if args.command == "cite":
        try:
            entries = parse_bib(_read(args.bib).decode("utf-8"))
        except (BibParseError, UnicodeDecodeError) as exc:
            raise InputError(f"{args.bib}: {exc}") from exc
        if args.shuffle:
            _emit(serialize_bib(shuffle_bib(entries, args.seed)), args.output)
            return
        lines = [f"{e.key}: {rotate_citation(e, args.epoch)}" for e in entries if e.authors]
        _emit("".join(line + "\n" for line in lines), args.output)
        return

    clock = _clock_ms()
    if args.command in ("build", "static", "emit-latex"):
        _require_output(args)
    manifest = _load_manifest(args.manifest)
    if args.command == "verify" and args.schedule_path:
        try:
            schedule = Schedule.from_json(_read(args.schedule_path).decode("utf-8"))
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{args.schedule_path}: bad schedule: {exc}") from exc
    else:
        schedule = _schedule(args, manifest)

    if args.command == "schedule":
        _emit(schedule.to_json(), args.output)
    elif args.command == "verify":
        report = audit(schedule, manifest)
        _emit(report.to_json() if args.json else report.to_table(), args.output)
        if not report.ok:
            raise AuditFailed(f"audit failed: {report.violation_count} constraint violation(s)")
    elif args.command == "static":
        frame = layout_frame(schedule.frames[0], manifest)
        Path(args.output).write_bytes(build_static_pdf(frame, manifest, clock_ms=clock))
    else:
        rendered = [layout_frame(f, manifest) for f in schedule.frames]
        if args.command == "build":
            Path(args.output).write_bytes(build_animated_pdf(schedule, rendered, manifest, clock_ms=clock))
        else:
            emit_latex(schedule, rendered, manifest, args.output, clock_ms=clock)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _dispatch(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"amor: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ScheduleError, LayoutError, PdfBuildError, AuditFailed) as exc:
        print(f"amor: generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except OSError as exc:
        print(f"amor: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:
        # argparse exits 0 after --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
