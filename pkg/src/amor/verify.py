"""Statistical audit of a schedule: position histograms, chi-square, visibility and violations."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from amor import _kernels
from amor.manifest import AuthorManifest
from amor.permute import Schedule, is_valid_frame

ALPHA = 0.001
# upper 0.1% points of chi-square, df = 1..10
CRITICAL_001 = {
    1: 10.828, 2: 13.816, 3: 16.266, 4: 18.467, 5: 20.515,
    6: 22.458, 7: 24.322, 8: 26.125, 9: 27.877, 10: 29.588,
}
MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class PositionHistogram:
    author_ids: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # counts[author][position]
    total_frames: int

    def column(self, p: int) -> list[int]:
        return [row[p] for row in self.counts]

    def row(self, author_id: str) -> tuple[int, ...]:
        return self.counts[self.author_ids.index(author_id)]


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    critical: float | None
    status: str  # pass | fail | insufficient samples | statistic only

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def position_histogram(schedule: Schedule, manifest: AuthorManifest) -> PositionHistogram:
    index = manifest.index_of()
    idx_frames = []
    for k, frame in enumerate(schedule.frames):
        try:
            idx_frames.append([index[a] for a in frame])
        except KeyError as exc:
            raise ValueError(f"frame {k} references unknown author id {exc.args[0]!r}") from None
    counts = _kernels.position_counts(idx_frames, manifest.n)
    return PositionHistogram(manifest.ids, tuple(tuple(r) for r in counts), len(schedule.frames))


def chi_square_uniform(counts) -> ChiSquareResult:
    k = len(counts)
    if k < 2:
        raise ValueError("chi-square needs at least two bins")
    total = sum(counts)
    expected = total / k
    df = k - 1
    if total == 0:
        return ChiSquareResult(0.0, df, CRITICAL_001.get(df), "insufficient samples")
    # exact rational arithmetic so equal counts give exactly 0
    stat = sum((o * k - total) ** 2 for o in counts) / (k * total)
    critical = CRITICAL_001.get(df)
    if expected < MIN_EXPECTED:
        status = "insufficient samples"
    elif critical is None:
        status = "statistic only"
    else:
        status = "pass" if stat <= critical else "fail"
    return ChiSquareResult(stat, df, critical, status)


@dataclass(frozen=True)
class Violation:
    frame_index: int
    kind: str
    detail: str


@dataclass(frozen=True)
class VisibilityCheck:
    author_id: str
    p_appear: float
    observed: float
    tolerance: float
    flagged: bool


@dataclass
class AuditReport:
    mode: str
    seed: int
    total_frames: int
    uniformity_expected: bool
    visibility_expected: bool
    positions: list[ChiSquareResult]
    visibility: list[VisibilityCheck]
    violations: list[Violation] = field(default_factory=list)
    histogram: PositionHistogram | None = None

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    @property
    def ok(self) -> bool:
        """No violations and, where expected, uniform positions.  Visibility flags are advisory."""
        if self.violations:
            return False
        if self.uniformity_expected and any(r.status == "fail" for r in self.positions):
            return False
        return True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["violation_count"] = self.violation_count
        d["ok"] = self.ok
        if self.histogram is not None:
            d["histogram"] = {
                "author_ids": list(self.histogram.author_ids),
                "counts": [list(r) for r in self.histogram.counts],
                "total_frames": self.histogram.total_frames,
            }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_table(self) -> str:
        lines = [
            f"mode: {self.mode}   seed: {self.seed}   frames: {self.total_frames}",
            "",
            "position  chi2        df  critical  status",
        ]
        for p, r in enumerate(self.positions):
            crit = f"{r.critical:.3f}" if r.critical is not None else "-"
            lines.append(f"{p:>8}  {r.statistic:<10.4f}  {r.df:>2}  {crit:>8}  {r.status}")
        lines += ["", "author              p_appear  observed  tolerance  flag"]
        for v in self.visibility:
            flag = "FLAG" if v.flagged else "ok"
            lines.append(f"{v.author_id:<18}  {v.p_appear:>8.4f}  {v.observed:>8.4f}  {v.tolerance:>9.4f}  {flag}")
        lines += ["", f"constraint violations: {self.violation_count}"]
        for v in self.violations:
            lines.append(f"  frame {v.frame_index}: {v.kind} {v.detail}")
        if not self.uniformity_expected:
            lines.append("note: positions are not expected to be uniform for this schedule")
        if not self.visibility_expected:
            lines.append("note: visibility rates are not expected to match p_appear for this schedule")
        lines.append("result: " + ("OK" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"


def find_violations(schedule: Schedule, manifest: AuthorManifest) -> list[Violation]:
    known = set(manifest.ids)
    cons = manifest.constraints
    out = []
    for k, frame in enumerate(schedule.frames):
        ids = tuple(frame)
        unknown = [a for a in ids if a not in known]
        if unknown:
            out.append(Violation(k, "unknown_author", ", ".join(unknown)))
            continue
        if len(set(ids)) != len(ids):
            out.append(Violation(k, "duplicate_author", ", ".join(ids)))
            continue
        if is_valid_frame(ids, cons):
            continue
        pos = {a: i for i, a in enumerate(ids)}
        for a, b in cons.never_together:
            if a in pos and b in pos:
                out.append(Violation(k, "never_together", f"{a}, {b}"))
        for a, b in cons.never_adjacent:
            if a in pos and b in pos and abs(pos[a] - pos[b]) == 1:
                out.append(Violation(k, "never_adjacent", f"{a}, {b}"))
    return out


def audit(schedule: Schedule, manifest: AuthorManifest) -> AuditReport:
    violations = find_violations(schedule, manifest)
    known = set(manifest.ids)
    clean = Schedule(tuple(f for f in schedule.frames if all(a in known for a in f)
                           and len(set(f)) == len(tuple(f))),
                     schedule.fps, schedule.loop, schedule.autoplay, schedule.controls,
                     schedule.seed, schedule.mode)
    hist = position_histogram(clean, manifest)
    n_frames = len(schedule.frames)

    positions = []
    if manifest.n >= 2:
        positions = [chi_square_uniform(hist.column(p)) for p in range(manifest.n)]

    visibility = []
    for a, row in zip(manifest.authors, hist.counts):
        seen = sum(row)
        observed = seen / n_frames if n_frames else 0.0
        p = a.p_appear
        tol = 3 * math.sqrt(p * (1 - p) / n_frames) if n_frames else 0.0
        visibility.append(VisibilityCheck(a.id, p, observed, tol, abs(observed - p) > tol + 1e-12))

    shuffled = schedule.mode in ("enumeration", "sampling")
    uniform = (shuffled and len({a.p_appear for a in manifest.authors}) == 1
               and manifest.constraints.is_empty())
    visible = shuffled and not manifest.constraints.never_together
    return AuditReport(schedule.mode, schedule.seed, n_frames, uniform, visible, positions,
                       visibility, violations, hist)
