"""Permutation stream: SplitMix64, Fisher-Yates, constrained sampling and schedules."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, TypeVar

from amor import _kernels
from amor.manifest import AuthorManifest, ConstraintSet, U64_MAX, normalize_pair

T = TypeVar("T")

ENUMERATION_GUARD = 10**6
FRAME_ATTEMPT_CAP = 1000

MODES = ("enumeration", "sampling", "alpha_given", "alpha_family", "fixed")
STATIC_MODES = ("alpha_given", "alpha_family", "fixed")


class ScheduleError(RuntimeError):
    """Schedule generation failed (infeasible constraints)."""

    def __init__(self, msg: str, pair: tuple[str, str] | None = None):
        super().__init__(msg)
        self.pair = pair


class EnumerationGuardError(ScheduleError):
    """n! is too large to enumerate."""


def factorial_checked(n: int) -> int | None:
    """Exact ``n!`` if it fits in 64 unsigned bits, else ``None``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    result = 1
    for k in range(2, n + 1):
        result *= k
        if result > U64_MAX:
            return None
    return result


class Rng:
    """SplitMix64 generator.  Advance explicitly; do not share between threads."""

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & U64_MAX

    def next_u64(self) -> int:
        self.state, value = _kernels.splitmix64_next(self.state)
        return value

    def copy(self) -> "Rng":
        return Rng(self.state)

    def __repr__(self) -> str:
        return f"Rng(state={self.state:#018x})"


def rng_next(rng: Rng) -> int:
    return rng.next_u64()


def shuffle(rng: Rng, items: Sequence[T]) -> list[T]:
    """Fisher-Yates, high index down, ``j = next % (i + 1)``."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rng.next_u64() % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


@dataclass(frozen=True)
class Frame:
    visible: tuple[str, ...]

    def __iter__(self):
        return iter(self.visible)

    def __len__(self) -> int:
        return len(self.visible)


@dataclass(frozen=True)
class Schedule:
    frames: tuple[Frame, ...]
    fps: float
    loop: bool
    autoplay: bool
    controls: bool
    seed: int
    mode: str

    def __len__(self) -> int:
        return len(self.frames)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "fps": float(self.fps),
            "loop": self.loop,
            "autoplay": self.autoplay,
            "controls": self.controls,
            "frames": [list(f.visible) for f in self.frames],
        }

    def to_json(self) -> str:
        # one frame per line keeps large schedules diffable
        d = self.to_dict()
        frames = d.pop("frames")
        head = json.dumps(d, sort_keys=True)[:-1]
        body = ",\n".join("  " + json.dumps(f, ensure_ascii=False) for f in frames)
        return f'{head}, "frames": [\n{body}\n]}}\n'

    @classmethod
    def from_dict(cls, d: dict) -> "Schedule":
        if d.get("mode") not in MODES:
            raise ValueError(f"unknown schedule mode {d.get('mode')!r}")
        frames = d["frames"]
        if not isinstance(frames, list) or not all(
            isinstance(f, list) and all(isinstance(x, str) for x in f) for f in frames
        ):
            raise ValueError("frames must be an array of arrays of author ids")
        return cls(
            frames=tuple(Frame(tuple(f)) for f in frames),
            fps=float(d["fps"]),
            loop=bool(d["loop"]),
            autoplay=bool(d["autoplay"]),
            controls=bool(d["controls"]),
            seed=int(d["seed"]),
            mode=d["mode"],
        )

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        return cls.from_dict(json.loads(text))


# -- index-level plumbing ----------------------------------------------------

def _threshold(p: float) -> int:
    if p >= 1.0:
        return 2**64
    if p <= 0.0:
        return 0
    # p * 2**64 is exact in binary floating point
    return int(p * 2.0**64)


def _index_pairs(manifest: AuthorManifest, pairs) -> list[tuple[int, int]]:
    index = manifest.index_of()
    out = []
    for a, b in sorted(normalize_pair(*p) for p in pairs):
        out.append((index[a], index[b]))
    return out


def _model(manifest: AuthorManifest):
    thresholds = [_threshold(a.p_appear) for a in manifest.authors]
    together = _index_pairs(manifest, manifest.constraints.never_together)
    adjacent = _index_pairs(manifest, manifest.constraints.never_adjacent)
    return thresholds, together, adjacent


def _pair_ids(manifest: AuthorManifest, c: int) -> tuple[str, str]:
    cons = manifest.constraints
    pairs = (sorted(normalize_pair(*p) for p in cons.never_together)
             + sorted(normalize_pair(*p) for p in cons.never_adjacent))
    return pairs[c]


# -- operations --------------------------------------------------------------

def sample_visible(rng: Rng, manifest: AuthorManifest) -> list[str]:
    """Visible author ids (input order) for one frame, after never_together exclusion."""
    thresholds, together, _ = _model(manifest)
    rng.state, idx = _kernels.sample_visible(rng.state, thresholds, together)
    ids = manifest.ids
    return [ids[i] for i in idx]


def is_valid_frame(frame: Frame | Sequence[str], constraints: ConstraintSet) -> bool:
    visible = tuple(frame)
    if len(set(visible)) != len(visible):
        return False
    pos = {a: k for k, a in enumerate(visible)}
    for a, b in constraints.never_together:
        if a in pos and b in pos:
            return False
    for a, b in constraints.never_adjacent:
        if a in pos and b in pos and abs(pos[a] - pos[b]) == 1:
            return False
    return True


def enumerate_valid(manifest: AuthorManifest) -> list[Frame]:
    """Every valid ordering of the full author list, lexicographic by input index."""
    n = manifest.n
    count = factorial_checked(n)
    if count is None or count > ENUMERATION_GUARD:
        raise EnumerationGuardError(
            f"{n} authors give {'more than 2^64' if count is None else count} orderings; "
            f"enumeration is limited to {ENUMERATION_GUARD}")
    _, together, adjacent = _model(manifest)
    ids = manifest.ids
    return [Frame(tuple(ids[i] for i in p)) for p in _kernels.enumerate_valid(n, together, adjacent)]


def _static_frame(manifest: AuthorManifest, mode: str) -> Frame:
    authors = [a for a in manifest.authors if a.p_appear > 0] or list(manifest.authors)
    if mode == "alpha_given":
        authors.sort(key=lambda a: (a.given_name.casefold(), a.family_name.casefold(), a.id))
    elif mode == "alpha_family":
        authors.sort(key=lambda a: (a.family_name.casefold(), a.given_name.casefold(), a.id))
    visible = [a.id for a in authors]
    for a, b in manifest.constraints.never_together:
        if a in visible and b in visible:
            visible.remove(b)
    frame = Frame(tuple(visible))
    for pair in manifest.constraints.never_adjacent:
        if not is_valid_frame(frame, ConstraintSet(never_adjacent=(pair,))):
            raise ScheduleError(
                f"{mode} order places never_adjacent pair {pair[0]!r}, {pair[1]!r} side by side", pair)
    return frame


def _enumeration_count_ok(manifest: AuthorManifest) -> bool:
    n_fact = factorial_checked(manifest.n)
    return n_fact is not None and n_fact <= ENUMERATION_GUARD


def build_schedule(manifest: AuthorManifest, mode: str = "shuffle", *,
                   seed: int | None = None, fps: float | None = None,
                   frames: int | None = None) -> Schedule:
    """Assemble the playback schedule.

    ``mode="shuffle"`` picks enumeration or sampling automatically.  Passing
    ``"enumeration"`` or ``"sampling"`` forces that path; the static modes
    give a single frame.  ``seed``, ``fps`` and ``frames`` override the
    manifest playback values.
    """
    pb = manifest.playback
    seed = pb.seed if seed is None else seed
    fps = pb.fps if fps is None else fps
    budget = pb.frame_budget if frames is None else frames
    if not 0 <= seed <= U64_MAX:
        raise ValueError(f"seed {seed} does not fit in 64 unsigned bits")
    if budget < 1:
        raise ValueError("frame budget must be >= 1")

    def make(frame_list, chosen):
        return Schedule(tuple(frame_list), float(fps), pb.loop, pb.autoplay, pb.controls, seed, chosen)

    if mode in STATIC_MODES:
        return make([_static_frame(manifest, mode)], mode)
    if mode not in ("shuffle", "enumeration", "sampling"):
        raise ValueError(f"unknown mode {mode!r}")

    cons = manifest.constraints
    if mode == "shuffle":
        candidates = None
        if (all(a.p_appear >= 1.0 for a in manifest.authors) and not cons.never_together
                and _enumeration_count_ok(manifest)
                and (cons.never_adjacent or factorial_checked(manifest.n) <= budget)):
            candidates = enumerate_valid(manifest)
            if len(candidates) > budget:
                candidates = None
        mode = "sampling" if candidates is None else "enumeration"
    elif mode == "enumeration":
        candidates = enumerate_valid(manifest)

    if mode == "enumeration":
        if not candidates:
            pair = (sorted(cons.never_together) + sorted(cons.never_adjacent) or [None])[0]
            raise ScheduleError("no ordering of the full author list satisfies the constraints"
                                + (f"; first constraint pair {pair[0]!r}, {pair[1]!r}" if pair else ""), pair)
        return make(shuffle(Rng(seed), candidates), "enumeration")

    thresholds, together, adjacent = _model(manifest)
    _, idx_frames, failure = _kernels.sample_frames(
        seed, thresholds, together, adjacent, budget, FRAME_ATTEMPT_CAP)
    if failure is not None:
        frame_index, c = failure
        pair = _pair_ids(manifest, c) if c >= 0 else None
        raise ScheduleError(
            f"frame {frame_index}: no valid ordering after {FRAME_ATTEMPT_CAP} attempts"
            + (f"; constraint pair {pair[0]!r}, {pair[1]!r} keeps failing" if pair else ""),
            pair)
    ids = manifest.ids
    return make([Frame(tuple(ids[i] for i in f)) for f in idx_frames], "sampling")
