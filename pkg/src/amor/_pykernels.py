"""Pure-Python kernels.

This is the reference implementation; ``_speedups.pyx`` must reproduce it
bit for bit.  All functions work on author *indices* and thread the
SplitMix64 state through explicitly: every function that draws random
numbers takes ``state`` and returns the advanced state first.

Visibility thresholds are integers in ``[0, 2**64]``; an author is visible
when the draw ``u`` satisfies ``u < threshold``.  Pairs are ``(a, b)`` index
tuples where ``a`` belongs to the lexicographically smaller author id.
"""
from __future__ import annotations

from itertools import permutations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
RESAMPLE_CAP = 100

BACKEND = "python"


def splitmix64_next(state: int) -> tuple[int, int]:
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def shuffle_indices(state: int, items: list[int]) -> tuple[int, list[int]]:
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        state, u = splitmix64_next(state)
        j = u % (i + 1)
        out[i], out[j] = out[j], out[i]
    return state, out


def _draw_visible(state, thresholds, together):
    vis = []
    for t in thresholds:
        state, u = splitmix64_next(state)
        vis.append(u < t)
    for a, b in together:
        if vis[a] and vis[b]:
            state, u = splitmix64_next(state)
            if u % 2 == 0:
                vis[a] = False
            else:
                vis[b] = False
    return state, vis


def sample_visible(state: int, thresholds: list[int], together: list[tuple[int, int]]) -> tuple[int, list[int]]:
    """Visible author indices in input order; never empty for n >= 1."""
    for _ in range(1 + RESAMPLE_CAP):
        state, vis = _draw_visible(state, thresholds, together)
        if any(vis):
            return state, [i for i, v in enumerate(vis) if v]
    vis = [True] * len(thresholds)
    for a, b in together:
        if vis[a] and vis[b]:
            vis[b] = False
    return state, [i for i, v in enumerate(vis) if v]


def first_violation(frame, together, adjacent) -> int:
    """Index into ``together + adjacent`` of the first violated pair, or -1."""
    pos = {idx: k for k, idx in enumerate(frame)}
    for c, (a, b) in enumerate(together):
        if a in pos and b in pos:
            return c
    for c, (a, b) in enumerate(adjacent):
        pa = pos.get(a)
        pb = pos.get(b)
        if pa is not None and pb is not None and abs(pa - pb) == 1:
            return len(together) + c
    return -1


def sample_frames(state, thresholds, together, adjacent, count, attempt_cap):
    """Draw ``count`` valid frames.

    Returns ``(state, frames, failure)``.  ``failure`` is ``None`` on success;
    otherwise ``(frame_index, pair_index)`` where ``pair_index`` points into
    ``together + adjacent`` at the pair violated most often during the failed
    attempts (ties to the lowest index).
    """
    frames = []
    n_pairs = len(together) + len(adjacent)
    for f in range(count):
        hits = [0] * n_pairs
        for _ in range(attempt_cap):
            state, vis = sample_visible(state, thresholds, together)
            state, perm = shuffle_indices(state, vis)
            bad = first_violation(perm, together, adjacent)
            if bad < 0:
                frames.append(tuple(perm))
                break
            hits[bad] += 1
        else:
            worst = max(range(n_pairs), key=lambda c: (hits[c], -c)) if n_pairs else -1
            return state, frames, (f, worst)
    return state, frames, None


def enumerate_valid(n, together, adjacent):
    """All permutations of ``range(n)`` in lexicographic order that satisfy the pairs."""
    return [p for p in permutations(range(n)) if first_violation(p, together, adjacent) < 0]


def shuffle_many(seeds, n):
    """``shuffle_indices(seed, range(n))`` for every seed, as tuples."""
    base = list(range(n))
    return [tuple(shuffle_indices(s, base)[1]) for s in seeds]


def position_counts(frames, n):
    """``counts[a][p]`` = number of frames with author index ``a`` at position ``p``."""
    counts = [[0] * n for _ in range(n)]
    for frame in frames:
        for p, a in enumerate(frame):
            if not (0 <= a < n and p < n):
                raise IndexError(f"author index {a} at position {p} outside 0..{n - 1}")
            counts[a][p] += 1
    return counts
