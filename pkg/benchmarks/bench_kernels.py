"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import sys
import timeit

from amor import _pykernels

try:
    from amor import _speedups
except ImportError:
    _speedups = None

FULL = 2**64


def cases(n_frames):
    thresholds = [FULL] * 5
    half = [FULL // 2] * 6
    frames7 = _pykernels.sample_frames(1, [FULL] * 7, [], [], n_frames, 1000)[1]
    return {
        "sample_frames n=5 unconstrained": lambda k: k.sample_frames(0, thresholds, [], [], n_frames, 1000),
        "sample_frames n=6 p=0.5 + pairs": lambda k: k.sample_frames(0, half, [(0, 1)], [(2, 3), (4, 5)],
                                                                     n_frames, 1000),
        "enumerate_valid n=8 adjacency": lambda k: k.enumerate_valid(8, [], [(0, 1)]),
        "shuffle_many 10^4 seeds n=6": lambda k: k.shuffle_many(range(10_000), 6),
        "position_counts n=7": lambda k: k.position_counts(frames7, 7),
    }


def measure(fn, module, repeat):
    number = 1
    while timeit.timeit(lambda: fn(module), number=number) < 0.2:
        number *= 2
    return min(timeit.repeat(lambda: fn(module), number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--frames", type=int, default=20_000, help="frames per sampling case")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="also write results here")
    args = parser.parse_args(argv)

    if _speedups is None:
        print("compiled extension not built; timing the Python fallback only", file=sys.stderr)

    results = []
    print(f"{'case':<36} {'python':>11} {'cython':>11} {'speedup':>8}")
    for name, fn in cases(args.frames).items():
        py = measure(fn, _pykernels, args.repeat)
        cy = measure(fn, _speedups, args.repeat) if _speedups else None
        if cy is not None:
            assert fn(_pykernels) == fn(_speedups), name
        speed = f"{py / cy:7.1f}x" if cy else "-"
        cy_text = f"{cy * 1e3:9.2f}ms" if cy else "-"
        print(f"{name:<36} {py * 1e3:9.2f}ms {cy_text:>11} {speed:>8}")
        results.append({"case": name, "python_s": py, "cython_s": cy})
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
