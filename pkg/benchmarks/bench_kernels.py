"""Benchmark the box-classification backends against each other.

Two workloads: raw classification throughput on a recorded batch of
boxes (the solver's hot call), and a full single-orientation solve.
Run from a checkout or an install:

    python benchmarks/bench_kernels.py [--boxes N] [--deg D]
"""

from __future__ import annotations

import argparse
import math
import random
import time

from fmrbound import FieldDirection, MaterialParams, solve_orientation
from fmrbound import kernels

_PI_UP = math.nextafter(math.pi, math.inf)


def _box_batch(n: int, seed: int) -> list[tuple]:
    """Boxes resembling the solver's population: all widths, all latitudes."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        kind = rng.randrange(3)
        if kind == 0:  # generic mid-latitude
            tl = rng.uniform(0.0, math.pi - 1e-9)
            th = min(_PI_UP, tl + 10.0 ** rng.uniform(-7, 0.5))
        elif kind == 1:  # hugging a pole
            tl = rng.uniform(0.0, 1e-3)
            th = tl + 10.0 ** rng.uniform(-8, -2)
        else:  # straddling the equator
            half = 10.0 ** rng.uniform(-6, -1)
            tl, th = 0.5 * math.pi - half, 0.5 * math.pi + half
        pl = rng.uniform(0.0, 2.0 * math.pi)
        ph = min(2.0 * math.pi, pl + 10.0 ** rng.uniform(-7, 0.8))
        hl = rng.uniform(0.0, 9000.0)
        out.append((tl, th, pl, ph, hl, hl + 10.0 ** rng.uniform(-3, 3)))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--boxes", type=int, default=20000)
    ap.add_argument("--deg", type=float, default=45.0)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    params = MaterialParams()
    direction = FieldDirection(math.radians(args.deg), 0.0)
    hx, hy, hz = direction.unit()
    tail = (params.m_s, params.aniso_a, params.k_4, params.target_sq)
    batch = _box_batch(args.boxes, args.seed)

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default: {kernels.backend_name()})")
    print(f"\nclassify_box on {args.boxes} recorded boxes:")
    base = None
    for name, mod in backends.items():
        t0 = time.perf_counter()
        acc = 0
        for b in batch:
            acc += mod.classify_box(*b, hx, hy, hz, *tail)[0]
        dt = time.perf_counter() - t0
        rate = args.boxes / dt
        line = f"  {name:7s} {1e6 * dt / args.boxes:8.2f} us/box  {rate:10.0f} boxes/s"
        if base is None:
            base = dt
        else:
            line += f"  ({base / dt:.1f}x vs python)"
        print(line, f" [checksum {acc}]")

    print(f"\nsolve_orientation at {args.deg:g} deg:")
    for name, mod in backends.items():
        t0 = time.perf_counter()
        results = solve_orientation(direction, params, backend=mod)
        dt = time.perf_counter() - t0
        print(f"  {name:7s} {dt:8.3f} s   {len(results)} enclosure(s)")


if __name__ == "__main__":
    main()
