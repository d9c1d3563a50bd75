#!/usr/bin/env python3
"""Scripted re-implementation of the bootstrap index derivation and percentile rule.

Stream for resample r: SplitMix64 started at mix(seed ^ mix(r)), where mix is
the SplitMix64 output finalizer. Draw j maps to index (next() * n) >> 64.
Resample mean: d[0] + sum(d[idx_j] - d[0]) / n, summed in draw order.
Interval: linear-interpolation quantiles of the sorted resample means.

usage: python3 bootstrap_oracle.py
"""

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, state):
        self.state = state

    def next(self):
        self.state = (self.state + GOLDEN) & MASK
        return mix(self.state)


def resample_indices(seed, r, n):
    rng = SplitMix64(mix(seed ^ mix(r)))
    return [(rng.next() * n) >> 64 for _ in range(n)]


def quantile(sorted_vals, q):
    h = (len(sorted_vals) - 1) * q
    lo = int(h)
    hi = min(lo + 1, len(sorted_vals) - 1)
    return sorted_vals[lo] + (h - lo) * (sorted_vals[hi] - sorted_vals[lo])


def bootstrap_ci(d, n_resamples, level, seed):
    n = len(d)
    ref = d[0]
    means = []
    for r in range(n_resamples):
        acc = 0.0
        for i in resample_indices(seed, r, n):
            acc += d[i] - ref
        means.append(ref + acc / n)
    means.sort()
    alpha = 1.0 - level
    return quantile(means, alpha / 2.0), quantile(means, 1.0 - alpha / 2.0)


if __name__ == "__main__":
    for seed in (0, 42):
        print("indices seed", seed, [resample_indices(seed, r, 2) for r in range(4)])
        print("ci (0,1) r=4 seed", seed, repr(bootstrap_ci([0.0, 1.0], 4, 0.95, seed)))
    d = [0.3, -0.1, 0.7, 0.25, 1.5, -0.4, 0.05, 0.9, 0.6, -0.2]
    print("indices 10 seed 7 r=0..2", [resample_indices(7, r, 10) for r in range(3)])
    print("ci 10 r=1000 seed 7", repr(bootstrap_ci(d, 1000, 0.95, 7)))
    print("ci 10 r=1000 seed 7 level 0.9", repr(bootstrap_ci(d, 1000, 0.9, 7)))
