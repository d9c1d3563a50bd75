#!/usr/bin/env python3
"""Builds the F1 fixture (8 hand-specified pairs, dim 384) and its expected table.

Independent of the Rust code: the EMBP bytes are packed with `struct`, the
metrics are evaluated with exact rationals plus mpmath at 60 digits, ranks and
the Wilcoxon null distribution are enumerated by brute force.

usage: python3 f1_fixture.py <out_dir>
"""
import hashlib
import itertools
import json
import struct
import sys
from fractions import Fraction

import mpmath

mpmath.mp.dps = 60

REPEAT = 96
SCALE = Fraction(1, 16)
EPS = Fraction(1, 10**8)

# 4-dim integer profiles; each vector is profile/16 tiled 96 times.
PROFILES = [
    ((4, 1, 2, 3), (3, 2, 2, 4)),
    ((5, 0, 1, 1), (1, 4, 1, 0)),
    ((2, 2, 2, 2), (3, 3, 3, 3)),
    ((6, 1, 0, 2), (5, 2, 1, 1)),
    ((1, 3, 5, 2), (2, 2, 4, 4)),
    ((3, 3, 0, 1), (1, 1, 4, 3)),
    ((4, 4, 1, 0), (4, 3, 1, 2)),
    ((2, 5, 1, 1), (1, 5, 2, 0)),
]
# Golds sit below both OS and HTS so the magnitude-aware metrics win every pair.
GOLDS = [
    Fraction(1, 2),
    Fraction(1, 8),
    Fraction(5, 8),
    Fraction(9, 16),
    Fraction(5, 8),
    Fraction(1, 4),
    Fraction(19, 32),
    Fraction(17, 32),
]


def tile(profile):
    return [Fraction(v) * SCALE for v in profile] * REPEAT


def metrics(x, y):
    d = sum(a * b for a, b in zip(x, y))
    nx2 = sum(a * a for a in x)
    ny2 = sum(b * b for b in y)
    dot = mpmath.mpf(d.numerator) / d.denominator
    cos = dot / mpmath.sqrt(mpmath.mpf(nx2.numerator) / nx2.denominator * mpmath.mpf(ny2.numerator) / ny2.denominator)
    os_ = d / (nx2 + ny2 - abs(d) + EPS)
    hts_arg = 2 * d / (nx2 + ny2 + EPS)
    return {
        "dot": dot,
        "cos": cos,
        "os": mpmath.mpf(os_.numerator) / os_.denominator,
        "hts": mpmath.tanh(mpmath.mpf(hts_arg.numerator) / hts_arg.denominator),
    }


def avg_ranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [None] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        r = Fraction(i + j + 2, 2)
        for k in range(i, j + 1):
            ranks[order[k]] = r
        i = j + 1
    return ranks


def spearman(a, b):
    ra, rb = avg_ranks(a), avg_ranks(b)
    n = len(ra)
    ma, mb = sum(ra) / n, sum(rb) / n
    cov = sum((p - ma) * (q - mb) for p, q in zip(ra, rb))
    va = sum((p - ma) ** 2 for p in ra)
    vb = sum((q - mb) ** 2 for q in rb)
    if va == 0 or vb == 0:
        return None
    return mpmath.mpf(cov.numerator) / cov.denominator / mpmath.sqrt(
        mpmath.mpf((va * vb).numerator) / (va * vb).denominator
    )


def wilcoxon_brute(diffs):
    d = [v for v in diffs if v != 0]
    mags = [abs(v) for v in d]
    ranks = avg_ranks(mags)
    assert len(set(mags)) == len(mags), "fixture must be tie-free"
    w_plus = sum(r for r, v in zip(ranks, d) if v > 0)
    hits = 0
    for signs in itertools.product((0, 1), repeat=len(d)):
        if sum(r for r, s in zip(ranks, signs) if s) >= w_plus:
            hits += 1
    return float(w_plus), hits / 2 ** len(d)


def main(out_dir):
    pairs = [(tile(p), tile(q)) for p, q in PROFILES]
    scores = {m: [] for m in ("dot", "cos", "os", "hts")}
    for x, y in pairs:
        for k, v in metrics(x, y).items():
            scores[k].append(v)
    golds = [mpmath.mpf(g.numerator) / g.denominator for g in GOLDS]

    sq = {m: [(s - g) ** 2 for s, g in zip(scores[m], golds)] for m in scores}
    table = {}
    for m in scores:
        rho = spearman(scores[m], golds)
        table[m] = {
            "mse": float(sum(sq[m]) / len(golds)),
            "spearman_rho": None if rho is None else float(rho),
            "scores": [float(v) for v in scores[m]],
        }
    wilcoxon = {}
    for cand in ("os", "hts"):
        for base in ("dot", "cos"):
            diffs = [b - c for b, c in zip(sq[base], sq[cand])]
            w, p = wilcoxon_brute(diffs)
            wilcoxon[f"{cand}_vs_{base}"] = {"w_plus": w, "p_value": p}
    for cand in ("os", "hts"):
        table[cand]["star"] = all(wilcoxon[f"{cand}_vs_{b}"]["p_value"] < 0.05 for b in ("dot", "cos"))
    for base in ("dot", "cos"):
        table[base]["star"] = False
    best = min(("dot", "cos", "os", "hts"), key=lambda m: table[m]["mse"])

    # EMBP: magic, version, dim, n_pairs, reserved; then x, y, gold as f32 LE.
    dim = 4 * REPEAT
    blob = bytearray(b"EMBP")
    blob += struct.pack("<IIQI", 1, dim, len(pairs), 0)
    for (x, y), g in zip(pairs, GOLDS):
        blob += struct.pack(f"<{dim}f", *[float(v) for v in x])
        blob += struct.pack(f"<{dim}f", *[float(v) for v in y])
        blob += struct.pack("<f", float(g))
    digest = hashlib.sha256(blob).hexdigest()

    with open(f"{out_dir}/f1.embp", "wb") as f:
        f.write(blob)
    with open(f"{out_dir}/f1.manifest", "w") as f:
        f.write(
            "# F1: hand-built 8-pair fixture\n"
            "dataset = PAWS\n"
            "model_id = fixture-f1\n"
            "split = test\n"
            "path = f1.embp\n"
            f"dim = {dim}\n"
            f"n_pairs = {len(pairs)}\n"
            f"sha256 = {digest}\n"
        )
    expected = {
        "dim": dim,
        "n_pairs": len(pairs),
        "sha256": digest,
        "golds": [float(g) for g in GOLDS],
        "metrics": table,
        "wilcoxon": wilcoxon,
        "best_mse": best,
    }
    with open(f"{out_dir}/f1_expected.json", "w") as f:
        json.dump(expected, f, indent=2)
        f.write("\n")

    print(f"{'pair':>4} {'gold':>8} {'dot':>14} {'cos':>14} {'os':>14} {'hts':>14}")
    for i in range(len(pairs)):
        print(
            f"{i:>4} {float(GOLDS[i]):>8.5f} "
            + " ".join(f"{float(scores[m][i]):>14.10f}" for m in ("dot", "cos", "os", "hts"))
        )
    for m in ("dot", "cos", "os", "hts"):
        print(m, table[m]["mse"], table[m]["spearman_rho"], table[m].get("star"))
    print(json.dumps(wilcoxon))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
