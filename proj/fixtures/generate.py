#!/usr/bin/env python3
"""Regenerate the shipped fixture set.

usage: generate.py path/to/quasipd [fixtures_dir]

Segments come from `quasipd simulate`; the total segment from `quasipd aggregate`.
Factor and scenario files are closed-form and need no randomness.
"""
import csv
import json
import math
import os
import shutil
import subprocess
import sys
import tempfile

RR = 0.3442
START = "2009-04"
MONTHS = 130

SEGMENTS = {
    "manufacturing": {
        "E": {"constant": 1000.0},
        "P": {"humped": {"base": 0.003, "slope": 0.002,
                         "humps": [{"center": 20, "height": 0.9, "width": 7},
                                   {"center": 65, "height": 0.7, "width": 8},
                                   {"center": 105, "height": 0.6, "width": 7}]}},
    },
    "trade": {
        "E": {"geometric": {"level": 800.0, "growth": 0.004}},
        "P": {"humped": {"base": 0.004, "slope": 0.001,
                         "humps": [{"center": 30, "height": 0.8, "width": 6},
                                   {"center": 80, "height": 0.9, "width": 9}]}},
    },
    "construction": {
        "E": {"constant": 400.0},
        "P": {"humped": {"base": 0.006, "slope": 0.003,
                         "humps": [{"center": 25, "height": 1.0, "width": 8},
                                   {"center": 70, "height": 0.8, "width": 6},
                                   {"center": 110, "height": 0.7, "width": 7}]}},
    },
}
WEIGHTS = {"manufacturing": 0.45, "trade": 0.35, "construction": 0.2}
PROMINENCE = 0.001


def fmt(x):
    return "%.10g" % x


def month_add(start, k):
    y, m = map(int, start.split("-"))
    s = y * 12 + m - 1 + k
    return "%04d-%02d" % (s // 12, s % 12 + 1)


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def run(cli, *args):
    subprocess.run([cli, "--log-level", "warn", *args], check=True)


def count_extrema(v, prominence):
    # zigzag count, same rule as the library
    n = len(v)
    if n < 3:
        return 0
    d, lo, hi, first, last, count = 0, 0, 0, 0, 0, 0
    for i in range(1, n):
        x = v[i]
        if d == 0:
            if x > v[hi]:
                hi = i
            if x < v[lo]:
                lo = i
            if x > v[lo] and x - v[lo] >= prominence:
                d, first, last = 1, i, i
            elif x < v[hi] and v[hi] - x >= prominence:
                d, first, last = -1, i, i
            continue
        c = v[first]
        if (x > c) if d > 0 else (x < c):
            first = last = i
        elif x == c:
            if i == last + 1:
                last = i
        elif abs(c - x) >= prominence:
            count += 1
            d = -d
            first = last = i
    return count


def main():
    cli = os.path.abspath(sys.argv[1])
    out = os.path.abspath(sys.argv[2] if len(sys.argv) > 2 else os.path.dirname(__file__))
    seg_dir = os.path.join(out, "segments")
    os.makedirs(seg_dir, exist_ok=True)

    truth = {}
    with tempfile.TemporaryDirectory() as tmp:
        for sid, spec in SEGMENTS.items():
            cfg = {"config": {"simulate": {"segment_id": sid, "start": START, "months": MONTHS,
                                           "E": spec["E"], "P": spec["P"], "R": {"constant": RR}}}}
            mpath = os.path.join(tmp, sid + ".json")
            with open(mpath, "w") as f:
                json.dump(cfg, f)
            run(cli, "--manifest", mpath, "--out", os.path.join(tmp, sid), "simulate")
            shutil.copy(os.path.join(tmp, sid, "segment.csv"), os.path.join(seg_dir, sid + ".csv"))
            truth[sid] = read_csv(os.path.join(tmp, sid, "truth.csv"))

        with open(os.path.join(out, "weights.csv"), "w") as f:
            f.write("segment_id,weight\n")
            for sid, w in WEIGHTS.items():
                f.write("%s,%s\n" % (sid, fmt(w)))
        wm = os.path.join(tmp, "weights_manifest.json")
        with open(wm, "w") as f:
            json.dump({"segments": {s: os.path.join(seg_dir, s + ".csv") for s in SEGMENTS},
                       "weights": os.path.join(out, "weights.csv")}, f)
        run(cli, "--manifest", wm, "--out", tmp, "aggregate")
        shutil.copy(os.path.join(tmp, "aggregate.csv"), os.path.join(seg_dir, "total.csv"))

    # Total hazard: defaults of all segments over the total performing stock.
    segs = {s: read_csv(os.path.join(seg_dir, s + ".csv")) for s in SEGMENTS}
    total_w = sum(WEIGHTS.values())
    hazards = []
    for i in range(MONTHS - 1):
        num = den = 0.0
        for s in SEGMENTS:
            w = WEIGHTS[s] / total_w
            perf = float(segs[s][i]["E"]) - float(segs[s][i]["NPL"])
            num += w * perf * float(truth[s][i]["P"])
            den += w * perf
        hazards.append(num / den)
    pd = []
    for j in range(len(hazards) - 11):
        surv = 1.0
        for p in hazards[j:j + 12]:
            surv *= 1.0 - p
        pd.append(1.0 - surv)
    pd = [float(fmt(x)) for x in pd]
    with open(os.path.join(out, "reference_df.csv"), "w") as f:
        f.write("month,DF\n")
        for j, x in enumerate(pd):
            f.write("%s,%s\n" % (month_add(START, j + 11), fmt(x)))

    # Macro factors over the whole history plus a two-year scenario.
    def factors(k):
        t = k / 12.0
        return {
            "gdp_gap": 0.02 * math.sin(2 * math.pi * t / 4.5) - 0.01 * math.exp(-((k - 15) / 6.0) ** 2),
            "unemployment": 0.055 + 0.01 * math.cos(2 * math.pi * t / 5.0) + 0.004 * t / 10.0,
            "key_rate": 0.075 + 0.02 * math.sin(2 * math.pi * (t + 1.0) / 3.7),
        }

    names = ["gdp_gap", "unemployment", "key_rate"]
    with open(os.path.join(out, "factors.csv"), "w") as f:
        f.write("month," + ",".join(names) + "\n")
        for k in range(MONTHS):
            row = factors(k)
            f.write(month_add(START, k) + "," + ",".join(fmt(row[n]) for n in names) + "\n")
    with open(os.path.join(out, "scenario.csv"), "w") as f:
        f.write("month," + ",".join(names) + "\n")
        for k in range(MONTHS, MONTHS + 24):
            row = factors(k)
            row["gdp_gap"] -= 0.015  # adverse shift
            f.write(month_add(START, k) + "," + ",".join(fmt(row[n]) for n in names) + "\n")

    # Noiseless linear regression fixture: PD = b0 + b . factors exactly.
    beta = {"intercept": 0.02, "gdp_gap": -0.4, "unemployment": 0.5, "key_rate": 0.1}
    lin = os.path.join(out, "linear")
    os.makedirs(lin, exist_ok=True)
    shutil.copy(os.path.join(out, "factors.csv"), os.path.join(lin, "factors.csv"))
    with open(os.path.join(lin, "pd.csv"), "w") as f:
        f.write("month,PD\n")
        for k in range(MONTHS):
            row = {n: float(fmt(v)) for n, v in factors(k).items()}
            y = beta["intercept"] + sum(beta[n] * row[n] for n in names)
            f.write("%s,%r\n" % (month_add(START, k), y))
    with open(os.path.join(lin, "beta.json"), "w") as f:
        json.dump(beta, f, indent=2)
        f.write("\n")

    manifest = {
        "segments": {s: "segments/%s.csv" % s for s in list(SEGMENTS) + ["total"]},
        "reference_df": "reference_df.csv",
        "weights": "weights.csv",
        "factors": "factors.csv",
        "config": {
            "filter": {"rr": RR, "lambda": 1.0},
            "solver": {"max_iterations": 500, "gradient_tolerance": 1e-8},
            "hp": {"lambda_hp": 129600},
            "calibration": {
                "pd_ttc": float(fmt(sum(pd) / len(pd))),
                "window_start": 12,
                "target_extrema": count_extrema(pd, PROMINENCE),
                "prominence": PROMINENCE,
                "rr_tolerance": 1e-5,
            },
            "batch": {"window_start": "2011-01", "window_end": "2019-12"},
            "macro": {"target": "logit", "lags": {"unemployment": 3}},
        },
    }
    with open(os.path.join(out, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
