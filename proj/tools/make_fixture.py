#!/usr/bin/env python3
"""Writes the bundled demonstration dataset under data/fixture/.

The rows are synthetic: names are placeholders and totals are drawn around a
per-class level table that approximates published all-time RAW (raw + wraps)
top totals. They exercise every ingestion rule (equipped rows, single-lift
events, disqualifications, unknown sex, repeat meets, missing bodyweights that
need an override, very light and very heavy lifters) and give the fitting and
diagnostics commands something with the right shape to work on.

Output is a pure function of SEED.
"""

import csv
import json
import pathlib
import random

SEED = 20190227
OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixture"

# (lower kg, upper kg, class-best total kg, lifters generated)
MEN = [
    (40.0, 44.0, 440, 4),
    (44.0, 48.0, 500, 6),
    (48.0, 52.0, 560, 9),
    (52.0, 56.0, 620, 12),
    (56.0, 60.0, 680, 16),
    (60.0, 67.5, 770, 22),
    (67.5, 75.0, 850, 22),
    (75.0, 82.5, 910, 22),
    (82.5, 90.0, 955, 22),
    (90.0, 100.0, 1000, 22),
    (100.0, 110.0, 1035, 20),
    (110.0, 120.0, 1065, 20),
    (120.0, 140.0, 1095, 20),
    (140.0, 175.0, 1115, 18),
    (175.0, 205.0, 1060, 6),
]
WOMEN = [
    (38.0, 44.0, 385, 10),
    (44.0, 48.0, 420, 14),
    (48.0, 52.0, 455, 18),
    (52.0, 56.0, 490, 20),
    (56.0, 60.0, 525, 20),
    (60.0, 67.5, 570, 22),
    (67.5, 75.0, 605, 22),
    (75.0, 82.5, 625, 20),
    (82.5, 90.0, 640, 18),
    (90.0, 130.0, 670, 16),
]

HEADER = ["Name", "Sex", "Event", "Equipment", "Age", "BodyweightKg", "WeightClassKg",
          "Best3SquatKg", "Best3BenchKg", "Best3DeadliftKg", "TotalKg", "Place",
          "Federation", "Date", "MeetName"]

MEETS = ["Raw Nationals", "Spring Classic", "Summer Open", "Autumn Invitational",
         "Winter Challenge", "Regional Championships", "Pro Invitational"]


def round_to(x, step):
    return round(x / step) * step


def date(rng, lo_year=2012, hi_year=2019):
    y = rng.randint(lo_year, hi_year)
    m = rng.randint(1, 2 if y == 2019 else 12)
    d = rng.randint(1, 20 if (y, m) == (2019, 2) else 28)
    return f"{y:04d}-{m:02d}-{d:02d}"


def bodyweight(rng, lo, hi, open_class):
    if open_class:
        return round(rng.uniform(lo + 0.5, hi), 1)
    # Competitive lifters sit close to the class limit.
    return round(max(lo + 0.1, hi - abs(rng.gauss(0.0, 0.25 * (hi - lo)))), 1)


def lifters(rng, sex, table, spread_light, spread, light_limit):
    rows = []
    for ci, (lo, hi, best, n) in enumerate(table):
        open_class = ci >= len(table) - (2 if sex == "M" else 1)
        for k in range(n):
            name = f"{sex}{ci:02d} Lifter {k + 1:02d}"
            bw = bodyweight(rng, lo, hi, open_class)
            # Class best is reached at the upper limit; lighter lifters in a
            # class scale down linearly towards the previous class best.
            prev_best = table[ci - 1][2] if ci > 0 else best * 0.88
            level = prev_best + (best - prev_best) * (bw - lo) / (hi - lo)
            if sex == "M" and lo >= 175.0:
                level = best
            s = spread_light if hi <= light_limit else spread
            total = level * (1.0 - s * rng.random() ** 0.8)
            meets = rng.randint(1, 3)
            dates = sorted({date(rng) for _ in range(meets)})
            for mi, d in enumerate(dates):
                factor = 1.0 if mi == len(dates) - 1 else rng.uniform(0.92, 0.99)
                mbw = bw if mi == len(dates) - 1 else round(bw + rng.uniform(-1.5, 1.0), 1)
                t = round_to(total * factor, 2.5)
                rows.append({
                    "Name": name, "Sex": sex, "Event": "SBD",
                    "Equipment": rng.choice(["Raw", "Wraps"]),
                    "BodyweightKg": f"{mbw:.1f}", "TotalKg": f"{t:.1f}",
                    "Date": d, "MeetName": rng.choice(MEETS) + f" {d[:4]}",
                })
    return rows


def decoys(rng, rows):
    """Rows the ingestion rules must drop or report."""
    out = []
    picks = rng.sample(rows, 40)
    for i, r in enumerate(picks):
        d = dict(r)
        kind = i % 5
        if kind == 0:  # equipped, heavier than the raw best
            d["Equipment"] = rng.choice(["Single-ply", "Multi-ply"])
            d["TotalKg"] = f"{round_to(float(r['TotalKg']) * 1.18, 2.5):.1f}"
        elif kind == 1:  # bench-only
            d["Event"] = "B"
            d["TotalKg"] = f"{round_to(float(r['TotalKg']) * 0.3, 2.5):.1f}"
        elif kind == 2:  # disqualified
            d["TotalKg"] = ""
        elif kind == 3:  # deadlift-only with straps
            d["Event"] = "D"
            d["Equipment"] = "Straps"
            d["TotalKg"] = f"{round_to(float(r['TotalKg']) * 0.4, 2.5):.1f}"
        else:  # mixed-sex division
            d["Sex"] = "Mx"
        d["Date"] = date(rng)
        d["MeetName"] = "Open Meet " + d["Date"][:4]
        out.append(d)
    return out


def big_dogs(rows, sex, uppers):
    """Best results in the given classes at a meet that lost bodyweights."""
    out, overrides = [], []
    for upper in uppers:
        cands = [r for r in rows if r["Sex"] == sex and r["Equipment"] in ("Raw", "Wraps")
                 and upper - 10 < float(r["BodyweightKg"]) <= upper]
        best = max(cands, key=lambda r: (float(r["TotalKg"]), r["Name"]))
        overrides.append({"lifter_id": best["Name"], "meet_name": "Big Dogs 2018",
                          "bodyweight_kg": best["BodyweightKg"],
                          "note": f"latest previous competition weight ({best['MeetName']}, {best['Date']})"})
        r = dict(best)
        r["TotalKg"] = f"{float(best['TotalKg']) + 10.0:.1f}"
        r["BodyweightKg"] = ""
        r["Date"] = "2018-11-10"
        r["MeetName"] = "Big Dogs 2018"
        out.append(r)
    return out, overrides


def finish(rows):
    for r in rows:
        r.setdefault("Age", "")
        r["WeightClassKg"] = ""
        r["Best3SquatKg"] = r["Best3BenchKg"] = r["Best3DeadliftKg"] = ""
        r["Place"] = "1"
        r["Federation"] = "SYN"
    return rows


def main():
    rng = random.Random(SEED)
    men = lifters(rng, "M", MEN, spread_light=0.24, spread=0.13, light_limit=60.0)
    women = lifters(rng, "F", WOMEN, spread_light=0.28, spread=0.18, light_limit=44.0)
    rows = men + women
    dogs_m, ov_m = big_dogs(rows, "M", [120.0, 140.0])
    rows += dogs_m
    rows += decoys(rng, men + women)
    rows = finish(rows)
    rng.shuffle(rows)

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "openpowerlifting_sample.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=HEADER, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in HEADER})
    with open(OUT / "overrides.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["lifter_id", "meet_name", "bodyweight_kg", "note"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(ov_m)

    def best_per_lifter(sex):
        best = {}
        for r in rows:
            if r["Sex"] != sex or r["Event"] != "SBD" or r["Equipment"] not in ("Raw", "Wraps"):
                continue
            if not r["TotalKg"] or not r["BodyweightKg"]:
                continue
            key = (-float(r["TotalKg"]), float(r["BodyweightKg"]), r["Date"])
            if r["Name"] not in best or key < best[r["Name"]][0]:
                best[r["Name"]] = (key, r)
        return [v[1] for v in best.values()]

    def anchors(sex, below, count):
        light = [r for r in best_per_lifter(sex) if float(r["BodyweightKg"]) < below]
        light.sort(key=lambda r: (-float(r["TotalKg"]), float(r["BodyweightKg"]), r["Date"], r["Name"]))
        return [{"lifter_id": r["Name"], "date": r["Date"]} for r in light[:count]]

    configs = {
        "filter_men.json": {
            "sex": "M", "equipment_allowed": ["Raw", "Wraps"], "event_required": "SBD",
            "bodyweight_min_kg": 60.0, "bodyweight_max_kg": 175.0, "class_boundaries_kg": "men",
            "top_n": 10, "anchor_rows": anchors("M", 60.0, 2), "normalization_points": 500.0,
            "extrapolation_kg": [50.0, 175.0]},
        "filter_men_all.json": {
            "sex": "M", "equipment_allowed": ["Raw", "Wraps"], "event_required": "SBD",
            "class_boundaries_kg": "men", "top_n": 10, "normalization_points": 500.0},
        "filter_women.json": {
            "sex": "F", "equipment_allowed": ["Raw", "Wraps"], "event_required": "SBD",
            "bodyweight_min_kg": 44.0, "class_boundaries_kg": "women", "top_n": 10,
            "anchor_rows": anchors("F", 44.0, 2), "normalization_points": 455.0},
        "filter_women_all.json": {
            "sex": "F", "equipment_allowed": ["Raw", "Wraps"], "event_required": "SBD",
            "class_boundaries_kg": "women", "top_n": 10, "normalization_points": 455.0},
    }
    for name, cfg in configs.items():
        (OUT / name).write_text(json.dumps(cfg, indent=2) + "\n")
    print(f"{len(rows)} rows -> {OUT}")


if __name__ == "__main__":
    main()
