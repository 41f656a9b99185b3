#!/usr/bin/env python3
"""Generate the bundled synthetic corpus under data/synthetic/.

Everything is drawn from one fixed seed, so re-running the script reproduces
the committed files byte for byte.

Layout:
    reviews/*.xml, reviews/*.json   review statistical data
    mapping.csv                     review_id,study_id,publication_id
    qrels.txt                       topic 0 publication grade
    runs/*.txt                      five ranked runs
"""

import argparse
import json
import math
import random
from pathlib import Path
from xml.sax.saxutils import quoteattr

SEED = 20231
Z95 = 1.959964


# --- pooling, used only to write plausible published totals -----------------

def cells(d):
    a, n1, c, n2 = d
    b, dd = n1 - a, n2 - c
    if min(a, b, c, dd) == 0:
        return a + 0.5, b + 0.5, c + 0.5, dd + 0.5
    return float(a), float(b), float(c), float(dd)


def dich_effect(d, measure):
    a, n1, c, n2 = d
    if measure in ("RR", "OR") and a == 0 and c == 0:
        return None
    if measure == "RD":
        if n1 == 0 or n2 == 0:
            return None
        p1, p2 = a / n1, c / n2
        return p1 - p2, math.sqrt(p1 * (1 - p1) / n1 + p2 * (1 - p2) / n2)
    a, b, c, dd = cells(d)
    if measure == "RR":
        return math.log((a / (a + b)) / (c / (c + dd))), math.sqrt(1 / a - 1 / (a + b) + 1 / c - 1 / (c + dd))
    return math.log(a * dd / (b * c)), math.sqrt(1 / a + 1 / b + 1 / c + 1 / dd)


def cont_effect(row, measure):
    n1, m1, s1, n2, m2, s2 = row
    if measure == "MD":
        return m1 - m2, math.sqrt(s1 * s1 / n1 + s2 * s2 / n2)
    big_n = n1 + n2
    s = math.sqrt(((n1 - 1) * s1 * s1 + (n2 - 1) * s2 * s2) / (big_n - 2))
    g = (m1 - m2) / s * (1 - 3 / (4 * big_n - 9))
    return g, math.sqrt(big_n / (n1 * n2) + g * g / (2 * (big_n - 3.94)))


def pool_iv(effects, random_effects):
    effects = [e for e in effects if e is not None and e[1] > 0]
    w = [1 / (se * se) for _, se in effects]
    sw = sum(w)
    est = sum(wi * t for wi, (t, _) in zip(w, effects)) / sw
    if random_effects and len(effects) > 1:
        q = sum(wi * (t - est) ** 2 for wi, (t, _) in zip(w, effects))
        tau2 = max(0.0, (q - (len(effects) - 1)) / (sw - sum(x * x for x in w) / sw))
        w = [1 / (se * se + tau2) for _, se in effects]
        sw = sum(w)
        est = sum(wi * t for wi, (t, _) in zip(w, effects)) / sw
    return est, 1 / math.sqrt(sw)


def pool_mh(rows, measure):
    rows = [r for r in rows if not (measure != "RD" and r[0] == 0 and r[2] == 0)]
    if measure == "RD":
        w = [r[1] * r[3] / (r[1] + r[3]) for r in rows]
        est = sum(wi * (r[0] / r[1] - r[2] / r[3]) for wi, r in zip(w, rows)) / sum(w)
        num = 0.0
        for r in rows:
            a, n1, c, n2 = r
            b, d, n = n1 - a, n2 - c, n1 + n2
            num += (a * b * n2 ** 3 + c * d * n1 ** 3) / (n1 * n2 * n * n)
        return est, math.sqrt(num) / sum(w), False
    sums = dict(r=0.0, s=0.0, p=0.0, q=0.0, u=0.0, v=0.0, pr=0.0, ps=0.0, qr=0.0, qs=0.0)
    for row in rows:
        a, b, c, d = cells(row)
        n1, n2 = a + b, c + d
        n = n1 + n2
        if measure == "RR":
            sums["r"] += a * n2 / n
            sums["s"] += c * n1 / n
            sums["p"] += (n1 * n2 * (a + c) - a * c * n) / (n * n)
        else:
            r, s = a * d / n, b * c / n
            p, q = (a + d) / n, (b + c) / n
            sums["r"] += r
            sums["s"] += s
            sums["pr"] += p * r
            sums["ps"] += p * s
            sums["qr"] += q * r
            sums["qs"] += q * s
    big_r, big_s = sums["r"], sums["s"]
    est = math.log(big_r / big_s)
    if measure == "RR":
        se = math.sqrt(sums["p"] / (big_r * big_s))
    else:
        se = math.sqrt(sums["pr"] / (2 * big_r * big_r) + (sums["ps"] + sums["qr"]) / (2 * big_r * big_s)
                       + sums["qs"] / (2 * big_s * big_s))
    return est, se, True


def published_total(outcome):
    rows = [r["data"] for sg in outcome["subgroups"] for r in sg["rows"]]
    measure = outcome["measure"]
    log_scale = measure in ("RR", "OR")
    if outcome["kind"] == "dichotomous" and outcome["pooling"] == "MH" and not outcome["random"]:
        est, se, _ = pool_mh(rows, measure)
    elif outcome["kind"] == "dichotomous":
        est, se = pool_iv([dich_effect(r, measure) for r in rows], outcome["random"])
    else:
        est, se = pool_iv([cont_effect(r, measure) for r in rows], outcome["random"])
    lo, hi = est - Z95 * se, est + Z95 * se
    if log_scale:
        est, lo, hi = math.exp(est), math.exp(lo), math.exp(hi)
    return round(est, 4), round(lo, 4), round(hi, 4)


# --- corpus ------------------------------------------------------------------

SURNAMES = ["Abe", "Baker", "Chen", "Diaz", "Eriksen", "Fofana", "Garcia", "Hughes", "Ivanova", "Jensen",
            "Kato", "Lopez", "Moreau", "Nair", "Okafor", "Petrov", "Quinn", "Rossi", "Sato", "Tanaka",
            "Usman", "Varga", "Weber", "Xu", "Yilmaz", "Zhang"]

# (review id, number of studies, dichotomous outcomes, continuous outcomes, file format)
REVIEWS = [
    ("CD010101", 30, 6, 2, "xml"),
    ("CD010202", 20, 5, 2, "xml"),
    ("CD010303", 14, 4, 1, "xml"),
    ("CD010404", 10, 3, 2, "xml"),
    ("CD010505", 7, 3, 1, "json"),
    ("CD010606", 5, 3, 1, "xml"),
    ("CD010707", 4, 2, 2, "xml"),
    ("CD010808", 3, 2, 1, "json"),
]

DICH_SETTINGS = [("RR", "MH", False), ("OR", "MH", False), ("RR", "MH", False), ("RD", "MH", False),
                 ("RR", "IV", True), ("OR", "IV", False)]
CONT_SETTINGS = [("MD", "IV", False), ("SMD", "IV", True), ("MD", "IV", True)]


def binomial(rng, n, p):
    return sum(1 for _ in range(n) if rng.random() < p)


def make_studies(rng, review_id, n_studies, pub_counter):
    studies = []
    used = set()
    for i in range(n_studies):
        while True:
            name = f"STD-{rng.choice(SURNAMES)}-{rng.randint(1988, 2016)}"
            if name not in used:
                used.add(name)
                break
        # Most of the studies are reported by more than one publication.
        n_pubs = rng.choices([1, 2, 3, 4], weights=[25, 35, 25, 15])[0]
        pubs = []
        for _ in range(n_pubs):
            pub_counter[0] += rng.randint(1, 977)
            pubs.append(str(pub_counter[0]))
        studies.append({"id": name, "pubs": pubs})
    return studies


def dich_row(rng, base_risk, log_rr):
    n1, n2 = rng.randint(15, 160), rng.randint(15, 160)
    p2 = base_risk
    p1 = min(0.95, max(0.005, base_risk * math.exp(log_rr)))
    return [binomial(rng, n1, p1), n1, binomial(rng, n2, p2), n2]


def cont_row(rng, mean_ctrl, diff):
    n1, n2 = rng.randint(12, 140), rng.randint(12, 140)
    sd1, sd2 = round(rng.uniform(1.0, 4.5), 2), round(rng.uniform(1.0, 4.5), 2)
    m1 = round(mean_ctrl + diff + rng.gauss(0, 0.6), 2)
    m2 = round(mean_ctrl + rng.gauss(0, 0.6), 2)
    return [n1, m1, sd1, n2, m2, sd2]


def make_outcome(rng, kind, index, settings, studies, cmp_id):
    measure, pooling, random_effects = settings
    k = min(len(studies), rng.randint(3, 12))
    chosen = rng.sample(studies, k)
    outcome = {"id": f"{cmp_id}.{index:02d}", "kind": kind, "measure": measure, "pooling": pooling,
               "random": random_effects, "subgroups": []}
    if kind == "dichotomous":
        outcome["name"] = rng.choice(["Mortality", "Relapse", "Adverse events", "Treatment failure",
                                      "Hospital admission", "Remission"])
        base, effect = rng.uniform(0.1, 0.4), rng.choice([-1, 1]) * rng.uniform(0.35, 0.7)
        make = lambda: dich_row(rng, base * rng.uniform(0.8, 1.2), effect + rng.gauss(0, 0.15))
    else:
        outcome["name"] = rng.choice(["Pain score", "Quality of life", "Length of stay", "Symptom scale"])
        mean_ctrl, effect = rng.uniform(5, 40), rng.choice([-1, 1]) * rng.uniform(1.5, 3.0)
        make = lambda: cont_row(rng, mean_ctrl, effect + rng.gauss(0, 0.3))

    if k >= 5 and rng.random() < 0.45:
        split = rng.randint(2, k - 2)
        parts = [("1", "Adults", chosen[:split]), ("2", "Children", chosen[split:])]
    else:
        parts = [(None, "", chosen)]
    for sg_suffix, sg_name, members in parts:
        sg_id = outcome["id"] if sg_suffix is None else f"{outcome['id']}.{sg_suffix}"
        outcome["subgroups"].append({"id": sg_id, "name": sg_name,
                                     "rows": [{"study_id": s["id"], "data": make()} for s in members]})
    outcome["published"] = published_total(outcome)
    return outcome


def build_corpus(rng):
    pub_counter = [21000000]
    reviews = []
    for review_id, n_studies, n_dich, n_cont, fmt in REVIEWS:
        studies = make_studies(rng, review_id, n_studies, pub_counter)
        comparisons = []
        n_cmp = 2 if n_dich + n_cont > 4 else 1
        plan = ["dichotomous"] * n_dich + ["continuous"] * n_cont
        per_cmp = [plan[i::n_cmp] for i in range(n_cmp)]
        for c, kinds in enumerate(per_cmp, start=1):
            cmp_id = f"CMP-{c:03d}"
            outcomes = []
            for i, kind in enumerate(kinds, start=1):
                settings = rng.choice(DICH_SETTINGS if kind == "dichotomous" else CONT_SETTINGS)
                outcomes.append(make_outcome(rng, kind, i, settings, studies, cmp_id))
            comparisons.append({"id": cmp_id, "name": f"Intervention versus control ({c})",
                                "outcomes": outcomes})
        reviews.append({"id": review_id, "format": fmt, "studies": studies, "comparisons": comparisons})

    # One shared publication (a report covering two studies) and one study
    # repeated across two subgroups of the same outcome.
    first = reviews[0]
    first["studies"][1]["pubs"].append(first["studies"][0]["pubs"][0])
    for cmp in first["comparisons"]:
        for outcome in cmp["outcomes"]:
            if len(outcome["subgroups"]) == 2:
                dup = dict(outcome["subgroups"][0]["rows"][0])
                outcome["subgroups"][1]["rows"].append(dup)
                outcome["published"] = published_total(outcome)
                break
        else:
            continue
        break

    # A double-zero study inside an RR/OR outcome.
    for review in reviews:
        for cmp in review["comparisons"]:
            for outcome in cmp["outcomes"]:
                if outcome["measure"] in ("RR", "OR") and outcome["pooling"] == "MH":
                    rows = outcome["subgroups"][0]["rows"]
                    if len(rows) >= 3:
                        rows[-1]["data"] = [0, rows[-1]["data"][1], 0, rows[-1]["data"][3]]
                        outcome["published"] = published_total(outcome)
                        return reviews
    return reviews


# --- writers -----------------------------------------------------------------

def fmt_num(x):
    return repr(float(x)) if not float(x).is_integer() else str(int(x))


def write_xml(review, path):
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<COCHRANE_REVIEW REVIEW_ID="{review["id"]}" DOI="10.1002/14651858.{review["id"]}.pub2">',
           "<ANALYSES_AND_DATA>"]
    skipped_written = False
    for cmp in review["comparisons"]:
        out.append(f'<COMPARISON ID="{cmp["id"]}" NO="{cmp["id"][-1]}">')
        out.append(f"<NAME>{cmp['name']}</NAME>")
        for o in cmp["outcomes"]:
            tag = "DICH" if o["kind"] == "dichotomous" else "CONT"
            est, lo, hi = o["published"]
            attrs = (f'ID="{o["id"]}" EFFECT_MEASURE="{o["measure"]}" METHOD="{o["pooling"]}" '
                     f'RANDOM="{"YES" if o["random"] else "NO"}" CI_TOTAL="95" TOTALS="YES" '
                     f'EFFECT_SIZE="{est}" CI_START="{lo}" CI_END="{hi}"')
            out.append(f"<{tag}_OUTCOME {attrs}>")
            out.append(f"<NAME>{o['name']}</NAME>")
            for sg in o["subgroups"]:
                inner = out
                if sg["id"] != o["id"]:
                    out.append(f'<{tag}_SUBGROUP ID="{sg["id"]}">')
                    out.append(f"<NAME>{sg['name']}</NAME>")
                for row in sg["rows"]:
                    d = row["data"]
                    if tag == "DICH":
                        data = f'EVENTS_1="{d[0]}" TOTAL_1="{d[1]}" EVENTS_2="{d[2]}" TOTAL_2="{d[3]}"'
                    else:
                        data = (f'MEAN_1="{d[1]}" SD_1="{d[2]}" TOTAL_1="{d[0]}" '
                                f'MEAN_2="{d[4]}" SD_2="{d[5]}" TOTAL_2="{d[3]}"')
                    inner.append(f'<{tag}_DATA STUDY_ID={quoteattr(row["study_id"])} {data}/>')
                if sg["id"] != o["id"]:
                    out.append(f"</{tag}_SUBGROUP>")
            out.append(f"</{tag}_OUTCOME>")
        if not skipped_written:
            # Time-to-event data is outside the supported subset.
            out.append(f'<IV_OUTCOME ID="{cmp["id"]}.90" EFFECT_MEASURE="HR" METHOD="IV">'
                       "<NAME>Time to relapse</NAME></IV_OUTCOME>")
            skipped_written = True
        out.append("</COMPARISON>")
    out.append("</ANALYSES_AND_DATA>")
    out.append("</COCHRANE_REVIEW>")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")


def write_json(review, path):
    doc = {"review_id": review["id"], "comparisons": []}
    for cmp in review["comparisons"]:
        c = {"id": cmp["id"], "name": cmp["name"], "outcomes": []}
        for o in cmp["outcomes"]:
            est, lo, hi = o["published"]
            out = {"id": o["id"], "name": o["name"], "data_kind": o["kind"], "effect_measure": o["measure"],
                   "pooling": "mantel_haenszel" if o["pooling"] == "MH" else "inverse_variance",
                   "model": "random" if o["random"] else "fixed", "ci_level": 0.95,
                   "original": {"estimate": est, "ci_low": lo, "ci_high": hi}, "subgroups": []}
            for sg in o["subgroups"]:
                rows = []
                for row in sg["rows"]:
                    d = row["data"]
                    if o["kind"] == "dichotomous":
                        rows.append({"study_id": row["study_id"], "events_exp": d[0], "total_exp": d[1],
                                     "events_ctrl": d[2], "total_ctrl": d[3]})
                    else:
                        rows.append({"study_id": row["study_id"], "n_exp": d[0], "mean_exp": d[1], "sd_exp": d[2],
                                     "n_ctrl": d[3], "mean_ctrl": d[4], "sd_ctrl": d[5]})
                out["subgroups"].append({"id": sg["id"], "name": sg["name"], "rows": rows})
            c["outcomes"].append(out)
        doc["comparisons"].append(c)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def build_collection(rng, reviews):
    """Per topic: judged documents and their grades, plus unjudged extras."""
    topics = {}
    next_id = [30000000]

    def fresh():
        next_id[0] += rng.randint(1, 499)
        return str(next_id[0])

    for review in reviews:
        included = sorted({p for s in review["studies"] for p in s["pubs"]})
        grades = {p: 1 for p in included}
        # Some included publications were judged non-relevant, and one per
        # topic is missing from the qrels altogether (runs still return it).
        picked = rng.sample(included, max(1, len(included) // 12) + 1)
        for p in picked[1:]:
            grades[p] = 0
        del grades[picked[0]]
        # Some abstract-level relevant documents never made it into the review.
        for _ in range(rng.randint(1, 3)):
            grades[fresh()] = 1
        for _ in range(rng.randint(60, 240)):
            grades[fresh()] = 0
        unjudged = [fresh() for _ in range(rng.randint(2, 6))] + [picked[0]]
        topics[review["id"]] = {"grades": grades, "unjudged": unjudged}
    return topics


def make_run(rng, reviews, topics, tag, strength, first_only=False):
    lines = []
    for review in reviews:
        t = topics[review["id"]]
        primary = {s["pubs"][0] for s in review["studies"]}
        included = {p for s in review["studies"] for p in s["pubs"]}
        docs = sorted(list(t["grades"]) + t["unjudged"])
        scored = []
        for d in docs:
            if d in included:
                signal = strength
                if first_only and d not in primary:
                    signal = -2.0
            else:
                signal = 0.0
            scored.append((round(signal + rng.gauss(0, 1), 6), d))
        scored.sort(key=lambda x: (-x[0], x[1]))
        for rank, (score, d) in enumerate(scored, start=1):
            lines.append(f"{review['id']} Q0 {d} {rank} {score} {tag}")
    return "\n".join(lines) + "\n"


RUNS = [("sys-a", 3.0, False), ("sys-b", 2.2, False), ("sys-c", 1.5, False), ("sys-d", 3.6, True),
        ("sys-e", 0.8, False)]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "synthetic")
    args = parser.parse_args()

    rng = random.Random(SEED)
    reviews = build_corpus(rng)
    (args.out / "reviews").mkdir(parents=True, exist_ok=True)
    (args.out / "runs").mkdir(parents=True, exist_ok=True)
    for review in reviews:
        if review["format"] == "xml":
            write_xml(review, args.out / "reviews" / f"{review['id']}.xml")
        else:
            write_json(review, args.out / "reviews" / f"{review['id']}.json")

    mapping = ["review_id,study_id,publication_id"]
    for review in reviews:
        for s in review["studies"]:
            for p in s["pubs"]:
                mapping.append(f"{review['id']},{s['id']},{p}")
    (args.out / "mapping.csv").write_text("\n".join(mapping) + "\n", encoding="utf-8")

    topics = build_collection(rng, reviews)
    qrels = []
    for review in reviews:
        for d, g in sorted(topics[review["id"]]["grades"].items()):
            qrels.append(f"{review['id']} 0 {d} {g}")
    (args.out / "qrels.txt").write_text("\n".join(qrels) + "\n", encoding="utf-8")

    for tag, strength, first_only in RUNS:
        (args.out / "runs" / f"{tag}.txt").write_text(
            make_run(rng, reviews, topics, tag, strength, first_only), encoding="utf-8")


if __name__ == "__main__":
    main()
