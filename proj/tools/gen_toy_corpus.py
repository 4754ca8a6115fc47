#!/usr/bin/env python3
# Copyright 2026 The AgriQA Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled toy call-log corpus and its labeled pairs.

Output is deterministic. Re-run only when the templates change, then
refresh the golden eval report.
"""

import argparse
import csv
import pathlib
import random

CROPS = [
    "wheat", "paddy", "maize", "cotton", "sugarcane", "mustard", "potato", "onion",
    "tomato", "brinjal", "okra", "chilli", "groundnut", "soybean", "chickpea",
    "pigeonpea", "banana", "mango", "cabbage", "cauliflower", "garlic", "turmeric",
    "bajra", "jowar",
]

PESTS = ["aphid", "borer", "caterpillar"]
DISEASES = ["blight", "wilt", "rust"]

STATES = [
    ("Uttar Pradesh", ["Agra", "Meerut", "Varanasi"]),
    ("Punjab", ["Ludhiana", "Amritsar"]),
    ("Maharashtra", ["Pune", "Nashik", "Nagpur"]),
    ("Tamil Nadu", ["Madurai", "Salem"]),
    ("Bihar", ["Patna", "Gaya"]),
]

SEASONS = ["kharif", "rabi", "zaid", "Kharif", "RABI"]

# (phrasing, alternative phrasing, answer template). The two phrasings
# normalize differently, so they become separate canonical entries with the
# same intent; a held-out phrasing then has a true counterpart in train.
TEMPLATES = [
    ("{c} market rate", "{c} mandi price today", "{c} market rate – {lo} – – {hi} rups pq"),
    ("fertilizer dose for {c}", "how much urea for {c}",
     "apply urea {n} kg per acre and dap {p} kg per acre for {c}"),
    ("how to control {pest} in {c}", "{pest} attack on {c}",
     "spray imidacloprid {ml} ml per 15 litre water on {c}"),
    ("{c} seed variety", "best variety of {c} to grow", "recommended {c} varieties are {v1} and {v2}"),
    ("sowing time of {c}", "when to sow {c}", "sow {c} between {m1} and {m2}"),
    ("{dis} disease in {c}", "medicine for {dis} in {c}", "spray mancozeb {g} g per litre of water for {dis} in {c}"),
]

# Filler prefixes made only of stopwords; rows using them group with the
# plain phrasing.
FILLERS = ["farmer asking about ", "what is the ", "please tell "]

GENERAL = [
    ("status of pm kisan installment", "pm kisan installment status is shown on the official portal"),
    ("kisan credit card loan process", "the kisan credit card loan process starts at the nearest bank branch"),
    ("soil testing lab address", "the soil testing lab address is the district soil testing laboratory"),
    ("solar pump subsidy scheme", "apply for the solar pump subsidy scheme on the state agriculture portal"),
    ("organic farming training", "organic farming training is given by krishi vigyan kendra"),
    ("drip irrigation subsidy", "drip irrigation subsidy is given under pmksy"),
    ("animal vaccination camp", "the animal vaccination camp is held at the nearest veterinary hospital"),
    ("cattle feed for milk yield", "give cattle balanced feed with mineral mixture for better milk yield"),
]

WEATHER = [
    "what is the weather", "weather forecast", "asking about weather report",
    "WEATHER INFORMATION", "weather forecast for next week", "rain forecast weather today",
    "tell me the weather", "weather",
]

DEVANAGARI = [
    "गेहूं का बाजार भाव",
    "धान में खाद की मात्रा",
    "मौसम की जानकारी",
    "आलू में रोग नियंत्रण",
    "पीएम किसान स्थिति",
    "बीज की किस्म",
]

# Misspelled single-use variants; each corrects back by one edit.
MISSPELL = {
    "fertilizer": "fertilzer",
    "variety": "varety",
    "control": "contrl",
    "disease": "diseas",
    "medicine": "medcine",
    "attack": "atack",
}

MONTHS = ["june", "july", "october", "november", "february", "march"]
VARIETIES = ["hd 2967", "pusa 1121", "gw 322", "co 86032", "arka rakshak", "pusa basmati 1"]


def answer_for(template, crop, rng, pest, dis):
    lo = rng.randrange(1200, 4000, 50)
    values = dict(
        c=crop, pest=pest, dis=dis, lo=lo, hi=lo + rng.randrange(200, 800, 50),
        n=rng.randrange(40, 120, 5), p=rng.randrange(20, 60, 5), ml=rng.randrange(100, 800, 50),
        g=rng.choice([2, 2.5, 3]), d=rng.randrange(7, 21), m1=rng.choice(MONTHS[:3]),
        m2=rng.choice(MONTHS[3:]), v1=rng.choice(VARIETIES), v2=rng.choice(VARIETIES))
    return template.format(**values)


def build(seed):
    rng = random.Random(seed)
    rows = []

    def add(question, answer, qtype="Plant Protection"):
        state, districts = rng.choice(STATES)
        rows.append({
            "query_id": f"Q{len(rows) + 1:05d}",
            "query_text": question,
            "query_type": qtype,
            "created_on": f"2019-{rng.randrange(1, 13):02d}-{rng.randrange(1, 29):02d}",
            "state": state,
            "district": rng.choice(districts),
            "season": rng.choice(SEASONS),
            "answer": answer,
        })

    misspell_budget = dict(MISSPELL)
    for i, crop in enumerate(CROPS):
        pest = PESTS[i % len(PESTS)]
        dis = DISEASES[(i // 2) % len(DISEASES)]
        for base_t, alt_t, answer_t in TEMPLATES:
            if crop == "wheat" and base_t == "{c} market rate":
                answer = "wheat market rate – 1800 – – 2200 rups pq"
            else:
                answer = answer_for(answer_t, crop, rng, pest, dis)
            qtype = "Market Information" if "market" in base_t else "Cultural Practices"
            for question_t in (base_t, alt_t):
                question = question_t.format(c=crop, pest=pest, dis=dis)
                add(question, answer, qtype)
                if rng.random() < 0.25:
                    add(rng.choice(FILLERS) + question, answer, qtype)
                if rng.random() < 0.1:
                    # A second, different answer for the same question.
                    add(question.upper(), answer_for(answer_t, crop, rng, pest, dis), qtype)
                for word, wrong in list(misspell_budget.items()):
                    if word in question.split() and rng.random() < 0.3:
                        add(question.replace(word, wrong), answer, qtype)
                        del misspell_budget[word]
                        break
    for question, answer in GENERAL:
        add(question, answer, "Government Schemes")
    for question in WEATHER:
        add(question, "weather details shared as per imd forecast", "Weather")
    for question in DEVANAGARI:
        add(question, "जानकारी दी गई", "Others")
    rng.shuffle(rows)
    for i, row in enumerate(rows):
        row["query_id"] = f"Q{i + 1:05d}"
    return rows


def labeled_pairs(seed):
    """Pairs of (test question, predicted question, correct?) in the style
    of a manual review: same intent and crop is correct, anything else not."""
    rng = random.Random(seed + 1)
    pairs = []
    for crop in rng.sample(CROPS, 12):
        other = rng.choice([c for c in CROPS if c != crop])
        base_t, alt_t, _ = rng.choice(TEMPLATES)
        wrong_t = rng.choice([t for t in TEMPLATES if t[0] != base_t])[0]
        fmt = dict(pest=PESTS[0], dis=DISEASES[0])
        pairs.append((alt_t.format(c=crop, **fmt), base_t.format(c=crop, **fmt), True))
        pairs.append((base_t.format(c=crop, **fmt), alt_t.format(c=crop, **fmt), True))
        pairs.append((alt_t.format(c=crop, **fmt), base_t.format(c=other, **fmt), False))
        pairs.append((alt_t.format(c=crop, **fmt), wrong_t.format(c=crop, **fmt), False))
    return pairs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"))
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    fields = ["query_id", "query_text", "query_type", "created_on", "state", "district", "season", "answer"]
    with open(out / "kcc_toy.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(build(args.seed))
    with open(out / "labels.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["test_question", "predicted_question", "is_correct"])
        for t, p, ok in labeled_pairs(args.seed):
            w.writerow([t, p, "1" if ok else "0"])


if __name__ == "__main__":
    main()
