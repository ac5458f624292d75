"""Replay the wakefield fixture through the library and check every tally."""

from __future__ import annotations

import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from retrace import annotate as ann
from retrace import classify as cls
from retrace import extract as ext
from retrace import harvest as hv
from retrace import report as rpt

FIX = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "wakefield"
SEED = "10.1016/s0140-6736(97)11096-0"

ok = True


def check(label, got, want):
    global ok
    status = "OK " if got == want else "FAIL"
    if got != want:
        ok = False
    print(f"{status} {label}: got {got!r} want {want!r}")


# harvest
endpoint = str(FIX / "coci.ndjson")
records = hv.fetch_citations(SEED, endpoint)
check("citing entities", len(records), 615)
meta = hv.fetch_metadata([r.citing_doi for r in records], endpoint)
check("metadata records", len(meta.records), 615)
check("metadata misses", len(meta.misses), 0)
check("with source_id", sum(1 for m in meta.records if m.source_id), 599)
check("with source_title", sum(1 for m in meta.records if m.source_title), 603)
from retrace.identifiers import classify_source_id
kinds = Counter(classify_source_id(m.source_id) for m in meta.records if m.source_id)
check("issn count", kinds.get("issn", 0), 548)
check("isbn count", kinds.get("isbn", 0), 551 - 500)
db = hv.load_retraction_db(str(FIX / "rw.csv"))
statuses = hv.lookup_retraction_status([m.doi for m in meta.records], db)
check("retracted citing entities", sum(1 for s in statuses if s.retracted), 1)
years = {m.doi: m.year for m in meta.records}

# classify
tables = cls.load_tables(str(FIX / "tables"))
assignments = {}
for m in meta.records:
    a = cls.classify_venue(m.doi, m.source_id, tables)
    assignments[m.doi] = a
assigned = [a for a in assignments.values() if a.areas]
check("classified entities", len(assigned), 576)
area_hist = Counter(area for a in assigned for area in a.areas)
check("distinct areas", len(area_hist), 24)
check("total area assignments", sum(area_hist.values()), 942)
expected_areas = {
    "medicine": 380, "social sciences": 90, "nursing": 81,
    "biochemistry, genetics and molecular biology": 59, "psychology": 58,
    "pharmacology, toxicology and pharmaceutics": 54,
    "immunology and microbiology": 52, "arts and humanities": 28,
    "neuroscience": 24, "environmental science": 17,
    "agricultural and biological sciences": 16, "health professions": 15,
    "computer science": 13, "mathematics": 10,
    "business, management and accounting": 8, "engineering": 7,
    "dentistry": 7, "multidisciplinary": 7, "decision sciences": 7,
    "economics, econometrics and finance": 5, "earth and planetary sciences": 1,
    "chemical engineering": 1, "materials science": 1, "physics and astronomy": 1,
}
check("area histogram", dict(area_hist), expected_areas)
cats = {c for a in assigned for c in a.categories}
check("distinct categories", len(cats), 170)
prov = Counter(a.provenance for a in assignments.values())
print("   provenance:", dict(prov))
check("isbn area-route", prov.get("isbn-lcc-area", 0), 30)
check("isbn category-route", prov.get("isbn-lcc-category", 0), 13)
check("manual pending", prov.get("manual-pending", 0), 39)

# extract
patterns = ext.load_patterns(str(FIX / "patterns.csv"))
citations, review = ext.extract_corpus(str(FIX / "texts"), patterns)
check("in-text citations", len(citations), 870)
check("zero-match docs", len(review), 0)
sec_hist = Counter(c.section_kind for c in citations)
check("sections recognized", {k: sec_hist[k] for k in (
    "introduction", "discussion", "background", "results",
    "conclusions", "method", "abstract")},
    {"introduction": 166, "discussion": 61, "background": 36, "results": 28,
     "conclusions": 17, "method": 15, "abstract": 5})
residual = sum(v for k, v in sec_hist.items()
               if k in ("first section", "middle section", "final section"))
check("residual sections", residual, 429)
check("none sections", sec_hist.get("none", 0), 113)
check("sections with value", 870 - sec_hist.get("none", 0), 757)

# mention roll-up
contexts: dict[str, list[str]] = {}
for c in citations:
    contexts.setdefault(c.doi, []).append(c.context)
mention = {doi: ann.roll_up_entity_mention(ctxs) for doi, ctxs in contexts.items()}
check("entities mentioning", sum(mention.values()), 151)
check("entities not mentioning", sum(1 for v in mention.values() if not v), 464)

# annotations
import json
annotations = []
with open(FIX / "annotations.log", encoding="utf-8") as fh:
    for line in fh:
        annotations.append(json.loads(line))
check("annotations", len(annotations), 870)
sent = Counter(a["sentiment"] for a in annotations)
check("sentiments", dict(sent), {"neutral": 549, "negative": 300, "positive": 21})
intents = Counter(a["intent"] for a in annotations)
check("intent kinds", len(intents), 17)
check("discusses", intents["discusses"], 226)
check("disputes", intents["disputes"], 114)
check("refutes", intents["refutes"], 1)

# consistency: detector flag vs context of matching citation
per_doi: dict[str, int] = {}
flag_by_key = {}
for c in citations:
    i = per_doi.get(c.doi, 0)
    per_doi[c.doi] = i + 1
    flag_by_key[(c.doi, i)] = ann.detect_retraction_mention(c.context)
mismatch = sum(1 for a in annotations
               if flag_by_key[(a["doi"], a["pointer_index"])] != a["retraction_mentioned"])
check("log mention flags consistent", mismatch, 0)

# reports
cfg = rpt.PeriodConfig(1998, 2004, 2010, 2017)
entity_rows = [rpt.EntityRow(m.doi, years[m.doi], list(assignments[m.doi].areas),
                             mention[m.doi]) for m in meta.records]
yearly = {r["year"]: r for r in rpt.yearly_mention_report(entity_rows)}
check("2009 pct", rpt.round_half_up(yearly[2009]["pct_mentioning"]), 7.14)
check("2017 pct", rpt.round_half_up(yearly[2017]["pct_mentioning"]), 61.02)
areas_by_p = rpt.area_report(entity_rows, cfg, top_n=None)
for period, want in (("P1", 1.61), ("P2", 8.93), ("P3", 12.59)):
    row = next(r for r in areas_by_p[period] if r["area"] == "social sciences")
    check(f"social sciences {period}", rpt.round_half_up(100 * row["share"]), want)

annotated = []
per_doi2: dict[str, int] = {}
ann_by_key = {(a["doi"], a["pointer_index"]): a for a in annotations}
for c in citations:
    i = per_doi2.get(c.doi, 0)
    per_doi2[c.doi] = i + 1
    a = ann_by_key[(c.doi, i)]
    annotated.append(rpt.AnnotatedCitation(c.doi, years[c.doi], c.section_kind,
                                           a["intent"], a["sentiment"]))
by_year = rpt.intent_sentiment_report(annotated, cfg, grouping="year")
y15 = by_year["2015"]
neg = sum(c for (i, s), c in y15["intent_sentiment"].items() if s == "negative")
pos = sum(c for (i, s), c in y15["intent_sentiment"].items() if s == "positive")
check("2015 total citations", y15["total"], 27)
check("2015 negative pct", rpt.round_half_up(100 * neg / y15["total"]), 55.56)
check("2015 positive", pos, 0)

print("\nALL OK" if ok else "\nFAILURES PRESENT")
sys.exit(0 if ok else 1)
