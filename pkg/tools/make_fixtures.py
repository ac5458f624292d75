"""Deterministically generate the bundled replay fixtures.

Produces tests/fixtures/wakefield (the full 615-entity transcription fixture
whose aggregate statistics match the published tallies) and
tests/fixtures/mini (a small end-to-end dataset for pipeline tests).

Run from the repository root: python3 tools/make_fixtures.py
"""

from __future__ import annotations

import csv
import json
import random
import shutil
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from retrace.identifiers import isbn13_checksum_char, issn_checksum_char  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "tests" / "fixtures"

SEED_DOI = "10.1016/s0140-6736(97)11096-0"

# ---- target tallies -------------------------------------------------------

YEAR_TOTALS = {
    1998: 10, 1999: 12, 2000: 15, 2001: 18, 2002: 20, 2003: 22, 2004: 23,
    2005: 25, 2006: 27, 2007: 30, 2008: 34, 2009: 28, 2010: 36,
    2011: 38, 2012: 40, 2013: 43, 2014: 45, 2015: 18, 2016: 72, 2017: 59,
}
YEAR_MENTIONS = {
    1998: 0, 1999: 0, 2000: 1, 2001: 1, 2002: 1, 2003: 2, 2004: 2,
    2005: 2, 2006: 3, 2007: 3, 2008: 4, 2009: 2, 2010: 5,
    2011: 8, 2012: 10, 2013: 12, 2014: 14, 2015: 6, 2016: 39, 2017: 36,
}
assert sum(YEAR_TOTALS.values()) == 615
assert sum(YEAR_MENTIONS.values()) == 151

AREA_COUNTS = {
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
assert sum(AREA_COUNTS.values()) == 942
assert len(AREA_COUNTS) == 24

# per-period area-assignment totals and social sciences counts; the only
# integer solution whose rounded shares are 1.61 / 8.93 / 12.59
PERIOD_ASSIGN_TOTALS = {"P1": 186, "P2": 224, "P3": 532}
PERIOD_SS = {"P1": 3, "P2": 20, "P3": 67}

PERIOD_YEARS = {
    "P1": range(1998, 2005), "P2": range(2005, 2011), "P3": range(2011, 2018)}
PERIOD_ENTITIES = {p: sum(YEAR_TOTALS[y] for y in ys) for p, ys in PERIOD_YEARS.items()}
assert PERIOD_ENTITIES == {"P1": 120, "P2": 180, "P3": 315}
PERIOD_ASSIGNED = {"P1": 112, "P2": 168, "P3": 296}  # entities with >=1 area
assert sum(PERIOD_ASSIGNED.values()) == 576

SECTION_COUNTS = {
    "Introduction": 166, "Discussion": 61, "Background": 36, "Results": 28,
    "Conclusions": 17, "Methods": 15, "Abstract": 5,
}
RESIDUAL_SECTIONS = 429
NONE_SECTIONS = 113
assert sum(SECTION_COUNTS.values()) + RESIDUAL_SECTIONS + NONE_SECTIONS == 870

RESIDUAL_TITLES = [
    "Public debate", "Media coverage", "Community response", "Case timeline",
    "Policy implications", "Historical notes", "Vaccine uptake trends",
]

INTENT_COUNTS = {
    "discusses": 226, "disputes": 114, "credits": 95, "cites for information": 90,
    "cites as evidence": 74, "qualifies": 70, "describes": 60,
    "obtains background from": 56, "critiques": 55, "includes excerpt from": 8,
    "obtains support from": 6, "uses data from": 5, "uses conclusions from": 4,
    "ridicules": 4, "extends": 1, "updates": 1, "refutes": 1,
}
assert sum(INTENT_COUNTS.values()) == 870

SENTIMENT_COUNTS = {"neutral": 549, "negative": 300, "positive": 21}
# the 2015 slice: 27 in-text citations, 0 positive, 15 negative (55.56%)
SENTIMENT_2015 = {"negative": 15, "neutral": 12, "positive": 0}

POINTER = "(Wakefield et al., 1998)"
POINTER_PATTERN = r"\(Wakefield et al\., 1998\)"

FILLERS = [
    "Vaccination coverage varies widely between regions.",
    "Public confidence in immunization programs shifted over the years.",
    "Several cohort surveys examined parental attitudes in detail.",
    "Health agencies issued updated guidance for practitioners.",
    "Survey instruments were harmonized across participating clinics.",
    "Coverage statistics were compiled from national registries.",
]
ANCHOR_PLAIN = "Prior work {ptr} examined a proposed link between the vaccine and developmental outcomes."
ANCHOR_MENTION = "Prior work {ptr}, which was later retracted, examined a proposed link between the vaccine and developmental outcomes."


def largest_remainder(total_by_key: dict[str, int], column_totals: dict[str, int]):
    """Split each key's count over columns so column sums match exactly."""
    grand = sum(total_by_key.values())
    cols = list(column_totals)
    alloc = {k: {c: 0 for c in cols} for k in total_by_key}
    remaining_col = dict(column_totals)
    remaining_key = dict(total_by_key)
    # proportional floor allocation
    fracs = []
    for k, n in total_by_key.items():
        for c in cols:
            exact = n * column_totals[c] / grand
            base = int(exact)
            alloc[k][c] = base
            remaining_col[c] -= base
            remaining_key[k] -= base
            fracs.append((-(exact - base), k, c))
    fracs.sort()
    for _, k, c in fracs:
        if remaining_key[k] > 0 and remaining_col[c] > 0:
            alloc[k][c] += 1
            remaining_key[k] -= 1
            remaining_col[c] -= 1
    # final fixups
    for k in total_by_key:
        while remaining_key[k] > 0:
            for c in cols:
                if remaining_col[c] > 0:
                    alloc[k][c] += 1
                    remaining_key[k] -= 1
                    remaining_col[c] -= 1
                    break
    assert all(v == 0 for v in remaining_key.values())
    assert all(v == 0 for v in remaining_col.values())
    return alloc


def make_entities(rng: random.Random):
    """Build the 615 entity descriptors with identifiers, years and flags."""
    entities = []
    years = [y for y, n in sorted(YEAR_TOTALS.items()) for _ in range(n)]
    mention_flags = []
    for y in sorted(YEAR_TOTALS):
        flags = [True] * YEAR_MENTIONS[y] + [False] * (YEAR_TOTALS[y] - YEAR_MENTIONS[y])
        rng.shuffle(flags)
        mention_flags.extend(flags)

    for i, (year, mention) in enumerate(zip(years, mention_flags)):
        entities.append({
            "doi": f"10.5555/ent{i:04d}",
            "year": year,
            "mention": mention,
            "period": next(p for p, ys in PERIOD_YEARS.items() if year in ys),
        })

    # venue identifiers: 599 with source_id (548 ISSN / 51 ISBN), 603 with title
    # ISBNs live in P3; pendings: P1 8, P2 12, P3 19 (8 of them ISBN)
    p3 = [e for e in entities if e["period"] == "P3"]
    isbn_entities = p3[:51]
    for j, e in enumerate(isbn_entities):
        body = f"97855500{j:04d}"[:12]
        e["source_kind"] = "isbn"
        e["source_id"] = body + isbn13_checksum_char(body)
    # 30 area-match, 13 category-match, 8 pending
    for e in isbn_entities[:30]:
        e["isbn_route"] = "area"
    for e in isbn_entities[30:43]:
        e["isbn_route"] = "category"
    for e in isbn_entities[43:]:
        e["isbn_route"] = "pending"

    issn_counter = 0
    no_source = {"P1": 8, "P2": 12, "P3": 11}
    unknown_issn = {"P1": 0, "P2": 0, "P3": 0}
    # 16 entities without source_id, 15 ISSNs absent from the index; choose
    # the no-source ones first, rest of the 39-23=16... see below
    # no-source split: 16 total; unknown-issn split: 15 total
    no_source_split = {"P1": 4, "P2": 6, "P3": 6}
    unknown_split = {"P1": 4, "P2": 6, "P3": 5}
    assert sum(no_source_split.values()) == 16
    assert sum(unknown_split.values()) == 15
    for period in ("P1", "P2", "P3"):
        pool = [e for e in entities if e["period"] == period and "source_kind" not in e]
        idx = 0
        for _ in range(no_source_split[period]):
            pool[idx]["source_kind"] = "none"
            idx += 1
        for _ in range(unknown_split[period]):
            pool[idx]["source_kind"] = "issn-unknown"
            idx += 1
    for e in entities:
        if "source_kind" not in e:
            e["source_kind"] = "issn"
        if e["source_kind"] in ("issn", "issn-unknown"):
            body = f"{issn_counter:07d}"
            e["source_id"] = body[:4] + "-" + body[4:] + issn_checksum_char(body)
            issn_counter += 1

    # source_title: everyone with a source_id plus 4 of the 16 without
    title_only = [e for e in entities if e["source_kind"] == "none"][:4]
    for e in entities:
        has_id = e["source_kind"] != "none"
        e["source_title"] = (f"Journal of Study {e['doi'][-4:]}"
                             if has_id or e in title_only else "")
    return entities


def assign_areas(entities, rng: random.Random):
    """Distribute the exact area histogram over periods and entities."""
    non_ss = {a: n for a, n in AREA_COUNTS.items() if a != "social sciences"}
    col_totals = {p: PERIOD_ASSIGN_TOTALS[p] - PERIOD_SS[p] for p in PERIOD_ASSIGN_TOTALS}
    alloc = largest_remainder(non_ss, col_totals)
    for p, s in PERIOD_SS.items():
        alloc.setdefault("social sciences", {"P1": 0, "P2": 0, "P3": 0})[p] = s

    # reserve ISBN routes: 30 medicine area-match, 13 immunology category-match
    isbn_area = [e for e in entities if e.get("isbn_route") == "area"]
    isbn_cat = [e for e in entities if e.get("isbn_route") == "category"]
    assert alloc["medicine"]["P3"] >= len(isbn_area)
    assert alloc["immunology and microbiology"]["P3"] >= len(isbn_cat)
    for e in isbn_area:
        e["areas"] = ["medicine"]
    for e in isbn_cat:
        e["areas"] = ["immunology and microbiology"]

    for period in ("P1", "P2", "P3"):
        tokens = Counter({a: alloc[a][period] for a in alloc if alloc[a][period] > 0})
        pool = [e for e in entities if e["period"] == period]
        isbn_assigned = [e for e in pool if e.get("isbn_route") in ("area", "category")]
        for e in isbn_assigned:
            tokens[e["areas"][0]] -= 1
        issn_pool = [e for e in pool if e["source_kind"] == "issn"]
        n_assigned = PERIOD_ASSIGNED[period] - len(isbn_assigned)
        assert len(issn_pool) >= n_assigned, (period, len(issn_pool), n_assigned)
        chosen = issn_pool[:n_assigned]
        for e in issn_pool[n_assigned:]:
            e["areas"] = []
        for e in [x for x in pool if x["source_kind"] in ("none", "issn-unknown")
                  or x.get("isbn_route") == "pending"]:
            e["areas"] = []
        # deal tokens: most frequent area first, to entities lacking it
        for e in chosen:
            e["areas"] = []
        remaining = +tokens
        while sum(remaining.values()) > 0:
            area, _ = remaining.most_common(1)[0]
            candidates = [e for e in chosen if area not in e["areas"] and len(e["areas"]) < 2]
            candidates.sort(key=lambda e: len(e["areas"]))
            if not candidates:
                raise AssertionError(f"cannot place area {area} in {period}")
            candidates[0]["areas"].append(area)
            remaining[area] -= 1
            if remaining[area] == 0:
                del remaining[area]
        for e in chosen:
            assert e["areas"], "assigned entity ended with no areas"


def build_category_pools(rng: random.Random):
    """170 distinct category labels allocated over the 24 areas."""
    pools: dict[str, list[str]] = {}
    weights = {a: n for a, n in AREA_COUNTS.items()}
    total = 170
    base = {a: 1 for a in weights}  # every area keeps at least one category
    left = total - len(base)
    grand = sum(weights.values())
    exact = {a: left * weights[a] / grand for a in weights}
    extra = {a: int(exact[a]) for a in weights}
    for a in weights:
        # a pool larger than the area's entity count could leave labels unused
        extra[a] = min(extra[a], weights[a] - 1)
    gap = left - sum(extra.values())
    order = sorted(weights, key=lambda a: -(exact[a] - extra[a]))
    i = 0
    while gap > 0:
        a = order[i % len(order)]
        if base[a] + extra[a] < weights[a]:
            extra[a] += 1
            gap -= 1
        i += 1
    for a in weights:
        size = base[a] + extra[a]
        labels = [f"{a} studies {j + 1}" for j in range(size)]
        pools[a] = labels
    # the ISBN bridge outputs must exist among the 170 labels
    pools["medicine"][0] = "medicine (miscellaneous)"
    pools["immunology and microbiology"][0] = "immunology"
    assert sum(len(v) for v in pools.values()) == 170
    return pools


def write_wakefield(out_dir: Path):
    rng = random.Random(42)
    shutil.rmtree(out_dir, ignore_errors=True)
    out_dir.mkdir(parents=True)
    (out_dir / "texts").mkdir()

    entities = make_entities(rng)
    assign_areas(entities, rng)
    pools = build_category_pools(rng)

    # categories per entity
    counters = {a: 0 for a in pools}
    for e in entities:
        cats = []
        if e.get("isbn_route") == "area":
            cats = ["medicine (miscellaneous)"]
        elif e.get("isbn_route") == "category":
            cats = ["immunology"]
        else:
            for a in e["areas"]:
                pool = pools[a]
                cats.append(pool[counters[a] % len(pool)])
                counters[a] += 1
        e["categories"] = cats

    # every pool label must be used at least once
    used = set()
    for e in entities:
        used.update(e["categories"])
    all_labels = {lab for pool in pools.values() for lab in pool}
    missing = all_labels - used
    # assign leftovers to additional medicine-area entities (swap category)
    if missing:
        replaceable = [e for e in entities
                       if len(e["categories"]) == 1 and not e.get("isbn_route")
                       and e["areas"]]
        by_area: dict[str, list] = {}
        for e in replaceable:
            by_area.setdefault(e["areas"][0], []).append(e)
        for lab in sorted(missing):
            area = next(a for a, pool in pools.items() if lab in pool)
            cand = [e for e in by_area.get(area, [])
                    if Counter(x for ent in entities for x in ent["categories"])[e["categories"][0]] > 1]
            assert cand, f"cannot place category {lab}"
            cand[0]["categories"] = [lab]

    # citation counts per entity: 420x1, 135x2, 60x3; 2015 gets 9x1 + 9x2
    y2015 = [e for e in entities if e["year"] == 2015]
    for e in y2015[:9]:
        e["k"] = 1
    for e in y2015[9:]:
        e["k"] = 2
    rest = [e for e in entities if e["year"] != 2015]
    k_pool = [1] * 411 + [2] * 126 + [3] * 60
    rng.shuffle(k_pool)
    for e, k in zip(rest, k_pool):
        e["k"] = k
    assert sum(e["k"] for e in entities) == 870

    # flat (unstructured) docs: 113 'none' citations: 31x3 + 7x2 + 6x1
    flat_quota = {3: 31, 2: 7, 1: 6}
    for e in entities:
        if e["year"] != 2015 and flat_quota.get(e["k"], 0) > 0:
            e["flat"] = True
            flat_quota[e["k"]] -= 1
        else:
            e["flat"] = False
    assert all(v == 0 for v in flat_quota.values())
    assert sum(e["k"] for e in entities if e["flat"]) == NONE_SECTIONS

    # section labels for structured citations
    section_queue = [t for t, n in SECTION_COUNTS.items() for _ in range(n)]
    section_queue += ["@residual"] * RESIDUAL_SECTIONS
    rng.shuffle(section_queue)
    qi = 0
    for e in entities:
        if e["flat"]:
            e["sections"] = None
            continue
        secs = []
        for _ in range(e["k"]):
            label = section_queue[qi]
            qi += 1
            if label == "@residual":
                label = RESIDUAL_TITLES[qi % len(RESIDUAL_TITLES)]
            secs.append(label)
        e["sections"] = secs
    assert qi == len(section_queue)

    # write full texts
    for e in entities:
        lines = [f"#doi: {e['doi']}",
                 f"#abstract: {make_abstract(e, rng)}"]
        bodies = []
        for j in range(e["k"]):
            anchor_tpl = ANCHOR_MENTION if (e["mention"] and j == 0) else ANCHOR_PLAIN
            body = " ".join([
                FILLERS[(j * 2) % len(FILLERS)],
                anchor_tpl.format(ptr=POINTER),
                FILLERS[(j * 2 + 1) % len(FILLERS)],
            ])
            bodies.append(body)
        if e["flat"]:
            lines.append(" ".join(bodies))
        else:
            for title, body in zip(e["sections"], bodies):
                lines.append(f"== {title} ==")
                lines.append(body)
        name = e["doi"].replace("/", "_").replace(".", "-")
        (out_dir / "texts" / f"{name}.txt").write_text("\n".join(lines) + "\n",
                                                       encoding="utf-8")

    # patterns
    with open(out_dir / "patterns.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doi", "pattern"])
        writer.writerow(["", POINTER_PATTERN])

    # COCI fixture
    with open(out_dir / "coci.ndjson", "w", encoding="utf-8") as fh:
        citations = [{"citing": e["doi"], "cited": SEED_DOI,
                      "creation": f"{e['year']}-06-01"} for e in entities]
        fh.write(json.dumps({"request": {"operation": "citations", "doi": SEED_DOI},
                             "response": citations}) + "\n")
        for i in range(0, len(entities), 50):
            batch = entities[i:i + 50]
            response = []
            for e in batch:
                rec = {"doi": e["doi"], "year": e["year"],
                       "title": f"Study {e['doi'][-4:]}",
                       "abstract": make_abstract(e, rng)}
                if e["source_kind"] != "none":
                    rec["source_id"] = e["source_id"]
                if e["source_title"]:
                    rec["source_title"] = e["source_title"]
                response.append(rec)
            fh.write(json.dumps({"request": {"operation": "metadata",
                                             "dois": [e["doi"] for e in batch]},
                                 "response": response}) + "\n")

    # retraction snapshot: exactly one citing entity retracted
    with open(out_dir / "rw.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doi", "retracted", "nature"])
        writer.writerow([entities[100]["doi"], "true", "full"])
        writer.writerow(["10.9999/unrelated", "true", "partial"])

    # mapping tables
    tables = out_dir / "tables"
    tables.mkdir()
    with open(tables / "scimago_journals.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["issn", "areas", "categories"])
        for e in entities:
            if e["source_kind"] == "issn" and e["areas"]:
                writer.writerow([e["source_id"], ";".join(e["areas"]),
                                 ";".join(e["categories"])])
            elif e["source_kind"] == "issn":
                # indexed journal without subject data stays out of the index
                pass
    with open(tables / "lcc_disciplines.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["prefix", "discipline"])
        writer.writerow(["RC", "Medicine"])
        writer.writerow(["QR", "Immunology"])
        writer.writerow(["TX", "Cooking"])
    with open(tables / "scimago_areas.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "area"])
        for area in AREA_COUNTS:
            writer.writerow([area, area])
    with open(tables / "scimago_categories.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "category", "parent_area"])
        for area, pool in pools.items():
            for label in pool:
                writer.writerow([label, label, area])
    with open(tables / "isbn_lcc.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["isbn", "lcc"])
        for e in entities:
            route = e.get("isbn_route")
            if route == "area":
                writer.writerow([e["source_id"], "RC360"])
            elif route == "category":
                writer.writerow([e["source_id"], "QR180"])
            elif route == "pending":
                # half unmapped discipline, half absent from the index
                if int(e["source_id"][-2]) % 2 == 0:
                    writer.writerow([e["source_id"], "TX715"])

    # annotations log: intents and sentiments over the 870 citations, keyed in
    # extraction order (docs sorted by doi, pointer occurrences in text order)
    ordered = sorted(entities, key=lambda e: e["doi"])
    citations = [(e, j) for e in ordered for j in range(e["k"])]
    assert len(citations) == 870

    intent_pool = [i for i, n in INTENT_COUNTS.items() for _ in range(n)]
    rng.shuffle(intent_pool)

    sentiments: dict[tuple[str, int], str] = {}
    c2015 = [(e, j) for e, j in citations if e["year"] == 2015]
    assert len(c2015) == 27
    pool_2015 = [s for s, n in SENTIMENT_2015.items() for _ in range(n)]
    rng.shuffle(pool_2015)
    for (e, j), s in zip(c2015, pool_2015):
        sentiments[(e["doi"], j)] = s
    others = [(e, j) for e, j in citations if e["year"] != 2015]
    pool_rest = (["negative"] * (SENTIMENT_COUNTS["negative"] - SENTIMENT_2015["negative"])
                 + ["positive"] * SENTIMENT_COUNTS["positive"]
                 + ["neutral"] * (SENTIMENT_COUNTS["neutral"] - SENTIMENT_2015["neutral"]))
    rng.shuffle(pool_rest)
    assert len(pool_rest) == len(others)
    for (e, j), s in zip(others, pool_rest):
        sentiments[(e["doi"], j)] = s

    with open(out_dir / "annotations.log", "w", encoding="utf-8") as fh:
        for idx, (e, j) in enumerate(citations):
            mentioned = bool(e["mention"] and j == 0)
            fh.write(json.dumps({
                "doi": e["doi"], "pointer_index": j,
                "intent": intent_pool[idx],
                "sentiment": sentiments[(e["doi"], j)],
                "retraction_mentioned": mentioned,
                "annotator": "transcription", "version": 1,
            }) + "\n")

    print(f"wakefield fixture: {len(entities)} entities, "
          f"{sum(e['k'] for e in entities)} citations -> {out_dir}")


def make_abstract(e, rng: random.Random) -> str:
    themes = {
        "P1": "We evaluated immunization schedules and reported clinical outcomes for children.",
        "P2": "We surveyed parental vaccine hesitancy and analyzed media narratives around autism claims.",
        "P3": "We studied the retraction aftermath and the persistence of debunked findings in public discourse.",
    }
    return f"{themes[e['period']]} The cohort covered {e['year']} records."


def write_mini(out_dir: Path):
    """Small self-contained dataset for pipeline end-to-end tests."""
    rng = random.Random(7)
    shutil.rmtree(out_dir, ignore_errors=True)
    out_dir.mkdir(parents=True)
    (out_dir / "texts").mkdir()
    entities = []
    for i in range(10):
        year = 1999 + 2 * i if 1999 + 2 * i <= 2017 else 2017
        entities.append({
            "doi": f"10.5555/mini{i:02d}", "year": year,
            "k": 2 if i % 3 == 0 else 1,
            "mention": i % 2 == 0,
        })
    diseases = ["measles", "mumps", "rubella", "pertussis", "polio",
                "tetanus", "influenza", "hepatitis", "varicella", "rotavirus"]
    for i, e in enumerate(entities):
        lines = [f"#doi: {e['doi']}",
                 f"#abstract: Vaccine uptake and {diseases[i]} outcomes were analyzed across districts."]
        for j in range(e["k"]):
            title = ["Introduction", "Discussion"][j % 2]
            suffix = ", which was later retracted," if (e["mention"] and j == 0) else ""
            lines.append(f"== {title} ==")
            d1 = diseases[i]
            d2 = diseases[(i + j + 1) % len(diseases)]
            lines.append(
                f"Reported {d1} cases declined while {d2} incidence held steady. "
                f"Prior work (Wakefield et al., 1998){suffix} examined {d1} vaccine "
                f"outcomes. Later {d2} surveys disagreed.")
        name = e["doi"].replace("/", "_").replace(".", "-")
        (out_dir / "texts" / f"{name}.txt").write_text("\n".join(lines) + "\n")

    with open(out_dir / "patterns.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doi", "pattern"])
        writer.writerow(["", POINTER_PATTERN])

    with open(out_dir / "coci.ndjson", "w") as fh:
        fh.write(json.dumps({"request": {"operation": "citations", "doi": SEED_DOI},
                             "response": [{"citing": e["doi"], "cited": SEED_DOI,
                                           "creation": f"{e['year']}-03-01"}
                                          for e in entities]}) + "\n")
        response = []
        for i, e in enumerate(entities):
            body = f"{9000000 + i:07d}"
            issn = body[:4] + "-" + body[4:] + issn_checksum_char(body)
            e["issn"] = issn
            response.append({"doi": e["doi"], "year": e["year"],
                             "title": f"Mini study {i}", "source_id": issn,
                             "source_title": "Mini Journal",
                             "abstract": "Vaccine uptake and community health outcomes "
                                         f"were analyzed across districts in wave {i}."})
        fh.write(json.dumps({"request": {"operation": "metadata",
                                         "dois": [e["doi"] for e in entities]},
                             "response": response}) + "\n")

    with open(out_dir / "rw.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doi", "retracted", "nature"])
        writer.writerow([entities[3]["doi"], "true", "full"])

    tables = out_dir / "tables"
    tables.mkdir()
    with open(tables / "scimago_journals.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["issn", "areas", "categories"])
        for i, e in enumerate(entities):
            area = "medicine" if i % 2 == 0 else "social sciences"
            cat = "pediatrics" if i % 2 == 0 else "communication"
            writer.writerow([e["issn"], area, cat])
    with open(tables / "lcc_disciplines.csv", "w", newline="") as fh:
        csv.writer(fh).writerows([["prefix", "discipline"], ["RC", "Medicine"]])
    with open(tables / "scimago_areas.csv", "w", newline="") as fh:
        csv.writer(fh).writerows([["label", "area"],
                                  ["medicine", "medicine"],
                                  ["social sciences", "social sciences"]])
    with open(tables / "scimago_categories.csv", "w", newline="") as fh:
        csv.writer(fh).writerows([["label", "category", "parent_area"],
                                  ["pediatrics", "pediatrics", "medicine"],
                                  ["communication", "communication", "social sciences"]])
    with open(tables / "isbn_lcc.csv", "w", newline="") as fh:
        csv.writer(fh).writerows([["isbn", "lcc"]])

    ordered = sorted(entities, key=lambda e: e["doi"])
    intents = ["discusses", "disputes", "credits", "confirms", "describes",
               "qualifies", "critiques"]
    sentiments = ["neutral", "negative", "positive"]
    with open(out_dir / "annotations.log", "w") as fh:
        n = 0
        for e in ordered:
            for j in range(e["k"]):
                fh.write(json.dumps({
                    "doi": e["doi"], "pointer_index": j,
                    "intent": intents[n % len(intents)],
                    "sentiment": sentiments[n % len(sentiments)],
                    "retraction_mentioned": bool(e["mention"] and j == 0),
                    "annotator": "transcription", "version": 1}) + "\n")
                n += 1

    # paths are relative to the fixture directory; run the pipeline from there
    config = {
        "seed_doi": SEED_DOI,
        "endpoint": "coci.ndjson",
        "retraction_db": "rw.csv",
        "tables_dir": "tables",
        "texts_dir": "texts",
        "patterns": "patterns.csv",
        "annotations_log": "annotations.log",
        "periods": [1998, 2004, 2010, 2017],
        "model": {"field": "context", "k": 2, "iterations": 30, "seed": 1},
        "out_dir": "out",
    }
    (out_dir / "pipeline.json").write_text(json.dumps(config, indent=2))
    print(f"mini fixture: {len(entities)} entities -> {out_dir}")


if __name__ == "__main__":
    write_wakefield(OUT / "wakefield")
    write_mini(OUT / "mini")
