"""Period partitioning and descriptive aggregate reports."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path

from .errors import ValidationError

logger = logging.getLogger(__name__)

OUT_OF_RANGE = "out-of-range"


@dataclass(frozen=True)
class PeriodConfig:
    publication_year: int
    partial_retraction_year: int
    full_retraction_year: int
    end_year: int

    def __post_init__(self):
        if not (self.publication_year <= self.partial_retraction_year
                < self.full_retraction_year < self.end_year):
            raise ValidationError("period years must satisfy publication <= partial < full < end")


def partition_period(year: int, config: PeriodConfig) -> str:
    """P1: publication..partial, P2: partial+1..full, P3: full+1..end."""
    if config.publication_year <= year <= config.partial_retraction_year:
        return "P1"
    if config.partial_retraction_year < year <= config.full_retraction_year:
        return "P2"
    if config.full_retraction_year < year <= config.end_year:
        return "P3"
    return OUT_OF_RANGE


def round_half_up(value: float, places: int = 2) -> float:
    quant = Decimal(10) ** -places
    return float(Decimal(repr(value)).quantize(quant, rounding=ROUND_HALF_UP))


@dataclass
class EntityRow:
    doi: str
    year: int
    areas: list[str]
    mentions_retraction: bool


def yearly_mention_report(entities: list[EntityRow]) -> list[dict]:
    """Per-year counts of entities that do / do not mention the retraction.

    Years with no entities are omitted.
    """
    per_year: dict[int, list[int]] = {}
    for e in entities:
        bucket = per_year.setdefault(e.year, [0, 0])
        bucket[0 if e.mentions_retraction else 1] += 1
    rows = []
    for year in sorted(per_year):
        mentioning, non_mentioning = per_year[year]
        total = mentioning + non_mentioning
        rows.append({
            "year": year,
            "mentioning": mentioning,
            "non_mentioning": non_mentioning,
            "pct_mentioning": 100.0 * mentioning / total,
        })
    return rows


def area_report(entities: list[EntityRow], config: PeriodConfig,
                top_n: int | None = 10) -> dict[str, list[dict]]:
    """Top-N subject areas per period with an "Others" bucket.

    Multi-area entities count once per area; shares are normalized over the
    total area assignments of the period, not over entities.
    """
    per_period: dict[str, dict[str, int]] = {}
    for e in entities:
        period = partition_period(e.year, config)
        if period == OUT_OF_RANGE:
            continue
        counts = per_period.setdefault(period, {})
        for area in e.areas:
            counts[area] = counts.get(area, 0) + 1
    out: dict[str, list[dict]] = {}
    for period in sorted(per_period):
        counts = per_period[period]
        total = sum(counts.values())
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if top_n is not None and len(ranked) > top_n:
            head, tail = ranked[:top_n], ranked[top_n:]
            others = sum(c for _, c in tail)
            ranked = head + [("Others", others)]
        out[period] = [{"area": area, "count": count, "share": count / total}
                       for area, count in ranked]
    return out


@dataclass
class AnnotatedCitation:
    doi: str
    year: int
    section_kind: str
    intent: str
    sentiment: str


def intent_sentiment_report(citations: list[AnnotatedCitation], config: PeriodConfig,
                            grouping: str = "period") -> dict[str, dict]:
    """Cross-tabulation of (intent x sentiment) and (section x sentiment)
    per group. Totals are preserved within every group."""
    if grouping not in ("period", "year", "section"):
        raise ValidationError(f"unknown grouping: {grouping!r}")

    def group_of(cit: AnnotatedCitation) -> str:
        if grouping == "period":
            return partition_period(cit.year, config)
        if grouping == "year":
            return str(cit.year)
        return cit.section_kind

    out: dict[str, dict] = {}
    for cit in citations:
        group = out.setdefault(group_of(cit), {
            "intent_sentiment": {}, "section_sentiment": {}, "total": 0})
        key_is = (cit.intent, cit.sentiment)
        key_ss = (cit.section_kind, cit.sentiment)
        group["intent_sentiment"][key_is] = group["intent_sentiment"].get(key_is, 0) + 1
        group["section_sentiment"][key_ss] = group["section_sentiment"].get(key_ss, 0) + 1
        group["total"] += 1
    return out


def write_reports(out_dir: str | Path, entities: list[EntityRow],
                  citations: list[AnnotatedCitation], config: PeriodConfig,
                  top_n_areas: int = 10):
    """Emit the CSV reports plus their full-precision JSON twins."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    yearly = yearly_mention_report(entities)
    with open(out_dir / "yearly_mentions.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "mentioning", "non_mentioning", "pct_mentioning"])
        for row in yearly:
            writer.writerow([row["year"], row["mentioning"], row["non_mentioning"],
                             round_half_up(row["pct_mentioning"])])
    (out_dir / "yearly_mentions.json").write_text(json.dumps(yearly, indent=2))

    areas = area_report(entities, config, top_n=top_n_areas)
    with open(out_dir / "areas_by_period.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["period", "area", "count", "pct"])
        for period, rows in areas.items():
            for row in rows:
                writer.writerow([period, row["area"], row["count"],
                                 round_half_up(100.0 * row["share"])])
    (out_dir / "areas_by_period.json").write_text(json.dumps(areas, indent=2))

    crosstab = intent_sentiment_report(citations, config, grouping="period")
    with open(out_dir / "intent_sentiment.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["period", "intent", "sentiment", "count"])
        for period in sorted(crosstab):
            for (intent, sentiment), count in sorted(crosstab[period]["intent_sentiment"].items()):
                writer.writerow([period, intent, sentiment, count])
    with open(out_dir / "sections.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["period", "section", "sentiment", "count"])
        for period in sorted(crosstab):
            for (section, sentiment), count in sorted(crosstab[period]["section_sentiment"].items()):
                writer.writerow([period, section, sentiment, count])
    json_doc = {
        period: {
            "total": data["total"],
            "intent_sentiment": [
                {"intent": i, "sentiment": s, "count": c}
                for (i, s), c in sorted(data["intent_sentiment"].items())],
            "section_sentiment": [
                {"section": sec, "sentiment": s, "count": c}
                for (sec, s), c in sorted(data["section_sentiment"].items())],
        }
        for period, data in crosstab.items()
    }
    (out_dir / "intent_sentiment.json").write_text(json.dumps(json_doc, indent=2))
