"""Harvesting citations and citing-entity metadata from a COCI-compatible index.

All HTTP exchanges can be recorded to, and replayed from, newline-delimited
JSON fixtures so that analyses stay reproducible after the live index moves on.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .errors import ConfigurationError, DecodeError, TransportError, ValidationError
from .identifiers import is_valid_doi, normalize_doi

logger = logging.getLogger(__name__)

HARVEST_CSV_HEADER = ["doi", "year", "title", "source_id", "source_title", "retracted"]

DEFAULT_PAGE_SIZE = 50
DEFAULT_CONCURRENCY = 4


@dataclass(frozen=True)
class CitationRecord:
    citing_doi: str
    cited_doi: str
    creation_date: str

    def __post_init__(self):
        if self.citing_doi == self.cited_doi:
            raise ValidationError(f"self-citation record for {self.citing_doi}")
        parse_creation_date(self.creation_date)


@dataclass(frozen=True)
class EntityMetadata:
    doi: str
    year: int
    title: str
    source_id: str | None = None
    source_title: str | None = None
    abstract: str | None = None


@dataclass(frozen=True)
class RetractionStatus:
    doi: str
    retracted: bool
    nature: str | None = None

    def __post_init__(self):
        if not self.retracted and self.nature is not None:
            raise ValidationError("nature requires retracted=true")


@dataclass
class MetadataResult:
    records: list[EntityMetadata]
    misses: list[tuple[str, str]]  # (doi, reason)


def parse_creation_date(value: str) -> date:
    """Parse an ISO-8601 date, accepting year and year-month precision."""
    parts = value.split("-")
    if not parts or not parts[0].isdigit() or len(parts[0]) != 4 or int(parts[0]) < 1000:
        raise ValidationError(f"bad creation date: {value!r}")
    year = int(parts[0])
    month = int(parts[1]) if len(parts) > 1 else 1
    day = int(parts[2]) if len(parts) > 2 else 1
    try:
        return date(year, month, day)
    except ValueError as exc:
        raise ValidationError(f"bad creation date: {value!r}") from exc


class TokenBucket:
    """Simple token bucket; default politeness is one request per second."""

    def __init__(self, rate_per_sec: float = 1.0, burst: int = 1):
        self.rate = rate_per_sec
        self.capacity = burst
        self.tokens = float(burst)
        self.updated = time.monotonic()

    def acquire(self):
        while True:
            now = time.monotonic()
            self.tokens = min(self.capacity, self.tokens + (now - self.updated) * self.rate)
            self.updated = now
            if self.tokens >= 1:
                self.tokens -= 1
                return
            time.sleep((1 - self.tokens) / self.rate)


class FixtureTransport:
    """Replays recorded API exchanges from a newline-delimited JSON file.

    Each line holds one exchange: ``{"request": {...}, "response": ...}``.
    Metadata responses are indexed per DOI so replay does not depend on the
    batching used at record time.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        if not self.path.exists():
            raise ConfigurationError(f"fixture file not found: {self.path}")
        self._citations: dict[str, list[dict]] = {}
        self._metadata: dict[str, dict] = {}
        self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                try:
                    exchange = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DecodeError(f"bad fixture line {lineno}: {exc}", lineno) from exc
                request = exchange.get("request", {})
                response = exchange.get("response")
                op = request.get("operation")
                if op == "citations":
                    key = normalize_doi(request.get("doi", ""))
                    self._citations.setdefault(key, []).extend(response or [])
                elif op == "metadata":
                    for rec in response or []:
                        doi = normalize_doi(str(rec.get("doi", "")))
                        if doi:
                            self._metadata[doi] = rec

    def citations(self, doi: str) -> list[dict]:
        return self._citations.get(normalize_doi(doi), [])

    def metadata(self, dois: list[str]) -> list[dict]:
        out = []
        for doi in dois:
            rec = self._metadata.get(normalize_doi(doi))
            if rec is not None:
                out.append(rec)
        return out


class HttpTransport:
    """Live COCI-style REST client with rate limiting and bounded retries."""

    def __init__(self, base_url: str, rate_per_sec: float = 1.0, retries: int = 3,
                 backoff: float = 1.0, timeout: float = 30.0, recorder: "ExchangeRecorder | None" = None):
        import requests

        self.base_url = base_url.rstrip("/")
        self.session = requests.Session()
        self.bucket = TokenBucket(rate_per_sec)
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.recorder = recorder

    def _get_json(self, url: str):
        import requests

        last_exc = None
        for attempt in range(self.retries):
            self.bucket.acquire()
            try:
                resp = self.session.get(url, timeout=self.timeout)
                resp.raise_for_status()
                try:
                    return resp.json()
                except ValueError as exc:
                    raise DecodeError(f"non-JSON response from {url}") from exc
            except requests.RequestException as exc:
                last_exc = exc
                logger.warning("request failed (attempt %d/%d): %s", attempt + 1, self.retries, exc)
                time.sleep(self.backoff * 2 ** attempt)
        raise TransportError(f"request failed after {self.retries} attempts: {last_exc}")

    def citations(self, doi: str) -> list[dict]:
        data = self._get_json(f"{self.base_url}/citations/{doi}")
        if not isinstance(data, list):
            raise DecodeError("citations response is not a list")
        if self.recorder:
            self.recorder.record({"operation": "citations", "doi": doi}, data)
        return data

    def metadata(self, dois: list[str]) -> list[dict]:
        data = self._get_json(f"{self.base_url}/metadata/{'__'.join(dois)}")
        if not isinstance(data, list):
            raise DecodeError("metadata response is not a list")
        if self.recorder:
            self.recorder.record({"operation": "metadata", "dois": dois}, data)
        return data


class ExchangeRecorder:
    """Appends exchanges to an ndjson fixture file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def record(self, request: dict, response):
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"request": request, "response": response}) + "\n")


def open_transport(endpoint: str | Path):
    """URL endpoints get a live client; anything else is a fixture path."""
    if isinstance(endpoint, str) and endpoint.startswith(("http://", "https://")):
        return HttpTransport(endpoint)
    return FixtureTransport(endpoint)


def fetch_citations(seed_doi: str, endpoint: str | Path, transport=None) -> list[CitationRecord]:
    """All citations whose cited DOI equals the seed, deduplicated and sorted."""
    seed = normalize_doi(seed_doi)
    if not is_valid_doi(seed):
        raise ValidationError(f"invalid seed DOI: {seed_doi!r}")
    transport = transport or open_transport(endpoint)
    raw = transport.citations(seed)
    seen: set[tuple[str, str]] = set()
    records = []
    for idx, row in enumerate(raw):
        if not isinstance(row, dict) or "citing" not in row or "cited" not in row:
            raise DecodeError(f"malformed citation record at index {idx}", idx)
        citing = normalize_doi(str(row["citing"]))
        cited = normalize_doi(str(row["cited"]))
        if cited != seed:
            continue
        key = (citing, cited)
        if key in seen:
            continue
        seen.add(key)
        records.append(CitationRecord(citing, cited, str(row.get("creation", ""))))
    records.sort(key=lambda r: (r.creation_date, r.citing_doi))
    return records


def fetch_metadata(dois: list[str], endpoint: str | Path, transport=None,
                   page_size: int = DEFAULT_PAGE_SIZE,
                   concurrency: int = DEFAULT_CONCURRENCY) -> MetadataResult:
    """Resolve entity metadata per DOI, preserving input order.

    Unresolvable DOIs are reported in ``misses``, never silently dropped.
    """
    if not dois:
        raise ValidationError("fetch_metadata requires at least one DOI")
    transport = transport or open_transport(endpoint)
    normalized = [normalize_doi(d) for d in dois]
    batches = [normalized[i:i + page_size] for i in range(0, len(normalized), page_size)]

    def fetch_batch(batch: list[str]):
        try:
            return {normalize_doi(str(r.get("doi", ""))): r for r in transport.metadata(batch)}
        except (TransportError, DecodeError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        batch_results = list(pool.map(fetch_batch, batches))

    by_doi: dict[str, dict] = {}
    failed: dict[str, str] = {}
    for batch, result in zip(batches, batch_results):
        if isinstance(result, Exception):
            for doi in batch:
                failed[doi] = str(result)
        else:
            by_doi.update(result)

    records: list[EntityMetadata] = []
    misses: list[tuple[str, str]] = []
    for doi in normalized:
        if doi in failed:
            misses.append((doi, failed[doi]))
            continue
        raw = by_doi.get(doi)
        if raw is None:
            misses.append((doi, "not found"))
            continue
        try:
            records.append(EntityMetadata(
                doi=doi,
                year=int(raw["year"]),
                title=str(raw.get("title", "")),
                source_id=raw.get("source_id") or None,
                source_title=raw.get("source_title") or None,
                abstract=raw.get("abstract") or None,
            ))
        except (KeyError, TypeError, ValueError) as exc:
            misses.append((doi, f"malformed metadata: {exc}"))
    return MetadataResult(records=records, misses=misses)


def load_retraction_db(path: str | Path) -> dict[str, RetractionStatus]:
    """Load the offline retraction-database snapshot (CSV: doi,retracted,nature)."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"retraction db not found: {path}")
    statuses: dict[str, RetractionStatus] = {}
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                doi = normalize_doi(row["doi"])
                retracted = row.get("retracted", "").strip().lower() in ("1", "true", "yes")
                nature = (row.get("nature") or "").strip() or None
                prev = statuses.get(doi)
                # duplicate rows: retracted if any row says so
                if prev is not None:
                    retracted = retracted or prev.retracted
                    nature = nature or prev.nature
                statuses[doi] = RetractionStatus(doi, retracted, nature if retracted else None)
    except (KeyError, csv.Error) as exc:
        raise ConfigurationError(f"unreadable retraction db {path}: {exc}") from exc
    return statuses


def lookup_retraction_status(dois: list[str], retraction_db: dict[str, RetractionStatus]) -> list[RetractionStatus]:
    """Status for every input DOI; absence from the snapshot means not retracted."""
    out = []
    for doi in dois:
        key = normalize_doi(doi)
        out.append(retraction_db.get(key, RetractionStatus(key, False, None)))
    return out


def write_harvest_csv(path: str | Path, metadata: list[EntityMetadata],
                      statuses: list[RetractionStatus]):
    by_doi = {s.doi: s for s in statuses}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(HARVEST_CSV_HEADER)
        for meta in metadata:
            status = by_doi.get(meta.doi)
            writer.writerow([
                meta.doi,
                meta.year,
                meta.title,
                meta.source_id or "",
                meta.source_title or "",
                "yes" if status and status.retracted else "no",
            ])


def run_harvest(seed_doi: str, endpoint: str | Path, retraction_db_path: str | Path,
                out_path: str | Path) -> MetadataResult:
    """End-to-end harvest: citations, metadata, retraction join, CSV out."""
    transport = open_transport(endpoint)
    citations = fetch_citations(seed_doi, endpoint, transport=transport)
    if not citations:
        Path(out_path).write_text(",".join(HARVEST_CSV_HEADER) + "\r\n")
        return MetadataResult(records=[], misses=[])
    citing = [c.citing_doi for c in citations]
    result = fetch_metadata(citing, endpoint, transport=transport)
    db = load_retraction_db(retraction_db_path)
    statuses = lookup_retraction_status([m.doi for m in result.records], db)
    write_harvest_csv(out_path, result.records, statuses)
    return result
