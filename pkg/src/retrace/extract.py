"""In-text citation extraction: sentence splitting, pointer location,
context windows and section classification."""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError

logger = logging.getLogger(__name__)

CITATIONS_CSV_HEADER = [
    "doi",
    "intext_citation.section",
    "intext_citation.context",
    "intext_citation.pointer",
]

RECOGNIZED_SECTION_KINDS = (
    "introduction", "method", "abstract", "results", "conclusions",
    "background", "discussion",
)
RESIDUAL_SECTION_KINDS = ("first section", "middle section", "final section")

# keyword -> canonical kind; matched case-insensitively on word boundaries
_SECTION_KEYWORDS = [
    ("introduction", "introduction"),
    ("intro", "introduction"),
    ("methods", "method"),
    ("method", "method"),
    ("materials", "method"),
    ("abstract", "abstract"),
    ("results", "results"),
    ("findings", "results"),
    ("conclusions", "conclusions"),
    ("conclusion", "conclusions"),
    ("background", "background"),
    ("discussion", "discussion"),
]

# tokens after which a period does not end a sentence
_ABBREVIATIONS = {
    "al", "fig", "figs", "eq", "eqs", "ref", "refs", "vs", "cf", "ca",
    "dr", "prof", "mr", "mrs", "ms", "st", "no", "vol", "pp", "p",
    "ed", "eds", "approx", "etc", "resp",
}

# words that typically open a new sentence; used to tell "said X. It held."
# apart from the initials in "A. B. Smith"
_SENTENCE_STARTERS = {
    "the", "it", "this", "that", "these", "those", "we", "they", "he", "she",
    "i", "in", "on", "at", "for", "a", "an", "however", "moreover",
    "furthermore", "our", "their", "its", "here", "there", "one", "two",
    "such", "as", "after", "before", "since", "although", "while", "when",
    "finally", "also", "thus", "therefore",
}


@dataclass(frozen=True)
class FullTextDocument:
    doi: str
    abstract: str
    sections: tuple[tuple[str, str], ...]  # (title, body)
    flat_body: str = ""

    def __post_init__(self):
        if bool(self.sections) == bool(self.flat_body.strip()):
            raise ValidationError(
                f"{self.doi}: document needs exactly one of sections / flat body")


@dataclass(frozen=True)
class PointerHit:
    section_index: int
    sentence_index: int
    char_offset: int
    pointer: str


@dataclass(frozen=True)
class InTextCitation:
    doi: str
    pointer: str
    context: str
    section_kind: str
    section_title: str | None = None

    def __post_init__(self):
        if self.pointer not in self.context:
            raise ValidationError("context must contain the pointer")
        valid = RECOGNIZED_SECTION_KINDS + RESIDUAL_SECTION_KINDS + ("none",)
        if self.section_kind not in valid:
            raise ValidationError(f"unknown section kind: {self.section_kind!r}")
        if self.section_kind in RESIDUAL_SECTION_KINDS and not self.section_title:
            raise ValidationError("residual section kinds require the original title")
        if self.section_kind == "none" and self.section_title:
            raise ValidationError("'none' sections carry no title")


def split_sentences(text: str) -> list[str]:
    """Deterministic rule-based sentence segmentation.

    Splits on ``.!?`` followed by whitespace and an upper-case/digit/opening
    character, protecting common abbreviations, single-letter initials and
    bracketed citation labels. Joining the result with single spaces restores
    the input modulo whitespace.
    """
    text = text.strip()
    if not text:
        return []
    sentences = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in ".!?":
            # swallow a run of terminators and a closing quote/paren
            j = i + 1
            while j < n and text[j] in ".!?”\"')":
                j += 1
            if j >= n:
                break
            if not text[j].isspace():
                i += 1
                continue
            k = j
            while k < n and text[k].isspace():
                k += 1
            next_ch = text[k] if k < n else ""
            next_word = _next_word(text, k)
            if ch == "." and not _is_boundary_after_period(text, i, next_ch, next_word):
                i += 1
                continue
            if next_ch and not (next_ch.isupper() or next_ch.isdigit() or next_ch in "([“\""):
                i += 1
                continue
            sentences.append(text[start:j].strip())
            start = k
            i = k
            continue
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _next_word(text: str, start: int) -> str:
    m = re.match(r"[^\s]+", text[start:])
    return m.group(0) if m else ""


def _is_boundary_after_period(text: str, dot_index: int, next_ch: str, next_word: str) -> bool:
    word_start = dot_index
    while word_start > 0 and (text[word_start - 1].isalnum() or text[word_start - 1] == "."):
        word_start -= 1
    token = text[word_start:dot_index]
    if not token:
        return True
    lowered = token.lower().lstrip(".")
    if lowered in _ABBREVIATIONS:
        return False
    # single-letter initials ("A. B. Smith"), including "A.B."; a following
    # sentence-starter word means this really is the end of a sentence
    if len(lowered) == 1 and token.isalpha() and token.isupper():
        if next_word.rstrip(".,;:").lower() in _SENTENCE_STARTERS:
            return True
        return False
    # numeric section labels ("3." in running text) or bracket citations
    if token.isdigit() and next_ch and next_ch.isdigit():
        return False
    return True


def compile_patterns(patterns: list[str]) -> list[re.Pattern]:
    return [re.compile(p) for p in patterns]


def find_pointers(doc: FullTextDocument, patterns: list[re.Pattern]) -> list[PointerHit]:
    """Locate every in-text reference pointer occurrence in a document.

    Hits are ordered by (section, sentence, character offset); a sentence with
    two occurrences yields two hits.
    """
    hits = []
    for sec_idx, (_, body) in enumerate(_effective_sections(doc)):
        for sent_idx, sentence in enumerate(split_sentences(body)):
            found: list[tuple[int, str]] = []
            for pattern in patterns:
                for m in pattern.finditer(sentence):
                    found.append((m.start(), m.group(0)))
            seen_spans = set()
            for offset, pointer in sorted(found):
                span = (offset, offset + len(pointer))
                if span in seen_spans:
                    continue
                seen_spans.add(span)
                hits.append(PointerHit(sec_idx, sent_idx, offset, pointer))
    return hits


def _effective_sections(doc: FullTextDocument) -> list[tuple[str | None, str]]:
    if doc.sections:
        return list(doc.sections)
    return [(None, doc.flat_body)]


def extract_context(doc: FullTextDocument, hit: PointerHit) -> InTextCitation:
    """Build the anchor-sentence context window around a pointer hit.

    The window is the anchor plus its neighbors; the preceding sentence is
    omitted when the anchor opens its section, the following one when the
    anchor closes it.
    """
    sections = _effective_sections(doc)
    if not (0 <= hit.section_index < len(sections)):
        raise ValidationError(f"section index out of range: {hit.section_index}")
    title, body = sections[hit.section_index]
    sentences = split_sentences(body)
    if not (0 <= hit.sentence_index < len(sentences)):
        raise ValidationError(f"sentence index out of range: {hit.sentence_index}")
    window = []
    if hit.sentence_index > 0:
        window.append(sentences[hit.sentence_index - 1])
    window.append(sentences[hit.sentence_index])
    if hit.sentence_index < len(sentences) - 1:
        window.append(sentences[hit.sentence_index + 1])
    context = " ".join(window)

    if doc.sections:
        if hit.section_index == 0:
            position = "first"
        elif hit.section_index == len(sections) - 1:
            position = "last"
        else:
            position = "middle"
    else:
        position = "unstructured"
    kind, retained = classify_section(title, position)
    return InTextCitation(doc.doi, hit.pointer, context, kind, retained)


def classify_section(title: str | None, position: str) -> tuple[str, str | None]:
    """Map a section title to one of the recognized kinds, or a positional
    residual kind with the original title retained."""
    if position == "unstructured" or title is None:
        return "none", None
    lowered = title.lower()
    for keyword, kind in _SECTION_KEYWORDS:
        if re.search(rf"\b{re.escape(keyword)}\b", lowered):
            return kind, title
    residual = {"first": "first section", "middle": "middle section", "last": "final section"}
    if position not in residual:
        raise ValidationError(f"unknown section position: {position!r}")
    return residual[position], title


def load_document(path: str | Path) -> FullTextDocument:
    """Read one pre-fetched full text.

    Format: a ``#doi:`` header line, an optional ``#abstract:`` line, then
    either ``== Title ==`` section headings with bodies or a flat body.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    doi = ""
    abstract = ""
    body_lines: list[str] = []
    for line in lines:
        if line.startswith("#doi:"):
            doi = line[len("#doi:"):].strip()
        elif line.startswith("#abstract:"):
            abstract = line[len("#abstract:"):].strip()
        else:
            body_lines.append(line)
    if not doi:
        raise ValidationError(f"{path}: missing #doi header")

    sections: list[tuple[str, str]] = []
    current_title: str | None = None
    current: list[str] = []
    flat: list[str] = []
    for line in body_lines:
        m = re.match(r"^==\s*(.+?)\s*==\s*$", line)
        if m:
            if current_title is not None:
                sections.append((current_title, "\n".join(current).strip()))
            elif current and "".join(current).strip():
                flat.extend(current)
            current_title = m.group(1)
            current = []
        else:
            current.append(line)
    if current_title is not None:
        sections.append((current_title, "\n".join(current).strip()))
    else:
        flat.extend(current)

    if sections:
        return FullTextDocument(doi, abstract, tuple(sections))
    return FullTextDocument(doi, abstract, (), "\n".join(flat).strip())


def load_patterns(path: str | Path) -> dict[str, list[re.Pattern]]:
    """Patterns CSV (doi,pattern); an empty doi marks a global pattern."""
    by_doi: dict[str, list[re.Pattern]] = {"": []}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            by_doi.setdefault(row.get("doi", "").strip(), []).append(
                re.compile(row["pattern"]))
    return by_doi


def patterns_for(doi: str, by_doi: dict[str, list[re.Pattern]]) -> list[re.Pattern]:
    return by_doi.get("", []) + by_doi.get(doi, [])


def extract_corpus(texts_dir: str | Path, patterns_by_doi: dict[str, list[re.Pattern]],
                   ) -> tuple[list[InTextCitation], list[str]]:
    """Run extraction over a directory of full texts.

    Returns the citations in deterministic (doi, section, sentence, offset)
    order plus the DOIs of documents that matched nothing (queued for manual
    review rather than dropped).
    """
    citations: list[InTextCitation] = []
    review: list[str] = []
    paths = sorted(Path(texts_dir).glob("*.txt"))
    docs = [load_document(p) for p in paths]
    docs.sort(key=lambda d: d.doi)
    for doc in docs:
        patterns = patterns_for(doc.doi, patterns_by_doi)
        hits = find_pointers(doc, patterns)
        if not hits:
            review.append(doc.doi)
            continue
        for hit in hits:
            citations.append(extract_context(doc, hit))
    return citations, review


def write_citations_csv(path: str | Path, citations: list[InTextCitation]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CITATIONS_CSV_HEADER)
        for cit in citations:
            if cit.section_kind in RESIDUAL_SECTION_KINDS:
                section = f"{cit.section_kind}: {cit.section_title}"
            else:
                section = cit.section_kind
            writer.writerow([cit.doi, section, cit.context, cit.pointer])


def read_citations_csv(path: str | Path) -> list[InTextCitation]:
    citations = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            section = row["intext_citation.section"]
            title = None
            kind = section
            for residual in RESIDUAL_SECTION_KINDS:
                if section.startswith(residual + ":"):
                    kind = residual
                    title = section[len(residual) + 1:].strip()
            citations.append(InTextCitation(
                row["doi"], row["intext_citation.pointer"],
                row["intext_citation.context"], kind, title))
    return citations
