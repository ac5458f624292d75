"""Tokenization, stopword filtering and rule-based lemmatization."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

_TOKEN_RE = re.compile(r"[a-z]+")
_VOWELS = set("aeiou")

MIN_TOKEN_LENGTH = 3


def _load_base_stopwords() -> frozenset[str]:
    text = resources.files("retrace").joinpath("data/stopwords_en.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def _load_exceptions() -> dict[str, str]:
    text = resources.files("retrace").joinpath("data/lemma_exceptions.csv").read_text(encoding="utf-8")
    return {row["form"]: row["lemma"] for row in csv.DictReader(text.splitlines())}


_BASE_STOPWORDS = _load_base_stopwords()
_EXCEPTIONS = _load_exceptions()


@dataclass(frozen=True)
class StopwordConfig:
    """Stopword sets: common-language base plus corpus-specific extras.

    Structural tokens cover structured-abstract headings; reference tokens
    cover words from the seed article's own bibliographic entry.
    """
    base: frozenset[str] = field(default_factory=lambda: _BASE_STOPWORDS)
    structural: frozenset[str] = frozenset()
    reference: frozenset[str] = frozenset()

    def __post_init__(self):
        for group in (self.base, self.structural, self.reference):
            for word in group:
                if word != word.lower():
                    raise ValueError(f"stopword not lowercase: {word!r}")

    def all(self) -> frozenset[str]:
        return self.base | self.structural | self.reference

    @staticmethod
    def for_abstracts(extra: frozenset[str] = frozenset()) -> "StopwordConfig":
        return StopwordConfig(structural=frozenset(
            {"background", "summary", "results", "methods", "objective",
             "objectives", "conclusion", "conclusions", "introduction"}) | extra)

    @staticmethod
    def for_contexts(reference_tokens: frozenset[str]) -> "StopwordConfig":
        return StopwordConfig(reference=frozenset(t.lower() for t in reference_tokens))


def tokenize(text: str) -> list[str]:
    """Lowercase and keep alphabetic runs only (punctuation and digits dropped)."""
    return _TOKEN_RE.findall(text.lower())


def lemmatize(token: str) -> str:
    """Table-plus-suffix-rule lemmatizer for plural nouns and verb inflections."""
    if token in _EXCEPTIONS:
        return _EXCEPTIONS[token]
    lemma = token
    if lemma.endswith("ies") and len(lemma) > 4:
        return lemma[:-3] + "y"
    if lemma.endswith("ied") and len(lemma) > 4:
        return lemma[:-3] + "y"
    if lemma.endswith("es") and len(lemma) > 4 and lemma[-3] in "sxz" or \
            lemma.endswith(("ches", "shes")):
        return lemma[:-2]
    if lemma.endswith("ing") and len(lemma) > 5:
        stem = lemma[:-3]
        return _fix_stem(stem)
    if lemma.endswith("ed") and len(lemma) > 4:
        stem = lemma[:-2]
        return _fix_stem(stem)
    if lemma.endswith("s") and not lemma.endswith(("ss", "us", "is")) and len(lemma) > 3:
        return lemma[:-1]
    return lemma


def _fix_stem(stem: str) -> str:
    # doubled final consonant from gemination: stopped -> stop
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS and stem[-1] not in "sl":
        return stem[:-1]
    # CVC stems usually dropped a final e: retriev -> retrieve
    if len(stem) > 3 and stem[-1] not in _VOWELS and stem[-1] not in "wxy" \
            and stem[-2] in _VOWELS and stem[-3] not in _VOWELS and stem.endswith(("v", "c", "g", "z", "u")):
        return stem + "e"
    return stem


def preprocess(text: str, config: StopwordConfig | None = None) -> list[str]:
    """Full token pipeline: tokenize, filter stopwords, lemmatize, drop short tokens.

    Stopwords are applied both before and after lemmatization so that
    structural tokens cannot survive as inflected variants.
    """
    config = config or StopwordConfig()
    stops = config.all()
    out = []
    for token in tokenize(text):
        if token in stops:
            continue
        lemma = lemmatize(token)
        if lemma in stops or len(lemma) < MIN_TOKEN_LENGTH:
            continue
        out.append(lemma)
    return out
