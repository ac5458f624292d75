"""Corpus and append-only dictionary structures for topic modeling."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ValidationError


class Dictionary:
    """Token -> dense integer id map with document frequencies.

    Ids are assigned append-only: adding documents never changes the id of an
    existing token.
    """

    def __init__(self):
        self.token2id: dict[str, int] = {}
        self.id2token: list[str] = []
        self.doc_freq: dict[int, int] = {}
        self.num_docs = 0

    def __len__(self) -> int:
        return len(self.id2token)

    def add_document(self, tokens: list[str]) -> list[int]:
        ids = []
        for token in tokens:
            tid = self.token2id.get(token)
            if tid is None:
                tid = len(self.id2token)
                self.token2id[token] = tid
                self.id2token.append(token)
                self.doc_freq[tid] = 0
            ids.append(tid)
        for tid in set(ids):
            self.doc_freq[tid] += 1
        self.num_docs += 1
        return ids

    def save(self, path: str | Path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "token", "df"])
            for tid, token in enumerate(self.id2token):
                writer.writerow([tid, token, self.doc_freq[tid]])

    @classmethod
    def load(cls, path: str | Path, num_docs: int = 0) -> "Dictionary":
        d = cls()
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                tid = int(row["id"])
                if tid != len(d.id2token):
                    raise ValidationError("dictionary ids must be dense and ordered")
                d.token2id[row["token"]] = tid
                d.id2token.append(row["token"])
                d.doc_freq[tid] = int(row["df"])
        d.num_docs = num_docs
        return d


@dataclass
class CorpusDocument:
    doc_id: str
    kind: str  # "abstract" | "context"
    tokens: list[str]


@dataclass
class Corpus:
    documents: list[CorpusDocument] = field(default_factory=list)
    dictionary: Dictionary = field(default_factory=Dictionary)

    def add(self, doc_id: str, kind: str, tokens: list[str]):
        self.dictionary.add_document(tokens)
        self.documents.append(CorpusDocument(doc_id, kind, tokens))

    def __len__(self) -> int:
        return len(self.documents)

    def token_ids(self) -> list[list[int]]:
        return [[self.dictionary.token2id[t] for t in doc.tokens] for doc in self.documents]

    def validate(self):
        for doc in self.documents:
            for token in doc.tokens:
                if token not in self.dictionary.token2id:
                    raise ValidationError(f"token missing from dictionary: {token!r}")
