"""Normalization and validation of DOIs, ISSNs and ISBNs."""

from __future__ import annotations

import re

_DOI_PREFIXES = ("https://doi.org/", "http://doi.org/", "doi:")
_DOI_RE = re.compile(r"^10\.\d{4,9}/\S+$")
_ISSN_RE = re.compile(r"^\d{4}-?\d{3}[\dXx]$")


def normalize_doi(raw: str) -> str:
    """Lowercase a DOI and strip whitespace and resolver prefixes."""
    doi = raw.strip()
    lowered = doi.lower()
    for prefix in _DOI_PREFIXES:
        if lowered.startswith(prefix):
            doi = doi[len(prefix):]
            lowered = doi.lower()
    return lowered


def is_valid_doi(doi: str) -> bool:
    return bool(_DOI_RE.match(normalize_doi(doi)))


def is_issn(value: str) -> bool:
    """ISSN: 8 digits (last may be X), checksum mod 11."""
    candidate = value.strip()
    if not _ISSN_RE.match(candidate):
        return False
    digits = candidate.replace("-", "").upper()
    total = sum((8 - i) * int(c) for i, c in enumerate(digits[:7]))
    check = (11 - total % 11) % 11
    expected = "X" if check == 10 else str(check)
    return digits[7] == expected


def issn_checksum_char(body7: str) -> str:
    """Check character for a 7-digit ISSN body."""
    total = sum((8 - i) * int(c) for i, c in enumerate(body7))
    check = (11 - total % 11) % 11
    return "X" if check == 10 else str(check)


def is_isbn10(value: str) -> bool:
    digits = value.replace("-", "").replace(" ", "").upper()
    if len(digits) != 10 or not digits[:9].isdigit():
        return False
    if not (digits[9].isdigit() or digits[9] == "X"):
        return False
    total = sum((10 - i) * int(c) for i, c in enumerate(digits[:9]))
    total += 10 if digits[9] == "X" else int(digits[9])
    return total % 11 == 0


def isbn10_checksum_char(body9: str) -> str:
    total = sum((10 - i) * int(c) for i, c in enumerate(body9))
    check = (11 - total % 11) % 11
    return "X" if check == 10 else str(check)


def is_isbn13(value: str) -> bool:
    digits = value.replace("-", "").replace(" ", "")
    if len(digits) != 13 or not digits.isdigit():
        return False
    total = sum(int(c) * (1 if i % 2 == 0 else 3) for i, c in enumerate(digits[:12]))
    return (10 - total % 10) % 10 == int(digits[12])


def isbn13_checksum_char(body12: str) -> str:
    total = sum(int(c) * (1 if i % 2 == 0 else 3) for i, c in enumerate(body12))
    return str((10 - total % 10) % 10)


def is_isbn(value: str) -> bool:
    return is_isbn10(value) or is_isbn13(value)


def classify_source_id(value: str) -> str:
    """Return "issn", "isbn" or "unknown" for a venue identifier."""
    if is_issn(value):
        return "issn"
    if is_isbn(value):
        return "isbn"
    return "unknown"
