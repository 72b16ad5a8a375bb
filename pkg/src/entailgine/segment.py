"""Deterministic sentence segmentation into offset-preserving spans.

Two ingestion paths exist: a rule-based splitter for raw text, and
pre-segmented line input as the canonical, reproducible path. The splitter
is rule-based on purpose: downstream algorithms must be reproducible
bit-for-bit, and corpora typically arrive pre-segmented anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Cluster, Document, Span
from .errors import EmptyDocumentError, ValidationError

DEFAULT_ABBREVIATIONS = frozenset(
    {"Dr.", "Mr.", "Mrs.", "Ms.", "St.", "No.", "vs.", "etc.", "e.g.", "i.e."}
)

_TERMINATORS = ".!?"


@dataclass(frozen=True)
class SegmenterConfig:
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
    min_span_chars: int = 2

    def __post_init__(self) -> None:
        if self.min_span_chars < 1:
            raise ValidationError("min_span_chars must be >= 1")
        for abbr in self.abbreviations:
            if not abbr.endswith("."):
                raise ValidationError(f"abbreviation {abbr!r} must end with '.'")


def _token_ending_at(text: str, index: int) -> str:
    """The whitespace-delimited token whose final character sits at ``index``."""
    start = index
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start : index + 1]


def _boundaries(text: str, cfg: SegmenterConfig) -> list[int]:
    """Indices just past each sentence terminator that starts a new sentence.

    A split happens after '.', '!' or '?' when followed by whitespace and
    then an uppercase letter or digit, unless the terminating token is a
    known abbreviation.
    """
    cuts = []
    for i, ch in enumerate(text):
        if ch not in _TERMINATORS:
            continue
        j = i + 1
        if j >= len(text) or not text[j].isspace():
            continue
        while j < len(text) and text[j].isspace():
            j += 1
        if j >= len(text):
            continue
        follower = text[j]
        if not (follower.isupper() or follower.isdigit()):
            continue
        if ch == "." and _token_ending_at(text, i) in cfg.abbreviations:
            continue
        cuts.append(i + 1)
    return cuts


def _trimmed_slice(text: str, start: int, end: int) -> tuple[int, int]:
    """Shrink [start, end) to exclude surrounding whitespace."""
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end


def segment(text: str, cfg: SegmenterConfig | None = None, doc_index: int = 0) -> list[Span]:
    """Split raw text into sentence spans whose offsets reconstruct the input.

    Concatenating the produced span texts with the whitespace between them
    reproduces ``text`` exactly. Spans shorter than ``min_span_chars`` after
    trimming merge into the following span (a trailing short span merges
    backward instead).
    """
    cfg = cfg or SegmenterConfig()
    pieces: list[tuple[int, int]] = []
    prev = 0
    for cut in _boundaries(text, cfg) + [len(text)]:
        start, end = _trimmed_slice(text, prev, cut)
        if end > start:
            pieces.append((start, end))
        prev = cut

    merged: list[tuple[int, int]] = []
    carry_start: int | None = None
    for start, end in pieces:
        if carry_start is not None:
            start = carry_start
            carry_start = None
        if len(text[start:end].strip()) < cfg.min_span_chars:
            carry_start = start
            continue
        merged.append((start, end))
    if carry_start is not None:
        if merged:
            start, _ = merged.pop()
            merged.append((start, pieces[-1][1]))
        else:
            merged.append((carry_start, pieces[-1][1]))

    return [
        Span(doc_index=doc_index, span_index=i, text=text[s:e], char_start=s, char_end=e)
        for i, (s, e) in enumerate(merged)
    ]


def segment_document(text: str, doc_id: str, cfg: SegmenterConfig | None = None,
                     doc_index: int = 0) -> Document:
    """Segment raw text and wrap the spans in a Document."""
    spans = segment(text, cfg, doc_index=doc_index)
    if not spans:
        raise EmptyDocumentError(f"document {doc_id!r}: no spans after segmentation")
    return Document(id=doc_id, spans=tuple(spans))


def ingest_presegmented(lines: Iterable[str], doc_id: str = "doc",
                        doc_index: int = 0) -> Document:
    """Build a Document from pre-segmented lines, one span per non-blank line.

    Offsets are assigned over the trimmed lines joined with single newlines;
    this canonical form is what the corruption round-trip relies on.
    """
    texts = [line.strip() for line in lines if line.strip()]
    if not texts:
        raise EmptyDocumentError(f"empty document {doc_id!r}: all input lines are blank")
    spans = []
    offset = 0
    for i, sent in enumerate(texts):
        spans.append(Span(doc_index=doc_index, span_index=i, text=sent,
                          char_start=offset, char_end=offset + len(sent)))
        offset += len(sent) + 1
    return Document(id=doc_id, spans=tuple(spans))


def document_text(doc: Document) -> str:
    """The canonical joined text of a pre-segmented document."""
    return "\n".join(span.text for span in doc.spans)


def make_cluster(topic: str, docs: Sequence[tuple[str, Sequence[str]]]) -> Cluster:
    """Build a Cluster from (doc_id, sentence list) pairs."""
    documents = tuple(
        ingest_presegmented(sentences, doc_id=doc_id, doc_index=i)
        for i, (doc_id, sentences) in enumerate(docs)
    )
    return Cluster(topic=topic, documents=documents)
