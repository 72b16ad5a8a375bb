"""Planting realistic factual corruptions from opposing-evidence edit pairs.

An edit pair is a (before, after) sentence rewrite expressing opposite
relations towards one claim. Matching an edit into a document aligns it to
the closest sentence by word-level Jaccard similarity, determines which
side of the edit the document currently agrees with, and plants the other
side as the replacement. Both similarity gates use strict ">".
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import Cluster, Document
from .errors import ValidationError
from .segment import ingest_presegmented

logger = logging.getLogger(__name__)

#: Minimum similarity between an edit's two sides for the edit to be usable.
EDIT_SIMILARITY_GATE = 0.25
#: Minimum similarity between the best document sentence and either side.
SPAN_SIMILARITY_GATE = 0.2

_STRIP_CHARS = ".,;:!?"


@dataclass(frozen=True)
class EditPair:
    """A before/after sentence rewrite with claim provenance."""

    before: str
    after: str
    claim_id: str

    def __post_init__(self) -> None:
        if not self.before.strip() or not self.after.strip():
            raise ValidationError(f"edit {self.claim_id!r}: before/after must be non-empty")
        if self.before == self.after:
            raise ValidationError(f"edit {self.claim_id!r}: before and after are identical")


@dataclass(frozen=True)
class CorruptionInstance:
    """A planted edit: where it goes, what it replaces, and where it came from."""

    topic: str
    doc_id: str
    span_index: int
    original: str
    replacement: str
    claim_id: str
    replaced_side: str  # which edit side was planted: "before" or "after"


def tokenize(text: str, lowercase: bool = True) -> frozenset[str]:
    """Word tokens: whitespace-split, hyphen-split, trailing punctuation stripped."""
    tokens = set()
    for raw in text.split():
        for part in raw.split("-"):
            part = part.rstrip(_STRIP_CHARS)
            if part:
                tokens.add(part.lower() if lowercase else part)
    return frozenset(tokens)


def jaccard(a: str, b: str, lowercase: bool = True) -> float:
    """Word-level Jaccard similarity; two empty token sets count as identical."""
    set_a = tokenize(a, lowercase)
    set_b = tokenize(b, lowercase)
    if not set_a and not set_b:
        return 1.0
    return len(set_a & set_b) / len(set_a | set_b)


def match_edit(
    edit: EditPair, doc: Document, topic: str = "", lowercase: bool = True
) -> CorruptionInstance | None:
    """Align an edit to a document sentence and emit the planted corruption.

    Returns None when the edit's sides are too dissimilar, no sentence is
    close enough to either side, or the planted replacement would equal the
    matched sentence. The edit side closer to the matched sentence is deemed
    current; the other side becomes the replacement (ties plant "after").
    """
    if jaccard(edit.before, edit.after, lowercase) <= EDIT_SIMILARITY_GATE:
        logger.debug("edit %s rejected: before/after similarity at or below %.2f",
                     edit.claim_id, EDIT_SIMILARITY_GATE)
        return None

    best_span = None
    best_sim = -1.0
    for span in doc.spans:
        sim = max(
            jaccard(span.text, edit.before, lowercase),
            jaccard(span.text, edit.after, lowercase),
        )
        if sim > best_sim:
            best_span, best_sim = span, sim
    if best_span is None or best_sim <= SPAN_SIMILARITY_GATE:
        logger.debug("edit %s rejected: best sentence similarity %.3f at or below %.2f",
                     edit.claim_id, best_sim, SPAN_SIMILARITY_GATE)
        return None

    sim_before = jaccard(best_span.text, edit.before, lowercase)
    sim_after = jaccard(best_span.text, edit.after, lowercase)
    if sim_before > sim_after:
        replacement, side = edit.after, "after"
    elif sim_after > sim_before:
        replacement, side = edit.before, "before"
    else:
        replacement, side = edit.after, "after"
    if replacement == best_span.text:
        logger.debug("edit %s rejected: replacement equals the matched sentence",
                     edit.claim_id)
        return None

    return CorruptionInstance(
        topic=topic,
        doc_id=doc.id,
        span_index=best_span.span_index,
        original=best_span.text,
        replacement=replacement,
        claim_id=edit.claim_id,
        replaced_side=side,
    )


def build_corpus(
    edits: Sequence[EditPair],
    clusters: Sequence[Cluster],
    target_doc_selector: Callable[[Cluster], Document] | None = None,
) -> list[CorruptionInstance]:
    """Match every edit against the target document of every cluster.

    The default target is each cluster's first document (its designated
    primary-language article). Output order is (cluster index, edit index);
    at most one corruption arises per (edit, cluster).
    """
    select = target_doc_selector or (lambda cluster: cluster.documents[0])
    instances = []
    for cluster in clusters:
        if not cluster.documents:
            continue
        target = select(cluster)
        for edit in edits:
            instance = match_edit(edit, target, topic=cluster.topic)
            if instance is not None:
                instances.append(instance)
    return instances


def _replace_span_text(doc: Document, span_index: int, expected: str, new_text: str) -> Document:
    if not 0 <= span_index < len(doc.spans):
        raise ValidationError(f"span_index {span_index} out of range for document {doc.id!r}")
    current = doc.spans[span_index].text
    if current != expected:
        raise ValidationError(
            f"document {doc.id!r} span {span_index} does not hold the expected text"
        )
    texts = [span.text for span in doc.spans]
    texts[span_index] = new_text
    return ingest_presegmented(texts, doc_id=doc.id, doc_index=doc.spans[0].doc_index)


def apply_corruption(doc: Document, instance: CorruptionInstance) -> Document:
    """Plant the replacement; the document is rebuilt in canonical form.

    Documents produced by pre-segmented ingestion are already canonical, so
    apply-then-revert restores them byte-identically.
    """
    return _replace_span_text(doc, instance.span_index, instance.original, instance.replacement)


def revert_corruption(doc: Document, instance: CorruptionInstance) -> Document:
    """Undo a planted corruption, restoring the original sentence."""
    return _replace_span_text(doc, instance.span_index, instance.replacement, instance.original)
