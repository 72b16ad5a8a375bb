"""Line-delimited corpus file formats.

One JSON record per line, UTF-8:

- document:   {"id": str, "sentences": [str, ...]}
- cluster:    {"topic": str, "documents": [document, ...]}
- edit:       {"before": str, "after": str, "claim_id": str}
- corruption: {"topic", "doc_id", "span_index", "original", "replacement",
               "claim_id", "replaced_side"}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .core import Cluster, Document
from .corruption import CorruptionInstance, EditPair
from .errors import ValidationError
from .segment import ingest_presegmented


def read_records(path: str | Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{line_no}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise ValidationError(f"{path}:{line_no}: expected a JSON object")
            yield record


def document_from_record(record: dict, doc_index: int = 0) -> Document:
    try:
        doc_id = record["id"]
        sentences = record["sentences"]
    except KeyError as exc:
        raise ValidationError(f"document record missing field {exc}") from exc
    return ingest_presegmented(sentences, doc_id=str(doc_id), doc_index=doc_index)


def cluster_from_record(record: dict) -> Cluster:
    try:
        topic = record["topic"]
        documents = record["documents"]
    except KeyError as exc:
        raise ValidationError(f"cluster record missing field {exc}") from exc
    docs = tuple(
        document_from_record(doc_record, doc_index=i)
        for i, doc_record in enumerate(documents)
    )
    return Cluster(topic=str(topic), documents=docs)


def document_to_record(doc: Document) -> dict:
    return {"id": doc.id, "sentences": [span.text for span in doc.spans]}


def cluster_to_record(cluster: Cluster) -> dict:
    return {
        "topic": cluster.topic,
        "documents": [document_to_record(doc) for doc in cluster.documents],
    }


def load_document(path: str | Path) -> Document:
    """First document record of a file."""
    for record in read_records(path):
        return document_from_record(record)
    raise ValidationError(f"{path}: no document records found")


def load_documents(path: str | Path) -> list[Document]:
    return [document_from_record(r, doc_index=i) for i, r in enumerate(read_records(path))]


def load_cluster(path: str | Path) -> Cluster:
    """First cluster record of a file."""
    for record in read_records(path):
        return cluster_from_record(record)
    raise ValidationError(f"{path}: no cluster records found")


def load_clusters(path: str | Path) -> list[Cluster]:
    return [cluster_from_record(r) for r in read_records(path)]


def load_edits(path: str | Path) -> list[EditPair]:
    edits = []
    for record in read_records(path):
        try:
            edits.append(
                EditPair(
                    before=record["before"],
                    after=record["after"],
                    claim_id=str(record["claim_id"]),
                )
            )
        except KeyError as exc:
            raise ValidationError(f"edit record missing field {exc}") from exc
    return edits


def corruption_to_record(instance: CorruptionInstance) -> dict:
    return {
        "topic": instance.topic,
        "doc_id": instance.doc_id,
        "span_index": instance.span_index,
        "original": instance.original,
        "replacement": instance.replacement,
        "claim_id": instance.claim_id,
        "replaced_side": instance.replaced_side,
    }


def corruption_from_record(record: dict) -> CorruptionInstance:
    try:
        return CorruptionInstance(
            topic=record["topic"],
            doc_id=record["doc_id"],
            span_index=int(record["span_index"]),
            original=record["original"],
            replacement=record["replacement"],
            claim_id=record["claim_id"],
            replaced_side=record["replaced_side"],
        )
    except KeyError as exc:
        raise ValidationError(f"corruption record missing field {exc}") from exc


def write_records(path: str | Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
            handle.write("\n")
