"""Command-line surface tying the engine together.

All corpus files are UTF-8 line-delimited JSON records (see corpus module
for the schemas). Commands exit 0 on success and 2 on I/O or backend
failure; --json switches any report to a machine-readable schema.
"""

from __future__ import annotations

import functools
import json
import sys

import click

from .aggregate import BinaryKind, tune_threshold
from .cluster import ClusterMode, rank_cluster
from .config import EngineConfig
from .core import Label, ScoreTriple
from .corpus import (
    corruption_to_record,
    load_cluster,
    load_clusters,
    load_document,
    load_edits,
    read_records,
    write_records,
)
from .corruption import build_corpus
from .docinfer import (
    RerankConfig,
    build_rerank_premises,
    rank_for_retrieval,
    retrieve_and_predict,
    retrieve_and_rerank,
    score_spans,
)
from .errors import EngineError, ValidationError
from .gateway import ScorerGateway
from .metrics import (
    RankedInstance,
    accuracy_at_k,
    balanced_accuracy,
    f1_class,
    precision_at_recall,
)

_METHOD_CHOICES = {
    "entail-threshold": BinaryKind.ENTAIL_THRESHOLD,
    "contra-threshold": BinaryKind.CONTRA_THRESHOLD,
    "binary-softmax": BinaryKind.BINARY_SOFTMAX,
}


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _triple_line(e: float, n: float, c: float) -> str:
    return f"e={_fmt(e)} n={_fmt(n)} c={_fmt(c)}"


def engine_options(func):
    """Options shared by every command that builds an engine config."""

    @click.option("--config", "config_path", type=click.Path(), default=None,
                  help="JSON engine config file.")
    @click.option("--backend", type=click.Choice(["mock", "remote"]), default=None)
    @click.option("--endpoint", default=None, help="Remote scorer base URL.")
    @click.option("--seed", type=int, default=None)
    @click.option("--jitter", "mock_jitter", type=float, default=None,
                  help="Mock backend jitter in [0, 0.03].")
    @functools.wraps(func)
    def wrapper(*args, config_path=None, backend=None, endpoint=None, seed=None,
                mock_jitter=None, **kwargs):
        cfg = EngineConfig.from_file(config_path) if config_path else EngineConfig()
        cfg = cfg.with_overrides(backend=backend, endpoint=endpoint, seed=seed,
                                 mock_jitter=mock_jitter)
        return func(*args, cfg=cfg, **kwargs)

    return wrapper


def handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (EngineError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
def main() -> None:
    """Long-document and cluster-level NLI inference engine."""


@main.command("score-pair")
@click.option("--hypothesis", required=True)
@click.option("--premise", required=True)
@click.option("--json", "as_json", is_flag=True)
@engine_options
@handle_errors
def cmd_score_pair(hypothesis: str, premise: str, as_json: bool, cfg: EngineConfig) -> None:
    """Score a single hypothesis/premise pair."""
    gateway = ScorerGateway(cfg.gateway)
    triple = gateway.score_pair(hypothesis, premise)
    if as_json:
        click.echo(json.dumps(
            {"e": triple.p_e, "n": triple.p_n, "c": triple.p_c,
             "label": triple.argmax().value},
            sort_keys=True))
    else:
        click.echo(_triple_line(triple.p_e, triple.p_n, triple.p_c))
        click.echo(f"label: {triple.argmax().value}")


@main.command("classify")
@click.option("--hypothesis", required=True)
@click.option("--doc", "doc_path", required=True, type=click.Path())
@click.option("--rerank", is_flag=True)
@click.option("--always-rerank", is_flag=True,
              help="Run the rerank pass even when the first pass is neutral.")
@click.option("--k", type=int, default=None, help="Rerank depth.")
@click.option("--t", type=float, default=None, help="Decision threshold.")
@click.option("--json", "as_json", is_flag=True)
@engine_options
@handle_errors
def cmd_classify(hypothesis: str, doc_path: str, rerank: bool, always_rerank: bool,
                 k: int | None, t: float | None, as_json: bool, cfg: EngineConfig) -> None:
    """Classify a hypothesis against a long document."""
    cfg = cfg.with_overrides(k=k, t=t)
    doc = load_document(doc_path)
    gateway = ScorerGateway(cfg.gateway)
    scores = score_spans(hypothesis, doc, gateway)

    premises = None
    if rerank or always_rerank:
        rerank_cfg = RerankConfig(k=cfg.k, t=cfg.t, always_rerank=always_rerank)
        verdict = retrieve_and_rerank(hypothesis, doc, rerank_cfg, gateway)
        if verdict.rerank_triple is not None:
            premises = build_rerank_premises(doc, rank_for_retrieval(scores), cfg.k)
    else:
        verdict = retrieve_and_predict(scores, cfg.t)

    evidence = {
        label.value: {
            "span_index": index,
            "text": doc.spans[index].text,
        }
        for label, index in verdict.evidence.items()
    }
    if as_json:
        payload = {
            "label": verdict.label.value,
            "method": verdict.method,
            "max_scores": {"e": verdict.max_scores.e, "n": verdict.max_scores.n,
                           "c": verdict.max_scores.c},
            "evidence": evidence,
            "rerank": None,
        }
        if verdict.rerank_triple is not None:
            payload["rerank"] = {
                "premise_a": premises[0],
                "premise_b": premises[1],
                "triple": {"e": verdict.rerank_triple.p_e,
                           "n": verdict.rerank_triple.p_n,
                           "c": verdict.rerank_triple.p_c},
            }
        click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False))
        return

    click.echo(f"label: {verdict.label.value}")
    click.echo("max_scores: " + _triple_line(
        verdict.max_scores.e, verdict.max_scores.n, verdict.max_scores.c))
    for label in (Label.ENTAILMENT, Label.CONTRADICTION):
        index = verdict.evidence[label]
        click.echo(f"evidence[{label.value}]: span {index}: {doc.spans[index].text}")
    if verdict.rerank_triple is not None:
        click.echo(f"rerank premise A: {premises[0]}")
        click.echo(f"rerank premise B: {premises[1]}")
        click.echo("rerank triple: " + _triple_line(
            verdict.rerank_triple.p_e, verdict.rerank_triple.p_n,
            verdict.rerank_triple.p_c))


@main.command("rank-cluster")
@click.option("--cluster", "cluster_path", required=True, type=click.Path())
@click.option("--mode", type=click.Choice([m.value for m in ClusterMode]),
              default=None)
@click.option("--scope", "scope_id", default=None,
              help="Restrict ranked spans to this document id.")
@click.option("--top", type=int, default=10, help="Number of spans to report.")
@click.option("--json", "as_json", is_flag=True)
@engine_options
@handle_errors
def cmd_rank_cluster(cluster_path: str, mode: str | None, scope_id: str | None,
                     top: int, as_json: bool, cfg: EngineConfig) -> None:
    """Rank all cluster spans by discrepancy (or consensus) score."""
    cluster = load_cluster(cluster_path)
    cluster_mode = ClusterMode(mode) if mode else cfg.cluster_mode
    scope_id = scope_id if scope_id is not None else cfg.cluster_scope
    scope = None
    if scope_id is not None:
        ids = [doc.id for doc in cluster.documents]
        if scope_id not in ids:
            raise ValidationError(f"no document with id {scope_id!r} in cluster")
        scope = ids.index(scope_id)
    gateway = ScorerGateway(cfg.gateway)
    ranking = rank_cluster(cluster, gateway, mode=cluster_mode, scope=scope)
    shown = ranking.entries[: max(top, 0)]

    if as_json:
        payload = {
            "topic": cluster.topic,
            "mode": cluster_mode.value,
            "scope": scope_id,
            "spans": [
                {
                    "doc_id": cluster.documents[entry.doc_index].id,
                    "doc_index": entry.doc_index,
                    "span_index": entry.span_index,
                    "omega": entry.omega,
                    "text": cluster.documents[entry.doc_index].spans[entry.span_index].text,
                    "per_doc_best": {
                        doc_id: {
                            "doc_index": al.doc_index,
                            "span_index": al.span_index,
                            "score": al.score,
                            "text": cluster.documents[al.doc_index].spans[al.span_index].text,
                        }
                        for doc_id, al in sorted(entry.per_doc_best.items())
                    },
                }
                for entry in shown
            ],
        }
        click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False))
        return

    click.echo(f"topic: {cluster.topic}  mode: {cluster_mode.value}  "
               f"candidates: {len(ranking.entries)}")
    for rank, entry in enumerate(shown, start=1):
        doc = cluster.documents[entry.doc_index]
        text = doc.spans[entry.span_index].text
        click.echo(f"{rank:3d}. omega={_fmt(entry.omega)}  "
                   f"doc={doc.id} span={entry.span_index}: {text}")
        for doc_id, al in sorted(entry.per_doc_best.items()):
            other_text = cluster.documents[al.doc_index].spans[al.span_index].text
            click.echo(f"       vs {doc_id}: span {al.span_index} "
                       f"score={_fmt(al.score)}: {other_text}")


@main.command("build-corruptions")
@click.option("--edits", "edits_path", required=True, type=click.Path())
@click.option("--clusters", "clusters_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--target-doc", "target_doc_id", default=None,
              help="Plant into this document id instead of each cluster's first.")
@handle_errors
def cmd_build_corruptions(edits_path: str, clusters_path: str, out_path: str,
                          target_doc_id: str | None) -> None:
    """Plant edit-pair corruptions into cluster target documents."""
    edits = load_edits(edits_path)
    clusters = load_clusters(clusters_path)
    selector = None
    if target_doc_id is not None:
        def selector(cluster):
            for doc in cluster.documents:
                if doc.id == target_doc_id:
                    return doc
            raise ValidationError(
                f"no document with id {target_doc_id!r} in cluster {cluster.topic!r}")
    instances = build_corpus(edits, clusters, target_doc_selector=selector)
    write_records(out_path, (corruption_to_record(inst) for inst in instances))
    click.echo(f"{len(instances)} corruption(s) written to {out_path}")


@main.command("tune")
@click.option("--scored", "scored_path", required=True, type=click.Path(),
              help='Records {"e","n","c","gold"} with boolean gold.')
@click.option("--method", required=True, type=click.Choice(sorted(_METHOD_CHOICES)))
@click.option("--step", type=float, default=0.05)
@click.option("--objective", type=click.Choice(["f1", "balanced-accuracy"]),
              default="f1")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def cmd_tune(scored_path: str, method: str, step: float, objective: str,
             as_json: bool) -> None:
    """Tune a binary decision threshold on scored examples."""
    scored = []
    for record in read_records(scored_path):
        triple = ScoreTriple(float(record["e"]), float(record["n"]), float(record["c"]))
        scored.append((triple, bool(record["gold"])))
    t_star, score = tune_threshold(scored, _METHOD_CHOICES[method],
                                   grid_step=step, objective=objective)
    name = "F1" if objective == "f1" else "balanced_accuracy"
    if as_json:
        click.echo(json.dumps({"t_star": t_star, "objective": objective,
                               "score": score}, sort_keys=True))
    else:
        click.echo(f"T*={_fmt(t_star)} {name}={_fmt(score)}")


@main.command("eval")
@click.option("--pred", "pred_path", required=True, type=click.Path())
@click.option("--gold", "gold_path", default=None, type=click.Path(),
              help="Required for f1 and balanced-accuracy.")
@click.option("--metric", required=True,
              type=click.Choice(["f1", "balanced-accuracy", "precision-at-recall",
                                 "accuracy-at-k"]))
@click.option("--label", "target_label", default="e",
              help="Target class for f1.")
@click.option("--k", type=int, default=1, help="Cutoff for accuracy-at-k.")
@click.option("--r", type=float, default=0.8, help="Recall level for precision-at-recall.")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def cmd_eval(pred_path: str, gold_path: str | None, metric: str, target_label: str,
             k: int, r: float, as_json: bool) -> None:
    """Evaluate predictions against golds with one metric."""

    def emit(payload: dict, text: str) -> None:
        click.echo(json.dumps(payload, sort_keys=True) if as_json else text)

    if metric in ("f1", "balanced-accuracy"):
        if gold_path is None:
            raise ValidationError(f"--gold is required for metric {metric}")
        preds = [record["label"] for record in read_records(pred_path)]
        golds = [record["label"] for record in read_records(gold_path)]
        if metric == "f1":
            precision, recall, f1 = f1_class(preds, golds, target_label)
            emit({"precision": precision, "recall": recall, "f1": f1},
                 f"precision={_fmt(precision)} recall={_fmt(recall)} f1={_fmt(f1)}")
        else:
            score = balanced_accuracy(preds, golds)
            emit({"balanced_accuracy": score}, f"balanced_accuracy={_fmt(score)}")
    elif metric == "precision-at-recall":
        scores = [(float(rec["score"]), bool(rec["gold"])) for rec in read_records(pred_path)]
        score = precision_at_recall(scores, r)
        emit({"precision_at_recall": score, "r": r},
             f"precision_at_recall={_fmt(score)}")
    else:
        instances = [
            RankedInstance(
                ranking=tuple(tuple(ref) for ref in rec["ranking"]),
                gold=tuple(rec["gold"]),
            )
            for rec in read_records(pred_path)
        ]
        score = accuracy_at_k(instances, k)
        emit({"accuracy_at_k": score, "k": k}, f"accuracy_at_k={_fmt(score)}")


if __name__ == "__main__":
    main()
