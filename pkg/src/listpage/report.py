"""Evaluation report assembly: segmentation, classification, and final
record-level sections computed from extraction predictions."""

from __future__ import annotations

import json
from pathlib import Path

from .classifier import ATTRIBUTE_LABELS, LabeledNode
from .corpus import AnnotatedPage
from .dom import XPath
from .matcher import RecordExtraction
from .metrics import (
    PageSetMismatch,
    ari,
    classification_metrics,
    corpus_avg,
    final_record_metrics,
    nmi,
    node_clustering,
    page_prf,
    seg_page_confusion,
)
from .pipeline import PageResult
from .segmenter import Segmentation


def prediction_payload(result: PageResult) -> dict:
    """Extraction wire record, extended with everything eval needs.

    The grouped title/tag/date arrays and the unmatched count are the core
    exchange format; boundaries, per-record prefixes/attrs, and the
    unmatched attribute pool make the report sections computable from the
    file alone.
    """
    records = []
    for rec in result.records:
        grouped = {label: [] for label in ATTRIBUTE_LABELS}
        attrs = []
        for attr in rec.attributes:
            if attr.label in grouped:
                grouped[attr.label].append(attr.text)
            attrs.append(
                {"xpath": str(attr.xpath), "label": attr.label, "text": attr.text}
            )
        grouped["prefix"] = str(rec.prefix) if rec.prefix is not None else None
        grouped["attrs"] = attrs
        records.append(grouped)
    return {
        "page_id": result.page_id,
        "records": records,
        "unmatched": len(result.unmatched),
        "boundaries": [str(b) for b in result.segmentation.boundaries],
        "unmatched_attrs": [
            {"xpath": str(a.xpath), "label": a.label, "text": a.text}
            for a in result.unmatched
        ],
    }


def write_predictions(results: dict[str, PageResult], out_path: Path) -> None:
    with open(out_path, "w", encoding="utf-8") as fh:
        for page_id in sorted(results):
            fh.write(
                json.dumps(prediction_payload(results[page_id]), ensure_ascii=False)
                + "\n"
            )


def _node(d: dict) -> LabeledNode:
    return LabeledNode(XPath.parse(d["xpath"]), d["label"], d["text"])


def load_predictions(path: Path) -> dict[str, dict]:
    preds = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                preds[rec["page_id"]] = rec
    return preds


def _to_extractions(
    pred: dict,
) -> tuple[list[RecordExtraction], list[LabeledNode]]:
    records = []
    for i, rec in enumerate(pred["records"]):
        prefix = XPath.parse(rec["prefix"]) if rec.get("prefix") else None
        records.append(
            RecordExtraction(
                record_index=i,
                attributes=[_node(a) for a in rec.get("attrs", [])],
                prefix=prefix,
            )
        )
    unmatched = [_node(a) for a in pred.get("unmatched_attrs", [])]
    return records, unmatched


def build_report(
    reference_pages: list[AnnotatedPage], predictions: dict[str, dict]
) -> dict:
    """Full evaluation report; predictions are loaded JSONL records."""
    ref_ids = {p.page_id for p in reference_pages}
    if ref_ids != set(predictions):
        raise PageSetMismatch("prediction and reference page sets differ")

    seg_pages, aris, nmis = [], [], []
    ref_labels: dict[str, list[LabeledNode]] = {}
    pred_labels: dict[str, list[LabeledNode]] = {}
    final_input = {}
    for page in reference_pages:
        pred = predictions[page.page_id]
        ref_seg = Segmentation(tuple(r.boundary for r in page.records))
        pred_seg = Segmentation(
            tuple(XPath.parse(b) for b in pred.get("boundaries", []))
        )
        seg_pages.append(page_prf(seg_page_confusion(ref_seg, pred_seg)))
        aris.append(
            ari(
                node_clustering(page.html, ref_seg),
                node_clustering(page.html, pred_seg),
            )
        )
        nmis.append(
            nmi(
                node_clustering(page.html, ref_seg),
                node_clustering(page.html, pred_seg),
            )
        )
        ref_labels[page.page_id] = [
            LabeledNode(a.xpath, a.label, a.text)
            for r in page.records
            for a in r.attributes
            if a.label in ATTRIBUTE_LABELS
        ]
        records, unmatched = _to_extractions(pred)
        pred_labels[page.page_id] = [
            a for r in records for a in r.attributes
        ] + unmatched
        final_input[page.page_id] = (records, unmatched)

    precision_avg, recall_avg, f1_avg = corpus_avg(seg_pages)
    cls = classification_metrics(ref_labels, pred_labels)
    final = final_record_metrics(reference_pages, final_input)
    return {
        "segmentation": {
            "precision_avg": precision_avg,
            "recall_avg": recall_avg,
            "f1_avg": f1_avg,
            "ari": sum(aris) / len(aris),
            "nmi": sum(nmis) / len(nmis),
        },
        "classification": {
            label: {
                "precision_avg": p,
                "recall_avg": r,
                "f1_avg": f,
            }
            for label, (p, r, f) in cls.items()
        },
        "final": {
            label: {
                "tp": c.tp,
                "fp": c.fp,
                "fn": c.fn,
                "precision": c.precision,
                "recall": c.recall,
                "f1": c.f1,
            }
            for label, c in final.items()
        },
    }


def render_report(report: dict) -> str:
    lines = ["== Segmentation =="]
    seg = report["segmentation"]
    lines.append(
        "  P_avg={precision_avg:.3f} R_avg={recall_avg:.3f} "
        "F1_avg={f1_avg:.3f} ARI={ari:.3f} NMI={nmi:.3f}".format(**seg)
    )
    lines.append("== Classification (page-weighted) ==")
    for label, m in report["classification"].items():
        lines.append(
            f"  {label:5s} P_avg={m['precision_avg']:.3f} "
            f"R_avg={m['recall_avg']:.3f} F1_avg={m['f1_avg']:.3f}"
        )
    lines.append("== Final method ==")
    for label, m in report["final"].items():
        lines.append(
            f"  {label:5s} TP={m['tp']} FP={m['fp']} FN={m['fn']} "
            f"P={m['precision']:.3f} R={m['recall']:.3f} F1={m['f1']:.3f}"
        )
    return "\n".join(lines)
