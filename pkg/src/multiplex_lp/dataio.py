"""Multiplex edge-list parsing and result serialization.

Edge-list grammar: blank lines and lines whose first non-space character is
``#`` are skipped; every other line is ``layer node node [weight]`` separated
by whitespace, with integer layer/node ids and an optional positive weight
(default 1.0).
"""
from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path
from typing import IO, Iterable, Mapping, Union

import numpy as np

from .evaluation import EvaluationResult, TrialResult
from .graph import GraphError, MultiplexNetwork, build_network
from .interlayer import LayerSimilarityReport
from .predictor import RankedPrediction

__all__ = [
    "EdgeListError",
    "load_multiplex_edgelist",
    "parse_multiplex_edgelist",
    "write_multiplex_edgelist",
    "write_results",
    "read_ranking",
    "read_evaluation",
]

PathOrStream = Union[str, os.PathLike, IO[str]]


class EdgeListError(ValueError):
    """Malformed edge-list input."""


def _open_text(src: PathOrStream):
    if hasattr(src, "read"):
        return src, False
    return open(src, "r", encoding="utf-8"), True


def parse_multiplex_edgelist(lines: Iterable[str]) -> MultiplexNetwork:
    records = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) not in (3, 4):
            raise EdgeListError(f"line {lineno}: expected 3 or 4 fields, got {len(fields)}")
        try:
            layer, a, b = (int(f) for f in fields[:3])
        except ValueError:
            raise EdgeListError(f"line {lineno}: layer and node ids must be integers") from None
        weight = 1.0
        if len(fields) == 4:
            try:
                weight = float(fields[3])
            except ValueError:
                raise EdgeListError(f"line {lineno}: weight {fields[3]!r} is not a number") from None
            if not (weight > 0 and np.isfinite(weight)):
                raise EdgeListError(f"line {lineno}: weight must be positive, got {fields[3]}")
        if a == b:
            raise EdgeListError(f"line {lineno}: self-loop on node {a}")
        records.append((layer, a, b, weight))
    if not records:
        raise EdgeListError("no edges in input")
    labels = sorted({r[1] for r in records} | {r[2] for r in records})
    layer_ids = sorted({r[0] for r in records})
    node_of = {lab: i for i, lab in enumerate(labels)}
    layer_of = {lab: i for i, lab in enumerate(layer_ids)}
    try:
        return build_network(
            len(labels),
            ((layer_of[l], node_of[a], node_of[b], w) for l, a, b, w in records),
            labels=labels,
            layer_names=[str(l) for l in layer_ids],
        )
    except GraphError as exc:  # pragma: no cover - inputs already validated above
        raise EdgeListError(str(exc)) from exc


def load_multiplex_edgelist(src: PathOrStream) -> MultiplexNetwork:
    """Load a network from a path or text stream.

    Node labels and layer ids are remapped densely in ascending order, so the
    result does not depend on line order or edge orientation.
    """
    fh, close = _open_text(src)
    try:
        return parse_multiplex_edgelist(fh)
    finally:
        if close:
            fh.close()


def write_multiplex_edgelist(net: MultiplexNetwork, dest: PathOrStream) -> None:
    """Write ``net`` in the loader's grammar using its external labels."""
    fh, close = (dest, False) if hasattr(dest, "write") else (open(dest, "w", encoding="utf-8", newline="\n"), True)
    try:
        fh.write(f"# layer node node weight; nodes={net.node_count} layers={net.layer_count}\n")
        for layer in net.layers:
            name = net.layer_names[layer.layer_id]
            if not name.lstrip("-").isdigit():
                name = layer.layer_id
            u, v, w = layer.edge_list()
            for a, b, wt in zip(u.tolist(), v.tolist(), w.tolist()):
                fh.write(f"{name} {net.labels[a]} {net.labels[b]} {wt!r}\n")
    finally:
        if close:
            fh.close()


# -- results ----------------------------------------------------------------

_TRIAL_FIELDS = ["method", "trial", "seed", "auc", "precision", "alpha", "beta", "gamma", "n_train", "n_test"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _evaluations(obj) -> list[EvaluationResult] | None:
    if isinstance(obj, EvaluationResult):
        return [obj]
    if isinstance(obj, Mapping) and obj and all(isinstance(v, EvaluationResult) for v in obj.values()):
        return list(obj.values())
    if isinstance(obj, (list, tuple)) and obj and all(isinstance(v, EvaluationResult) for v in obj):
        return list(obj)
    return None


def _ranking_doc(r: RankedPrediction, labels) -> dict:
    rows = []
    for rank, (a, b, s) in enumerate(r, start=1):
        row = {"rank": rank, "u": a, "v": b, "score": s}
        if labels is not None:
            row["u_label"], row["v_label"] = labels[a], labels[b]
        rows.append(row)
    return {"kind": "ranking", "warnings": list(r.warnings), "pairs": rows}


def _report_doc(rep: LayerSimilarityReport) -> dict:
    return {
        "kind": "layer_similarity",
        "layer_names": rep.layer_names,
        "node_count": rep.node_count,
        "edge_counts": rep.edge_counts,
        "densities": rep.densities,
        "s_cw": rep.s_cw,
        "aasn": rep.aasn,
        "likelihood": rep.likelihood,
        "undefined_aasn_rows": rep.undefined_aasn_rows,
    }


def _infer_format(path, fmt) -> str:
    if fmt:
        fmt = fmt.lower()
    else:
        fmt = Path(path).suffix.lstrip(".").lower() or "json"
    if fmt not in ("csv", "json"):
        raise ValueError(f"unsupported output format {fmt!r}")
    return fmt


def write_results(obj, fmt: str | None, path, *, labels=None, meta: dict | None = None) -> None:
    """Serialize an evaluation, similarity report or ranking.

    ``obj`` may be an :class:`EvaluationResult`, a mapping/list of them, a
    :class:`LayerSimilarityReport` or a :class:`RankedPrediction`. ``fmt`` is
    ``"csv"`` or ``"json"`` (inferred from the suffix when ``None``).
    ``labels`` adds external node labels to ranking output.
    """
    fmt = _infer_format(path, fmt)
    evals = _evaluations(obj)
    if fmt == "json":
        if evals is not None:
            doc = {"kind": "evaluation", "results": [e.to_dict() for e in evals]}
        elif isinstance(obj, RankedPrediction):
            doc = _ranking_doc(obj, labels)
        elif isinstance(obj, LayerSimilarityReport):
            doc = _report_doc(obj)
        else:
            raise TypeError(f"cannot serialize {type(obj).__name__}")
        if meta:
            doc["meta"] = meta
        text = json.dumps(doc, indent=2, allow_nan=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if evals is not None:
            w.writerow(_TRIAL_FIELDS)
            for e in evals:
                for t in e.per_trial:
                    w.writerow([e.method] + [_fmt(getattr(t, f)) for f in _TRIAL_FIELDS[1:]])
        elif isinstance(obj, RankedPrediction):
            head = ["rank", "u", "v", "score"] + (["u_label", "v_label"] if labels is not None else [])
            w.writerow(head)
            for rank, (a, b, s) in enumerate(obj, start=1):
                row = [rank, a, b, repr(s)]
                if labels is not None:
                    row += [labels[a], labels[b]]
                w.writerow(row)
        elif isinstance(obj, LayerSimilarityReport):
            w.writerow(["l1", "l2", "s_cw", "aasn", "likelihood"])
            m = len(obj.layer_names)
            for a in range(m):
                for b in range(m):
                    w.writerow([
                        obj.layer_names[a], obj.layer_names[b],
                        _fmt(obj.s_cw[a][b]), _fmt(obj.aasn[a][b]), _fmt(obj.likelihood[a][b]),
                    ])
        else:
            raise TypeError(f"cannot serialize {type(obj).__name__}")
        text = buf.getvalue()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_ranking(path) -> RankedPrediction:
    """Inverse of :func:`write_results` for rankings."""
    fmt = _infer_format(path, None)
    if fmt == "json":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        rows = doc["pairs"]
        u = [r["u"] for r in rows]
        v = [r["v"] for r in rows]
        s = [r["score"] for r in rows]
        warnings = tuple(doc.get("warnings", ()))
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
        u = [int(r["u"]) for r in rows]
        v = [int(r["v"]) for r in rows]
        s = [float(r["score"]) for r in rows]
        warnings = ()
    return RankedPrediction(
        np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64), np.asarray(s, dtype=float), warnings
    )


def read_evaluation(path) -> dict[str, EvaluationResult]:
    """Inverse of :func:`write_results` for evaluation results, keyed by method.

    CSV carries per-trial rows only, so split/config provenance is empty.
    """
    fmt = _infer_format(path, None)
    if fmt == "json":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return {d["method"]: EvaluationResult.from_dict(d) for d in doc["results"]}
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    grouped: dict[str, list[TrialResult]] = {}
    for r in rows:
        grouped.setdefault(r["method"], []).append(
            TrialResult(
                trial=int(r["trial"]), seed=int(r["seed"]), auc=float(r["auc"]),
                precision=float(r["precision"]), alpha=int(r["alpha"]), beta=int(r["beta"]),
                gamma=int(r["gamma"]), n_train=int(r["n_train"]), n_test=int(r["n_test"]),
            )
        )
    return {m: EvaluationResult(m, tuple(ts)) for m, ts in grouped.items()}
