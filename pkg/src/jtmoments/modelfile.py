"""JSON model files and result reports.

A model file looks like::

    {
      "variables": [{"name": "u", "cardinality": 2}, ...],
      "p_factors": [{"scope": ["u", "v"], "values": [0.1, 0.4, 0.2, 0.3]}, ...],
      "h_factors": [{"scope": ["w"], "values": [0, 1]}, ...],
      "tree": {"nodes": [["u", "v"], ["v", "w"]], "edges": [[0, 1]]}
    }

``values`` are row-major over ``scope`` as listed, last variable fastest.
``tree`` is optional; a supplied tree must be a valid junction tree.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import ModelError
from .jtree import JunctionTree, validate
from .moments import DEFAULT_CAP, Model, brute_force_mass, mass
from .tables import Table

NORMALIZATION_TOL = 1e-6


def _factor(entry: Any, index: dict, cards, kind: str) -> Table:
    if not isinstance(entry, dict) or "scope" not in entry or "values" not in entry:
        raise ModelError(f"each {kind}-factor needs 'scope' and 'values'")
    names = entry["scope"]
    if len(set(names)) != len(names):
        raise ModelError(f"{kind}-factor scope {names} repeats a variable")
    try:
        ids = [index[n] for n in names]
    except (KeyError, TypeError):
        raise ModelError(f"{kind}-factor scope {names} names an unknown variable") from None
    shape = tuple(cards[i] for i in ids)
    values = entry["values"]
    if not isinstance(values, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in values):
        raise ModelError(f"{kind}-factor values must be a flat list of numbers")
    expected = math.prod(shape)
    if len(values) != expected:
        raise ModelError(f"{kind}-factor on {names} needs {expected} values, got {len(values)}")
    arr = np.asarray(values, dtype=np.float64).reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise ModelError(f"{kind}-factor on {names} has non-finite values")
    if kind == "p" and np.any(arr < 0):
        raise ModelError(f"p-factor on {names} has a negative value")
    order = np.argsort(ids, kind="stable")
    return Table(tuple(ids[k] for k in order), np.transpose(arr, order))


def parse_model(doc: Any, check_tree: bool = True) -> Model:
    """Turn a decoded model document into a :class:`Model`.

    Raises :class:`ModelError` on any structural problem, including an
    explicit tree that fails validation.
    """
    if not isinstance(doc, dict) or "variables" not in doc:
        raise ModelError("model document needs a 'variables' list")
    names, cards = [], []
    for var in doc["variables"]:
        try:
            name, card = var["name"], var["cardinality"]
        except (TypeError, KeyError):
            raise ModelError("each variable needs 'name' and 'cardinality'") from None
        if not isinstance(name, str) or not isinstance(card, int) or isinstance(card, bool) or card < 1:
            raise ModelError(f"bad variable entry {var!r}")
        names.append(name)
        cards.append(card)
    if len(set(names)) != len(names):
        raise ModelError("variable names must be unique")
    index = {n: i for i, n in enumerate(names)}

    p_factors = [_factor(e, index, cards, "p") for e in doc.get("p_factors", [])]
    h_factors = [_factor(e, index, cards, "h") for e in doc.get("h_factors", [])]

    tree = None
    if doc.get("tree") is not None:
        spec = doc["tree"]
        try:
            nodes = [tuple(index[n] for n in node) for node in spec["nodes"]]
            edges = [(int(i), int(j)) for i, j in spec.get("edges", [])]
        except (KeyError, TypeError, ValueError):
            raise ModelError("tree needs 'nodes' (lists of variable names) and 'edges' (index pairs)") from None
        tree = JunctionTree(tuple(nodes), tuple(edges))
        if check_tree:
            report = validate(tree)
            if not report:
                reason = report.reason
                if report.variable is not None:
                    reason = reason.replace(f"variable {report.variable}",
                                            f"variable {names[report.variable]!r}")
                raise ModelError(reason)
    model = Model(tuple(cards), p_factors, h_factors, tree, tuple(names))
    model.junction_tree  # surfaces coverage errors now
    return model


def load_model(path: Union[str, Path], check_normalized: bool = True) -> Model:
    """Read a model file; by default also require total p-mass 1 (within 1e-6)."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON ({exc})") from None
    model = parse_model(doc)
    if check_normalized:
        z = brute_force_mass(model) if model.n_configurations <= DEFAULT_CAP else mass(model)
        if abs(z - 1.0) > NORMALIZATION_TOL:
            raise ModelError(f"p-factors sum to {z!r} over all configurations, expected 1")
    return model


def model_to_doc(model: Model) -> dict:
    names = model.names
    doc = {
        "variables": [{"name": n, "cardinality": c} for n, c in zip(names, model.cards)],
        "p_factors": [{"scope": [names[v] for v in t.scope], "values": t.flat.tolist()}
                      for t in model.p_factors],
        "h_factors": [{"scope": [names[v] for v in t.scope], "values": t.flat.tolist()}
                      for t in model.h_factors],
    }
    if model.tree is not None:
        doc["tree"] = {"nodes": [[names[v] for v in n] for n in model.tree.nodes],
                       "edges": [list(e) for e in model.tree.edges]}
    return doc


def format_number(x: float) -> str:
    """17 significant digits, always readable back as the same float."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x}")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".e"):
        s += ".0"
    return s


def dumps_report(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats written by :func:`format_number`; key order kept."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_number(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps_report(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps_report(v) for v in obj) + "]"
        items = [pad + dumps_report(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
