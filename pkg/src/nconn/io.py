"""JSON interchange.

A matroid document has exactly one defining key::

    {"ground": [...], "bases": [[...], ...]}
    {"ground": [...], "circuits": [[...], ...]}
    {"graph": [["u", "v", "label"], ...]}

:func:`to_document` always emits the bases form with bases in lexicographic
order of their ground-set positions, so ``dumps(to_document(from_document(d)))``
reproduces any document that was itself produced by :func:`dumps`.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .core import Matroid, bits, from_bases, from_circuits, from_graph, GroundSet
from . import kernels
from .errors import AxiomViolation, MatroidError

DEFINING_KEYS = ("bases", "circuits", "graph")


class DocumentError(MatroidError, ValueError):
    pass


def to_document(M: Matroid) -> dict[str, Any]:
    bases = sorted(M.basis_masks(), key=lambda b: tuple(bits(b)))
    return {"ground": list(M.labels), "bases": [list(M.ordered(b)) for b in bases]}


def from_document(doc: Mapping[str, Any], validate: bool = True) -> Matroid:
    if not isinstance(doc, Mapping):
        raise DocumentError("a matroid document must be a JSON object")
    keys = [k for k in DEFINING_KEYS if k in doc]
    if len(keys) != 1:
        raise DocumentError(f"expected exactly one of {DEFINING_KEYS}, found {keys}")
    unknown = set(doc) - {"ground", *DEFINING_KEYS}
    if unknown:
        raise DocumentError(f"unknown keys {sorted(unknown)}")
    key = keys[0]
    if key == "graph":
        if "ground" in doc:
            raise DocumentError("graph documents take their ground set from the edge labels")
        return from_graph([tuple(e) for e in doc["graph"]])
    if "ground" not in doc:
        raise DocumentError(f"a {key!r} document needs a 'ground' list")
    ground = [str(x) for x in doc["ground"]]
    family = [[str(x) for x in s] for s in doc[key]]
    if key == "bases":
        if validate:
            return from_bases(ground, family)
        g = GroundSet(tuple(ground))
        masks = [g.mask(b) for b in family]
        if not masks:
            raise AxiomViolation("basis family is empty")
        return Matroid(g, kernels.rank_from_bases(len(g), masks))
    return from_circuits(ground, family)


def dumps(obj: Any) -> str:
    return json.dumps(obj) + "\n"


def read_document(path: str | Path) -> Matroid:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None
    return from_document(doc)


def load_matroid(source: str) -> Matroid:
    """A file path (``*.json`` or an existing file) or a catalog expression."""
    from .catalog import named

    p = Path(source)
    if source.endswith(".json") or p.is_file():
        if not p.is_file():
            raise DocumentError(f"no such file: {source}")
        return read_document(p)
    return named(source)
