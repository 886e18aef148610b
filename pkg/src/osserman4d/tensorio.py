"""Reading and writing curvature tensors as JSON documents.

Document layout::

    {"format_version": 1,
     "description": "optional text",
     "components": [{"i": 1, "j": 2, "k": 2, "l": 1, "value": 3.0}, ...]}

Indices are 1-based.  Missing components are filled in from the
antisymmetry and pair symmetries; floats are written with ``repr`` so
that a save/load round trip is exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import curvature
from .errors import ParseError

FORMAT_VERSION = 1


def to_document(T, description: str | None = None) -> dict:
    doc: dict = {"format_version": FORMAT_VERSION}
    if description is not None:
        doc["description"] = description
    doc["components"] = curvature.nonzero_components(T)
    return doc


def dumps(T, description: str | None = None) -> str:
    return json.dumps(to_document(T, description), indent=1) + "\n"


def from_document(doc) -> np.ndarray:
    if not isinstance(doc, dict):
        raise ParseError("tensor document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"format_version: expected {FORMAT_VERSION}, got {version!r}")
    if "description" in doc and not isinstance(doc["description"], str):
        raise ParseError("description: expected a string")
    records = doc.get("components")
    if not isinstance(records, list):
        raise ParseError("components: expected a list of {i,j,k,l,value} records")
    T = curvature.from_records(records)
    return curvature.validate(T, relative=True)


def loads(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_document(doc)


def save(path, T, description: str | None = None) -> None:
    Path(path).write_text(dumps(T, description))


def load(path) -> np.ndarray:
    return loads(Path(path).read_text())
