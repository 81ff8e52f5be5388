"""JSON schemas for CLI payloads, with errors reported as JSON pointers."""

from __future__ import annotations

import jsonschema

from .errors import SchemaError

PAIR = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2}

TORUS = {
    "type": "object",
    "required": ["family", "n", "q"],
    "properties": {
        "family": {"enum": ["Sp", "U", "GL", "sp", "u", "gl"]},
        "n": {"type": "integer", "minimum": 1},
        "q": {"type": "integer", "minimum": 2},
        "split": {"type": "array", "items": PAIR},
        "norm_one": {"type": "array", "items": PAIR},
    },
    "additionalProperties": False,
}

CHARACTER = {
    "type": "object",
    "required": ["values"],
    "properties": {
        "values": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [
                    {"enum": ["Split", "NormOne", "split", "normone"]},
                    {"type": "integer", "minimum": 1},
                    {"type": "integer", "minimum": 0},
                    {"type": "integer"},
                ],
                "minItems": 4,
                "maxItems": 4,
            },
        }
    },
    "additionalProperties": False,
}

PAIR_JOB = {
    "type": "object",
    "required": ["T", "chi", "S", "eta"],
    "properties": {
        "verb": {"type": "string"},
        "T": TORUS,
        "chi": CHARACTER,
        "S": TORUS,
        "eta": CHARACTER,
        "method": {"enum": ["factored", "naive"]},
    },
    "additionalProperties": False,
}

JOB = {
    "type": "object",
    "required": ["verb"],
    "properties": {
        "verb": {
            "enum": ["tori", "mult", "regular", "intertwine", "descent", "distinguish", "oracle-verify", "audit"]
        },
    },
}


def pointer(path) -> str:
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return "/" + "/".join(parts) if parts else ""


def validate(doc, schema: dict) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (-len(e.absolute_path), [str(x) for x in e.absolute_path]))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, pointer(err.absolute_path))
