"""Ring description files: JSON documents naming a quotient ring and some ideals."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .algebra import AlgebraError, PolynomialSyntaxError, is_prime
from .ideals import Ideal, QuotientRing

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["char", "vars"],
    "properties": {
        "char": {"type": "integer", "minimum": 2},
        "vars": {"type": "array", "items": {"type": "string", "pattern": "^[A-Za-z][A-Za-z0-9_]*$"},
                 "minItems": 1, "uniqueItems": True},
        "relations": {"type": "array", "items": {"type": "string"}},
        "assert_cm": {"type": "boolean"},
        "assert_reduced": {"type": "boolean"},
        "ideals": {"type": "object",
                   "additionalProperties": {"type": "array", "items": {"type": "string"}}},
        "test_ideal": {"type": "string"},
        "reduction": {"type": "string"},
    },
}


class RingSpecError(ValueError):
    pass


@dataclass
class RingSpec:
    ring: QuotientRing
    ideals: dict[str, Ideal]
    assert_cm: bool = False
    assert_reduced: bool = False
    test_ideal: str | None = None
    reduction: str | None = None
    source: dict = field(default_factory=dict)

    def ideal(self, name: str) -> Ideal:
        if name in self.ideals:
            return self.ideals[name]
        if name == "m":
            return self.ring.maximal_ideal()
        known = ", ".join(sorted(self.ideals)) or "none"
        raise RingSpecError(f"unknown ideal {name!r} (defined: {known}; 'm' is always available)")


def parse_ringspec(doc: dict, degree_cap: int | None = None) -> RingSpec:
    """Validate and parse everything up front; any problem raises RingSpecError."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise RingSpecError(f"invalid ring file at {where}: {exc.message}") from None
    p = doc["char"]
    if not is_prime(p):
        raise RingSpecError(f"char {p} is not prime")
    kwargs = {} if degree_cap is None else {"degree_cap": degree_cap}
    try:
        ring = QuotientRing(p, doc["vars"], doc.get("relations", []), **kwargs)
        ideals = {name: ring.ideal(gens) for name, gens in doc.get("ideals", {}).items()}
    except (PolynomialSyntaxError, AlgebraError, ValueError) as exc:
        raise RingSpecError(f"ring file: {exc}") from None
    spec = RingSpec(ring, ideals, doc.get("assert_cm", False), doc.get("assert_reduced", False),
                    doc.get("test_ideal"), doc.get("reduction"), doc)
    for key in ("test_ideal", "reduction"):
        name = doc.get(key)
        if name is not None and name not in ideals and name != "m":
            raise RingSpecError(f"{key} names an undefined ideal {name!r}")
    return spec


def load_ringspec(path: str | Path, degree_cap: int | None = None) -> RingSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise RingSpecError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise RingSpecError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_ringspec(doc, degree_cap)
