"""JSON formats for polytopes and fixtures.

Rationals are written as ``"num/den"`` strings (integers as plain ``"n"``);
decimal numbers are rejected on input so that files stay exact.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError, PolytopeError
from .polytope import Polytope, from_vertices

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def rat(x) -> str:
    return str(Fraction(x))


def _locate(text: str, token) -> tuple:
    """Line and column (1-based) of the first occurrence of ``token``."""
    needle = json.dumps(token) if isinstance(token, str) else str(token)
    pos = text.find(needle)
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_rational(value, text: str = "") -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"not an exact rational: {value!r}", *_locate(text, value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            pass
    raise ParseError(f"not an exact rational: {value!r}", *_locate(text, value))


def polytope_to_dict(P: Polytope) -> dict:
    return {
        "ambient_dim": P.ambient_dim,
        "vertices": [[rat(x) for x in v] for v in P.vertices],
        "facets": [{"normal": list(F.normal), "offset": rat(F.offset)} for F in P.facets],
    }


def polytope_from_dict(obj, text: str = "") -> Polytope:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ParseError("expected an object with a 'vertices' list", 1, 1)
    verts = obj["vertices"]
    if not isinstance(verts, list) or not verts:
        raise ParseError("'vertices' must be a non-empty list", *_locate(text, "vertices"))
    pts = []
    for v in verts:
        if not isinstance(v, list):
            raise ParseError("each vertex must be a list", *_locate(text, "vertices"))
        pts.append(tuple(parse_rational(x, text) for x in v))
    d = obj.get("ambient_dim", len(pts[0]))
    if not isinstance(d, int) or any(len(p) != d for p in pts):
        raise ParseError("vertex length does not match ambient_dim", *_locate(text, "ambient_dim"))
    try:
        return from_vertices(pts)
    except PolytopeError as exc:
        raise ParseError(str(exc), 1, 1) from None


def loads_polytope(text: str) -> Polytope:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return polytope_from_dict(obj, text)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


@dataclass
class Fixture:
    name: str
    polytope: Polytope
    tags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "tags": list(self.tags), **polytope_to_dict(self.polytope)}


def dumps_fixture(F: Fixture) -> str:
    return dumps(F.to_dict())


def loads_fixture(text: str) -> Fixture:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    P = polytope_from_dict(obj, text)
    return Fixture(str(obj.get("name", "")), P, list(obj.get("tags", [])))


def read_fixture(path) -> Fixture:
    with open(path, encoding="utf-8") as fh:
        return loads_fixture(fh.read())


def write_fixture(F: Fixture, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_fixture(F))
