"""Text formats for elements, ideals, Gram matrices and types.

    element   "x+y*w"          w is the canonical generator (d + sqrt(d))/2
    ideal     "den:[a,b,c]"    the HNF triple (c/den) * (Z*a + Z*(b + w))
              "(g1,g2)"        generator list of element strings
    gram      "8,0;0,8"        rows separated by ';', entries by ','
              JSON form: {"rank": 2, "rows": [[8, 0], [0, 8]]}
    type      "d=-7; I=1:[1,0,1]; alpha=1"

All parsers raise ParseError with a message naming the offending token.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import ParseError
from .k3type import K3Type, make_type
from .quadfield import FieldElement, ImaginaryQuadraticField, OIdeal, make_field

_TERM = re.compile(r"^([+-]?[^+-]*(?:/[0-9]+)?)")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational number {text!r}") from exc


def parse_element(field: ImaginaryQuadraticField, text: str) -> FieldElement:
    """Parse "x+y*w" (either part optional, fractions allowed)."""
    craw = text.strip().replace(" ", "")
    if not craw:
        raise ParseError("empty element")
    x = Fraction(0)
    y = Fraction(0)
    pos = 0
    while pos < len(craw):
        match = _TERM.match(craw[pos:])
        if not match or not match.group(1):
            raise ParseError(f"cannot parse element {text!r}")
        term = match.group(1)
        pos += len(term)
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        if term == "w":
            y += sign
        elif term.endswith("*w"):
            coeff = term[:-2]
            if not coeff:
                raise ParseError(f"missing coefficient before *w in {text!r}")
            y += sign * parse_fraction(coeff)
        elif term.endswith("w"):
            y += sign * parse_fraction(term[:-1])
        else:
            x += sign * parse_fraction(term)
    return FieldElement(field, x, y)


def format_element(element: FieldElement) -> str:
    x, y = element.x, element.y
    if y == 0:
        return str(x)
    wpart = "w" if abs(y) == 1 else f"{abs(y)}*w"
    if x == 0:
        return wpart if y > 0 else f"-{wpart}"
    return f"{x}+{wpart}" if y > 0 else f"{x}-{wpart}"


def parse_ideal(field: ImaginaryQuadraticField, text: str) -> OIdeal:
    raw = text.strip()
    if not raw:
        raise ParseError("empty ideal")
    if raw.startswith("("):
        if not raw.endswith(")"):
            raise ParseError(f"unbalanced generator list {text!r}")
        gens = [g for g in raw[1:-1].split(",") if g.strip()]
        if not gens:
            raise ParseError("ideal needs at least one generator")
        return OIdeal.from_generators([parse_element(field, g) for g in gens])
    if ":" in raw:
        den_text, triple_text = raw.split(":", 1)
        den = _parse_positive_int(den_text, "ideal denominator")
        triple_text = triple_text.strip()
        if not (triple_text.startswith("[") and triple_text.endswith("]")):
            raise ParseError(f"expected [a,b,c] in {text!r}")
        parts = triple_text[1:-1].split(",")
        if len(parts) != 3:
            raise ParseError(f"HNF triple needs three entries: {text!r}")
        try:
            a, b, c = (int(p.strip()) for p in parts)
        except ValueError as exc:
            raise ParseError(f"non-integer HNF entry in {text!r}") from exc
        try:
            return OIdeal.from_hnf(field, a, b, c, den)
        except Exception as exc:
            raise ParseError(f"invalid HNF triple {text!r}: {exc}") from exc
    raise ParseError(f"cannot parse ideal {text!r}")


def _parse_positive_int(text: str, what: str) -> int:
    try:
        value = int(text.strip())
    except ValueError as exc:
        raise ParseError(f"bad {what} {text!r}") from exc
    if value <= 0:
        raise ParseError(f"{what} must be positive, got {value}")
    return value


def format_ideal(ideal: OIdeal) -> str:
    return f"{ideal.den}:[{ideal.a},{ideal.b},{ideal.c}]"


def parse_gram(text: str):
    """Parse "8,0;0,8" or the JSON form with an explicit rank field."""
    raw = text.strip()
    if raw.startswith("{"):
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON Gram matrix: {exc}") from exc
        if "rank" not in data or "rows" not in data:
            raise ParseError("JSON Gram matrix needs 'rank' and 'rows'")
        rows = data["rows"]
        if len(rows) != data["rank"] or any(len(r) != data["rank"] for r in rows):
            raise ParseError("Gram rows do not match the declared rank")
        try:
            return [[int(x) for x in row] for row in rows]
        except (TypeError, ValueError) as exc:
            raise ParseError("Gram entries must be integers") from exc
    rows = []
    for row_text in raw.split(";"):
        entries = row_text.split(",")
        try:
            rows.append([int(e.strip()) for e in entries])
        except ValueError as exc:
            raise ParseError(f"non-integer Gram entry in {row_text!r}") from exc
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ParseError("Gram matrix must be square")
    return rows


def format_gram(gram) -> str:
    return ";".join(",".join(str(x) for x in row) for row in gram)


def parse_type(text: str) -> K3Type:
    """Parse "d=<int>; I=<ideal>; alpha=p/q"."""
    fields: dict[str, str] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"expected key=value in {part!r}")
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    missing = {"d", "I", "alpha"} - set(fields)
    if missing:
        raise ParseError(f"type string is missing {sorted(missing)}")
    try:
        d = int(fields["d"])
    except ValueError as exc:
        raise ParseError(f"bad discriminant {fields['d']!r}") from exc
    field = make_field(d)
    ideal = parse_ideal(field, fields["I"])
    alpha = parse_fraction(fields["alpha"])
    return make_type(field, ideal, alpha)


def format_type(t: K3Type) -> str:
    return f"d={t.field.d}; I={format_ideal(t.ideal)}; alpha={t.alpha}"
