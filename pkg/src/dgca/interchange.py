"""Algebra interchange format: canonical JSON documents.

A document has the fields name, top_degree, basis (list of {id, degree}),
unit, mul (rows [a, b, c, coeff]), diff (rows [from, to, coeff]) and
integrate (rows [id, coeff]); rationals are written "p/q" in lowest terms
("p" for integers).  Saving canonicalizes: basis sorted by degree then
identifier, one row per commutative pair (the flip is implied), unit rows
omitted, rows sorted.  Loading a saved document and saving again is the
identity on bytes.

A document may carry a "hodge" sidecar with per-degree column lists for the
harmonic and complement subspaces, rationals as above.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .core import Dgca, SubspaceFamily, make_dgca
from .linalg import Matrix


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def parse_rational(text, location: str) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(location, f"expected a rational string, got {text!r}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(location, f"malformed rational {text!r} ({exc})") from None
    return value


def format_rational(x: Fraction) -> str:
    return str(x)


def _canonical_order(A: Dgca) -> list[int]:
    """Basis indices sorted by (degree, identifier)."""
    return sorted(range(len(A.basis)),
                  key=lambda i: (A.basis.degrees[i], A.basis.ids[i]))


def dump_dgca(A: Dgca, decomposition=None) -> str:
    order = _canonical_order(A)
    pos = {i: p for p, i in enumerate(order)}
    ids = A.basis.ids
    doc: dict = {
        "name": A.name,
        "top_degree": A.top_degree,
        "basis": [{"id": ids[i], "degree": A.basis.degrees[i]} for i in order],
        "unit": A.unit,
    }
    mul_rows = []
    seen = set()
    for (i, j), terms in A.mul.items():
        if A.unit_index in (i, j):
            continue
        a, b = (i, j) if pos[i] <= pos[j] else (j, i)
        if (a, b) in seen:
            continue
        seen.add((a, b))
        for k, c in sorted(A.mul[(a, b)].items(), key=lambda t: pos[t[0]]):
            mul_rows.append([ids[a], ids[b], ids[k], format_rational(c)])
    mul_rows.sort(key=lambda row: (pos[A.basis.index_of[row[0]]],
                                   pos[A.basis.index_of[row[1]]],
                                   pos[A.basis.index_of[row[2]]]))
    doc["mul"] = mul_rows

    diff_rows = []
    for k, block in A.diff.blocks.items():
        src = A.basis.indices(k)
        tgt = A.basis.indices(k + 1)
        for jpos, i in enumerate(src):
            for tpos, t in enumerate(tgt):
                c = block.rows[tpos][jpos]
                if c != 0:
                    diff_rows.append([ids[i], ids[t], format_rational(c)])
    diff_rows.sort(key=lambda row: (pos[A.basis.index_of[row[0]]],
                                    pos[A.basis.index_of[row[1]]]))
    doc["diff"] = diff_rows
    doc["integrate"] = sorted(
        ([ids[i], format_rational(c)] for i, c in A.integrate_coeffs.items()),
        key=lambda row: pos[A.basis.index_of[row[0]]])

    if decomposition is not None:
        doc["hodge"] = dump_decomposition_sidecar(A, decomposition, order)
    return json.dumps(doc, indent=2) + "\n"


def dump_decomposition_sidecar(A: Dgca, D, order=None) -> dict:
    order = order or _canonical_order(A)
    out = {"harmonic": {}, "complement": {}}
    for label, family in (("harmonic", D.harmonic), ("complement", D.complement)):
        for k in range(A.top_degree + 1):
            block = family.block(k)
            if block.ncols == 0:
                continue
            degree_order = [i for i in order if A.basis.degrees[i] == k]
            reindex = [A.basis.indices(k).index(i) for i in degree_order]
            cols = []
            for j in range(block.ncols):
                col = block.col(j)
                cols.append([format_rational(col[p]) for p in reindex])
            out[label][str(k)] = cols
    return out


def load_decomposition_sidecar(A: Dgca, doc: dict) -> tuple[SubspaceFamily, SubspaceFamily]:
    order = _canonical_order(A)
    families = []
    for label in ("harmonic", "complement"):
        fam = SubspaceFamily(A.basis)
        for key, cols in doc.get(label, {}).items():
            k = int(key)
            degree_order = [i for i in order if A.basis.degrees[i] == k]
            back = {p: A.basis.indices(k).index(i) for p, i in enumerate(degree_order)}
            fixed = []
            for col in cols:
                vec = [Fraction(0)] * A.dim(k)
                for p, c in enumerate(col):
                    vec[back[p]] = parse_rational(c, f"hodge.{label}[{key}]")
                fixed.append(vec)
            fam.set_block(k, Matrix.from_columns(fixed, A.dim(k)))
        families.append(fam)
    return families[0], families[1]


def loads_dgca(text: str) -> Dgca:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    if not isinstance(doc, dict):
        raise ParseError("document", "expected a JSON object")
    for field in ("name", "top_degree", "basis", "unit"):
        if field not in doc:
            raise ParseError(field, "missing required field")
    name = doc["name"]
    top = doc["top_degree"]
    if not isinstance(top, int) or top < 0:
        raise ParseError("top_degree", f"expected a nonnegative integer, got {top!r}")
    elements = []
    for row, entry in enumerate(doc["basis"]):
        if not isinstance(entry, dict) or "id" not in entry or "degree" not in entry:
            raise ParseError(f"basis[{row}]", "expected an object with id and degree")
        if not isinstance(entry["degree"], int) or not 0 <= entry["degree"] <= top:
            raise ParseError(f"basis[{row}]",
                             f"degree {entry['degree']!r} out of range [0, {top}]")
        elements.append((entry["id"], entry["degree"]))
    if len({i for i, _ in elements}) != len(elements):
        raise ParseError("basis", "duplicate identifier")
    known = {i for i, _ in elements}
    degree = dict(elements)
    if doc["unit"] not in known:
        raise ParseError("unit", f"unknown identifier {doc['unit']!r}")

    products: dict[tuple[str, str], dict[str, Fraction]] = {}
    for row, entry in enumerate(doc.get("mul", [])):
        loc = f"mul[{row}]"
        if not (isinstance(entry, list) and len(entry) == 4):
            raise ParseError(loc, "expected [a, b, c, coeff]")
        a, b, c, coeff = entry
        for ident in (a, b, c):
            if ident not in known:
                raise ParseError(loc, f"unknown identifier {ident!r}")
        val = parse_rational(coeff, loc)
        if (b, a) in products and a != b:
            raise ParseError(loc, f"duplicate tuple: flip of ({b}, {a}) already given")
        slot = products.setdefault((a, b), {})
        if c in slot:
            raise ParseError(loc, f"duplicate tuple ({a}, {b}, {c})")
        if degree[c] != degree[a] + degree[b]:
            raise ParseError(loc, "product term of wrong degree")
        slot[c] = val

    differentials: dict[str, dict[str, Fraction]] = {}
    for row, entry in enumerate(doc.get("diff", [])):
        loc = f"diff[{row}]"
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ParseError(loc, "expected [from, to, coeff]")
        a, b, coeff = entry
        for ident in (a, b):
            if ident not in known:
                raise ParseError(loc, f"unknown identifier {ident!r}")
        if degree[b] != degree[a] + 1:
            raise ParseError(loc, "differential term of wrong degree")
        val = parse_rational(coeff, loc)
        slot = differentials.setdefault(a, {})
        if b in slot:
            raise ParseError(loc, f"duplicate tuple ({a}, {b})")
        slot[b] = val

    integrate: dict[str, Fraction] = {}
    for row, entry in enumerate(doc.get("integrate", [])):
        loc = f"integrate[{row}]"
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ParseError(loc, "expected [id, coeff]")
        ident, coeff = entry
        if ident not in known:
            raise ParseError(loc, f"unknown identifier {ident!r}")
        if degree[ident] != top:
            raise ParseError(loc, "integration entry outside the top degree")
        if ident in integrate:
            raise ParseError(loc, f"duplicate tuple ({ident},)")
        integrate[ident] = parse_rational(coeff, loc)

    try:
        return make_dgca(name, elements, doc["unit"], products, differentials,
                         integrate, top_degree=top)
    except ValueError as exc:
        raise ParseError("document", str(exc)) from None


def load_dgca(path: str) -> Dgca:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_dgca(fh.read())


def save_dgca(A: Dgca, path: str, decomposition=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_dgca(A, decomposition))


def canonical_json(obj) -> str:
    """Canonical machine-report encoding; re-emitting a parse is the identity."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
