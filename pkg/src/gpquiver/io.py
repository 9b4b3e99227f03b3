"""Text file formats for categories and representations, plus deterministic
JSON reports.

Category files are line-oriented UTF-8 with a `[category]` section (objects,
arrows, relations, field, length_cutoff) or a `[tensor]` section referencing
two category files. Relation paths are written in function-composition order:
`b*a` means "a then b". Rational literals match `-?[0-9]+(/[1-9][0-9]*)?`;
prime-field literals are decimal residues.

Representation files have a `[representation]` section referencing a category
file, one `dim` line per object, and one row-major `mat` line per arrow with
nonzero shape (rows separated by `;`).
"""

from __future__ import annotations

import hashlib
import json
import os
import re

from .category import BoundQuiverCategory, Quiver, Relation, build_category, tensor_category
from .linalg import Matrix, field_from_name
from .modules import Module

REPORT_SCHEMA = "gpquiver-report/1"

RATIONAL_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?$")


class ParseError(Exception):
    def __init__(self, path, line_no, message):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


def field_name(field) -> str:
    from .linalg import PrimeField

    return f"F{field.p}" if isinstance(field, PrimeField) else "Q"


def _lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for i, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield i, line


def _keyvals(path):
    section = None
    for i, line in _lines(path):
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            yield i, section, None, None
            continue
        if "=" not in line:
            raise ParseError(path, i, f"expected 'key = value', got {line!r}")
        key, val = line.split("=", 1)
        yield i, section, key.strip(), val.strip()


def parse_scalar(field, text, path="<string>", line_no=0):
    text = text.strip()
    if not RATIONAL_RE.match(text):
        raise ParseError(path, line_no, f"bad scalar literal {text!r}")
    try:
        return field.parse(text)
    except Exception as exc:
        raise ParseError(path, line_no, f"bad scalar {text!r}: {exc}") from exc


def parse_path_expr(text, path="<string>", line_no=0):
    """`b*a` (function-composition order) -> application-order tuple (a, b)."""
    names = [p.strip() for p in text.split("*")]
    if any(not n for n in names):
        raise ParseError(path, line_no, f"empty arrow name in path {text!r}")
    return tuple(reversed(names))


def format_path(p) -> str:
    return "*".join(reversed(p))


def parse_relation_expr(field, text, path="<string>", line_no=0) -> Relation:
    terms = []
    for chunk in text.split("+"):
        parts = chunk.strip().split()
        if len(parts) != 2:
            raise ParseError(path, line_no,
                             f"relation term must be 'coeff path', got {chunk.strip()!r}")
        coeff = parse_scalar(field, parts[0], path, line_no)
        terms.append((coeff, parse_path_expr(parts[1], path, line_no)))
    return Relation(tuple(terms))


def format_relation(field, rel: Relation) -> str:
    return " + ".join(f"{field.fmt(c)} {format_path(p)}" for c, p in rel.terms)


def parse_category(path, cutoff_override=None, field_override=None) -> BoundQuiverCategory:
    section = None
    pending = {"objects": None, "arrows": [], "relations": [],
               "field": None, "cutoff": None, "tensor": {}}
    raw_relations = []
    for i, sec, key, val in _keyvals(path):
        if key is None:
            section = sec
            if section not in ("category", "tensor"):
                raise ParseError(path, i, f"unknown section [{section}]")
            continue
        if section is None:
            raise ParseError(path, i, "content before any section header")
        if section == "tensor":
            if key not in ("left", "right"):
                raise ParseError(path, i, f"unknown tensor key {key!r}")
            pending["tensor"][key] = (i, val)
            continue
        if key == "name":
            continue
        if key == "objects":
            pending["objects"] = tuple(o.strip() for o in val.split(",") if o.strip())
        elif key == "arrow":
            m = re.match(r"(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", val)
            if not m:
                raise ParseError(path, i, f"arrow must be 'name: src -> tgt', got {val!r}")
            pending["arrows"].append((m.group(1), m.group(2), m.group(3)))
        elif key == "relation":
            raw_relations.append((i, val))
        elif key == "field":
            pending["field"] = (i, val)
        elif key == "length_cutoff":
            try:
                pending["cutoff"] = int(val)
            except ValueError:
                raise ParseError(path, i, f"length_cutoff must be an integer, got {val!r}")
        else:
            raise ParseError(path, i, f"unknown category key {key!r}")

    if pending["tensor"]:
        for side in ("left", "right"):
            if side not in pending["tensor"]:
                raise ParseError(path, 0, f"tensor section missing {side!r}")
        base_dir = os.path.dirname(os.path.abspath(path))
        parts = {}
        for side, (i, ref) in pending["tensor"].items():
            sub = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
            if not os.path.exists(sub):
                raise ParseError(path, i, f"referenced category file {ref!r} not found")
            parts[side] = parse_category(sub, cutoff_override, field_override)
        return tensor_category(parts["left"], parts["right"])

    if pending["objects"] is None:
        raise ParseError(path, 0, "category file has no objects line")
    if pending["field"] is None:
        raise ParseError(path, 0, "category file has no field line")
    fi, fval = pending["field"]
    try:
        field = field_from_name(field_override or fval)
    except Exception as exc:
        raise ParseError(path, fi, f"bad field {fval!r}: {exc}") from exc
    cutoff = cutoff_override or pending["cutoff"] or 16
    relations = tuple(
        parse_relation_expr(field, val, path, i) for i, val in raw_relations
    )
    quiver = Quiver(pending["objects"], tuple(pending["arrows"]))
    return build_category(quiver, relations, field, cutoff)


def serialize_category(cat: BoundQuiverCategory, name=None) -> str:
    if cat.tensor_info is not None:
        raise ValueError("tensor categories are serialized by reference, not inline")
    lines = ["[category]"]
    if name:
        lines.append(f"name = {name}")
    lines.append(f"field = {field_name(cat.field)}")
    lines.append(f"length_cutoff = {cat.length_cutoff}")
    lines.append("objects = " + ", ".join(cat.quiver.vertices))
    for a, s, t in cat.quiver.arrows:
        lines.append(f"arrow = {a}: {s} -> {t}")
    for rel in cat.relations:
        lines.append("relation = " + format_relation(cat.field, rel))
    return "\n".join(lines) + "\n"


def parse_matrix(field, text, rows, cols, path="<string>", line_no=0) -> Matrix:
    row_chunks = [r.strip() for r in text.split(";")] if text.strip() else []
    if rows == 0 or cols == 0:
        if any(row_chunks):
            raise ParseError(path, line_no, "matrix entries given for an empty shape")
        return Matrix.zeros(field, rows, cols)
    if len(row_chunks) != rows:
        raise ParseError(path, line_no,
                         f"expected {rows} matrix rows, got {len(row_chunks)}")
    data = []
    for chunk in row_chunks:
        entries = chunk.split()
        if len(entries) != cols:
            raise ParseError(path, line_no,
                             f"expected {cols} entries per row, got {len(entries)}")
        data.append([parse_scalar(field, e, path, line_no) for e in entries])
    return Matrix(field, data, rows, cols)


def format_matrix(field, m: Matrix) -> str:
    return " ; ".join(" ".join(field.fmt(x) for x in row) for row in m.data)


def parse_module(path, cutoff_override=None, field_override=None,
                 category=None) -> Module:
    section = None
    cat_ref = None
    dims = {}
    raw_mats = []
    for i, sec, key, val in _keyvals(path):
        if key is None:
            section = sec
            if section != "representation":
                raise ParseError(path, i, f"unknown section [{section}]")
            continue
        if section is None:
            raise ParseError(path, i, "content before any section header")
        if key == "name":
            continue
        if key == "category":
            cat_ref = (i, val)
        elif key.startswith("dim "):
            obj = key[4:].strip()
            try:
                dims[obj] = int(val)
            except ValueError:
                raise ParseError(path, i, f"dimension must be an integer, got {val!r}")
        elif key.startswith("mat "):
            raw_mats.append((i, key[4:].strip(), val))
        else:
            raise ParseError(path, i, f"unknown representation key {key!r}")
    if category is None:
        if cat_ref is None:
            raise ParseError(path, 0, "representation file has no category line")
        i, ref = cat_ref
        base_dir = os.path.dirname(os.path.abspath(path))
        sub = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
        if not os.path.exists(sub):
            raise ParseError(path, i, f"referenced category file {ref!r} not found")
        category = parse_category(sub, cutoff_override, field_override)
    for obj in dims:
        if obj not in category.objects:
            raise ParseError(path, 0, f"unknown object {obj!r} in dim line")
    full_dims = {c: dims.get(c, 0) for c in category.objects}
    mats = {}
    for i, a, val in raw_mats:
        if a not in category.arrow_map:
            raise ParseError(path, i, f"unknown arrow {a!r} in mat line")
        s, t = category.arrow_map[a]
        mats[a] = parse_matrix(category.field, val, full_dims[t], full_dims[s], path, i)
    try:
        return Module(category, full_dims, mats)
    except Exception as exc:
        raise ParseError(path, 0, f"representation invalid: {exc}") from exc


def serialize_module(m: Module, category_ref: str, name=None) -> str:
    cat = m.cat
    lines = ["[representation]"]
    if name:
        lines.append(f"name = {name}")
    lines.append(f"category = {category_ref}")
    for c in cat.objects:
        lines.append(f"dim {c} = {m.dims[c]}")
    for a in sorted(cat.arrow_map):
        mat = m.mats[a]
        if mat.rows and mat.cols:
            lines.append(f"mat {a} = {format_matrix(cat.field, mat)}")
    return "\n".join(lines) + "\n"


# -- reports ----------------------------------------------------------------


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def build_report(command, input_paths, payload, cutoff=None, field=None) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "command": command,
        "inputs": {os.path.basename(p): file_digest(p) for p in input_paths},
        "cutoff": cutoff,
        "field": field,
        "result": payload,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
