"""Text formats.

Schema files are line oriented; ``#`` starts a comment::

    monad Dist                      (optional, Kleisli instances only)
    vertex Employee
    arrow manager : Employee -> Employee
    Employee.manager.worksIn = Employee.worksIn

Morphism files map every source vertex and arrow::

    vertex T1 -> T
    arrow T1_SSN -> T.SSN

An instance is a directory holding ``<vertex>.csv`` for every vertex, with
header ``id,<outgoing arrows in declaration order>``.
"""

from __future__ import annotations

import csv
import io
import os
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .errors import BadCell, DuplicateName, ParseError, UnknownArrowInPath
from .graph import Graph, Path
from .instance import Instance
from .kleisli import KleisliInstance, Monad, make_monad
from .schema import Schema, SchemaMorphism

NAME = r"[^\s.,:=#>]+"
_VERTEX = re.compile(rf"vertex\s+({NAME})\s*$")
_ARROW = re.compile(rf"arrow\s+({NAME})\s*:\s*({NAME})\s*->\s*({NAME})\s*$")
_MONAD = re.compile(r"monad\s+(\S+(?:\s+\S+)*)\s*$")
_MAP_VERTEX = re.compile(rf"vertex\s+({NAME})\s*->\s*({NAME})\s*$")
_MAP_ARROW = re.compile(rf"arrow\s+({NAME})\s*->\s*(\S+)\s*$")


@dataclass
class SchemaDocument:
    schema: Schema
    monad: Optional[Monad] = None


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, raw, line


def _col(raw: str, token: str) -> int:
    return raw.find(token) + 1 if token in raw else 1


def parse_path_literal(literal: str, vertices, ends: Dict[str, Tuple[str, str]],
                       line: Optional[int] = None, raw: str = "") -> Path:
    start, dot, rest = literal.partition(".")
    if not dot:
        raise ParseError(f"path {literal!r} must start with a vertex followed by '.'", line, _col(raw, literal))
    if start not in vertices:
        raise ParseError(f"unknown vertex {start!r} in path {literal!r}", line, _col(raw, literal))
    arrows = rest.split(".") if rest else []
    v = start
    for a in arrows:
        if a not in ends:
            raise UnknownArrowInPath(f"unknown arrow {a!r} in path {literal!r}", line, _col(raw, literal))
        if ends[a][0] != v:
            raise ParseError(f"arrow {a!r} does not start at {v!r} in path {literal!r}",
                             line, _col(raw, literal))
        v = ends[a][1]
    return Path(start, tuple(arrows), v)


def parse_schema_document(text: str) -> SchemaDocument:
    vertices: List[str] = []
    ends: Dict[str, Tuple[str, str]] = {}
    peds: List[Tuple[Path, Path]] = []
    monad = None
    for n, raw, line in _lines(text):
        if line.startswith("monad ") or line == "monad":
            m = _MONAD.match(line)
            if not m or monad is not None:
                raise ParseError("bad or repeated monad header", n, 1)
            words = m.group(1).split()
            try:
                monad = make_monad(words[0], words[1:])
            except ValueError as e:
                raise ParseError(str(e), n, 1) from None
            continue
        if line.startswith("vertex"):
            m = _VERTEX.match(line)
            if not m:
                raise ParseError("expected 'vertex NAME'", n, 1)
            if m.group(1) in vertices:
                raise DuplicateName(f"vertex {m.group(1)!r} declared twice", n, _col(raw, m.group(1)))
            vertices.append(m.group(1))
            continue
        if line.startswith("arrow"):
            m = _ARROW.match(line)
            if not m:
                raise ParseError("expected 'arrow NAME : SRC -> TGT'", n, 1)
            a, s, t = m.groups()
            if a in ends:
                raise DuplicateName(f"arrow {a!r} declared twice", n, _col(raw, a))
            for v in (s, t):
                if v not in vertices:
                    raise ParseError(f"arrow {a!r} uses undeclared vertex {v!r}", n, _col(raw, v))
            ends[a] = (s, t)
            continue
        if "=" in line:
            left, _, right = line.partition("=")
            if "=" in right:
                raise ParseError("a PED has exactly one '='", n, _col(raw, "="))
            p = parse_path_literal(left.strip(), vertices, ends, n, raw)
            q = parse_path_literal(right.strip(), vertices, ends, n, raw)
            if p.start != q.start or p.end != q.end:
                raise ParseError(f"PED sides {p} and {q} have different endpoints", n, 1)
            peds.append((p, q))
            continue
        raise ParseError(f"cannot read line {line!r}", n, 1)
    return SchemaDocument(Schema(Graph(vertices, ends), peds), monad)


def parse_schema(text: str) -> Schema:
    return parse_schema_document(text).schema


def print_schema(s: Schema, monad: Optional[Monad] = None) -> str:
    out = []
    if monad is not None:
        out.append(f"monad {monad.header()}")
    out += [f"vertex {v}" for v in s.vertices]
    out += [f"arrow {a} : {src} -> {tgt}" for a, (src, tgt) in s.graph.ends.items()]
    out += [f"{p} = {q}" for p, q in s.peds]
    return "\n".join(out) + "\n"


def load_schema(path: str) -> SchemaDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_schema_document(fh.read())


# ---------------------------------------------------------------------------
# morphisms

def parse_morphism(text: str, source: Schema, target: Schema) -> SchemaMorphism:
    on_v: Dict[str, str] = {}
    on_a: Dict[str, Path] = {}
    tv, te = target.vertices, target.graph.ends
    for n, raw, line in _lines(text):
        m = _MAP_VERTEX.match(line)
        if m:
            c, d = m.groups()
            if c not in source.vertices or d not in tv:
                raise ParseError(f"unknown vertex in {line!r}", n, 1)
            if c in on_v:
                raise DuplicateName(f"vertex {c!r} mapped twice", n, 1)
            on_v[c] = d
            continue
        m = _MAP_ARROW.match(line)
        if m:
            a, lit = m.groups()
            if a not in source.arrows:
                raise ParseError(f"unknown source arrow {a!r}", n, _col(raw, a))
            if a in on_a:
                raise DuplicateName(f"arrow {a!r} mapped twice", n, 1)
            on_a[a] = parse_path_literal(lit, tv, te, n, raw)
            continue
        raise ParseError(f"cannot read line {line!r}", n, 1)
    return SchemaMorphism(source, target, on_v, on_a)


def print_morphism(F: SchemaMorphism) -> str:
    out = [f"vertex {c} -> {d}" for c, d in F.on_vertices.items()]
    out += [f"arrow {a} -> {p}" for a, p in F.on_arrows.items()]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# instances

def _read_tables(directory: str, s: Schema) -> Dict[str, Tuple[List[str], List[List[str]]]]:
    if not os.path.isdir(directory):
        raise ParseError(f"instance directory {directory!r} does not exist")
    tables = {}
    known = {f"{v}.csv" for v in s.vertices}
    for name in sorted(os.listdir(directory)):
        if name.endswith(".csv") and name not in known:
            raise ParseError(f"{name}: no vertex of that name in the schema")
    for v in s.vertices:
        path = os.path.join(directory, f"{v}.csv")
        if not os.path.exists(path):
            raise ParseError(f"missing table file {v}.csv")
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        tables[v] = _check_table(v, rows, s)
    return tables


def _check_table(v: str, rows: List[List[str]], s: Schema):
    expected = ["id"] + s.graph.out_arrows(v)
    if not rows or rows[0] != expected:
        got = ",".join(rows[0]) if rows else "nothing"
        raise ParseError(f"{v}.csv: header must be {','.join(expected)}, got {got}", 1, 1)
    seen = set()
    body = []
    for n, r in enumerate(rows[1:], 2):
        if not r:
            continue
        if len(r) != len(expected):
            raise ParseError(f"{v}.csv: expected {len(expected)} fields, got {len(r)}", n, 1)
        if r[0] in seen:
            raise DuplicateName(f"{v}.csv: row id {r[0]!r} appears twice", n, 1)
        if not r[0]:
            raise ParseError(f"{v}.csv: empty row id", n, 1)
        seen.add(r[0])
        body.append(r)
    return expected[1:], body


def read_instance(directory: str, s: Schema) -> Instance:
    tables = _read_tables(directory, s)
    rows = {}
    for v, (cols, body) in tables.items():
        for r in body:
            for k, cell in enumerate(r[1:]):
                if cell == "":
                    raise ParseError(f"{v}.csv: empty cell in row {r[0]!r}, column {cols[k]!r}")
        rows[v] = body
    return Instance.from_rows(s, rows)


def read_kleisli_instance(directory: str, s: Schema, monad: Monad) -> KleisliInstance:
    tables = _read_tables(directory, s)
    pk = {v: [r[0] for r in body] for v, (_, body) in tables.items()}
    fk: Dict[str, Dict[str, object]] = {a: {} for a in s.arrows}
    for v, (cols, body) in tables.items():
        for r in body:
            for a, cell in zip(cols, r[1:]):
                tgt = s.graph.target(a)
                try:
                    fk[a][r[0]] = monad.parse(cell, set(pk[tgt]))
                except ValueError as e:
                    raise BadCell(r[0], a, cell, str(e)) from None
    return KleisliInstance(s, monad, pk, fk)


def table_csv(header: List[str], rows: List[List[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _tables(inst: Union[Instance, KleisliInstance]):
    g = inst.schema.graph
    for v in g.vertices:
        yield v, ["id"] + g.out_arrows(v), inst.table(v)


def write_instance(inst: Union[Instance, KleisliInstance], directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    for v, header, rows in _tables(inst):
        with open(os.path.join(directory, f"{v}.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(table_csv(header, rows))


def format_instance(inst: Union[Instance, KleisliInstance]) -> str:
    """All tables in one text block, each headed by ``== vertex ==``."""
    parts = [f"== {v} ==\n" + table_csv(header, rows) for v, header, rows in _tables(inst)]
    return "".join(parts)
