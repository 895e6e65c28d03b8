"""Instances on a schema: one table per vertex, one foreign-key column per
arrow.

An :class:`Instance` is just data; :func:`validate_instance` decides whether
it is a functor.  Every other operation here assumes a valid instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import (BadPath, ColimitPEDFailure, ForeignKeyViolation, MissingCell,
                     NaturalityViolation, PEDViolation, SchemaMismatch, UnknownVertex,
                     ValidationError, YonedaFailure)
from .finset import (FinDiagram, FinFunction, FinSet, colimit_of_diagram,
                     limit_of_diagram)
from .graph import Graph, GraphHom, Path
from .schema import DEFAULT_BOUND, PathCategory, Schema


class Instance:
    """Tables ``pk[v]`` (row ids in order) and columns ``fk[a]`` (row → row)."""

    def __init__(self, schema: Schema, pk: Mapping[str, Iterable[str]],
                 fk: Mapping[str, Mapping[str, str]]):
        self.schema = schema
        for v in pk:
            if v not in schema.vertices:
                raise UnknownVertex(f"table for unknown vertex {v!r}")
        for a in fk:
            if a not in schema.arrows:
                raise ValidationError(f"column for unknown arrow {a!r}")
        self.pk: Dict[str, FinSet] = {v: FinSet(pk.get(v, ())) for v in schema.vertices}
        self.fk: Dict[str, Dict[str, str]] = {a: dict(fk.get(a, {})) for a in schema.arrows}

    @classmethod
    def from_rows(cls, schema: Schema, rows: Mapping[str, Sequence[Sequence[str]]]) -> "Instance":
        """Build from ``{vertex: [[id, cell, ...], ...]}`` with cells in the
        vertex's outgoing-arrow declaration order."""
        pk, fk = {}, {a: {} for a in schema.arrows}
        for v, table in rows.items():
            if v not in schema.vertices:
                raise UnknownVertex(f"table for unknown vertex {v!r}")
            cols = schema.graph.out_arrows(v)
            pk[v] = [r[0] for r in table]
            for r in table:
                if len(r) != len(cols) + 1:
                    raise ValidationError(f"row {r[0]!r} of {v!r} has {len(r) - 1} cells, "
                                          f"expected {len(cols)}")
                for a, cell in zip(cols, r[1:]):
                    fk[a][r[0]] = cell
        return cls(schema, pk, fk)

    @classmethod
    def empty(cls, schema: Schema) -> "Instance":
        return cls(schema, {}, {})

    def rows(self, v: str) -> FinSet:
        return self.pk[v]

    def table(self, v: str) -> List[List[str]]:
        cols = self.schema.graph.out_arrows(v)
        return [[x] + [self.fk[a][x] for a in cols] for x in self.pk[v]]

    def fk_function(self, a: str) -> FinFunction:
        s, t = self.schema.graph.ends[a]
        return FinFunction(self.pk[s], self.pk[t], self.fk[a])

    def sizes(self) -> Dict[str, int]:
        return {v: len(rows) for v, rows in self.pk.items()}

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.schema == other.schema and self.pk == other.pk
                and all(self.fk[a] == other.fk[a] for a in self.schema.arrows))

    def __repr__(self):
        return f"Instance({ {v: list(r) for v, r in self.pk.items()} })"


def _follow(i: Instance, arrows: Sequence[str], x: str) -> str:
    for a in arrows:
        x = i.fk[a][x]
    return x


def validate_instance(i: Instance) -> bool:
    """Totality, foreign keys, then every declared PED on every row."""
    g = i.schema.graph
    for a, (s, t) in g.ends.items():
        col = i.fk[a]
        for x in i.pk[s]:
            if x not in col:
                raise MissingCell(x, a)
            if col[x] not in i.pk[t]:
                raise ForeignKeyViolation(x, a, col[x])
        stray = [x for x in col if x not in i.pk[s]]
        if stray:
            raise ValidationError(f"column {a!r} has a cell for unknown row {stray[0]!r}")
    for ped in i.schema.peds:
        p, q = ped
        for x in i.pk[p.start]:
            left, right = _follow(i, p.arrows, x), _follow(i, q.arrows, x)
            if left != right:
                raise PEDViolation(ped, x, left, right)
    return True


def eval_path(i: Instance, p: Path) -> FinFunction:
    """The function pk(start) → pk(end) obtained by following p."""
    try:
        q = i.schema.graph.path(p.start, p.arrows)
    except ValidationError as e:
        raise BadPath(str(e)) from None
    return FinFunction(i.pk[q.start], i.pk[q.end], {x: _follow(i, q.arrows, x) for x in i.pk[q.start]})


# ---------------------------------------------------------------------------
# natural transformations

class InstanceMorphism:
    def __init__(self, source: Instance, target: Instance, components: Mapping[str, Mapping[str, str]]):
        if source.schema != target.schema:
            raise SchemaMismatch("instances live on different schemas")
        self.source, self.target = source, target
        try:
            self.components: Dict[str, FinFunction] = {
                v: FinFunction(source.pk[v], target.pk[v],
                               c.as_dict() if isinstance(c, FinFunction) else dict(c))
                for v, c in ((v, components.get(v, {})) for v in source.schema.vertices)}
        except ValueError as e:
            raise ValidationError(f"bad component: {e}") from None

    def __call__(self, v: str, x: str) -> str:
        return self.components[v](x)

    def key(self) -> Tuple[str, ...]:
        return tuple(self.components[v](x) for v in self.source.schema.vertices for x in self.source.pk[v])

    @classmethod
    def identity(cls, i: Instance) -> "InstanceMorphism":
        return cls(i, i, {v: {x: x for x in i.pk[v]} for v in i.schema.vertices})

    def then(self, other: "InstanceMorphism") -> "InstanceMorphism":
        """Vertical composite: self first, then other."""
        return InstanceMorphism(self.source, other.target,
                                {v: self.components[v].then(other.components[v])
                                 for v in self.source.schema.vertices})

    def __eq__(self, other):
        if not isinstance(other, InstanceMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"InstanceMorphism({ {v: f.as_dict() for v, f in self.components.items()} })"


def naturality_table(alpha: InstanceMorphism, a: str) -> List[Tuple[str, str, str]]:
    """Rows ``(x, α(I(a)(x)), J(a)(α(x)))`` of the square for arrow a."""
    s, t = alpha.source.schema.graph.ends[a]
    I, J = alpha.source, alpha.target
    return [(x, alpha(t, I.fk[a][x]), J.fk[a][alpha(s, x)]) for x in I.pk[s]]


def check_nat_trans(alpha: InstanceMorphism) -> bool:
    for a in sorted(alpha.source.schema.arrows):
        for x, left, right in sorted(naturality_table(alpha, a)):
            if left != right:
                raise NaturalityViolation(a, x, left, right)
    return True


def enumerate_nat_trans(i: Instance, j: Instance) -> List[InstanceMorphism]:
    """Every natural transformation i → j.

    Rows of i are assigned one at a time; each assignment forces the images
    of the rows it points to, so most squares are settled by propagation.
    """
    if i.schema != j.schema:
        raise SchemaMismatch("instances live on different schemas")
    g = i.schema.graph
    order = [(v, x) for v in g.vertices for x in i.pk[v]]
    assign: Dict[Tuple[str, str], str] = {}
    out = []

    def place(var, val, trail) -> bool:
        stack = [(var, val)]
        while stack:
            (v, x), y = stack.pop()
            have = assign.get((v, x))
            if have is not None:
                if have != y:
                    return False
                continue
            assign[(v, x)] = y
            trail.append((v, x))
            for a in g.out_arrows(v):
                w = g.ends[a][1]
                stack.append(((w, i.fk[a][x]), j.fk[a][y]))
        return True

    def go(k):
        while k < len(order) and order[k] in assign:
            k += 1
        if k == len(order):
            comps: Dict[str, Dict[str, str]] = {v: {} for v in g.vertices}
            for (v, x), y in assign.items():
                comps[v][x] = y
            out.append(InstanceMorphism(i, j, comps))
            return
        v, x = order[k]
        for y in j.pk[v]:
            trail: List[Tuple[str, str]] = []
            if place((v, x), y, trail):
                go(k + 1)
            for var in trail:
                del assign[var]

    go(0)
    out.sort(key=InstanceMorphism.key)
    return out


# ---------------------------------------------------------------------------
# pointwise limits and colimits

@dataclass
class InstanceDiagram:
    """A finite diagram of instances: shape vertices carry instances, shape
    arrows carry instance morphisms."""

    vertices: Sequence[str]
    arrows: Mapping[str, Tuple[str, str]]
    instances: Mapping[str, Instance]
    morphisms: Mapping[str, InstanceMorphism]

    def at(self, c: str) -> FinDiagram:
        return FinDiagram(self.vertices, self.arrows,
                          {k: self.instances[k].pk[c] for k in self.vertices},
                          {m: self.morphisms[m].components[c] for m in self.arrows})


def _schema_of(d: InstanceDiagram, schema: Optional[Schema]) -> Schema:
    if schema is None:
        if not d.instances:
            raise SchemaMismatch("an empty diagram needs an explicit schema")
        schema = next(iter(d.instances.values())).schema
    for x in d.instances.values():
        if x.schema != schema:
            raise SchemaMismatch("diagram mixes instances on different schemas")
    return schema


def limit_of_instances(d: InstanceDiagram, schema: Optional[Schema] = None
                       ) -> Tuple[Instance, Dict[str, InstanceMorphism]]:
    """Pointwise limit: at each schema vertex, the compatible tuples."""
    schema = _schema_of(d, schema)
    g = schema.graph
    apexes, legs = {}, {}
    for c in g.vertices:
        apexes[c], legs[c] = limit_of_diagram(d.at(c))
    fk = {}
    for a, (s, t) in g.ends.items():
        index = {tuple(legs[t][k](e) for k in d.vertices): e for e in apexes[t]}
        fk[a] = {e: index[tuple(d.instances[k].fk[a][legs[s][k](e)] for k in d.vertices)]
                 for e in apexes[s]}
    L = Instance(schema, {c: apexes[c] for c in g.vertices}, fk)
    projections = {k: InstanceMorphism(L, d.instances[k], {c: legs[c][k] for c in g.vertices})
                   for k in d.vertices}
    return L, projections


def colimit_of_instances(d: InstanceDiagram, schema: Optional[Schema] = None
                         ) -> Tuple[Instance, Dict[str, InstanceMorphism]]:
    """Pointwise colimit, followed by a recheck of the schema's PEDs."""
    schema = _schema_of(d, schema)
    g = schema.graph
    apexes, legs = {}, {}
    for c in g.vertices:
        apexes[c], legs[c] = colimit_of_diagram(d.at(c))
    fk = {}
    for a, (s, t) in g.ends.items():
        col: Dict[str, str] = {}
        for k in d.vertices:
            inst = d.instances[k]
            for x in inst.pk[s]:
                e = legs[s][k](x)
                img = legs[t][k](inst.fk[a][x])
                if col.setdefault(e, img) != img:
                    raise ColimitPEDFailure(f"arrow {a!r} is not well defined on class {e!r}")
        fk[a] = col
    C = Instance(schema, {c: apexes[c] for c in g.vertices}, fk)
    try:
        validate_instance(C)
    except PEDViolation as e:
        raise ColimitPEDFailure(f"pointwise colimit breaks a PED: {e}") from None
    injections = {k: InstanceMorphism(d.instances[k], C, {c: legs[c][k] for c in g.vertices})
                  for k in d.vertices}
    return C, injections


def instance_limit(i: Instance, j: Instance) -> Tuple[Instance, InstanceMorphism, InstanceMorphism]:
    """Binary product; rows are pairs ``(x,y)``."""
    d = InstanceDiagram(("0", "1"), {}, {"0": i, "1": j}, {})
    L, legs = limit_of_instances(d, i.schema)
    return L, legs["0"], legs["1"]


def instance_colimit(i: Instance, j: Instance) -> Tuple[Instance, InstanceMorphism, InstanceMorphism]:
    """Binary coproduct; rows are tagged ``inl:x`` and ``inr:y``."""
    d = InstanceDiagram(("inl", "inr"), {}, {"inl": i, "inr": j}, {})
    C, legs = colimit_of_instances(d, i.schema)
    return C, legs["inl"], legs["inr"]


# ---------------------------------------------------------------------------
# representables and Yoneda

def representable(s: Schema, c: str, bound: int = DEFAULT_BOUND) -> Instance:
    """Y(c): the rows of table d are the path classes c → d, named by their
    shortlex-least path, e.g. ``B.g1.i``."""
    if c not in s.vertices:
        raise UnknownVertex(f"unknown vertex {c!r}")
    cat = PathCategory(s, bound)
    homs = {d: cat.hom(c, d) for d in s.vertices}
    fk = {}
    for a, (src, _) in s.graph.ends.items():
        arrow = s.graph.arrow_path(a)
        fk[a] = {str(p): str(cat.compose(p, arrow)) for p in homs[src]}
    return Instance(s, {d: [str(p) for p in ps] for d, ps in homs.items()}, fk)


def yoneda_check(s: Schema, c: str, i: Instance, bound: int = DEFAULT_BOUND) -> int:
    """Check that α ↦ α_c(c.) is a bijection Hom(Y(c), i) → i(c); returns
    the common size."""
    y = representable(s, c, bound)
    homs = enumerate_nat_trans(y, i)
    ident = f"{c}."
    images = [alpha(c, ident) for alpha in homs]
    if len(set(images)) != len(images):
        raise YonedaFailure(f"two morphisms out of Y({c}) agree on the generic row")
    if set(images) != set(i.pk[c]):
        raise YonedaFailure(f"generic-row images {sorted(images)} differ from rows of {c!r}")
    return len(homs)


# ---------------------------------------------------------------------------
# category of elements and RDF

@dataclass
class ElementsGraph:
    graph: Graph
    projection: GraphHom
    object_of: Dict[str, Tuple[str, str]]
    arrow_of: Dict[str, Tuple[str, str]]


def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


def category_of_elements(i: Instance) -> ElementsGraph:
    """One object ``(vertex,row)`` per row and one arrow ``(row,arrow)`` per
    foreign-key cell."""
    g = i.schema.graph
    objects = {_pair(v, x): (v, x) for v in g.vertices for x in i.pk[v]}
    arrows, arrow_of = {}, {}
    for a, (s, t) in g.ends.items():
        for x in i.pk[s]:
            name = _pair(x, a)
            arrows[name] = (_pair(s, x), _pair(t, i.fk[a][x]))
            arrow_of[name] = (x, a)
    eg = Graph(list(objects), arrows)
    proj = GraphHom(eg, g, {o: v for o, (v, _) in objects.items()},
                    {n: a for n, (_, a) in arrow_of.items()})
    return ElementsGraph(eg, proj, objects, arrow_of)


def instance_from_elements(s: Schema, el: ElementsGraph) -> Instance:
    pk: Dict[str, List[str]] = {v: [] for v in s.vertices}
    for v, x in el.object_of.values():
        pk[v].append(x)
    fk: Dict[str, Dict[str, str]] = {a: {} for a in s.arrows}
    for name, (x, a) in el.arrow_of.items():
        fk[a][x] = el.object_of[el.graph.ends[name][1]][1]
    return Instance(s, pk, fk)


class RdfTriple(NamedTuple):
    subject: str
    predicate: str
    object: str

    def __str__(self):
        return f"{self.subject} {self.predicate} {self.object}"


def export_rdf(i: Instance) -> List[RdfTriple]:
    el = category_of_elements(i)
    return sorted(RdfTriple(x, a, i.fk[a][x]) for x, a in el.arrow_of.values())


def instance_from_rdf(s: Schema, triples: Iterable[RdfTriple],
                      extra_rows: Mapping[str, Iterable[str]] = ()) -> Instance:
    """Rebuild an instance from triples.  Rows that no triple mentions (in
    tables without outgoing arrows) must be supplied in ``extra_rows``."""
    g = s.graph
    pk: Dict[str, List[str]] = {v: [] for v in s.vertices}
    fk: Dict[str, Dict[str, str]] = {a: {} for a in s.arrows}

    def note(v, x):
        if x not in pk[v]:
            pk[v].append(x)

    for t in triples:
        if t.predicate not in g.ends:
            raise ValidationError(f"triple uses unknown arrow {t.predicate!r}")
        src, tgt = g.ends[t.predicate]
        note(src, t.subject)
        note(tgt, t.object)
        fk[t.predicate][t.subject] = t.object
    for v, rows in dict(extra_rows).items():
        for x in rows:
            note(v, x)
    return Instance(s, {v: sorted(r) for v, r in pk.items()}, fk)
