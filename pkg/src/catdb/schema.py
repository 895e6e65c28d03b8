"""Schemas: graphs with path equivalence declarations (PEDs).

Path equivalence is decided by bounded search.  Every PED is used as a
rewrite rule in both orientations, at every position of a path, and only
paths no longer than the bound are visited.  No completion is attempted, so
a positive answer carries a replayable rewrite trace while a negative one
only means "not found within the bound".
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import (BudgetExhausted, EndpointMismatch, NotComposable, PEDNotPreserved,
                     PossiblyInfinite, SchemaMismatch, UnknownVertex)
from .finset import UnionFind
from .graph import Graph, Path, shortlex_key

DEFAULT_BOUND = 16
DEFAULT_BUDGET = 200_000

PED = Tuple[Path, Path]


class Schema:
    """A finite graph together with a list of PEDs ``p = q``.

    PEDs keep the orientation they were declared with; the prover is the only
    place that treats them symmetrically.
    """

    def __init__(self, graph: Graph, peds: Iterable[PED] = ()):
        self.graph = graph
        self.peds: List[PED] = []
        for p, q in peds:
            if p.start != q.start or p.end != q.end:
                raise EndpointMismatch(f"PED {p} = {q} joins paths with different endpoints")
            graph.path(p.start, p.arrows)
            graph.path(q.start, q.arrows)
            self.peds.append((p, q))
        self._rewriter: Optional[_Rewriter] = None
        self._closures: Dict[Tuple[str, int], _Closure] = {}

    @property
    def vertices(self):
        return self.graph.vertices

    @property
    def arrows(self):
        return self.graph.arrows

    def path(self, start: str, arrows: Sequence[str] = ()) -> Path:
        return self.graph.path(start, arrows)

    def parse_path(self, literal: str) -> Path:
        """Parse ``v.a.b``; the trivial path at v is ``v.``."""
        start, _, rest = literal.partition(".")
        arrows = [a for a in rest.split(".")] if rest else []
        if any(not a for a in arrows):
            raise NotComposable(f"malformed path literal {literal!r}")
        return self.graph.path(start, arrows)

    def __eq__(self, other):
        if not isinstance(other, Schema):
            return NotImplemented
        return self.graph == other.graph and self.peds == other.peds

    def __hash__(self):
        return hash((self.graph, tuple(self.peds)))

    def __repr__(self):
        peds = ", ".join(f"{p} = {q}" for p, q in self.peds)
        return f"Schema({self.graph!r}, peds=[{peds}])"

    @property
    def rewriter(self) -> "_Rewriter":
        if self._rewriter is None:
            self._rewriter = _Rewriter(self)
        return self._rewriter

    def closure(self, start: str, bound: int) -> "_Closure":
        key = (start, bound)
        if key not in self._closures:
            self._closures[key] = _Closure(self, start, bound)
        return self._closures[key]


class _Rewriter:
    """Single-step rewrites generated by the PEDs, both orientations."""

    def __init__(self, schema: Schema):
        self.graph = schema.graph
        self.by_lhs: Dict[Tuple[str, ...], List[Tuple[str, ...]]] = {}
        self.inserts: Dict[str, List[Tuple[str, ...]]] = {}
        for p, q in schema.peds:
            self._add(p, q)
            self._add(q, p)
        self.lengths = sorted({len(k) for k in self.by_lhs})

    def _add(self, lhs: Path, rhs: Path):
        if lhs.arrows == rhs.arrows:
            return
        if lhs.arrows:
            bucket = self.by_lhs.setdefault(lhs.arrows, [])
        else:
            bucket = self.inserts.setdefault(lhs.start, [])
        if rhs.arrows not in bucket:
            bucket.append(rhs.arrows)

    def neighbors(self, start: str, arrows: Tuple[str, ...], bound: int) -> Iterator[Tuple[str, ...]]:
        n = len(arrows)
        by_lhs = self.by_lhs
        for i in range(n):
            for L in self.lengths:
                if i + L > n:
                    break
                for rhs in by_lhs.get(arrows[i:i + L], ()):
                    if n - L + len(rhs) <= bound:
                        yield arrows[:i] + rhs + arrows[i + L:]
        if self.inserts:
            ends = self.graph.ends
            for i in range(n + 1):
                v = start if i == 0 else ends[arrows[i - 1]][1]
                for rhs in self.inserts.get(v, ()):
                    if n + len(rhs) <= bound:
                        yield arrows[:i] + rhs + arrows[i:]


# ---------------------------------------------------------------------------
# path equality

class Verdict(str, enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL_WITHIN_BOUND = "NotEqualWithinBound"
    EXHAUSTED_BUDGET = "ExhaustedBudget"


@dataclass
class EqResult:
    verdict: Verdict
    trace: Tuple[Path, ...] = ()
    explored: int = 0
    bound: int = DEFAULT_BOUND

    @property
    def equal(self) -> bool:
        return self.verdict is Verdict.EQUAL

    def describe(self) -> str:
        if self.verdict is Verdict.EQUAL:
            return f"Equal ({len(self.trace) - 1} rewrite steps)"
        if self.verdict is Verdict.NOT_EQUAL_WITHIN_BOUND:
            return (f"NotEqualWithinBound: no derivation through paths of length <= {self.bound}; "
                    "this is not a proof of inequality")
        return f"ExhaustedBudget after exploring {self.explored} paths"


def paths_equal(s: Schema, p: Path, q: Path, bound: int = DEFAULT_BOUND,
                budget: int = DEFAULT_BUDGET) -> EqResult:
    """Search for a rewrite derivation p ⇝ q among paths of length ≤ bound.

    Breadth-first from both ends at once, always growing the smaller
    frontier.  If either side's reachable set is exhausted the paths are
    reported NotEqualWithinBound.
    """
    if p.start != q.start or p.end != q.end:
        raise EndpointMismatch(f"{p} and {q} do not share endpoints")
    bound = max(bound, len(p), len(q))
    if p.arrows == q.arrows:
        return EqResult(Verdict.EQUAL, (p,), 1, bound)
    rw = s.rewriter
    start = p.start
    seen = [{p.arrows: None}, {q.arrows: None}]
    frontier = [[p.arrows], [q.arrows]]
    explored = 2
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = seen[side], seen[1 - side]
        nxt = []
        for node in frontier[side]:
            for nb in rw.neighbors(start, node, bound):
                if nb in mine:
                    continue
                mine[nb] = node
                explored += 1
                if nb in other:
                    trace = _join_trace(seen, nb, side)
                    paths = tuple(Path(start, t, p.end) for t in trace)
                    return EqResult(Verdict.EQUAL, paths, explored, bound)
                if explored > budget:
                    return EqResult(Verdict.EXHAUSTED_BUDGET, (), explored, bound)
                nxt.append(nb)
        frontier[side] = nxt
    return EqResult(Verdict.NOT_EQUAL_WITHIN_BOUND, (), explored, bound)


def _join_trace(seen, meet, side):
    def walk(parents, node):
        out = []
        while node is not None:
            out.append(node)
            node = parents[node]
        return out

    from_p = walk(seen[0], meet)[::-1]
    to_q = walk(seen[1], meet)
    return from_p + to_q[1:]


def replay_trace(s: Schema, trace: Sequence[Path]) -> bool:
    """Check that each step of a trace is one PED rewrite."""
    if not trace:
        return False
    rw = s.rewriter
    for a, b in zip(trace, trace[1:]):
        if (a.start, a.end) != (b.start, b.end):
            return False
        limit = max(len(a), len(b))
        if b.arrows not in set(rw.neighbors(a.start, a.arrows, limit)):
            return False
    return True


# ---------------------------------------------------------------------------
# hom-sets by bounded closure

class _Closure:
    """Union-find over every path out of one vertex up to the bound."""

    def __init__(self, schema: Schema, start: str, bound: int, budget: int = DEFAULT_BUDGET):
        g = schema.graph
        if start not in g.vertices:
            raise UnknownVertex(f"unknown vertex {start!r}")
        self.start, self.bound = start, bound
        paths = _bounded_paths(g, start, bound, budget)
        uf = UnionFind(p.arrows for p in paths)
        rw = schema.rewriter
        for p in paths:
            for nb in rw.neighbors(start, p.arrows, bound):
                uf.union(p.arrows, nb)
        # first member in shortlex order is the class representative
        rep: Dict[Tuple[str, ...], Path] = {}
        self.rep_of: Dict[Tuple[str, ...], Path] = {}
        self.members: Dict[Tuple[str, ...], List[Path]] = {}
        for p in paths:
            root = uf.find(p.arrows)
            if root not in rep:
                rep[root] = p
                self.members[p.arrows] = []
            r = rep[root]
            self.rep_of[p.arrows] = r
            self.members[r.arrows].append(p)
        self.reps_by_end: Dict[str, List[Path]] = {}
        for r in rep.values():
            self.reps_by_end.setdefault(r.end, []).append(r)

    def stable(self, end: str) -> bool:
        return all(len(r) < self.bound - 1 for r in self.reps_by_end.get(end, ()))


def _bounded_paths(g: Graph, start: str, bound: int, budget: int) -> List[Path]:
    level = [Path(start, (), start)]
    out = list(level)
    for _ in range(bound):
        nxt = []
        for p in level:
            for a in sorted(g.out_arrows(p.end)):
                nxt.append(Path(start, p.arrows + (a,), g.ends[a][1]))
        nxt.sort(key=shortlex_key)
        out.extend(nxt)
        if len(out) > budget:
            raise BudgetExhausted(f"more than {budget} paths out of {start!r} within length {bound}")
        level = nxt
        if not level:
            break
    return out


@dataclass
class PathClass:
    rep: Path
    members: List[Path] = field(default_factory=list)

    def __str__(self):
        return str(self.rep)


@dataclass
class HomSet:
    source: str
    target: str
    classes: List[PathClass]
    stable: bool
    bound: int

    @property
    def verdict(self) -> str:
        return "Stable" if self.stable else "PossiblyInfinite"

    def __len__(self):
        return len(self.classes)

    @property
    def reps(self) -> List[Path]:
        return [c.rep for c in self.classes]


def hom_set(s: Schema, c: str, d: str, bound: int = DEFAULT_BOUND) -> HomSet:
    """≃-classes of paths c → d of length ≤ bound, named by their shortlex
    least member.  ``stable`` is a heuristic: no class first appears at the
    top two lengths."""
    if d not in s.vertices:
        raise UnknownVertex(f"unknown vertex {d!r}")
    cl = s.closure(c, bound)
    reps = sorted(cl.reps_by_end.get(d, []), key=shortlex_key)
    classes = [PathClass(r, cl.members[r.arrows]) for r in reps]
    return HomSet(c, d, classes, cl.stable(d), bound)


class PathCategory:
    """The finite category presented by a schema, as far as the bound sees.

    Hom-sets are served from bounded closures; asking for one that is not
    stable raises PossiblyInfinite.
    """

    def __init__(self, schema: Schema, bound: int = DEFAULT_BOUND):
        self.schema, self.bound = schema, bound

    def hom(self, c: str, d: str) -> List[Path]:
        h = hom_set(self.schema, c, d, self.bound)
        if not h.stable:
            raise PossiblyInfinite(d, f"hom({c}, {d}) within bound {self.bound}")
        return h.reps

    def normalize(self, p: Path) -> Path:
        """Representative of the class of p."""
        cl = self.schema.closure(p.start, self.bound)
        if p.arrows in cl.rep_of:
            return cl.rep_of[p.arrows]
        # fold arrow by arrow so arbitrarily long paths can be reduced
        r = cl.rep_of[()]
        for a in p.arrows:
            nxt = r.arrows + (a,)
            if nxt not in cl.rep_of:
                raise PossiblyInfinite(p.start, f"cannot reduce {p} within bound {self.bound}")
            r = cl.rep_of[nxt]
        return r

    def compose(self, p: Path, q: Path) -> Path:
        return self.normalize(p.then(q))

    def equal(self, p: Path, q: Path) -> bool:
        return self.normalize(p) == self.normalize(q)


# ---------------------------------------------------------------------------
# schema morphisms

class SchemaMorphism:
    """Vertices to vertices and arrows to paths in the target."""

    def __init__(self, source: Schema, target: Schema, on_vertices: Mapping[str, str],
                 on_arrows: Mapping[str, Path]):
        self.source, self.target = source, target
        self.on_vertices = dict(on_vertices)
        self.on_arrows = dict(on_arrows)
        for v in source.vertices:
            if v not in self.on_vertices:
                raise EndpointMismatch(f"vertex {v!r} is not mapped")
            if self.on_vertices[v] not in target.vertices:
                raise UnknownVertex(f"vertex {v!r} maps outside the target")
        for a, (s, t) in source.graph.ends.items():
            if a not in self.on_arrows:
                raise EndpointMismatch(f"arrow {a!r} is not mapped")
            img = self.on_arrows[a]
            target.graph.path(img.start, img.arrows)
            if img.start != self.on_vertices[s] or img.end != self.on_vertices[t]:
                raise EndpointMismatch(
                    f"arrow {a!r} maps to {img}, which does not run "
                    f"{self.on_vertices[s]} -> {self.on_vertices[t]}")

    @classmethod
    def identity(cls, s: Schema) -> "SchemaMorphism":
        return cls(s, s, {v: v for v in s.vertices}, {a: s.graph.arrow_path(a) for a in s.arrows})

    def vertex(self, v: str) -> str:
        return self.on_vertices[v]

    def apply(self, p: Path) -> Path:
        """Paths_F: substitute each arrow's image and flatten."""
        out = Path(self.on_vertices[p.start], (), self.on_vertices[p.start])
        for a in p.arrows:
            out = out.then(self.on_arrows[a])
        return out

    def __repr__(self):
        arrows = {a: str(p) for a, p in self.on_arrows.items()}
        return f"SchemaMorphism(vertices={self.on_vertices}, arrows={arrows})"


def check_schema_morphism(F: SchemaMorphism, bound: int = DEFAULT_BOUND,
                          budget: int = DEFAULT_BUDGET) -> bool:
    """Raise unless every source PED translates to an Equal pair in the
    target.  Endpoint compatibility is enforced at construction."""
    for ped in F.source.peds:
        p, q = ped
        res = paths_equal(F.target, F.apply(p), F.apply(q), bound, budget)
        if res.verdict is Verdict.EXHAUSTED_BUDGET:
            raise BudgetExhausted(f"budget exhausted while checking PED {p} = {q}")
        if not res.equal:
            raise PEDNotPreserved(ped)
    return True


def compose_schema_morphisms(F: SchemaMorphism, G: SchemaMorphism) -> SchemaMorphism:
    """G∘F: arrows go to the flattened substitution G(F(a))."""
    if F.target != G.source:
        raise SchemaMismatch("codomain of the first morphism is not the domain of the second")
    return SchemaMorphism(F.source, G.target,
                          {v: G.on_vertices[w] for v, w in F.on_vertices.items()},
                          {a: G.apply(p) for a, p in F.on_arrows.items()})


def morphisms_equal(F: SchemaMorphism, G: SchemaMorphism, bound: int = DEFAULT_BOUND) -> bool:
    """Equal on vertices, and arrow images path-equivalent in the target."""
    if F.source != G.source or F.target != G.target:
        return False
    if F.on_vertices != G.on_vertices:
        return False
    return all(paths_equal(F.target, F.on_arrows[a], G.on_arrows[a], bound).equal
               for a in F.source.arrows)


def enumerate_schema_morphisms(S: Schema, T: Schema, bound: int = DEFAULT_BOUND) -> List[SchemaMorphism]:
    """All morphisms S → T up to path equivalence in T.  Needs every hom-set
    of T that an arrow could land in to be stable."""
    cat = PathCategory(T, bound)
    verts = list(S.vertices)
    out = []
    for images in itertools.product(T.vertices.elements, repeat=len(verts)):
        vmap = dict(zip(verts, images))
        arrows = list(S.arrows)
        choices = [cat.hom(vmap[S.graph.source(a)], vmap[S.graph.target(a)]) for a in arrows]
        for paths in itertools.product(*choices):
            F = SchemaMorphism(S, T, vmap, dict(zip(arrows, paths)))
            try:
                check_schema_morphism(F, bound)
            except PEDNotPreserved:
                continue
            out.append(F)
    return out


# ---------------------------------------------------------------------------
# constructions

def cone(s: Schema, side: str, point: Optional[str] = None) -> Schema:
    """Adjoin a cone point with one arrow per vertex and the triangle PEDs.

    Left cones add ``point -> b`` named ``s_b`` and ``s_b.f = s_b'`` for each
    arrow ``f: b -> b'``; right cones add ``b -> point`` named ``t_b`` with
    ``f.t_b' = t_b``.
    """
    g = s.graph
    if side == "left":
        point = point or "-inf"
        arrows = {f"s_{b}": (point, b) for b in g.vertices}
    elif side == "right":
        point = point or "+inf"
        arrows = {f"t_{b}": (b, point) for b in g.vertices}
    else:
        raise ValueError("side must be 'left' or 'right'")
    if point in g.vertices:
        raise ValueError(f"cone point {point!r} already names a vertex")
    all_arrows = dict(g.ends)
    all_arrows.update(arrows)
    ng = Graph([point] + list(g.vertices) if side == "left" else list(g.vertices) + [point],
               all_arrows)
    peds = list(s.peds)
    for f, (b, b2) in g.ends.items():
        if side == "left":
            peds.append((ng.path(point, [f"s_{b}", f]), ng.path(point, [f"s_{b2}"])))
        else:
            peds.append((ng.path(b, [f, f"t_{b2}"]), ng.path(b, [f"t_{b}"])))
    return Schema(ng, peds)


def opposite_schema(s: Schema) -> Schema:
    g = s.graph
    og = Graph(g.vertices, {a: (t, src) for a, (src, t) in g.ends.items()})
    return Schema(og, [(p.reversed(), q.reversed()) for p, q in s.peds])


def discrete_schema(n: int) -> Schema:
    return Schema(Graph([str(i) for i in range(1, n + 1)], {}))


def presented_monoid(generators: Sequence[str], relations: Iterable[Tuple[Sequence[str], Sequence[str]]] = (),
                     vertex: str = "m") -> Schema:
    """One-vertex schema whose hom-set is the monoid with the given
    generators and relations."""
    g = Graph([vertex], {x: (vertex, vertex) for x in generators})
    peds = [(Path(vertex, tuple(l), vertex), Path(vertex, tuple(r), vertex)) for l, r in relations]
    return Schema(g, peds)


def free_monoid_schema(generators: Sequence[str], vertex: str = "m") -> Schema:
    return presented_monoid(generators, (), vertex)
