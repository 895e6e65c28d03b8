"""Directed multigraphs, paths and graph homomorphisms.

A graph stores its arrows in declaration order together with their
endpoints.  Infinite path families are handled by explicit length bounds:
enumerations report ``truncated`` when longer paths between the same
endpoints exist.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import NotComposable, UnknownVertex, ValidationError
from .finset import FinFunction, FinSet, coequalizer, equalizer, render_tuple


@dataclass(frozen=True, order=True)
class Path:
    """A head-to-tail sequence of arrows from ``start`` to ``end``.

    Renders as ``start.a.b.c``; the trivial path at ``v`` renders ``v.``.
    """

    start: str
    arrows: Tuple[str, ...]
    end: str

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return self.start + "." + ".".join(self.arrows)

    @property
    def is_identity(self) -> bool:
        return not self.arrows

    def shortlex(self):
        return (len(self.arrows), self.arrows)

    def then(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise NotComposable(f"cannot append {other} to {self}")
        return Path(self.start, self.arrows + other.arrows, other.end)

    def reversed(self) -> "Path":
        return Path(self.end, tuple(reversed(self.arrows)), self.start)


def shortlex_key(p: Path):
    return (len(p.arrows), p.arrows)


class Graph:
    """A finite directed multigraph ``(V, A, src, tgt)``."""

    def __init__(self, vertices: Iterable[str], arrows: Mapping[str, Tuple[str, str]]):
        self.vertices = FinSet(vertices)
        self.ends: Dict[str, Tuple[str, str]] = {}
        for a, (s, t) in arrows.items():
            if s not in self.vertices or t not in self.vertices:
                raise UnknownVertex(f"arrow {a!r} has an endpoint outside the vertex set")
            self.ends[a] = (s, t)
        self.arrows = FinSet(self.ends)
        self._out: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for a, (s, _) in self.ends.items():
            self._out[s].append(a)

    @property
    def src(self) -> FinFunction:
        return FinFunction(self.arrows, self.vertices, {a: s for a, (s, _) in self.ends.items()})

    @property
    def tgt(self) -> FinFunction:
        return FinFunction(self.arrows, self.vertices, {a: t for a, (_, t) in self.ends.items()})

    def source(self, a: str) -> str:
        return self.ends[a][0]

    def target(self, a: str) -> str:
        return self.ends[a][1]

    def out_arrows(self, v: str) -> List[str]:
        return self._out[v]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.ends == other.ends

    def __hash__(self):
        return hash((self.vertices, frozenset(self.ends.items())))

    def __repr__(self):
        return f"Graph(vertices={list(self.vertices)}, arrows={self.ends})"

    # -- paths --------------------------------------------------------------

    def identity(self, v: str) -> Path:
        if v not in self.vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")
        return Path(v, (), v)

    def path(self, start: str, arrows: Sequence[str] = ()) -> Path:
        """Build a path, checking that it is head-to-tail."""
        if start not in self.vertices:
            raise UnknownVertex(f"unknown vertex {start!r}")
        v = start
        for a in arrows:
            if a not in self.ends:
                raise NotComposable(f"unknown arrow {a!r}")
            s, t = self.ends[a]
            if s != v:
                raise NotComposable(f"arrow {a!r} does not start at {v!r}")
            v = t
        return Path(start, tuple(arrows), v)

    def arrow_path(self, a: str) -> Path:
        s, t = self.ends[a]
        return Path(s, (a,), t)

    def paths_from(self, v: str, max_len: int) -> List[Path]:
        """All paths out of v of length ≤ max_len, in shortlex order."""
        if v not in self.vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")
        level = [Path(v, (), v)]
        out = list(level)
        for _ in range(max_len):
            nxt = []
            for p in level:
                for a in sorted(self._out[p.end]):
                    nxt.append(Path(p.start, p.arrows + (a,), self.ends[a][1]))
            nxt.sort(key=shortlex_key)
            out.extend(nxt)
            level = nxt
        return out

    def _reach_by_length(self, v: str, lengths: int) -> List[set]:
        level = {v}
        out = [level]
        for _ in range(lengths):
            level = {self.ends[a][1] for u in level for a in self._out[u]}
            out.append(level)
        return out

    def has_path_longer_than(self, v: str, w: str, n: int) -> bool:
        # a path longer than n exists iff one exists with length in (n, n+|V|]
        reach = self._reach_by_length(v, n + len(self.vertices))
        return any(w in reach[k] for k in range(n + 1, len(reach)))


class PathEnumeration(NamedTuple):
    paths: List[Path]
    truncated: bool


def paths_between(g: Graph, v: str, w: str, max_len: int) -> PathEnumeration:
    """Paths v → w of length ≤ max_len, ordered by length then arrow names."""
    if v not in g.vertices:
        raise UnknownVertex(f"unknown vertex {v!r}")
    if w not in g.vertices:
        raise UnknownVertex(f"unknown vertex {w!r}")
    paths = [p for p in g.paths_from(v, max_len) if p.end == w]
    return PathEnumeration(paths, g.has_path_longer_than(v, w, max_len))


# ---------------------------------------------------------------------------
# homomorphisms

class GraphHom:
    def __init__(self, dom: Graph, cod: Graph, on_vertices: Mapping[str, str],
                 on_arrows: Mapping[str, str], check: bool = True):
        self.dom, self.cod = dom, cod
        self.on_vertices = FinFunction(dom.vertices, cod.vertices, dict(on_vertices))
        self.on_arrows = FinFunction(dom.arrows, cod.arrows, dict(on_arrows))
        if check:
            self.check()

    def check(self):
        for a, (s, t) in self.dom.ends.items():
            s2, t2 = self.cod.ends[self.on_arrows(a)]
            if self.on_vertices(s) != s2 or self.on_vertices(t) != t2:
                raise ValidationError(f"arrow {a!r} breaks the source/target squares")

    def then(self, other: "GraphHom") -> "GraphHom":
        return GraphHom(self.dom, other.cod,
                        self.on_vertices.then(other.on_vertices).as_dict(),
                        self.on_arrows.then(other.on_arrows).as_dict())

    @classmethod
    def identity(cls, g: Graph) -> "GraphHom":
        return cls(g, g, {v: v for v in g.vertices}, {a: a for a in g.arrows})

    def key(self):
        return (tuple(self.on_vertices(v) for v in self.dom.vertices),
                tuple(self.on_arrows(a) for a in self.dom.arrows))

    def __eq__(self, other):
        if not isinstance(other, GraphHom):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and self.on_vertices == other.on_vertices and self.on_arrows == other.on_arrows)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"GraphHom(vertices={self.on_vertices.as_dict()}, arrows={self.on_arrows.as_dict()})"


def enumerate_graph_homs(g: Graph, h: Graph) -> List[GraphHom]:
    """Every homomorphism g → h: backtrack over vertex images, then choose
    arrow images among the arrows with matching endpoints."""
    by_ends: Dict[Tuple[str, str], List[str]] = {}
    for b, ends in h.ends.items():
        by_ends.setdefault(ends, []).append(b)
    verts = list(g.vertices)
    arrows = list(g.arrows)
    # an arrow's candidates are known once both endpoints are placed
    pos = {v: i for i, v in enumerate(verts)}
    ready: Dict[int, List[str]] = {i: [] for i in range(len(verts))}
    for a, (s, t) in g.ends.items():
        ready[max(pos[s], pos[t])].append(a)

    out = []
    assign: Dict[str, str] = {}

    def go(i):
        if i == len(verts):
            choices = [by_ends[(assign[g.ends[a][0]], assign[g.ends[a][1]])] for a in arrows]
            for images in itertools.product(*choices):
                out.append(GraphHom(g, h, dict(assign), dict(zip(arrows, images)), check=False))
            return
        v = verts[i]
        for w in h.vertices:
            assign[v] = w
            if all((assign[g.ends[a][0]], assign[g.ends[a][1]]) in by_ends for a in ready[i]):
                go(i + 1)
            del assign[v]

    go(0)
    return out


# ---------------------------------------------------------------------------
# the Paths construction

class PathsGraph(Graph):
    """Paths(g) materialised up to a length bound; arrows are path renderings."""

    def __init__(self, base: Graph, max_len: int):
        self.base = base
        self.max_len = max_len
        self.path_of: Dict[str, Path] = {}
        for v in base.vertices:
            for p in base.paths_from(v, max_len):
                self.path_of[str(p)] = p
        super().__init__(base.vertices, {n: (p.start, p.end) for n, p in self.path_of.items()})
        self.truncated = any(base.has_path_longer_than(v, w, max_len)
                             for v in base.vertices for w in base.vertices)


def paths_graph(g: Graph, max_len: int) -> Tuple[PathsGraph, GraphHom]:
    """Paths(g) up to ``max_len`` with the unit g → Paths(g)."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    pg = PathsGraph(g, max_len)
    eta = GraphHom(g, pg, {v: v for v in g.vertices},
                   {a: str(g.arrow_path(a)) for a in g.arrows})
    return pg, eta


def concat_mu(paths: Sequence[Path], start: Optional[str] = None) -> Path:
    """Flatten a path of paths into a single path.

    ``start`` is required when ``paths`` is empty (the result is then the
    trivial path there).
    """
    if not paths:
        if start is None:
            raise NotComposable("empty path of paths needs an explicit start vertex")
        return Path(start, (), start)
    if start is not None and paths[0].start != start:
        raise NotComposable("first path does not begin at the given start")
    result = paths[0]
    for p in paths[1:]:
        result = result.then(p)
    return result


def paths_map(f: GraphHom, p: Path) -> Path:
    """Paths(f) applied to a path of f.dom."""
    return Path(f.on_vertices(p.start), tuple(f.on_arrows(a) for a in p.arrows),
                f.on_vertices(p.end))


# ---------------------------------------------------------------------------
# products, coproducts, loops and components

def graph_limit(g: Graph, h: Graph) -> Tuple[Graph, GraphHom, GraphHom]:
    """Product graph with projections; vertices and arrows are pairs."""
    verts = [render_tuple((v, w)) for v in g.vertices for w in h.vertices]
    arrows = {}
    pa, pb = {}, {}
    for a, (s, t) in g.ends.items():
        for b, (s2, t2) in h.ends.items():
            name = render_tuple((a, b))
            arrows[name] = (render_tuple((s, s2)), render_tuple((t, t2)))
            pa[name], pb[name] = a, b
    prod = Graph(verts, arrows)
    pv = {render_tuple((v, w)): (v, w) for v in g.vertices for w in h.vertices}
    p1 = GraphHom(prod, g, {n: vw[0] for n, vw in pv.items()}, pa)
    p2 = GraphHom(prod, h, {n: vw[1] for n, vw in pv.items()}, pb)
    return prod, p1, p2


def graph_colimit(g: Graph, h: Graph) -> Tuple[Graph, GraphHom, GraphHom]:
    """Disjoint union with ``inl:``/``inr:`` tags and the two injections."""
    verts = [f"inl:{v}" for v in g.vertices] + [f"inr:{w}" for w in h.vertices]
    arrows = {f"inl:{a}": (f"inl:{s}", f"inl:{t}") for a, (s, t) in g.ends.items()}
    arrows.update({f"inr:{b}": (f"inr:{s}", f"inr:{t}") for b, (s, t) in h.ends.items()})
    cop = Graph(verts, arrows)
    i1 = GraphHom(g, cop, {v: f"inl:{v}" for v in g.vertices}, {a: f"inl:{a}" for a in g.arrows})
    i2 = GraphHom(h, cop, {v: f"inr:{v}" for v in h.vertices}, {b: f"inr:{b}" for b in h.arrows})
    return cop, i1, i2


def loops_and_components(g: Graph) -> Tuple[FinSet, FinSet]:
    """Loops are the equalizer of src and tgt; components are the
    coequalizer classes of vertices under src(a) ~ tgt(a)."""
    loops, _ = equalizer(g.src, g.tgt)
    comps, _ = coequalizer(g.src, g.tgt)
    return loops, comps


# ---------------------------------------------------------------------------
# small named graphs

def chain(n: int) -> Graph:
    """The linear graph 0 → 1 → ... → n with arrows named 0..n-1."""
    return Graph([str(i) for i in range(n + 1)], {str(i): (str(i), str(i + 1)) for i in range(n)})


def loop() -> Graph:
    """One vertex ``s`` with one arrow ``f``; terminal among graphs."""
    return Graph(["s"], {"f": ("s", "s")})


def discrete(n: int) -> Graph:
    return Graph([str(i) for i in range(1, n + 1)], {})
