"""Finite sets, total functions between them, and the finite (co)limits,
quotients and exponentials everything else is assembled from.

Elements are non-empty strings.  Constructions that invent new elements
(tuples, tagged copies, function tables) name them deterministically so
that printed results are stable from run to run:

* tuples render as ``(x,y,z)`` (the delimiter is configurable);
* colimit classes are named by their lexicographically least tagged member,
  where the member ``x`` of the diagram vertex ``v`` is tagged ``v:x``;
* elements of an exponential ``Y^A`` render as ``[a↦y;b↦y']`` with entries
  sorted by the domain element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import MalformedProduct, MiddleMismatch, NotASubset

TRUE = "True"
FALSE = "False"


class FinSet:
    """An ordered collection of distinct string identifiers."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[str] = ()):
        elements = tuple(elements)
        index = {}
        for i, e in enumerate(elements):
            if not isinstance(e, str) or not e:
                raise ValueError(f"set elements must be non-empty strings, got {e!r}")
            if e in index:
                raise ValueError(f"duplicate element {e!r}")
            index[e] = i
        self.elements = elements
        self._index = index

    @classmethod
    def n(cls, k: int) -> "FinSet":
        """The standard set ``{1, ..., k}``."""
        return cls(str(i) for i in range(1, k + 1))

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __getitem__(self, i):
        return self.elements[i]

    def index(self, x: str) -> int:
        return self._index[x]

    def __eq__(self, other) -> bool:
        # equality is as sets; the stored order only fixes iteration
        if not isinstance(other, FinSet):
            return NotImplemented
        return self._index.keys() == other._index.keys()

    def __hash__(self):
        return hash(frozenset(self.elements))

    def __repr__(self):
        return "FinSet({})".format(list(self.elements))

    def issubset(self, other: "FinSet") -> bool:
        return all(e in other for e in self.elements)

    def sorted(self) -> "FinSet":
        return FinSet(sorted(self.elements))


OMEGA = FinSet([TRUE, FALSE])


class FinFunction:
    """A total function between finite sets."""

    __slots__ = ("dom", "cod", "_map")

    def __init__(self, dom: FinSet, cod: FinSet, mapping):
        if callable(mapping) and not isinstance(mapping, Mapping):
            mapping = {x: mapping(x) for x in dom}
        table = {}
        for x in dom:
            if x not in mapping:
                raise ValueError(f"function undefined at {x!r}")
            y = mapping[x]
            if y not in cod:
                raise ValueError(f"image {y!r} of {x!r} is not in the codomain")
            table[x] = y
        if len(mapping) != len(table):
            extra = [x for x in mapping if x not in dom]
            raise ValueError(f"mapping defined outside the domain: {extra[:3]!r}")
        self.dom, self.cod, self._map = dom, cod, table

    @classmethod
    def identity(cls, X: FinSet) -> "FinFunction":
        return cls(X, X, {x: x for x in X})

    def __call__(self, x: str) -> str:
        return self._map[x]

    def items(self):
        return ((x, self._map[x]) for x in self.dom)

    def as_dict(self) -> Dict[str, str]:
        return dict(self._map)

    def then(self, g: "FinFunction") -> "FinFunction":
        """Diagrammatic composite: first ``self``, then ``g``."""
        if self.cod != g.dom:
            raise ValueError("functions are not composable")
        gm = g._map
        return FinFunction(self.dom, g.cod, {x: gm[y] for x, y in self._map.items()})

    def __matmul__(self, f: "FinFunction") -> "FinFunction":
        # g @ f is g after f
        return f.then(self)

    def image(self) -> FinSet:
        seen = set(self._map.values())
        return FinSet(y for y in self.cod if y in seen)

    def preimage(self, y: str) -> List[str]:
        return [x for x in self.dom if self._map[x] == y]

    def is_injective(self) -> bool:
        return len(set(self._map.values())) == len(self.dom)

    def is_surjective(self) -> bool:
        return len(set(self._map.values())) == len(self.cod)

    def __eq__(self, other):
        if not isinstance(other, FinFunction):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self._map == other._map

    def __hash__(self):
        return hash((self.dom, self.cod, frozenset(self._map.items())))

    def __repr__(self):
        body = ", ".join(f"{x}->{y}" for x, y in self.items())
        return f"FinFunction({{{body}}})"


def compose(*fs: FinFunction) -> FinFunction:
    """``compose(h, g, f)`` is h∘g∘f."""
    result = fs[-1]
    for f in reversed(fs[:-1]):
        result = result.then(f)
    return result


def all_functions(X: FinSet, Y: FinSet) -> Iterator[FinFunction]:
    """Every function X → Y, in lexicographic order of image tuples."""
    xs = list(X)
    for images in itertools.product(Y.elements, repeat=len(xs)):
        yield FinFunction(X, Y, dict(zip(xs, images)))


def inclusion(sub: FinSet, X: FinSet) -> FinFunction:
    if not sub.issubset(X):
        raise NotASubset(f"{sub!r} is not a subset of {X!r}")
    return FinFunction(sub, X, {x: x for x in sub})


# ---------------------------------------------------------------------------
# union-find and equivalence relations

class UnionFind:
    def __init__(self, items: Iterable = ()):
        self.parent = {}
        for x in items:
            self.parent[x] = x

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True

    def classes(self, order: Optional[Sequence] = None) -> List[list]:
        """Classes listed in order of their first member in ``order``."""
        order = list(self.parent) if order is None else order
        groups: Dict[object, list] = {}
        for x in order:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


@dataclass(frozen=True)
class BinRelation:
    carrier: FinSet
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for a, b in self.pairs:
            if a not in self.carrier or b not in self.carrier:
                raise NotASubset(f"pair {(a, b)!r} not drawn from the carrier")

    def __contains__(self, pair):
        return pair in self.pairs


def equivalence_classes(r: BinRelation) -> List[List[str]]:
    """Classes of the equivalence generated by ``r``, ordered by least member
    in carrier order."""
    uf = UnionFind(r.carrier)
    for a, b in sorted(r.pairs):
        uf.union(a, b)
    return uf.classes(list(r.carrier))


def generate_equivalence(r: BinRelation) -> BinRelation:
    """The smallest equivalence relation containing ``r``."""
    pairs = set()
    for cls in equivalence_classes(r):
        pairs.update(itertools.product(cls, repeat=2))
    return BinRelation(r.carrier, frozenset(pairs))


def quotient(X: FinSet, pairs: Iterable[Tuple[str, str]]) -> Tuple[FinSet, FinFunction]:
    """Quotient of X by the equivalence generated by ``pairs``; each class is
    named by its lexicographically least member."""
    uf = UnionFind(X)
    for a, b in pairs:
        uf.union(a, b)
    name = {}
    for cls in uf.classes(list(X)):
        rep = min(cls)
        for x in cls:
            name[x] = rep
    Q = FinSet(sorted(set(name.values())))
    return Q, FinFunction(X, Q, name)


# ---------------------------------------------------------------------------
# diagrams, limits, colimits

def render_tuple(components: Sequence[str], delim: str = ",") -> str:
    return "(" + delim.join(components) + ")"


@dataclass
class FinDiagram:
    """A diagram of finite sets shaped like a finite graph.

    ``arrows`` maps arrow names to (source vertex, target vertex).
    ``commutations`` lists pairs of paths, each path given as
    ``(start_vertex, (arrow, ...))``, that the maps must make equal.
    """

    vertices: Sequence[str]
    arrows: Mapping[str, Tuple[str, str]]
    sets: Mapping[str, FinSet]
    maps: Mapping[str, FinFunction]
    commutations: Sequence[tuple] = ()

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        self.arrows = dict(self.arrows)
        for v in self.vertices:
            if v not in self.sets:
                raise ValueError(f"no set assigned to vertex {v!r}")
        for a, (s, t) in self.arrows.items():
            f = self.maps[a]
            if f.dom != self.sets[s] or f.cod != self.sets[t]:
                raise ValueError(f"map for arrow {a!r} does not match its endpoints")
        for p, q in self.commutations:
            if p[0] != q[0] or self._end(p) != self._end(q):
                raise ValueError(f"commutation {p!r} = {q!r} has mismatched endpoints")
            for x in self.sets[p[0]]:
                if self._eval(p, x) != self._eval(q, x):
                    raise ValueError(f"diagram does not commute: {p!r} vs {q!r} at {x!r}")

    def _end(self, path):
        v = path[0]
        for a in path[1]:
            s, t = self.arrows[a]
            if s != v:
                raise ValueError(f"path {path!r} is not head-to-tail")
            v = t
        return v

    def _eval(self, path, x):
        for a in path[1]:
            x = self.maps[a](x)
        return x

    @classmethod
    def discrete(cls, sets: Mapping[str, FinSet]) -> "FinDiagram":
        return cls(list(sets), {}, dict(sets), {})


def limit_of_diagram(d: FinDiagram, delim: str = ",") -> Tuple[FinSet, Dict[str, FinFunction]]:
    """All tuples (one element per vertex) compatible with every map.

    Returns the apex and the projection legs.  Vertices are filled in order;
    a vertex already hit by an arrow from a filled vertex is forced rather
    than enumerated.
    """
    verts = list(d.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    # arrows checked once both endpoints are filled
    checks: Dict[int, List[str]] = {i: [] for i in range(len(verts))}
    forcing: Dict[int, List[str]] = {i: [] for i in range(len(verts))}
    for a, (s, t) in d.arrows.items():
        later = max(pos[s], pos[t])
        checks[later].append(a)
        if pos[s] < pos[t]:
            forcing[pos[t]].append(a)

    rows: List[Tuple[str, ...]] = []
    current: List[str] = []

    def fill(i: int):
        if i == len(verts):
            rows.append(tuple(current))
            return
        v = verts[i]
        forced = None
        for a in forcing[i]:
            s, _ = d.arrows[a]
            forced = d.maps[a](current[pos[s]])
            break
        candidates = [forced] if forced is not None else d.sets[v].elements
        for x in candidates:
            current.append(x)
            ok = True
            for a in checks[i]:
                s, t = d.arrows[a]
                if d.maps[a](current[pos[s]]) != current[pos[t]]:
                    ok = False
                    break
            if ok:
                fill(i + 1)
            current.pop()

    fill(0)
    names = [render_tuple(r, delim) for r in rows]
    apex = FinSet(names)
    legs = {
        v: FinFunction(apex, d.sets[v], {n: r[pos[v]] for n, r in zip(names, rows)})
        for v in verts
    }
    return apex, legs


def tag(vertex: str, x: str) -> str:
    return f"{vertex}:{x}"


def colimit_of_diagram(d: FinDiagram) -> Tuple[FinSet, Dict[str, FinFunction]]:
    """Disjoint union of the vertex sets, quotiented by x ~ map(x) for every
    arrow.  Classes are named by their lexicographically least tagged member
    and listed in sorted order."""
    uf = UnionFind()
    order = []
    for v in d.vertices:
        for x in d.sets[v]:
            t = tag(v, x)
            uf.add(t)
            order.append(t)
    for a, (s, t) in d.arrows.items():
        f = d.maps[a]
        for x, y in f.items():
            uf.union(tag(s, x), tag(t, y))
    name = {}
    for cls in uf.classes(order):
        rep = min(cls)
        for member in cls:
            name[member] = rep
    apex = FinSet(sorted(set(name.values())))
    legs = {
        v: FinFunction(d.sets[v], apex, {x: name[tag(v, x)] for x in d.sets[v]})
        for v in d.vertices
    }
    return apex, legs


def terminal() -> FinSet:
    return limit_of_diagram(FinDiagram((), {}, {}, {}))[0]


def initial() -> FinSet:
    return FinSet()


def product(*sets: FinSet, delim: str = ",") -> Tuple[FinSet, List[FinFunction]]:
    names = [str(i) for i in range(len(sets))]
    apex, legs = limit_of_diagram(FinDiagram.discrete(dict(zip(names, sets))), delim)
    return apex, [legs[n] for n in names]


def coproduct(X: FinSet, Y: FinSet) -> Tuple[FinSet, FinFunction, FinFunction]:
    """X ⊔ Y with elements tagged ``inl:`` and ``inr:``."""
    apex, legs = colimit_of_diagram(FinDiagram.discrete({"inl": X, "inr": Y}))
    return apex, legs["inl"], legs["inr"]


def pullback(f: FinFunction, g: FinFunction) -> Tuple[FinSet, FinFunction, FinFunction]:
    """Fiber product {(x, y) | f(x) = g(y)} with its two projections."""
    if f.cod != g.cod:
        raise ValueError("pullback needs a common codomain")
    pairs = [(x, y) for x in f.dom for y in g.dom if f(x) == g(y)]
    names = [render_tuple(p) for p in pairs]
    P = FinSet(names)
    p1 = FinFunction(P, f.dom, {n: p[0] for n, p in zip(names, pairs)})
    p2 = FinFunction(P, g.dom, {n: p[1] for n, p in zip(names, pairs)})
    return P, p1, p2


def equalizer(f: FinFunction, g: FinFunction) -> Tuple[FinSet, FinFunction]:
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("equalizer needs parallel functions")
    E = FinSet(x for x in f.dom if f(x) == g(x))
    return E, inclusion(E, f.dom)


def coequalizer(f: FinFunction, g: FinFunction) -> Tuple[FinSet, FinFunction]:
    """Quotient of the common codomain by f(x) ~ g(x)."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("coequalizer needs parallel functions")
    return quotient(f.cod, ((f(x), g(x)) for x in f.dom))


def pushout(f: FinFunction, g: FinFunction) -> Tuple[FinSet, FinFunction, FinFunction]:
    """Pushout of X ← W → Y given as f: W → X and g: W → Y."""
    if f.dom != g.dom:
        raise ValueError("pushout needs a common domain")
    d = FinDiagram(("X", "W", "Y"), {"f": ("W", "X"), "g": ("W", "Y")},
                   {"X": f.cod, "W": f.dom, "Y": g.cod}, {"f": f, "g": g})
    apex, legs = colimit_of_diagram(d)
    return apex, legs["X"], legs["Y"]


# ---------------------------------------------------------------------------
# exponentials and currying

def render_function_table(mapping: Mapping[str, str]) -> str:
    return "[" + ";".join(f"{a}↦{b}" for a, b in sorted(mapping.items())) + "]"


def parse_function_table(text: str) -> Dict[str, str]:
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"not a function table: {text!r}")
    body = text[1:-1]
    if not body:
        return {}
    # split on top-level ';' only, so nested tables (values of Y^A when Y is
    # itself an exponential) survive
    entries, depth, start = [], 0, 0
    for k, ch in enumerate(body):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == ";" and depth == 0:
            entries.append(body[start:k])
            start = k + 1
    entries.append(body[start:])
    out = {}
    for entry in entries:
        a, arrow, b = entry.partition("↦")
        if not arrow:
            raise ValueError(f"malformed entry {entry!r} in function table")
        out[a] = b
    return out


def exponential(A: FinSet, Y: FinSet) -> FinSet:
    """The set Y^A of all functions A → Y, as rendered function tables."""
    xs = list(A)
    return FinSet(render_function_table(dict(zip(xs, images)))
                  for images in itertools.product(Y.elements, repeat=len(xs)))


def curry(f: FinFunction, X: FinSet, A: FinSet) -> FinFunction:
    """Transpose f: X×A → Y into X → Y^A."""
    XA, _ = product(X, A)
    if f.dom != XA:
        raise MalformedProduct("domain of f is not the product of the given factors")
    YA = exponential(A, f.cod)
    return FinFunction(X, YA, {
        x: render_function_table({a: f(render_tuple((x, a))) for a in A}) for x in X
    })


def uncurry(h: FinFunction, A: FinSet, Y: FinSet) -> FinFunction:
    """Inverse of :func:`curry`: X → Y^A becomes X×A → Y."""
    XA, _ = product(h.dom, A)
    table = {}
    for x in h.dom:
        g = parse_function_table(h(x))
        for a in A:
            table[render_tuple((x, a))] = g[a]
    return FinFunction(XA, Y, table)


def evaluation(A: FinSet, Y: FinSet) -> FinFunction:
    """ev: Y^A × A → Y, obtained by uncurrying the identity on Y^A."""
    YA = exponential(A, Y)
    return uncurry(FinFunction.identity(YA), A, Y)


# ---------------------------------------------------------------------------
# subsets

def _check_subset(sub: Iterable[str], B: FinSet) -> set:
    sub = set(sub)
    foreign = sorted(x for x in sub if x not in B)
    if foreign:
        raise NotASubset(f"elements {foreign!r} are not in the ambient set")
    return sub


def characteristic(sub: Iterable[str], B: FinSet) -> FinFunction:
    sub = _check_subset(sub, B)
    return FinFunction(B, OMEGA, {b: TRUE if b in sub else FALSE for b in B})


def subset_of(chi: FinFunction) -> FinSet:
    return FinSet(b for b in chi.dom if chi(b) == TRUE)


def quantifier_image(f: FinFunction, u: Iterable[str], mode: str) -> FinSet:
    """Existential or universal image of a subset u of dom(f).

    In ``forall`` mode an element with an empty fiber is included
    (the condition holds vacuously).
    """
    u = _check_subset(u, f.dom)
    fibers: Dict[str, List[str]] = {y: [] for y in f.cod}
    for x, y in f.items():
        fibers[y].append(x)
    if mode == "exists":
        keep = lambda fib: any(x in u for x in fib)  # noqa: E731
    elif mode == "forall":
        keep = lambda fib: all(x in u for x in fib)  # noqa: E731
    else:
        raise ValueError(f"mode must be 'exists' or 'forall', got {mode!r}")
    return FinSet(y for y in f.cod if keep(fibers[y]))


def preimage_subset(f: FinFunction, v: Iterable[str]) -> FinSet:
    v = _check_subset(v, f.cod)
    return FinSet(x for x in f.dom if f(x) in v)


# ---------------------------------------------------------------------------
# spans

@dataclass(frozen=True)
class Span:
    apex: FinSet
    left: FinFunction
    right: FinFunction

    def __post_init__(self):
        if self.left.dom != self.apex or self.right.dom != self.apex:
            raise ValueError("span legs must start at the apex")

    @classmethod
    def identity(cls, B: FinSet) -> "Span":
        idB = FinFunction.identity(B)
        return cls(B, idB, idB)


def span_compose(s1: Span, s2: Span) -> Span:
    if s1.right.cod != s2.left.cod:
        raise MiddleMismatch("spans do not share their middle set")
    P, p1, p2 = pullback(s1.right, s2.left)
    return Span(P, p1.then(s1.left), p2.then(s2.right))


def span_to_matrix(s: Span) -> List[List[int]]:
    """Cell (a, b) counts the apex elements over (a, b)."""
    A, B = s.left.cod, s.right.cod
    counts = [[0] * len(B) for _ in A]
    for r in s.apex:
        counts[A.index(s.left(r))][B.index(s.right(r))] += 1
    return counts


def span_from_matrix(A: FinSet, B: FinSet, matrix: Sequence[Sequence[int]]) -> Span:
    """A span realising a natural-number matrix, one apex element per unit."""
    elems, left, right = [], {}, {}
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            for k in range(matrix[i][j]):
                r = f"{a}|{b}|{k}"
                elems.append(r)
                left[r], right[r] = a, b
    R = FinSet(elems)
    return Span(R, FinFunction(R, A, left), FinFunction(R, B, right))
