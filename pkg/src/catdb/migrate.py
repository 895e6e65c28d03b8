"""Data migration along a schema morphism F: C → D.

Δ_F precomposes with F.  Σ_F and Π_F are computed pointwise: the table of
Σ_F(I) at d is the colimit of I over the comma category (F↓d), and the
table of Π_F(I) at d is the limit of I over (d↓F).

Naming.  A Σ row that contains an original row sitting at an identity path
keeps that row's id (written ``<vertex>:<id>`` when the id occurs in more
than one source table).  Any other Σ row is a Skolem term ``<row>.<arrows>``
built from its shortest member.  A Π row is named by joining, with ``+``,
the components at the objects of (d↓F) that generate the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .errors import (AdjunctionFailure, PEDRecheckFailure, PEDViolation, SchemaMismatch,
                     SkolemCollision, ValidationError)
from .finset import FinDiagram, UnionFind, limit_of_diagram
from .graph import Path
from .instance import (Instance, InstanceMorphism, enumerate_nat_trans, eval_path,
                       validate_instance)
from .schema import DEFAULT_BOUND, PathCategory, SchemaMorphism

F_DOWN_D = "FDownD"
D_DOWN_F = "DDownF"


@dataclass
class CommaCategoryGraph:
    """Objects ``(c, g)`` and arrows ``(m, i, j)`` between object indices.

    For (F↓d), g: F(c) → d and m: c → c' gives (c, F(m)·g') → (c', g').
    For (d↓F), g: d → F(c) and m gives (c, g) → (c', g·F(m)).
    """

    orientation: str
    vertex: str
    objects: List[Tuple[str, Path]]
    arrows: List[Tuple[str, int, int]]

    def name(self, k: int) -> str:
        c, g = self.objects[k]
        return f"({c},{g})"


def comma_category(F: SchemaMorphism, d: str, orientation: str = F_DOWN_D,
                   bound: int = DEFAULT_BOUND) -> CommaCategoryGraph:
    cat = PathCategory(F.target, bound)
    C = F.source.graph
    objects: List[Tuple[str, Path]] = []
    for c in C.vertices:
        if orientation == F_DOWN_D:
            homs = cat.hom(F.vertex(c), d)
        elif orientation == D_DOWN_F:
            homs = cat.hom(d, F.vertex(c))
        else:
            raise ValueError(f"unknown orientation {orientation!r}")
        objects.extend((c, g) for g in homs)
    index = {obj: k for k, obj in enumerate(objects)}
    arrows = []
    for m, (c, c2) in C.ends.items():
        Fm = F.apply(C.arrow_path(m))
        if orientation == F_DOWN_D:
            for k2, (c2_, g2) in enumerate(objects):
                if c2_ == c2:
                    arrows.append((m, index[(c, cat.compose(Fm, g2))], k2))
        else:
            for k, (c_, g) in enumerate(objects):
                if c_ == c:
                    arrows.append((m, k, index[(c2, cat.compose(g, Fm))]))
    return CommaCategoryGraph(orientation, d, objects, arrows)


# ---------------------------------------------------------------------------
# Δ

def delta(F: SchemaMorphism, j: Instance) -> Instance:
    if j.schema != F.target:
        raise SchemaMismatch("instance is not on the morphism's target schema")
    C = F.source.graph
    pk = {c: j.pk[F.vertex(c)] for c in C.vertices}
    fk = {m: eval_path(j, F.on_arrows[m]).as_dict() for m in C.arrows}
    out = Instance(F.source, pk, fk)
    validate_instance(out)
    return out


def delta_morphism(F: SchemaMorphism, alpha: InstanceMorphism) -> InstanceMorphism:
    return InstanceMorphism(delta(F, alpha.source), delta(F, alpha.target),
                            {c: alpha.components[F.vertex(c)] for c in F.source.vertices})


# ---------------------------------------------------------------------------
# Σ

@dataclass
class SigmaResult:
    instance: Instance
    unit: InstanceMorphism
    # (c, path F(c) → d, row) → row id of Σ at d
    locate: Dict[Tuple[str, Path, str], str]


def sigma_full(F: SchemaMorphism, i: Instance, bound: int = DEFAULT_BOUND) -> SigmaResult:
    if i.schema != F.source:
        raise SchemaMismatch("instance is not on the morphism's source schema")
    D = F.target
    cat = PathCategory(D, bound)
    commas = {d: comma_category(F, d, F_DOWN_D, bound) for d in D.vertices}
    seen_in: Dict[str, int] = {}
    for c in i.schema.vertices:
        for x in i.pk[c]:
            seen_in[x] = seen_in.get(x, 0) + 1

    def label(c: str, x: str) -> str:
        # ids shared by several source tables are qualified by their table
        return x if seen_in[x] == 1 else f"{c}:{x}"

    real_rows = {label(c, x) for c in i.schema.vertices for x in i.pk[c]}
    locate: Dict[Tuple[str, Path, str], str] = {}
    pk: Dict[str, List[str]] = {}
    for d, cc in commas.items():
        uf = UnionFind((k, x) for k, (c, _) in enumerate(cc.objects) for x in i.pk[c])
        for m, k, k2 in cc.arrows:
            c = cc.objects[k][0]
            for x in i.pk[c]:
                uf.union((k, x), (k2, i.fk[m][x]))
        order = [(k, x) for k, (c, _) in enumerate(cc.objects) for x in i.pk[c]]
        names, reals = [], {}
        for members in uf.classes(order):
            real = sorted(label(cc.objects[k][0], x) for k, x in members
                          if cc.objects[k][1].is_identity)
            if real:
                name = real[0]
                reals[name] = True
            else:
                name = min((len(cc.objects[k][1]), _skolem(label(cc.objects[k][0], x), cc.objects[k][1]))
                           for k, x in members)[1]
                if name in real_rows:
                    raise SkolemCollision(f"Skolem name {name!r} clashes with an input row")
            names.append(name)
            for k, x in members:
                c, g = cc.objects[k]
                locate[(c, g, x)] = name
        if len(set(names)) != len(names):
            dup = sorted(n for n in names if names.count(n) > 1)[0]
            raise SkolemCollision(f"two rows of {d!r} would both be named {dup!r}")
        # real rows keep their table order; Skolem rows follow, sorted
        ordered = [label(c, x) for k, (c, g) in enumerate(cc.objects) if g.is_identity
                   for x in i.pk[c] if locate[(c, g, x)] == label(c, x)]
        pk[d] = list(dict.fromkeys(ordered)) + sorted(n for n in names if n not in reals)
    fk = {}
    for a, (d, d2) in D.graph.ends.items():
        arrow = D.graph.arrow_path(a)
        col = {}
        for c, g in commas[d].objects:
            g2 = cat.compose(g, arrow)
            for x in i.pk[c]:
                col[locate[(c, g, x)]] = locate[(c, g2, x)]
        fk[a] = col
    out = Instance(D, pk, fk)
    try:
        validate_instance(out)
    except PEDViolation as e:
        raise PEDRecheckFailure(f"Σ result breaks a target PED: {e}") from None
    C = i.schema
    pulled = delta(F, out)
    unit = InstanceMorphism(i, pulled, {
        c: {x: locate[(c, cat.normalize(D.graph.identity(F.vertex(c))), x)] for x in i.pk[c]}
        for c in C.vertices})
    return SigmaResult(out, unit, locate)


def _skolem(x: str, g: Path) -> str:
    return x + "." + ".".join(g.arrows)


def sigma(F: SchemaMorphism, i: Instance, bound: int = DEFAULT_BOUND) -> Instance:
    return sigma_full(F, i, bound).instance


def sigma_unit(F: SchemaMorphism, i: Instance, bound: int = DEFAULT_BOUND) -> InstanceMorphism:
    """η_i: i → Δ_F Σ_F i."""
    return sigma_full(F, i, bound).unit


def sigma_counit(F: SchemaMorphism, j: Instance, bound: int = DEFAULT_BOUND) -> InstanceMorphism:
    """ε_j: Σ_F Δ_F j → j, sending the class of (c, g, x) to j(g)(x)."""
    pulled = delta(F, j)
    res = sigma_full(F, pulled, bound)
    comps: Dict[str, Dict[str, str]] = {d: {} for d in F.target.vertices}
    for (c, g, x), name in res.locate.items():
        comps[g.end][name] = eval_path(j, g)(x)
    return InstanceMorphism(res.instance, j, comps)


# ---------------------------------------------------------------------------
# Π

@dataclass
class PiResult:
    instance: Instance
    counit: InstanceMorphism
    commas: Dict[str, CommaCategoryGraph]
    # d → row id → {object (c, g) of (d↓F): component row}
    components: Dict[str, Dict[str, Dict[Tuple[str, Path], str]]]


def _generators(cc: CommaCategoryGraph) -> List[int]:
    """Objects whose components determine every other component."""
    n = len(cc.objects)
    succ: Dict[int, List[int]] = {k: [] for k in range(n)}
    indeg = [0] * n
    for _, k, k2 in cc.arrows:
        succ[k].append(k2)
        if k != k2:
            indeg[k2] += 1
    chosen, seen = [], set()

    def mark(k):
        stack = [k]
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(succ[u])

    for k in range(n):
        if indeg[k] == 0:
            chosen.append(k)
            mark(k)
    for k in range(n):
        if k not in seen:
            chosen.append(k)
            mark(k)
    return sorted(chosen)


def pi_full(F: SchemaMorphism, i: Instance, bound: int = DEFAULT_BOUND) -> PiResult:
    if i.schema != F.source:
        raise SchemaMismatch("instance is not on the morphism's source schema")
    D = F.target
    cat = PathCategory(D, bound)
    commas = {d: comma_category(F, d, D_DOWN_F, bound) for d in D.vertices}
    components: Dict[str, Dict[str, Dict[Tuple[str, Path], str]]] = {}
    pk: Dict[str, List[str]] = {}
    for d, cc in commas.items():
        verts = [str(k) for k in range(len(cc.objects))]
        arrows = {f"{m}#{n}": (str(k), str(k2)) for n, (m, k, k2) in enumerate(cc.arrows)}
        diagram = FinDiagram(verts, arrows,
                             {str(k): i.pk[c] for k, (c, _) in enumerate(cc.objects)},
                             {f"{m}#{n}": i.fk_function(m) for n, (m, _, _) in enumerate(cc.arrows)})
        apex, legs = limit_of_diagram(diagram)
        gens = _generators(cc)
        rows: Dict[str, Dict[Tuple[str, Path], str]] = {}
        for e in apex:
            name = "+".join(legs[str(k)](e) for k in gens) if gens else "()"
            if name in rows:
                raise ValidationError(f"two rows of Π at {d!r} would both be named {name!r}")
            rows[name] = {cc.objects[k]: legs[str(k)](e) for k in range(len(cc.objects))}
        components[d] = rows
        pk[d] = list(rows)
    fk = {}
    for a, (d, d2) in D.graph.ends.items():
        arrow = D.graph.arrow_path(a)
        objs2 = commas[d2].objects
        index = {tuple(comp[o] for o in objs2): name for name, comp in components[d2].items()}
        fk[a] = {name: index[tuple(comp[(c, cat.compose(arrow, g))] for c, g in objs2)]
                 for name, comp in components[d].items()}
    out = Instance(D, pk, fk)
    try:
        validate_instance(out)
    except PEDViolation as e:
        raise PEDRecheckFailure(f"Π result breaks a target PED: {e}") from None
    pulled = delta(F, out)
    counit = InstanceMorphism(pulled, i, {
        c: {name: comp[(c, cat.normalize(D.graph.identity(F.vertex(c))))]
            for name, comp in components[F.vertex(c)].items()}
        for c in F.source.vertices})
    return PiResult(out, counit, commas, components)


def pi(F: SchemaMorphism, i: Instance, bound: int = DEFAULT_BOUND) -> Instance:
    return pi_full(F, i, bound).instance


def pi_counit(F: SchemaMorphism, i: Instance, bound: int = DEFAULT_BOUND) -> InstanceMorphism:
    """ε_i: Δ_F Π_F i → i."""
    return pi_full(F, i, bound).counit


def pi_unit(F: SchemaMorphism, j: Instance, bound: int = DEFAULT_BOUND) -> InstanceMorphism:
    """η_j: j → Π_F Δ_F j, sending y to the family (c, g) ↦ j(g)(y)."""
    res = pi_full(F, delta(F, j), bound)
    comps: Dict[str, Dict[str, str]] = {}
    for d in F.target.vertices:
        index = {tuple(sorted((o, v) for o, v in comp.items())): name
                 for name, comp in res.components[d].items()}
        objs = res.commas[d].objects
        comps[d] = {}
        for y in j.pk[d]:
            fam = tuple(sorted(((c, g), eval_path(j, g)(y)) for c, g in objs))
            comps[d][y] = index[fam]
    return InstanceMorphism(j, res.instance, comps)


# ---------------------------------------------------------------------------
# adjunction checks

@dataclass
class AdjunctionReport:
    sigma_side: Tuple[int, int]
    pi_side: Tuple[int, int]


def verify_adjunction(F: SchemaMorphism, i: Instance, j: Instance,
                      bound: int = DEFAULT_BOUND) -> AdjunctionReport:
    """Brute-force Σ ⊣ Δ ⊣ Π on one pair of instances (i on C, j on D).

    Both hom-sets are enumerated; the transposition maps
    α ↦ Δ(α)∘η and β ↦ ε∘Δ(β) must be bijections between them.
    """
    sig = sigma_full(F, i, bound)
    left = enumerate_nat_trans(sig.instance, j)
    right = enumerate_nat_trans(i, delta(F, j))
    transposed = [sig.unit.then(delta_morphism(F, a)) for a in left]
    _check_bijection("Σ ⊣ Δ", transposed, right)

    p = pi_full(F, i, bound)
    left2 = enumerate_nat_trans(j, p.instance)
    right2 = enumerate_nat_trans(delta(F, j), i)
    transposed2 = [delta_morphism(F, b).then(p.counit) for b in left2]
    _check_bijection("Δ ⊣ Π", transposed2, right2)
    return AdjunctionReport((len(left), len(right)), (len(left2), len(right2)))


def _check_bijection(label, transposed, targets):
    if len(transposed) != len(targets):
        raise AdjunctionFailure(f"{label}: hom-sets have sizes {len(transposed)} and {len(targets)}")
    keys = {t.key() for t in transposed}
    if len(keys) != len(transposed):
        raise AdjunctionFailure(f"{label}: transposition is not injective")
    if keys != {t.key() for t in targets}:
        raise AdjunctionFailure(f"{label}: transposition misses some morphisms")
