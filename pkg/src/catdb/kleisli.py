"""Monads on finite sets and Kleisli instances.

A monad is given by how it acts on Python values: ``unit``, ``fmap`` and
``join``, plus a cell syntax (``render``/``parse``) and a finite ``values``
enumeration used by the law checks.  For Maybe, Exceptions and Powerset the
enumeration is all of T(X); for List it stops at short lists and for Dist it
uses a small grid of weights, so law checks there are sampled.

Values:

* Exceptions/Maybe: ``("val", x)`` or ``("exc", e)``; cells ``x``, ``:exc:e``,
  and ``:none:`` for Maybe's single exception.
* List: a tuple, cell ``[a;b;c]``.
* Powerset: a frozenset, cell ``{a;b}``.
* Dist: a tuple of ``(element, Fraction)`` pairs in canonical order, cell
  ``1/2*a|1/2*b``.  Decimal weights such as ``0.5`` parse exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence

from .errors import (BadCell, BudgetExhausted, MonadLawViolation, PEDViolation,
                     SchemaMismatch, TypeMismatch, ValidationError)
from .finset import FinFunction, FinSet, all_functions
from .schema import Schema

TValue = Hashable
KleisliMap = Dict[Hashable, TValue]

NONE_CELL = ":none:"
EXC_PREFIX = ":exc:"


def _order(e):
    return (0, e, "") if isinstance(e, str) else (1, "", repr(e))


class Monad:
    """Base class for a monad on finite sets."""

    name = "monad"

    def unit(self, x):
        raise NotImplementedError

    def fmap(self, f: Callable, t):
        raise NotImplementedError

    def join(self, tt):
        raise NotImplementedError

    def support(self, t) -> Iterable:
        """Elements mentioned by a value (used for type checks)."""
        raise NotImplementedError

    def values(self, X: Sequence) -> List:
        raise NotImplementedError

    def render(self, t, show: Callable = str) -> str:
        raise NotImplementedError

    def parse(self, text: str, X: FinSet):
        raise NotImplementedError

    exhaustive = True

    def header(self) -> str:
        return self.name

    # set-level views of the same data
    def apply_to_set(self, X: FinSet) -> FinSet:
        return FinSet(self.render(t) for t in self.values(list(X)))

    def apply_to_function(self, f: FinFunction) -> FinFunction:
        dom = self.values(list(f.dom))
        cod = self.apply_to_set(f.cod)
        return FinFunction(FinSet(self.render(t) for t in dom), cod,
                           {self.render(t): self.render(self.fmap(f, t)) for t in dom})

    def unit_map(self, X: FinSet) -> FinFunction:
        return FinFunction(X, self.apply_to_set(X), {x: self.render(self.unit(x)) for x in X})

    def mult_map(self, X: FinSet) -> FinFunction:
        inner = self.values(list(X))
        outer = self.values(inner)
        dom = FinSet(self.render(tt, self.render) for tt in outer)
        return FinFunction(dom, self.apply_to_set(X),
                           {self.render(tt, self.render): self.render(self.join(tt)) for tt in outer})

    def __repr__(self):
        return self.header()

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash(self.header())


class Exceptions(Monad):
    name = "Exceptions"

    def __init__(self, exceptions: Iterable[str]):
        self.exceptions = tuple(exceptions)
        if len(set(self.exceptions)) != len(self.exceptions):
            raise ValueError("duplicate exception name")

    def header(self):
        return " ".join((self.name,) + self.exceptions)

    def unit(self, x):
        return ("val", x)

    def fmap(self, f, t):
        return ("val", f(t[1])) if t[0] == "val" else t

    def join(self, tt):
        return tt[1] if tt[0] == "val" else tt

    def support(self, t):
        return [t[1]] if t[0] == "val" else []

    def values(self, X):
        return [("val", x) for x in X] + [("exc", e) for e in self.exceptions]

    def _exc_cell(self, e):
        return EXC_PREFIX + e

    def render(self, t, show=str):
        return show(t[1]) if t[0] == "val" else self._exc_cell(t[1])

    def parse(self, text, X):
        if text.startswith(":"):
            for e in self.exceptions:
                if text == self._exc_cell(e):
                    return ("exc", e)
            raise ValueError(f"unknown exception cell {text!r}")
        if text not in X:
            raise ValueError("value is not a row of the target table")
        return ("val", text)


class Maybe(Exceptions):
    """Exceptions with one exception, written ``:none:``."""

    name = "Maybe"
    NONE = "☺"

    def __init__(self):
        super().__init__([self.NONE])

    def header(self):
        return self.name

    def _exc_cell(self, e):
        return NONE_CELL


class ListMonad(Monad):
    name = "List"

    def __init__(self, bound: int = 8, sample_length: int = 2):
        self.bound, self.sample_length = bound, sample_length

    def header(self):
        return f"{self.name} {self.bound}"

    def _check(self, t):
        if len(t) > self.bound:
            raise BudgetExhausted(f"list of length {len(t)} exceeds the bound {self.bound}")
        return t

    def unit(self, x):
        return (x,)

    def fmap(self, f, t):
        return tuple(f(x) for x in t)

    def join(self, tt):
        return self._check(tuple(x for t in tt for x in t))

    def support(self, t):
        return list(t)

    exhaustive = False

    def values(self, X):
        out = []
        for n in range(min(self.sample_length, self.bound) + 1):
            out.extend(itertools.product(X, repeat=n))
        return out

    def render(self, t, show=str):
        return "[" + ";".join(show(x) for x in t) + "]"

    def parse(self, text, X):
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError("list cells look like [a;b;c]")
        body = text[1:-1]
        items = tuple(body.split(";")) if body else ()
        for x in items:
            if x not in X:
                raise ValueError(f"{x!r} is not a row of the target table")
        return self._check(items)


class Powerset(Monad):
    name = "Powerset"

    def __init__(self, max_elements: int = 16):
        self.max_elements = max_elements

    def unit(self, x):
        return frozenset([x])

    def fmap(self, f, t):
        return frozenset(f(x) for x in t)

    def join(self, tt):
        return frozenset().union(*tt)

    def support(self, t):
        return sorted(t, key=_order)

    def values(self, X):
        X = list(X)
        if len(X) > self.max_elements:
            raise BudgetExhausted(f"powerset of {len(X)} elements is too large to enumerate")
        return [frozenset(c) for n in range(len(X) + 1) for c in itertools.combinations(X, n)]

    def render(self, t, show=str):
        return "{" + ";".join(sorted(show(x) for x in t)) + "}"

    def parse(self, text, X):
        if not (text.startswith("{") and text.endswith("}")):
            raise ValueError("powerset cells look like {a;b}")
        body = text[1:-1]
        items = body.split(";") if body else []
        if len(set(items)) != len(items):
            raise ValueError("repeated element")
        for x in items:
            if x not in X:
                raise ValueError(f"{x!r} is not a row of the target table")
        return frozenset(items)


class Dist(Monad):
    """Finitely supported probability distributions with rational weights."""

    name = "Dist"
    exhaustive = False

    def __init__(self, grid: Sequence[Fraction] = (Fraction(1, 2), Fraction(1, 3))):
        self.grid = tuple(grid)

    @staticmethod
    def make(weights: Mapping) -> tuple:
        out = []
        for x, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError("negative weight")
            if w:
                out.append((x, w))
        if sum(w for _, w in out) != 1:
            raise ValueError(f"weights sum to {sum(w for _, w in out)}, not 1")
        out.sort(key=lambda xw: _order(xw[0]))
        return tuple(out)

    def unit(self, x):
        return ((x, Fraction(1)),)

    def fmap(self, f, t):
        acc: Dict = {}
        for x, w in t:
            y = f(x)
            acc[y] = acc.get(y, 0) + w
        return self.make(acc)

    def join(self, tt):
        acc: Dict = {}
        for p, w in tt:
            for x, v in p:
                acc[x] = acc.get(x, 0) + w * v
        return self.make(acc)

    def support(self, t):
        return [x for x, _ in t]

    def values(self, X):
        X = list(X)
        out = [self.unit(x) for x in X]
        for a, b in itertools.combinations(X, 2):
            for w in self.grid:
                out.append(self.make({a: w, b: 1 - w}))
                if w != 1 - w:
                    out.append(self.make({a: 1 - w, b: w}))
        return out

    def render(self, t, show=str):
        return "|".join(f"{w}*{show(x)}" for x, w in t)

    def parse(self, text, X):
        acc: Dict[str, Fraction] = {}
        for part in text.split("|"):
            w, star, x = part.partition("*")
            if not star:
                raise ValueError("distribution terms look like p*element")
            try:
                weight = Fraction(w.strip())
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"bad weight {w!r}") from None
            if weight <= 0:
                raise ValueError(f"weight {w!r} is not positive")
            if x not in X:
                raise ValueError(f"{x!r} is not a row of the target table")
            if x in acc:
                raise ValueError(f"{x!r} appears twice")
            acc[x] = weight
        return self.make(acc)


def make_monad(name: str, args: Sequence[str] = ()) -> Monad:
    """Build a built-in monad from its schema-file header."""
    if name == "Maybe" and not args:
        return Maybe()
    if name == "Exceptions":
        return Exceptions(args)
    if name == "List":
        if len(args) > 1:
            raise ValueError("List takes at most one argument, its length bound")
        return ListMonad(int(args[0])) if args else ListMonad()
    if name == "Powerset" and not args:
        return Powerset()
    if name == "Dist" and not args:
        return Dist()
    raise ValueError(f"unknown monad {' '.join([name, *args])!r}")


BUILTIN_MONADS = ("Maybe", "Exceptions", "List", "Powerset", "Dist")


# ---------------------------------------------------------------------------
# Kleisli maps

def kleisli_identity(m: Monad, X: Iterable) -> KleisliMap:
    return {x: m.unit(x) for x in X}


def lift(m: Monad, f: Mapping) -> KleisliMap:
    """An ordinary function viewed as a Kleisli map."""
    return {x: m.unit(y) for x, y in f.items()}


def kleisli_compose(m: Monad, f: Mapping, g: Mapping) -> KleisliMap:
    """x ↦ μ(T(g)(f(x))): f first, then g."""
    out = {}
    for x, t in f.items():
        for y in m.support(t):
            if y not in g:
                raise TypeMismatch(f"{y!r} in the image of the first map is outside the second's domain")
        out[x] = m.join(m.fmap(g.__getitem__, t))
    return out


def monad_laws_check(m: Monad, sizes: Sequence[int] = (0, 1, 2), budget: int = 500_000) -> int:
    """Check the unit and associativity laws, plus naturality of η and μ,
    elementwise on sets of the given sizes.  Returns the number of checks."""
    checks = 0
    for n in sizes:
        X = [chr(ord("a") + k) for k in range(n)]
        T1 = m.values(X)
        for t in T1:
            if m.join(m.unit(t)) != t:
                raise MonadLawViolation(f"{m}: μ∘ηT fails at {m.render(t)}")
            if m.join(m.fmap(m.unit, t)) != t:
                raise MonadLawViolation(f"{m}: μ∘Tη fails at {m.render(t)}")
            checks += 2
        T2 = m.values(T1)
        T3 = m.values(T2)
        if len(T3) > budget:
            raise BudgetExhausted(f"{m}: {len(T3)} values of T³ on a set of size {n}")
        for ttt in T3:
            a = m.join(m.join(ttt))
            b = m.join(m.fmap(m.join, ttt))
            if a != b:
                raise MonadLawViolation(f"{m}: associativity fails on a set of size {n}")
            checks += 1
        fs = all_functions(FinSet(X), FinSet(X))
        for f in fs:
            for x in X:
                if m.fmap(f, m.unit(x)) != m.unit(f(x)):
                    raise MonadLawViolation(f"{m}: η is not natural at {x}")
            for tt in T2:
                if m.fmap(f, m.join(tt)) != m.join(m.fmap(lambda t: m.fmap(f, t), tt)):
                    raise MonadLawViolation(f"{m}: μ is not natural")
                checks += 1
    return checks


# ---------------------------------------------------------------------------
# Kleisli instances

class KleisliInstance:
    """Tables as in an ordinary instance, but each cell holds a T-value."""

    def __init__(self, schema: Schema, monad: Monad, pk: Mapping[str, Iterable[str]],
                 fk: Mapping[str, Mapping[str, TValue]]):
        self.schema, self.monad = schema, monad
        self.pk = {v: FinSet(pk.get(v, ())) for v in schema.vertices}
        self.fk = {a: dict(fk.get(a, {})) for a in schema.arrows}

    @classmethod
    def lift_instance(cls, inst, monad: Monad) -> "KleisliInstance":
        return cls(inst.schema, monad, inst.pk, {a: lift(monad, col) for a, col in inst.fk.items()})

    def eval_path(self, arrows: Sequence[str], start: str) -> KleisliMap:
        f = kleisli_identity(self.monad, self.pk[start])
        for a in arrows:
            f = kleisli_compose(self.monad, f, self.fk[a])
        return f

    def render_cell(self, a: str, x: str) -> str:
        return self.monad.render(self.fk[a][x])

    def table(self, v: str) -> List[List[str]]:
        cols = self.schema.graph.out_arrows(v)
        return [[x] + [self.render_cell(a, x) for a in cols] for x in self.pk[v]]


def validate_kleisli_instance(k: KleisliInstance) -> bool:
    m = k.monad
    for a, (s, t) in k.schema.graph.ends.items():
        col = k.fk[a]
        for x in k.pk[s]:
            if x not in col:
                raise BadCell(x, a, "", "missing")
            for y in m.support(col[x]):
                if y not in k.pk[t]:
                    raise BadCell(x, a, m.render(col[x]), f"{y!r} is not a row of {t!r}")
    for ped in k.schema.peds:
        p, q = ped
        left, right = k.eval_path(p.arrows, p.start), k.eval_path(q.arrows, q.start)
        for x in k.pk[p.start]:
            if left[x] != right[x]:
                raise PEDViolation(ped, x, m.render(left[x]), m.render(right[x]))
    return True


def markov_power(k: KleisliInstance, n: int, arrow: Optional[str] = None) -> KleisliMap:
    """n-fold Kleisli self-composite of a loop, by repeated squaring."""
    if not isinstance(k.monad, Dist):
        raise SchemaMismatch("Markov powers need the Dist monad")
    arrow = _loop_arrow(k, arrow)
    if n < 0:
        raise ValueError("n must be non-negative")
    v = k.schema.graph.source(arrow)
    result = kleisli_identity(k.monad, k.pk[v])
    base = k.fk[arrow]
    while n:
        if n & 1:
            result = kleisli_compose(k.monad, result, base)
        n >>= 1
        if n:
            base = kleisli_compose(k.monad, base, base)
    return result


def _loop_arrow(k: KleisliInstance, arrow: Optional[str]) -> str:
    g = k.schema.graph
    if arrow is None:
        loops = [a for a, (s, t) in g.ends.items() if s == t]
        if len(loops) != 1:
            raise ValidationError("schema must have exactly one loop, or name the arrow")
        arrow = loops[0]
    s, t = g.ends[arrow]
    if s != t:
        raise ValidationError(f"arrow {arrow!r} is not a loop")
    return arrow


def transition_matrix(k: KleisliInstance, table: KleisliMap, vertex: Optional[str] = None) -> List[List[Fraction]]:
    """Rows of a Dist-valued self-map as a matrix over the table's row order."""
    vertex = vertex or k.schema.vertices[0]
    states = list(k.pk[vertex])
    out = []
    for x in states:
        w = dict(table[x])
        out.append([w.get(y, Fraction(0)) for y in states])
    return out
