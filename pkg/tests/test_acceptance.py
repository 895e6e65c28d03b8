"""The nine acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line; pytest prints them in its
terminal summary, and ``python tests/test_acceptance.py`` prints them
directly.
"""

import itertools
import sys
from fractions import Fraction

import pytest

from catdb.finset import FinSet, all_functions, coproduct, product, pullback
from catdb.instance import (InstanceMorphism, enumerate_nat_trans, export_rdf, instance_colimit,
                            instance_limit, naturality_table, representable, yoneda_check)
from catdb.kleisli import (Dist, Exceptions, ListMonad, Maybe, Powerset,
                           kleisli_compose, kleisli_identity, markov_power, monad_laws_check,
                           transition_matrix)
from catdb.migrate import delta, pi, sigma, verify_adjunction
from catdb.schema import Verdict, paths_equal

import worked_examples as W

RESULTS = []


def record(number, title, check):
    try:
        detail = check()
    except BaseException as e:
        RESULTS.append(f"FAIL  {number}. {title}: {type(e).__name__}: {e}")
        raise
    RESULTS.append(f"PASS  {number}. {title}" + (f" ({detail})" if detail else ""))


# ---------------------------------------------------------------------------

def golden_migrations():
    F, i, j = W.translation()
    d = delta(F, j)
    assert d.table("T1") == W.DELTA_T1
    assert sorted(d.table("T2")) == sorted(W.DELTA_T2)
    s = sigma(F, i)
    assert s.table("T") == W.rename(W.SIGMA_T, W.SIGMA_NAMING)
    skolem_ssn = [W.SIGMA_NAMING.get(x, x) for x in W.SIGMA_SSN_EXTRA]
    skolem_sal = [W.SIGMA_NAMING.get(x, x) for x in W.SIGMA_SALARY_EXTRA]
    assert list(s.pk["SSN"]) == list(i.pk["SSN"]) + skolem_ssn
    assert list(s.pk["Salary"]) == list(i.pk["Salary"]) + skolem_sal
    p = pi(F, i)
    assert p.table("T") == W.rename(W.PI_T, W.PI_NAMING)
    return "7 Skolem rows, 2 join rows"


def congruence():
    s = W.dept_schema()
    for left in ("Employee.manager.worksIn", "Employee.manager.manager.worksIn"):
        res = paths_equal(s, s.parse_path(left), s.parse_path("Employee.worksIn"), bound=8)
        assert res.verdict is Verdict.EQUAL, left
    res = paths_equal(s, s.parse_path("Employee.worksIn.secretary"), s.parse_path("Employee."), bound=8)
    assert res.verdict is Verdict.NOT_EQUAL_WITHIN_BOUND
    return "bound 8"


def graph_homs():
    homs = enumerate_nat_trans(W.graph_instance("I"), W.graph_instance("J"))
    assert len(homs) == 4
    return "4 morphisms"


def graph_co_products():
    I = W.graph_instance("I")
    P, _, _ = instance_limit(I, W.graph_J4())
    assert list(P.pk["Vertex"]) == W.PRODUCT_VERTICES
    rows = [(a, P.fk["src"][a], P.fk["tgt"][a]) for a in P.pk["Arrow"]]
    assert rows == W.PRODUCT_ARROWS
    C, _, _ = instance_colimit(I, W.graph_instance("J"))
    assert len(C.pk["Vertex"]) == 8 and len(C.pk["Arrow"]) == 7
    return "12/12 and 8/7"


def markov():
    from catdb import formats
    doc = formats.load_schema(W.data("markov", "schema.cat"))
    k = formats.read_kleisli_instance(W.data("markov", "delta"), doc.schema, doc.monad)
    M = [[Fraction(x) for x in row] for row in W.MARKOV_M]
    assert transition_matrix(k, markov_power(k, 1)) == M
    powers = [markov_power(k, n) for n in range(11)]
    for m, n in itertools.product(range(6), repeat=2):
        assert powers[m + n] == kleisli_compose(k.monad, powers[m], powers[n]), (m, n)
    return "m, n ≤ 5"


def representables():
    y = representable(W.sirs_schema(), "B")
    for v, rows in W.SIRS_TABLES.items():
        assert y.table(v) == W.rename(rows, W.SIRS_NAMING), v
    s, I = W.graph_schema(), W.graph_instance("I")
    counts = (yoneda_check(s, "Arrow", I), yoneda_check(s, "Vertex", I))
    assert counts == (3, 3)
    return "counts 3 and 3"


def rdf():
    lines = [str(t) for t in export_rdf(W.dept_instance())]
    assert len(lines) == 16
    assert lines == sorted(lines)
    assert "102 first Bertrand" in lines and "101 manager 103" in lines
    return "16 triples"


# --- property suites --------------------------------------------------------

def _sets(prefix):
    return [FinSet(f"{prefix}{k}" for k in range(n)) for n in range(4)]


def _arithmetic():
    # cardinalities of both sides; test_finset builds the actual bijections
    from catdb.finset import exponential
    zero, one = FinSet(), FinSet.n(1)
    checks = 0
    for A, B, C in itertools.product(_sets("a"), _sets("b"), _sets("c")):
        a, b, c = len(A), len(B), len(C)
        AB, _, _ = coproduct(A, B)
        BC, _, _ = coproduct(B, C)
        AxB, _ = product(A, B)
        AxC, _ = product(A, C)
        BxC, _ = product(B, C)
        sides = [
            (len(coproduct(A, zero)[0]), a),
            (len(AB), len(coproduct(B, A)[0])),
            (len(coproduct(AB, C)[0]), len(coproduct(A, BC)[0])),
            (len(product(A, zero)[0]), 0),
            (len(product(A, one)[0]), a),
            (len(AxB), len(product(B, A)[0])),
            (len(product(AxB, C)[0]), len(product(A, BxC)[0])),
            (len(product(A, BC)[0]), len(coproduct(AxB, AxC)[0])),
            (len(exponential(zero, A)), 1),
            (len(exponential(one, A)), a),
            (len(exponential(A, zero)), 1 if a == 0 else 0),
            (len(exponential(A, one)), 1),
            (len(exponential(BC, A)), len(exponential(B, A)) * len(exponential(C, A))),
            (a ** (b * c), len(exponential(BxC, A))),
        ]
        assert len(sides) == 14
        for left, right in sides:
            assert left == right
            checks += 1
    return checks


def _monads():
    for m in (Maybe(), Exceptions(["e"]), ListMonad(), Powerset(), Dist()):
        monad_laws_check(m, (0, 1, 2))
    return 5


def _kleisli():
    n = 0
    for m in (Maybe(), Exceptions(["e"]), Powerset()):
        X = ["x", "y"]
        vals = m.values(X)
        maps = [dict(zip(X, v)) for v in itertools.product(vals, repeat=2)]
        for f, g, h in itertools.product(maps, repeat=3):
            assert kleisli_compose(m, kleisli_compose(m, f, g), h) == \
                kleisli_compose(m, f, kleisli_compose(m, g, h))
            n += 1
        for f in maps:
            assert kleisli_compose(m, kleisli_identity(m, X), f) == f
            assert kleisli_compose(m, f, kleisli_identity(m, X)) == f
    return n


def _pasting():
    n = 0
    X, Y, Z = FinSet.n(2), FinSet(["y0", "y1"]), FinSet(["z0", "z1"])
    W_ = FinSet(["w0", "w1"])
    for f in all_functions(X, Y):
        for g in all_functions(Y, Z):
            for h in all_functions(W_, Z):
                Q, q1, q2 = pullback(g, h)
                P, p1, p2 = pullback(f, q1)
                O, o1, o2 = pullback(f.then(g), h)
                pairs = sorted((p1(e), q2(p2(e))) for e in P)
                assert pairs == sorted((o1(e), o2(e)) for e in O)
                n += 1
    return n


def _mono_epi():
    n = 0
    for k, m in itertools.product(range(4), repeat=2):
        X, Y = FinSet.n(k), FinSet(f"y{i}" for i in range(m))
        T2 = FinSet.n(2)
        for f in all_functions(X, Y):
            tests = list(all_functions(T2, X))
            mono = all(u == v or u.then(f) != v.then(f) for u, v in itertools.product(tests, repeat=2))
            cotests = list(all_functions(Y, T2))
            epi = all(u == v or f.then(u) != f.then(v) for u, v in itertools.product(cotests, repeat=2))
            assert mono == f.is_injective() and epi == f.is_surjective()
            n += 1
    return n


def _universal():
    n = 0
    sets = [FinSet.n(k) for k in range(3)]
    for A, B, Z in itertools.product(sets, repeat=3):
        P, (p1, p2) = product(A, B)
        C, i1, i2 = coproduct(A, B)
        for p, q in itertools.product(all_functions(Z, A), all_functions(Z, B)):
            mediators = [u for u in all_functions(Z, P) if u.then(p1) == p and u.then(p2) == q]
            assert len(mediators) == 1
            n += 1
        for p, q in itertools.product(all_functions(A, Z), all_functions(B, Z)):
            mediators = [u for u in all_functions(C, Z) if i1.then(u) == p and i2.then(u) == q]
            assert len(mediators) == 1
            n += 1
    return n


def _adjunctions():
    from test_migrate import FIXED
    n = 0
    for F in FIXED:
        src_choices = _small_instances(F.source)
        tgt_choices = _small_instances(F.target)
        for i, j in itertools.product(src_choices, tgt_choices):
            rep = verify_adjunction(F, i, j)
            assert rep.sigma_side[0] == rep.sigma_side[1]
            assert rep.pi_side[0] == rep.pi_side[1]
            n += 1
    return n


def _small_instances(s):
    """A handful of instances with at most three rows per table."""
    from catdb.instance import Instance
    out = [Instance.empty(s)]
    for size in (1, 2, 3):
        pk = {v: [f"{v}{k}" for k in range(size)] for v in s.vertices}
        for shift in range(2):
            fk = {a: {x: pk[t][(k + shift) % size] for k, x in enumerate(pk[src])}
                  for a, (src, t) in s.graph.ends.items()}
            out.append(Instance(s, pk, fk))
    return out


def properties():
    counts = {
        "arithmetic": _arithmetic(),
        "monads": _monads(),
        "kleisli": _kleisli(),
        "pasting": _pasting(),
        "mono/epi": _mono_epi(),
        "universal": _universal(),
        "adjunctions": _adjunctions(),
    }
    return ", ".join(f"{k} {v}" for k, v in counts.items()) + "; 0 counterexamples"


def fsm_refinement():
    s, X, Y = W.fsm()
    alpha = InstanceMorphism(Y, X, {"state": W.FSM_ALPHA})
    for g in ("a", "b"):
        regenerated = [(x, Y.fk[g][x], left, alpha("state", x), right)
                       for x, left, right in naturality_table(alpha, g)]
        assert regenerated == W.FSM_SQUARES[g], g
    return "a and b"


CRITERIA = [
    (1, "golden Δ/Σ/Π on the translation example", golden_migrations),
    (2, "congruence on the dept-store schema", congruence),
    (3, "graph homomorphisms I → J", graph_homs),
    (4, "graph products and coproducts", graph_co_products),
    (5, "Markov chain powers", markov),
    (6, "representables and Yoneda", representables),
    (7, "RDF export", rdf),
    (8, "property suites", properties),
    (9, "FSM refinement squares", fsm_refinement),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    record(number, title, check)


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        try:
            record(number, title, check)
        except BaseException:
            failed += 1
        print(RESULTS[-1])
    sys.exit(1 if failed else 0)
