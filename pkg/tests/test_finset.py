import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catdb.errors import MiddleMismatch, NotASubset
from catdb.finset import (FALSE, OMEGA, TRUE, FinDiagram, FinFunction, FinSet, Span, UnionFind,
                          all_functions, characteristic, colimit_of_diagram, coequalizer,
                          coproduct, curry, equalizer, evaluation, exponential, inclusion,
                          initial, limit_of_diagram, parse_function_table, preimage_subset,
                          product, pullback, pushout, quantifier_image, quotient,
                          render_function_table, render_tuple, span_compose, span_from_matrix,
                          span_to_matrix, subset_of, terminal, uncurry)


def S(*xs):
    return FinSet(xs)


def sets_upto(n, prefix):
    return [FinSet(f"{prefix}{i}" for i in range(k)) for k in range(n + 1)]


def is_bijection(f):
    return f.is_injective() and f.is_surjective()


# mediating maps, found by searching the apex rather than by decoding names

def into_product(P, legs, maps, Z):
    table = {}
    for z in Z:
        hits = [e for e in P if all(l(e) == m(z) for l, m in zip(legs, maps))]
        assert len(hits) == 1
        table[z] = hits[0]
    return FinFunction(Z, P, table)


def out_of_coproduct(C, legs, maps, Y):
    table = {}
    for leg, m in zip(legs, maps):
        for x in leg.dom:
            assert leg(x) not in table
            table[leg(x)] = m(x)
    return FinFunction(C, Y, table)


def fn_from_table(dom, cod, text):
    return FinFunction(dom, cod, parse_function_table(text))


# ---------------------------------------------------------------------------
# basics

def test_finset_rejects_duplicates_and_blank():
    with pytest.raises(ValueError):
        S("a", "a")
    with pytest.raises(ValueError):
        S("")


def test_finset_equality_ignores_order():
    assert S("a", "b") == S("b", "a")
    assert FinSet.n(3).elements == ("1", "2", "3")


def test_function_must_be_total_and_land_in_codomain():
    with pytest.raises(ValueError):
        FinFunction(S("a", "b"), S("x"), {"a": "x"})
    with pytest.raises(ValueError):
        FinFunction(S("a"), S("x"), {"a": "y"})


def test_composition_order():
    f = FinFunction(S("1", "2"), S("a", "b"), {"1": "a", "2": "a"})
    g = FinFunction(S("a", "b"), S("x"), {"a": "x", "b": "x"})
    assert f.then(g)("2") == "x"
    assert (g @ f) == f.then(g)


def test_all_functions_count():
    assert len(list(all_functions(FinSet.n(2), FinSet.n(3)))) == 9
    assert len(list(all_functions(FinSet(), FinSet()))) == 1
    assert len(list(all_functions(FinSet.n(1), FinSet()))) == 0


def test_inclusion_requires_subset():
    with pytest.raises(NotASubset):
        inclusion(S("z"), S("a"))


def test_union_find_classes():
    uf = UnionFind("abcd")
    uf.union("a", "c")
    uf.union("d", "c")
    assert sorted(map(sorted, uf.classes())) == [["a", "c", "d"], ["b"]]


# ---------------------------------------------------------------------------
# limits and colimits

def test_product_names_and_size():
    P, (p1, p2) = product(S("a", "b"), S("x", "y", "z"))
    assert len(P) == 6
    assert "(a,z)" in P and p1("(a,z)") == "a" and p2("(a,z)") == "z"


def test_terminal_and_initial():
    assert len(terminal()) == 1
    assert len(initial()) == 0


def test_coproduct_tags():
    C, i1, i2 = coproduct(S("a"), S("a", "b"))
    assert sorted(C) == ["inl:a", "inr:a", "inr:b"]
    assert i1("a") == "inl:a" and i2("b") == "inr:b"


def test_coequalizer_collapses_chain():
    X, Y = S("1", "2"), S("1", "2", "3")
    f = FinFunction(X, Y, {"1": "1", "2": "2"})
    g = FinFunction(X, Y, {"1": "2", "2": "3"})
    Q, q = coequalizer(f, g)
    assert len(Q) == 1
    assert f.then(q) == g.then(q)


def test_equalizer_and_pushout():
    X, Y = S("1", "2", "3"), S("a", "b")
    f = FinFunction(X, Y, {"1": "a", "2": "b", "3": "a"})
    g = FinFunction(X, Y, {"1": "a", "2": "a", "3": "a"})
    E, e = equalizer(f, g)
    assert sorted(E) == ["1", "3"]
    P, i1, i2 = pushout(f, g)
    assert f.then(i1) == g.then(i2)
    assert len(P) == 2  # b in the second codomain stays apart


def test_quotient_names_classes():
    Q, q = quotient(S("a", "b", "c"), [("a", "c")])
    assert len(Q) == 2 and q("a") == q("c") != q("b")


def test_limit_of_diagram_respects_arrows():
    A, B = S("1", "2"), S("x", "y")
    f = FinFunction(A, B, {"1": "x", "2": "x"})
    d = FinDiagram(("A", "B"), {"f": ("A", "B")}, {"A": A, "B": B}, {"f": f})
    L, legs = limit_of_diagram(d)
    assert len(L) == 2
    for e in L:
        assert f(legs["A"](e)) == legs["B"](e)


def test_colimit_of_diagram_is_sorted_and_glued():
    A, B = S("1", "2"), S("x", "y")
    f = FinFunction(A, B, {"1": "x", "2": "x"})
    d = FinDiagram(("A", "B"), {"f": ("A", "B")}, {"A": A, "B": B}, {"f": f})
    C, legs = colimit_of_diagram(d)
    assert list(C) == sorted(C) and len(C) == 2


def test_diagram_checks_commutations():
    A = S("1", "2")
    sw = FinFunction(A, A, {"1": "2", "2": "1"})
    with pytest.raises(ValueError):
        FinDiagram(("A",), {"s": ("A", "A")}, {"A": A}, {"s": sw},
                   commutations=[(("A", ("s",)), ("A", ()))])


# ---------------------------------------------------------------------------
# exponentials, currying, subobjects

def test_function_table_round_trip():
    text = render_function_table({"b": "1", "a": "2"})
    assert text == "[a↦2;b↦1]"
    assert parse_function_table(text) == {"a": "2", "b": "1"}
    assert parse_function_table("[]") == {}


def test_empty_to_empty_has_one_function():
    assert len(exponential(FinSet(), FinSet())) == 1


def test_curry_uncurry_inverse_on_all_maps():
    two = FinSet.n(2)
    XA, _ = product(two, two)
    maps = list(all_functions(XA, two))
    assert len(maps) == 16
    curried = {curry(f, two, two) for f in maps}
    assert len(curried) == 16
    for f in maps:
        assert uncurry(curry(f, two, two), two, two) == f


def test_evaluation_evaluates():
    A, Y = S("a", "b"), S("0", "1")
    ev = evaluation(A, Y)
    assert ev(render_tuple(("[a↦1;b↦0]", "b"))) == "0"


def test_characteristic_functions_match_subsets():
    B = S("1", "2", "3")
    chis = list(all_functions(B, OMEGA))
    assert len(chis) == 8
    for sub in itertools.chain.from_iterable(itertools.combinations(B, k) for k in range(4)):
        chi = characteristic(sub, B)
        assert set(subset_of(chi)) == set(sub)
        assert chi in chis


def test_characteristic_rejects_foreign():
    with pytest.raises(NotASubset):
        characteristic(["z"], S("a"))
    assert {TRUE, FALSE} == set(OMEGA)


def test_quantifier_images():
    f = FinFunction(S("1", "2", "3"), S("a", "b"), {"1": "a", "2": "a", "3": "b"})
    assert sorted(quantifier_image(f, {"1", "3"}, "exists")) == ["a", "b"]
    assert sorted(quantifier_image(f, {"1", "3"}, "forall")) == ["b"]
    assert sorted(preimage_subset(f, {"a"})) == ["1", "2"]


def test_forall_includes_empty_fibers():
    f = FinFunction(S("1"), S("a", "b"), {"1": "a"})
    assert sorted(quantifier_image(f, set(), "forall")) == ["b"]


# ---------------------------------------------------------------------------
# spans

def test_span_composition_multiplies_matrices():
    A = S("1", "2")
    s1 = span_from_matrix(A, A, [[1, 0], [1, 1]])
    s2 = span_from_matrix(A, A, [[1, 1], [0, 1]])
    assert span_to_matrix(span_compose(s1, s2)) == [[1, 1], [1, 2]]


def test_span_identity_and_mismatch():
    A, B = S("1", "2"), S("x")
    s = span_from_matrix(A, A, [[2, 0], [1, 3]])
    assert span_to_matrix(span_compose(Span.identity(A), s)) == [[2, 0], [1, 3]]
    with pytest.raises(MiddleMismatch):
        span_compose(span_from_matrix(A, B, [[1], [1]]), s)


# ---------------------------------------------------------------------------
# arithmetic of sets: every isomorphism is checked on all sets of size ≤ 3

SIZES = range(4)
A_SETS, B_SETS, C_SETS = sets_upto(3, "a"), sets_upto(3, "b"), sets_upto(3, "c")
ZERO, ONE = FinSet(), FinSet.n(1)


def test_iso_plus_zero():
    for A in A_SETS:
        C, i1, _ = coproduct(A, ZERO)
        assert is_bijection(i1)


def test_iso_plus_commutes():
    for A, B in itertools.product(A_SETS, B_SETS):
        AB, l1, r1 = coproduct(A, B)
        BA, l2, r2 = coproduct(B, A)
        assert is_bijection(out_of_coproduct(AB, [l1, r1], [r2, l2], BA))


def test_iso_plus_associates():
    for A, B, C in itertools.product(A_SETS, B_SETS, C_SETS):
        AB, a1, b1 = coproduct(A, B)
        L, ab, c1 = coproduct(AB, C)
        BC, b2, c2 = coproduct(B, C)
        R, a2, bc = coproduct(A, BC)
        inner = out_of_coproduct(AB, [a1, b1], [a2, b2.then(bc)], R)
        f = out_of_coproduct(L, [ab, c1], [inner, c2.then(bc)], R)
        assert is_bijection(f)


def test_iso_times_zero():
    for A in A_SETS:
        P, _ = product(A, ZERO)
        assert len(P) == 0


def test_iso_times_one():
    for A in A_SETS:
        P, (p1, _) = product(A, ONE)
        assert is_bijection(p1)


def test_iso_times_commutes():
    for A, B in itertools.product(A_SETS, B_SETS):
        AB, (pa, pb) = product(A, B)
        BA, legs = product(B, A)
        assert is_bijection(into_product(BA, legs, [pb, pa], AB))


def test_iso_times_associates():
    for A, B, C in itertools.product(A_SETS, B_SETS, C_SETS):
        AB, (pa, pb) = product(A, B)
        L, (pab, pc) = product(AB, C)
        BC, bc_legs = product(B, C)
        R, (ra, rbc) = product(A, BC)
        to_bc = into_product(BC, bc_legs, [pab.then(pb), pc], L)
        f = into_product(R, [ra, rbc], [pab.then(pa), to_bc], L)
        assert is_bijection(f)


def test_iso_distributes():
    for A, B, C in itertools.product(A_SETS, B_SETS, C_SETS):
        BC, ib, ic = coproduct(B, C)
        L, (la, lbc) = product(A, BC)
        AB, (ab_a, ab_b) = product(A, B)
        AC, (ac_a, ac_c) = product(A, C)
        R, jb, jc = coproduct(AB, AC)
        f = out_of_coproduct(R, [jb, jc], [
            into_product(L, [la, lbc], [ab_a, ab_b.then(ib)], AB),
            into_product(L, [la, lbc], [ac_a, ac_c.then(ic)], AC)], L)
        assert is_bijection(f)


def test_iso_power_zero():
    for A in A_SETS:
        assert len(exponential(ZERO, A)) == 1


def test_iso_power_one():
    for A in A_SETS:
        AA = exponential(ONE, A)
        ev = FinFunction(AA, A, {t: parse_function_table(t)["1"] for t in AA})
        assert is_bijection(ev)


def test_iso_zero_to_the_power():
    # the one exception: 0^0 has one element
    for A in A_SETS:
        assert len(exponential(A, ZERO)) == (1 if len(A) == 0 else 0)


def test_iso_one_to_the_power():
    for A in A_SETS:
        assert len(exponential(A, ONE)) == 1


def test_iso_power_of_sum():
    for A, B, C in itertools.product(A_SETS, B_SETS, C_SETS):
        BC, ib, ic = coproduct(B, C)
        L = exponential(BC, A)
        AB, AC = exponential(B, A), exponential(C, A)
        R, legs = product(AB, AC)
        restrict_b = FinFunction(L, AB, {
            h: render_function_table(ib.then(fn_from_table(BC, A, h)).as_dict()) for h in L})
        restrict_c = FinFunction(L, AC, {
            h: render_function_table(ic.then(fn_from_table(BC, A, h)).as_dict()) for h in L})
        assert is_bijection(into_product(R, legs, [restrict_b, restrict_c], L))


@pytest.mark.parametrize("sizes", list(itertools.product(SIZES, SIZES, SIZES)))
def test_iso_power_of_power(sizes):
    A, B, C = (s[:k] for s, k in zip((A_SETS[3], B_SETS[3], C_SETS[3]), sizes))
    A, B, C = FinSet(A), FinSet(B), FinSet(C)
    # (A^B)^C ≅ A^(B×C): uncurry through C then swap factors
    AB = exponential(B, A)
    L = exponential(C, AB)
    BxC, _ = product(B, C)
    R = exponential(BxC, A)
    table = {}
    for h in L:
        outer = parse_function_table(h)
        flat = {render_tuple((b, c)): parse_function_table(outer[c])[b] for b in B for c in C}
        table[h] = render_function_table(flat)
    assert is_bijection(FinFunction(L, R, table))


# ---------------------------------------------------------------------------
# pullback pasting and mono/epi

small_sets = st.integers(0, 3).map(lambda k: FinSet.n(k))


@st.composite
def functions(draw, dom, cod):
    if len(cod) == 0:
        return None if len(dom) else FinFunction(dom, cod, {})
    return FinFunction(dom, cod, {x: draw(st.sampled_from(cod.elements)) for x in dom})


@st.composite
def pasting_setup(draw):
    X = FinSet(f"x{i}" for i in range(draw(st.integers(1, 3))))
    Y = FinSet(f"y{i}" for i in range(draw(st.integers(1, 3))))
    Z = FinSet(f"z{i}" for i in range(draw(st.integers(1, 3))))
    W = FinSet(f"w{i}" for i in range(draw(st.integers(0, 3))))
    f = draw(functions(X, Y))
    g = draw(functions(Y, Z))
    h = draw(functions(W, Z))
    return f, g, h


@settings(max_examples=150, deadline=None)
@given(pasting_setup())
def test_pullback_pasting(setup):
    f, g, h = setup
    # right square: Q = Y ×_Z W; left square: P = X ×_Y Q
    Q, q1, q2 = pullback(g, h)
    P, p1, p2 = pullback(f, q1)
    # outer square: X ×_Z W along f;g and h
    O, o1, o2 = pullback(f.then(g), h)
    assert len(P) == len(O)
    comparison = into_product(O, [o1, o2], [p1, p2.then(q2)], P)
    assert is_bijection(comparison)


def is_mono(f):
    """Left-cancellable against every pair of maps from a test set of size ≤ 2."""
    for n in range(3):
        T = FinSet.n(n)
        maps = list(all_functions(T, f.dom))
        for u, v in itertools.product(maps, repeat=2):
            if u != v and u.then(f) == v.then(f):
                return False
    return True


def is_epi(f):
    T = FinSet.n(2)
    maps = list(all_functions(f.cod, T))
    for u, v in itertools.product(maps, repeat=2):
        if u != v and f.then(u) == f.then(v):
            return False
    return True


def test_mono_epi_match_injective_surjective():
    for m, n in itertools.product(range(4), range(4)):
        X, Y = FinSet.n(m), FinSet(f"y{i}" for i in range(n))
        for f in all_functions(X, Y):
            assert is_mono(f) == f.is_injective()
            assert is_epi(f) == f.is_surjective()


# ---------------------------------------------------------------------------
# universal properties with exhaustively enumerated mediating maps

def count_mediating_into(apex, legs, cone_maps, Z):
    return sum(all(u.then(l) == m for l, m in zip(legs, cone_maps))
               for u in all_functions(Z, apex))


def count_mediating_out(apex, legs, cocone_maps, Y):
    return sum(all(l.then(u) == m for l, m in zip(legs, cocone_maps))
               for u in all_functions(apex, Y))


SMALL = [FinSet.n(k) for k in range(3)]


def test_product_universal_property():
    for A, B, Z in itertools.product(SMALL, repeat=3):
        P, legs = product(A, B)
        for p, q in itertools.product(all_functions(Z, A), all_functions(Z, B)):
            assert count_mediating_into(P, legs, [p, q], Z) == 1


def test_coproduct_universal_property():
    for A, B, Y in itertools.product(SMALL, repeat=3):
        C, i1, i2 = coproduct(A, B)
        for p, q in itertools.product(all_functions(A, Y), all_functions(B, Y)):
            assert count_mediating_out(C, [i1, i2], [p, q], Y) == 1


def test_equalizer_universal_property():
    for X, Y in itertools.product(SMALL, repeat=2):
        for f, g in itertools.product(all_functions(X, Y), repeat=2):
            E, e = equalizer(f, g)
            for Z in SMALL:
                for z in all_functions(Z, X):
                    n = count_mediating_into(E, [e], [z], Z)
                    assert n == (1 if z.then(f) == z.then(g) else 0)


def test_coequalizer_universal_property():
    for X, Y in itertools.product(SMALL, repeat=2):
        for f, g in itertools.product(all_functions(X, Y), repeat=2):
            Q, q = coequalizer(f, g)
            for T in SMALL:
                for t in all_functions(Y, T):
                    n = count_mediating_out(Q, [q], [t], T)
                    assert n == (1 if f.then(t) == g.then(t) else 0)


def test_pullback_universal_property():
    for X, Y, Z in itertools.product(SMALL[1:], repeat=3):
        for f, g in itertools.product(all_functions(X, Z), all_functions(Y, Z)):
            P, p1, p2 = pullback(f, g)
            W = FinSet.n(2)
            for u, v in itertools.product(all_functions(W, X), all_functions(W, Y)):
                n = count_mediating_into(P, [p1, p2], [u, v], W)
                assert n == (1 if u.then(f) == v.then(g) else 0)


def test_pushout_universal_property():
    for W, X, Y in itertools.product(SMALL[1:], repeat=3):
        for f, g in itertools.product(all_functions(W, X), all_functions(W, Y)):
            P, i1, i2 = pushout(f, g)
            T = FinSet.n(2)
            for u, v in itertools.product(all_functions(X, T), all_functions(Y, T)):
                n = count_mediating_out(P, [i1, i2], [u, v], T)
                assert n == (1 if f.then(u) == g.then(v) else 0)
