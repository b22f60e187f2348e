import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from strategies import graph_frames, matrices, reflexive_relations, relations

from mrpcorr.relcalc import (
    DomainError, FiniteDomain, FiniteRelation, box_op, bond_closure, compose, dia_op, galois_neg,
    galois_pos, is_e_compatible, polar, relation_from_columns, semi, semi_i,
)
from mrpcorr.relcalc import _close_ext, _close_int


# ---------------------------------------------------------------------------
# domains and relations
# ---------------------------------------------------------------------------

def test_domain_rejects_duplicate_labels():
    with pytest.raises(DomainError):
        FiniteDomain(("a", "a"))


def test_domain_subset_and_names_roundtrip():
    d = FiniteDomain.of("xyz")
    v = d.subset(["z", "x"])
    assert v.tolist() == [True, False, True]
    assert d.names(v) == ("x", "z")
    with pytest.raises(DomainError):
        d.subset(["q"])


def test_domain_tags_distinguish_equal_labels():
    assert FiniteDomain.of("ab", "A") != FiniteDomain.of("ab", "X")
    assert FiniteDomain.of("ab") == FiniteDomain.of("ab")


def test_all_subsets_enumerates_powerset():
    rows = FiniteDomain.range(3).all_subsets()
    assert rows.shape == (8, 3)
    assert len({tuple(r) for r in rows.tolist()}) == 8


def test_relation_is_read_only_and_shape_checked():
    d = FiniteDomain.range(2)
    r = FiniteRelation.identity(d)
    with pytest.raises(ValueError):
        r.matrix[0, 1] = True
    with pytest.raises(DomainError):
        FiniteRelation(d, d, np.zeros((2, 3), dtype=bool))


def test_relation_pairs_and_membership():
    d = FiniteDomain.of("ab")
    r = FiniteRelation.from_pairs(d, [("a", "b")])
    assert ("a", "b") in r and ("b", "a") not in r
    assert r.pairs() == [("a", "b")]
    assert r.converse().pairs() == [("b", "a")]
    assert (~r).pairs() == [("a", "a"), ("b", "a"), ("b", "b")]
    assert r <= FiniteRelation.full(d)
    assert r.first_violation(FiniteRelation.empty(d)) == ("a", "b")
    assert hash(r) == hash(FiniteRelation.from_pairs(d, [("a", "b")]))


# ---------------------------------------------------------------------------
# Galois maps against the oracle
# ---------------------------------------------------------------------------

@given(st.data())
def test_polar_matches_definition(data):
    u, v = data.draw(st.integers(1, 5)), data.draw(st.integers(1, 5))
    t = data.draw(matrices(u, v))
    ys = data.draw(st.sets(st.integers(0, v - 1)))
    got = O.as_idx(polar(t, O.as_vec(ys, v)))
    assert got == O.pos0(O.as_set(t), ys, u)


@given(relations(), st.data())
def test_galois_maps_match_oracle(r, data):
    n = len(r.source)
    s = data.draw(st.sets(st.integers(0, n - 1)))
    vec = O.as_vec(s, n)
    rs = O.as_set(r)
    assert O.as_idx(galois_pos(r, 0, vec)) == O.pos0(rs, s, n)
    assert O.as_idx(galois_pos(r, 1, vec)) == O.pos1(rs, s, n)
    assert O.as_idx(galois_neg(r, 0, vec)) == O.neg0(rs, s, n)
    assert O.as_idx(galois_neg(r, 1, vec)) == O.neg1(rs, s, n)
    assert O.as_idx(box_op(r, vec)) == O.box(rs, s, n)
    assert O.as_idx(dia_op(r, vec)) == O.dia(rs, s, n)


def test_galois_accepts_label_iterables():
    d = FiniteDomain.of("ab")
    r = FiniteRelation.from_pairs(d, [("a", "b")])
    assert galois_pos(r, 0, ["b"]).tolist() == [True, False]
    with pytest.raises(ValueError):
        galois_pos(r, 2, ["b"])  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Basic Galois-connection properties, on complements as well
# ---------------------------------------------------------------------------

@st.composite
def galois_instances(draw):
    u, v = draw(st.integers(1, 6)), draw(st.integers(1, 6))
    t = FiniteRelation(FiniteDomain.range(u), FiniteDomain.range(v), draw(matrices(u, v)))
    sub = lambda k: st.lists(st.booleans(), min_size=k, max_size=k).map(lambda b: np.array(b, bool))  # noqa: E731
    return t, draw(sub(u)), draw(sub(u)), draw(sub(v)), draw(sub(v))


def _le(a, b):
    return bool(np.all(~a | b))


@settings(max_examples=300)
@given(galois_instances(), st.sampled_from([galois_pos, galois_neg]))
def test_basic_galois_properties(inst, op):
    t, b1, b2, y1, y2 = inst
    g0 = lambda y: op(t, 0, y)  # noqa: E731
    g1 = lambda b: op(t, 1, b)  # noqa: E731
    # antitone
    assert _le(g0(y1 | y2), g0(y1)) and _le(g1(b1 | b2), g1(b1))
    # Galois connection
    assert _le(b1, g0(y1)) == _le(y1, g1(b1))
    # extensive closure
    assert _le(b1, g0(g1(b1))) and _le(y1, g1(g0(y1)))
    # triple identity
    assert np.array_equal(g1(g0(g1(b1))), g1(b1)) and np.array_equal(g0(g1(g0(y1))), g0(y1))
    # unions to intersections
    assert np.array_equal(g0(y1 | y2), g0(y1) & g0(y2))
    assert np.array_equal(g1(b1 | b2), g1(b1) & g1(b2))


@given(relations(), st.data())
def test_square_brackets_are_modal_operators(r, data):
    n = len(r.source)
    w = np.array(data.draw(st.lists(st.booleans(), min_size=n, max_size=n)), dtype=bool)
    assert np.array_equal(galois_neg(r, 0, ~w), box_op(r, w))
    assert np.array_equal(~galois_neg(r, 0, w), dia_op(r, w))


# ---------------------------------------------------------------------------
# Compositions
# ---------------------------------------------------------------------------

@given(st.data())
def test_compositions_match_oracle(data):
    n = data.draw(st.integers(1, 4))
    r, t = data.draw(relations(n=n)), data.draw(relations(n=n))
    e = data.draw(reflexive_relations(n=n))
    rs, ts, es = O.as_set(r), O.as_set(t), O.as_set(e)
    assert O.as_set(compose("circ", r, t)) == O.circ(rs, ts)
    assert O.as_set(compose("ast", r, t)) == O.ast(rs, ts, n)
    assert O.as_set(compose("star", r, t)) == O.ast(rs, ts, n)
    assert O.as_set(compose("dia_e", r, t, e)) == O.dia_e(rs, ts, es, n)
    assert O.as_set(compose("box_e", r, t, e)) == O.box_e(rs, ts, es, n)


def test_star_is_not_ordinary_composition():
    d = FiniteDomain.range(2)
    full, delta = FiniteRelation.full(d), FiniteRelation.identity(d)
    assert compose("circ", delta, full) == full
    # x (R ⋆ T) a iff x ∉ R^[0][T^[0][a]]: with T = Z×Z, T^[0][a] = ∅ and R^[0][∅] = Z
    assert compose("star", delta, full) == FiniteRelation.empty(d)


@given(st.data())
def test_mediated_compositions_reduce_to_circ_on_the_diagonal(data):
    n = data.draw(st.integers(1, 5))
    r, t = data.draw(relations(n=n)), data.draw(relations(n=n))
    delta = FiniteRelation.identity(r.source)
    c = compose("circ", r, t)
    assert compose("dia_e", r, t, delta) == c
    assert compose("box_e", r, t, delta) == c


def test_composition_errors():
    d2, d3 = FiniteDomain.range(2), FiniteDomain.range(3)
    r2, r3 = FiniteRelation.full(d2), FiniteRelation.full(d3)
    with pytest.raises(DomainError):
        compose("circ", r2, r3)
    with pytest.raises(DomainError):
        compose("dia_e", r2, r2)
    with pytest.raises(DomainError):
        compose("box_e", r2, r2, FiniteRelation.empty(d2))
    with pytest.raises(ValueError):
        compose("nope", r2, r2)  # type: ignore[arg-type]


def test_ast_is_not_associative():
    d = FiniteDomain.range(2)
    r, t, u = FiniteRelation.full(d), FiniteRelation.identity(d), FiniteRelation.empty(d)
    assert compose("ast", r, compose("ast", t, u)) == FiniteRelation.empty(d)
    assert compose("ast", compose("ast", r, t), u) == FiniteRelation.full(d)


# ---------------------------------------------------------------------------
# Heterogeneous compositions
# ---------------------------------------------------------------------------

@given(st.data())
def test_semi_i_matches_oracle(data):
    na, nx = data.draw(st.integers(1, 4)), data.draw(st.integers(1, 4))
    a, x = FiniteDomain.range(na), FiniteDomain.of([f"x{k}" for k in range(nx)])
    i = FiniteRelation(a, x, data.draw(matrices(na, nx)))
    b1, b2 = (FiniteRelation(a, x, data.draw(matrices(na, nx))) for _ in range(2))
    d1, d2 = (FiniteRelation(x, a, data.draw(matrices(nx, na))) for _ in range(2))
    i_s = O.as_set(i)
    assert O.as_set(semi_i(b1, b2, i)) == O.semi_i_axx(O.as_set(b1), O.as_set(b2), i_s, na, nx)
    assert O.as_set(semi_i(d1, d2, i)) == O.semi_i_xxa(O.as_set(d1), O.as_set(d2), i_s, na, nx)
    assert O.as_set(semi(b1, d1)) == O.semi(O.as_set(b1), O.as_set(d1), na, nx, na)
    assert O.as_set(semi(d1, b1)) == O.semi(O.as_set(d1), O.as_set(b1), nx, na, nx)


def test_semi_i_needs_explicit_sort_on_equal_domains():
    a = FiniteDomain.of("ab", "A")
    x = FiniteDomain.of("ab", "X")
    i = FiniteRelation(a, x, np.array([[1, 0], [1, 1]], bool))
    beta = FiniteRelation(a, x, np.array([[0, 1], [1, 0]], bool))
    inferred = semi_i(beta, beta, i)
    same = FiniteDomain.of("ab")
    i2 = FiniteRelation(same, same, i.matrix)
    beta2 = FiniteRelation(same, same, beta.matrix)
    assert np.array_equal(semi_i(beta2, beta2, i2, sort="AxX").matrix, inferred.matrix)
    with pytest.raises(DomainError):
        semi_i(beta, beta.converse(), i)


def test_semi_rejects_mismatched_middle_domain():
    a, x = FiniteDomain.range(2), FiniteDomain.range(3)
    with pytest.raises(DomainError):
        semi(FiniteRelation.full(a, x), FiniteRelation.full(a, x))


# ---------------------------------------------------------------------------
# E-compatibility
# ---------------------------------------------------------------------------

@given(st.data())
def test_compatibility_matches_oracle(data):
    n = data.draw(st.integers(1, 4))
    e, r = data.draw(reflexive_relations(n=n)), data.draw(relations(n=n))
    for o in ("box", "dia"):
        assert bool(is_e_compatible(r, e, o)) == O.is_compatible(O.as_set(r), O.as_set(e), n, o)


def test_compatibility_report_names_the_failure():
    d = FiniteDomain.of("ab")
    e = FiniteRelation.from_pairs(d, [("a", "a"), ("b", "b"), ("a", "b")])
    bad = FiniteRelation.from_pairs(d, [("a", "a")])
    reports = [is_e_compatible(bad, e, o) for o in ("box", "dia")]
    failing = [rep for rep in reports if not rep]
    assert failing, "some orientation must reject this relation"
    text = failing[0].describe()
    assert "fails at" in text and failing[0].element in "ab"
    assert is_e_compatible(FiniteRelation.full(d), e, "box").describe() == "ok"
    with pytest.raises(DomainError):
        is_e_compatible(bad, FiniteRelation.empty(d), "box")
    with pytest.raises(ValueError):
        is_e_compatible(bad, e, "up")  # type: ignore[arg-type]


def test_every_relation_is_compatible_with_the_diagonal():
    d = FiniteDomain.range(3)
    delta = FiniteRelation.identity(d)
    rng = np.random.default_rng(0)
    for _ in range(50):
        r = FiniteRelation(d, d, rng.random((3, 3)) < 0.5)
        assert is_e_compatible(r, delta, "box") and is_e_compatible(r, delta, "dia")


@given(st.data())
def test_bond_closure_yields_compatible_relations(data):
    n = data.draw(st.integers(1, 4))
    e = data.draw(reflexive_relations(n=n))
    seed = data.draw(matrices(n, n))
    for o in ("box", "dia"):
        m = bond_closure(seed, e.matrix, o)
        assert np.all(m | ~seed), "closure only grows the complement"
        r = FiniteRelation(e.source, e.source, ~m)
        assert is_e_compatible(r, e, o)


def test_relation_from_columns_inverts_columns():
    d = FiniteDomain.range(3)
    cols = [np.array([1, 0, 0], bool), np.array([0, 0, 0], bool), np.array([1, 1, 1], bool)]
    r = relation_from_columns(d, cols)
    for k, c in enumerate(cols):
        assert np.array_equal(galois_neg(r, 0, [str(k)]), c)


# ---------------------------------------------------------------------------
# Algebra of the mediated compositions on compatible relations
# ---------------------------------------------------------------------------

def _compatible_triple(f, orientation, rng):
    from mrpcorr.frames import random_compatible

    return [random_compatible(f.e, orientation, rng) for _ in range(3)]


@settings(max_examples=60)
@given(graph_frames(max_n=4), st.integers(0, 2**32 - 1))
def test_units_and_associativity(f, seed):
    rng = np.random.default_rng(seed)
    e, dd = f.e, f.d
    r, t, u = _compatible_triple(f, "box", rng)
    assert compose("box_e", r, e, e) == r and compose("box_e", e, r, e) == r
    assert compose("box_e", r, compose("box_e", t, u, e), e) == compose("box_e", compose("box_e", r, t, e), u, e)
    r, t, u = _compatible_triple(f, "dia", rng)
    assert compose("dia_e", r, dd, e) == r and compose("dia_e", dd, r, e) == r
    assert compose("dia_e", r, compose("dia_e", t, u, e), e) == compose("dia_e", compose("dia_e", r, t, e), u, e)


@settings(max_examples=60)
@given(graph_frames(max_n=4), st.integers(0, 2**32 - 1))
def test_closure_under_composition(f, seed):
    rng = np.random.default_rng(seed)
    em = f.e.matrix
    r, t, _ = _compatible_triple(f, "box", rng)
    assert is_e_compatible(compose("box_e", r, t, f.e), f.e, "box")
    cols = (~compose("ast", r, t).matrix).T
    assert not np.any(_close_ext(em, cols) & ~cols)
    r, t, _ = _compatible_triple(f, "dia", rng)
    assert is_e_compatible(compose("dia_e", r, t, f.e), f.e, "dia")
    cols = (~compose("ast", r, t).matrix).T
    assert not np.any(_close_int(em, cols) & ~cols)


def test_ast_breaks_the_row_condition():
    # the ∗ product of two ◇-compatible relations need not satisfy the row condition
    d = FiniteDomain.range(2)
    e = FiniteRelation.from_pairs(d, [("0", "0"), ("1", "0"), ("1", "1")])
    r = FiniteRelation.full(d)
    t = FiniteRelation.from_pairs(d, [("0", "1"), ("1", "1")])
    assert is_e_compatible(r, e, "dia") and is_e_compatible(t, e, "dia")
    rt = compose("ast", r, t)
    assert O.as_set(rt) == {(0, 0), (1, 0)}
    rep = is_e_compatible(rt, e, "dia")
    assert not rep and rep.condition.startswith("(R^[1][y])")
