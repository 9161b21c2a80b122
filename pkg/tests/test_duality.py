import pytest

from predual.algebra import (
    AlgMorphism,
    all_morphisms,
    are_isomorphic,
    check_morphism,
    enumerate_algebras,
    free_algebra,
    identity_morphism,
    make_algebra,
    make_morphism,
    validate_algebra,
)
from predual.duality import (
    MAIN_PAIRS,
    atoms_of,
    canonical_constants,
    dual_morphism,
    dual_object,
    eta,
    join_irreducibles,
    verify_preduality,
)


def two_chain_jsl0():
    return make_algebra("JSL0", 2, {"join": ((0, 1), (1, 1)), "zero": 0})


def four_element_br():
    # powerset ring on 2 atoms: {0, a, b, 1}
    return enumerate_algebras("BR", 4)[0]


def test_dual_of_four_element_ba_is_two_element_set():
    ba = enumerate_algebras("BA", 4)[0]
    d = dual_object("BA", ba)
    assert d.tag == "SET" and d.size == 2


def test_dual_of_jsl0_chain_is_reversed_chain():
    chain = two_chain_jsl0()
    d = dual_object("JSL0", chain)
    # opposite semilattice: join becomes meet (min), zero becomes the old top
    assert d.op("join")[0][1] == 0
    assert d.op("zero") == 1
    assert validate_algebra(d) == []


def test_dual_of_four_element_br_is_three_point_pointed_set():
    br = four_element_br()
    assert atoms_of(br) == [1, 2]
    d = dual_object("BR", br)
    assert d.tag == "SET_STAR" and d.size == 3


def test_dual_morphism_of_identity_is_identity():
    ba = enumerate_algebras("BA", 4)[0]
    d = dual_morphism("BA", identity_morphism(ba))
    assert d.table == (0, 1)


def test_dual_of_ba_inclusion_collapses_atoms():
    # inclusion of the 2-element BA into the 4-element BA (0,1 -> bottom,top)
    two = enumerate_algebras("BA", 2)[0]
    four = enumerate_algebras("BA", 4)[0]
    inc = make_morphism(two, four, (0, 3))
    assert check_morphism(inc)[0]
    d = dual_morphism("BA", inc)
    # both atoms of the 4-element BA map to the unique atom of 2
    assert d.table == (0, 0)


def test_dual_of_br_morphism_uses_star_branch():
    # h from the 4-element ring to the 2-element ring, h(a)=1, h(b)=0
    four = four_element_br()
    two = enumerate_algebras("BR", 2)[0]
    h = make_morphism(four, two, (0, 1, 0, 1))
    assert check_morphism(h)[0]
    d = dual_morphism("BR", h)
    # dual sends the atom 1 of the 2-ring to a (index 1), star to star
    assert d.table[0] == 0
    assert d.table[1] == 1


def test_br_star_branch_triggers_exactly_when_nothing_above():
    for n in (2, 4, 8):
        for m in (2, 4):
            rings = enumerate_algebras("BR", n)
            targets = enumerate_algebras("BR", m)
            for q in rings:
                for r in targets:
                    for h in all_morphisms(q, r):
                        d = dual_morphism("BR", h)
                        ats_r = atoms_of(r)
                        for i, rr in enumerate(ats_r):
                            above = [
                                x
                                for x in range(q.size)
                                if r.op("mul")[rr][h.table[x]] == rr
                            ]
                            assert (d.table[i + 1] == 0) == (not above)


def test_canonical_constants_ba():
    b = canonical_constants("BA")
    assert b.one_C.size == 4 and b.O_C.size == 2
    assert b.one_D.size == 1 and b.O_D.size == 2
    assert b.one_out_D == 1
    assert b.ident == (0, 1)


def test_canonical_constants_vect2():
    b = canonical_constants("VECT2")
    assert b.one_C == b.O_C
    assert b.one_C.size == 2
    assert b.one_out_D == 1


def test_canonical_constants_br_star_is_zero():
    b = canonical_constants("BR")
    assert b.O_D.tag == "SET_STAR"
    assert b.O_D.op("point") == 0  # star identified with 0 in O_C
    assert b.one_out_D == 1


def test_canonical_constants_dl01_zero_is_top():
    b = canonical_constants("DL01")
    # O_D is the 2-chain in which "0" (the reject output) is the top element
    assert b.O_D.tag == "POS"
    assert b.one_out_D == 1
    assert b.O_D.order[1][0] and not b.O_D.order[0][1]


def test_canonical_constants_jsl0_semantic_labels():
    b = canonical_constants("JSL0")
    # evaluation semantics: join = or, zero = reject
    assert b.O_D.op("join")[0][1] == 1
    assert b.O_D.op("zero") == 0


@pytest.mark.parametrize("pair", MAIN_PAIRS + ("JSL01",))
def test_bundle_duals_match_stored_constants(pair):
    b = canonical_constants(pair)
    assert dual_object(pair, b.O_C) == b.one_D
    raw = dual_object(pair, b.one_C)
    assert are_isomorphic(raw, b.O_D) is not None or raw.tag in ("SET", "POS", "SET_STAR", "JSL")
    # the dual of 1_{O_C} corresponds to the element 1 of O_D
    pos = dual_morphism(pair, b.out_one_C).table[b.gen_one_D]
    assert b.relabel_OD[pos] == b.one_out_D


@pytest.mark.parametrize(
    "pair,max_size",
    [("BA", 8), ("DL01", 5), ("JSL0", 4), ("VECT2", 4), ("BR", 8), ("JSL01", 4)],
)
def test_verify_preduality_passes(pair, max_size):
    report = verify_preduality(pair, max_size)
    assert report["ok"], report["failures"][:3]
    assert report["morphisms"] > 0


def test_verify_preduality_detects_corruption():
    def corrupted(pair, h):
        d = dual_morphism(pair, h)
        if d.source.size >= 2 and len(set(d.table)) >= 2:
            t = list(d.table)
            t[0], t[1] = t[1], t[0]
            return AlgMorphism(d.source, d.target, tuple(t))
        return d

    report = verify_preduality("BA", 4, dual_morphism_fn=corrupted)
    assert not report["ok"]
    assert any(f["law"] for f in report["failures"])
    assert all("witness" in f for f in report["failures"])


def test_jsl0_dual_morphisms_are_meet_preserving_pointwise():
    # hat h is well-defined and meet-preserving, pointwise
    algs = [a for n in (1, 2, 3, 4) for a in enumerate_algebras("JSL0", n)]
    for q in algs:
        for r in algs:
            for h in all_morphisms(q, r):
                d = dual_morphism("JSL0", h)
                ok, why = check_morphism(d)
                assert ok, why


def test_double_dual_eta_is_natural_iso_on_both_sides():
    for pair, max_size in (("BA", 4), ("JSL0", 3), ("BR", 4), ("JSL01", 3)):
        report = verify_preduality(pair, max_size)
        assert report["ok"]


def test_jsl01_pair_is_full_up_to_size_5():
    report = verify_preduality("JSL01", 5)
    assert report["ok"], report["failures"][:3]
    # fullness = hom-count equality + faithfulness, both part of the report
    assert all(c == d for (_, _, c, d) in report["hom_counts"])


def test_eta_identity_for_self_dual_pairs():
    v, _ = free_algebra("VECT2", ["x", "y"])
    assert eta("VECT2", v).table == tuple(range(4))
    j = two_chain_jsl0()
    assert eta("JSL0", j).table == (0, 1)


def test_join_irreducibles_of_chain():
    join = tuple(tuple(max(x, y) for y in range(3)) for x in range(3))
    meet = tuple(tuple(min(x, y) for y in range(3)) for x in range(3))
    dl = make_algebra("DL01", 3, {"meet": meet, "join": join, "zero": 0, "one": 2})
    assert join_irreducibles(dl) == [1, 2]
    d = dual_object("DL01", dl)
    assert d.size == 2 and d.order[0][1]
