import itertools

import pytest

from predual.algebra import (
    AlgMorphism,
    BoundExceeded,
    StructureError,
    all_morphisms,
    are_isomorphic,
    check_morphism,
    combine_elements,
    compose,
    enumerate_algebras,
    factorize,
    free_algebra,
    generated_subalgebra,
    identity_morphism,
    make_algebra,
    make_morphism,
    pairing,
    product,
    pushforward_order,
    validate_algebra,
)


def two_chain_jsl0():
    return make_algebra("JSL0", 2, {"join": ((0, 1), (1, 1)), "zero": 0})


def two_element_ba():
    return make_algebra(
        "BA",
        2,
        {
            "meet": ((0, 0), (0, 1)),
            "join": ((0, 1), (1, 1)),
            "not": (1, 0),
            "zero": 0,
            "one": 1,
        },
    )


def chain_jsl0(n):
    join = tuple(tuple(max(x, y) for y in range(n)) for x in range(n))
    return make_algebra("JSL0", n, {"join": join, "zero": 0})


def test_two_element_ba_is_valid():
    assert validate_algebra(two_element_ba()) == []


def test_br_idempotence_violation_is_reported():
    add = ((0, 1), (1, 0))
    mul = ((0, 0), (0, 0))  # 1*1 = 0 breaks x*x = x
    alg = make_algebra("BR", 2, {"add": add, "mul": mul, "zero": 0})
    assert any("idempotence" in msg for msg in validate_algebra(alg))


def test_jsl0_associativity_violation_carries_witness():
    # perturb one entry of the valid 3-chain join table
    join = [[max(x, y) for y in range(3)] for x in range(3)]
    join[1][2] = 1
    alg = make_algebra("JSL0", 3, {"join": join, "zero": 0})
    msgs = validate_algebra(alg)
    assert any("associativity violation at (" in m or "commutative" in m for m in msgs)


def test_malformed_tables_raise_structural_error():
    with pytest.raises(StructureError):
        make_algebra("JSL0", 3, {"join": ((0, 1), (1, 1)), "zero": 0})
    with pytest.raises(StructureError):
        make_algebra("JSL0", 2, {"join": ((0, 1), (1, 1))})
    with pytest.raises(StructureError):
        make_algebra("SET", 2, {}, order=((1, 0), (0, 1)))


def test_check_morphism_identity_and_violations():
    ba = two_element_ba()
    ok, _ = check_morphism(identity_morphism(ba))
    assert ok
    const_top = make_morphism(ba, ba, (1, 1))
    ok, reason = check_morphism(const_top)
    assert not ok and reason is not None
    swap = make_morphism(two_chain_jsl0(), two_chain_jsl0(), (1, 0))
    ok, reason = check_morphism(swap)
    assert not ok and reason is not None


def test_product_of_two_element_bas_is_free_ba_on_one_generator():
    ba = two_element_ba()
    prod, p1, p2 = product(ba, ba)
    assert prod.size == 4
    assert validate_algebra(prod) == []
    assert check_morphism(p1)[0] and check_morphism(p2)[0]
    free = enumerate_algebras("BA", 4)[0]
    assert are_isomorphic(prod, free) is not None


def test_product_with_terminal_is_isomorphic():
    a = chain_jsl0(3)
    one = make_algebra("JSL0", 1, {"join": ((0,),), "zero": 0})
    prod, _, _ = product(a, one)
    assert are_isomorphic(prod, a) is not None


def test_product_of_chains_in_pos_is_grid():
    chain = make_algebra("POS", 2, {}, ((1, 1), (0, 1)))
    grid, _, _ = product(chain, chain)
    # 2x2 grid: bottom, two incomparable middles, top
    incomparable = sum(
        1
        for x in range(4)
        for y in range(4)
        if x != y and not grid.order[x][y] and not grid.order[y][x]
    )
    assert incomparable == 2


def test_generated_subalgebra_full_seed_is_identity():
    a = chain_jsl0(3)
    inc = generated_subalgebra(a, range(3))
    assert inc.table == (0, 1, 2)


def test_generated_subalgebra_ba_atom():
    ba = enumerate_algebras("BA", 4)[0]  # powerset on 2 atoms
    inc = generated_subalgebra(ba, {1})  # one atom
    # atom, complement, bottom, top
    assert inc.source.size == 4


def test_generated_subalgebra_vect2_span():
    v2, basis = free_algebra("VECT2", ["x", "y"])
    inc = generated_subalgebra(v2, {basis[0]})
    assert inc.source.size == 2
    assert set(inc.table) == {0, basis[0]}


def test_factorize_injective_and_surjective_edges():
    a = chain_jsl0(3)
    f = identity_morphism(a)
    pair = factorize(f)
    assert pair.epi.table == (0, 1, 2) and pair.mono.table == (0, 1, 2)
    assert compose(pair.mono, pair.epi).table == f.table


def test_factorize_three_chain_collapse():
    three = chain_jsl0(3)
    two = chain_jsl0(2)
    f = make_morphism(three, two, (0, 1, 1))
    assert check_morphism(f)[0]
    pair = factorize(f)
    assert pair.epi.target.size == 2
    assert pair.mono.table == (0, 1)
    assert compose(pair.mono, pair.epi).table == f.table


def test_free_jsl0_on_one_generator_is_two_chain():
    alg, inj = free_algebra("JSL0", ["a"])
    assert alg.size == 2 and inj == (1,)
    assert are_isomorphic(alg, chain_jsl0(2)) is not None


def test_free_vect2_on_two_generators():
    alg, inj = free_algebra("VECT2", ["a", "b"])
    assert alg.size == 4
    assert alg.op("add")[inj[0]][inj[1]] == 3


def test_free_set_star_adds_basepoint():
    alg, inj = free_algebra("SET_STAR", ["a"])
    assert alg.size == 2
    assert alg.op("point") == 0 and inj == (1,)


def test_enumerate_ba_4_is_unique():
    assert len(enumerate_algebras("BA", 4)) == 1


def test_enumerate_jsl0_3_is_the_chain():
    # oracle: brute force over all idempotent commutative associative tables
    # with identity 0 on {0,1,2} yields exactly one class, the 3-chain
    # (any join making two elements "comparable to a top" is a relabeled chain)
    algs = enumerate_algebras("JSL0", 3)
    assert len(algs) == 1
    assert are_isomorphic(algs[0], chain_jsl0(3)) is not None


def test_enumerate_set_2_unique():
    assert len(enumerate_algebras("SET", 2)) == 1


def test_enumerate_bounds():
    with pytest.raises(BoundExceeded):
        enumerate_algebras("JSL0", 7)
    with pytest.raises(BoundExceeded):
        enumerate_algebras("BA", 6)


def test_are_isomorphic_examples():
    a = chain_jsl0(3)
    assert are_isomorphic(a, a).table == (0, 1, 2)
    # two presentations of the 4-element BA with atoms swapped
    ba = enumerate_algebras("BA", 4)[0]
    perm = (0, 2, 1, 3)
    ops = {}
    for name, arity in (("meet", 2), ("join", 2)):
        t = ba.op(name)
        ops[name] = tuple(
            tuple(perm[t[perm.index(x)][perm.index(y)]] for y in range(4))
            for x in range(4)
        )
    ops["not"] = tuple(perm[ba.op("not")[perm.index(x)]] for x in range(4))
    ops["zero"] = perm[ba.op("zero")]
    ops["one"] = perm[ba.op("one")]
    relabeled = make_algebra("BA", 4, ops)
    assert are_isomorphic(ba, relabeled) is not None
    # chain vs non-chain semilattice: distinct comparability graphs
    chain4 = chain_jsl0(4)
    diamond = next(
        x for x in enumerate_algebras("JSL0", 4) if are_isomorphic(x, chain4) is None
    )
    assert are_isomorphic(chain4, diamond) is None


def test_all_morphisms_matches_direct_count_for_sets():
    s2 = make_algebra("SET", 2, {})
    s3 = make_algebra("SET", 3, {})
    assert len(all_morphisms(s2, s3)) == 9


def test_combine_elements():
    v2, basis = free_algebra("VECT2", ["a", "b"])
    assert combine_elements(v2, [(basis[0], 1), (basis[1], 1)]) == 3
    assert combine_elements(v2, []) == 0
    j = chain_jsl0(3)
    assert combine_elements(j, [(1, 1), (2, 1)]) == 2
    assert combine_elements(j, []) == 0
    star, inj = free_algebra("SET_STAR", ["a"])
    assert combine_elements(star, []) == 0
    assert combine_elements(star, [(inj[0], 1)]) == inj[0]


def test_pushforward_order_detects_broken_antisymmetry():
    order = ((1, 1, 0), (0, 1, 0), (0, 0, 1))  # 0 <= 1, 2 incomparable
    ok = pushforward_order(order, [0, 0, 1], 2)
    assert ok is not None
    cyc = ((1, 1, 0), (0, 1, 1), (0, 0, 1))  # chain 0 <= 1 <= 2
    assert pushforward_order(cyc, [0, 1, 0], 2) is None


# -- bounded structural invariants --------------------------------------------


def _small_d_algebras():
    for tag, n_max in (("JSL0", 4), ("SET", 3), ("POS", 3)):
        for n in range(1, n_max + 1):
            yield from enumerate_algebras(tag, n)


def test_factorize_recomposes_for_enumerated_morphisms():
    algs = [a for a in _small_d_algebras() if a.size <= 4]
    for a in algs:
        for b in algs:
            if a.tag != b.tag:
                continue
            for f in all_morphisms(a, b):
                pair = factorize(f)
                assert compose(pair.mono, pair.epi).table == f.table
                assert len(set(pair.epi.table)) == pair.epi.target.size
                assert len(set(pair.mono.table)) == pair.mono.source.size


def test_pairing_commutes_with_projections():
    a = chain_jsl0(2)
    b = chain_jsl0(3)
    prod, p1, p2 = product(a, b)
    x = chain_jsl0(2)
    for f in all_morphisms(x, a):
        for g in all_morphisms(x, b):
            h = pairing(f, g, prod)
            assert check_morphism(h)[0]
            assert compose(p1, h).table == f.table
            assert compose(p2, h).table == g.table


def test_free_algebra_universal_property_bounded():
    # for every enumerated D-algebra of size <= 4 and map from X (|X| <= 2),
    # exactly one morphism from the free algebra extends it
    for tag in ("JSL0", "SET"):
        targets = [x for n in range(1, 5) for x in enumerate_algebras(tag, n)]
        for k in (1, 2):
            free, inj = free_algebra(tag, [f"x{i}" for i in range(k)])
            for target in targets:
                for images in itertools.product(range(target.size), repeat=k):
                    extensions = [
                        f
                        for f in all_morphisms(free, target)
                        if all(f.table[inj[i]] == images[i] for i in range(k))
                    ]
                    assert len(extensions) == 1


def test_enumerated_algebras_validate_and_are_pairwise_noniso():
    for tag, n in (("JSL0", 4), ("POS", 4), ("DL01", 5), ("BA", 8), ("BR", 4)):
        algs = enumerate_algebras(tag, n)
        assert algs == enumerate_algebras(tag, n)  # stable across runs
        for a in algs:
            assert validate_algebra(a) == []
        for i, a in enumerate(algs):
            for b in algs[i + 1 :]:
                assert are_isomorphic(a, b) is None
