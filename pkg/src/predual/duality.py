"""The six predual pairs: dualization of finite objects and morphisms.

Pairs are named by their C-side tag:

    BA     <->  SET        (Stone: atoms)
    DL01   <->  POS        (Birkhoff: join-irreducibles / downsets)
    JSL0   <->  JSL0       (self-dual: opposite semilattice)
    VECTp  <->  VECTp      (dual space, fixed standard basis)
    BR     <->  SET_STAR   (atoms plus a fresh basepoint)
    JSL01  <->  JSL        (drop the top / adjoin a bottom and reverse)

Dual objects reuse ascending carrier-index order for atoms and
join-irreducibles, so dualization is deterministic and serializable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import (
    AlgMorphism,
    FinAlgebra,
    StructureError,
    alg_leq,
    all_morphisms,
    check_morphism,
    compose,
    enumerate_algebras,
    free_algebra,
    identity_morphism,
    make_algebra,
    vect_prime,
)

PAIR_D_SIDE = {
    "BA": "SET",
    "DL01": "POS",
    "JSL0": "JSL0",
    "VECT2": "VECT2",
    "VECT3": "VECT3",
    "VECT5": "VECT5",
    "BR": "SET_STAR",
    "JSL01": "JSL",
}

PAIRS = tuple(sorted(PAIR_D_SIDE))
MAIN_PAIRS = ("BA", "DL01", "JSL0", "VECT2", "BR")


def c_tag(pair: str) -> str:
    if pair not in PAIR_D_SIDE:
        raise StructureError(f"unknown pair {pair!r}")
    return pair


def d_tag(pair: str) -> str:
    return PAIR_D_SIDE[c_tag(pair)]


def side_of(pair: str, tag: str) -> str:
    """Which side of the pair a tag lives on ("C", "D", or "SELF")."""
    c, d = c_tag(pair), d_tag(pair)
    if c == d:
        return "SELF" if tag == c else _bad_side(pair, tag)
    if tag == c:
        return "C"
    if tag == d:
        return "D"
    return _bad_side(pair, tag)


def _bad_side(pair, tag):
    raise StructureError(f"tag {tag} does not belong to pair {pair}")


# ---------------------------------------------------------------------------
# atoms / irreducibles


def atoms_of(a: FinAlgebra) -> list:
    """Minimal nonzero elements of a BA or BR in its induced order."""
    zero = a.op("zero")
    nonzero = [x for x in a.carrier() if x != zero]
    return [
        x
        for x in nonzero
        if all(not alg_leq(a, y, x) for y in nonzero if y != x)
    ]


def join_irreducibles(a: FinAlgebra) -> list:
    """Nonzero j with j = x v y implying j in {x, y}."""
    zero = a.op("zero")
    join = a.op("join")
    out = []
    for j in a.carrier():
        if j == zero:
            continue
        if all(
            join[x][y] != j or j in (x, y)
            for x in a.carrier()
            for y in a.carrier()
        ):
            out.append(j)
    return out


def _downsets(order, n):
    """All down-closed subsets as bitmasks, ascending."""
    out = []
    for mask in range(1 << n):
        ok = True
        for x in range(n):
            if mask >> x & 1:
                for y in range(n):
                    if order[y][x] and not (mask >> y & 1):
                        ok = False
                        break
            if not ok:
                break
        if ok:
            out.append(mask)
    return out


def _meet_table_from_join(a: FinAlgebra):
    """Binary meets of a finite join-semilattice (join of lower bounds)."""
    n = a.size
    join = a.op("join")

    def leq(x, y):
        return join[x][y] == y

    table = []
    for x in range(n):
        row = []
        for y in range(n):
            lbs = [z for z in range(n) if leq(z, x) and leq(z, y)]
            acc = lbs[0]
            for z in lbs[1:]:
                acc = join[acc][z]
            row.append(acc)
        table.append(tuple(row))
    return tuple(table)


# ---------------------------------------------------------------------------
# dual objects


def dual_object(pair: str, a: FinAlgebra) -> FinAlgebra:
    """The dual finite algebra on the other side of the pair."""
    side = side_of(pair, a.tag)
    p = vect_prime(a.tag)

    if pair == "BA":
        if side == "C":
            k = len(atoms_of(a))
            return make_algebra("SET", k, {})
        size = 1 << a.size
        return make_algebra(
            "BA",
            size,
            {
                "meet": tuple(tuple(x & y for y in range(size)) for x in range(size)),
                "join": tuple(tuple(x | y for y in range(size)) for x in range(size)),
                "not": tuple((size - 1) ^ x for x in range(size)),
                "zero": 0,
                "one": size - 1,
            },
        )

    if pair == "DL01":
        if side == "C":
            irr = join_irreducibles(a)
            order = tuple(
                tuple(alg_leq(a, x, y) for y in irr) for x in irr
            )
            return make_algebra("POS", len(irr), {}, order)
        masks = _downsets(a.order, a.size)
        index = {m: i for i, m in enumerate(masks)}
        return make_algebra(
            "DL01",
            len(masks),
            {
                "meet": tuple(tuple(index[x & y] for y in masks) for x in masks),
                "join": tuple(tuple(index[x | y] for y in masks) for x in masks),
                "zero": index[0],
                "one": index[(1 << a.size) - 1],
            },
        )

    if pair == "JSL0":
        meet = _meet_table_from_join(a)
        join = a.op("join")
        top = 0
        for x in a.carrier():
            top = join[top][x]
        return make_algebra("JSL0", a.size, {"join": meet, "zero": top})

    if p is not None:
        return a  # [Q, GF(p)] with the standard basis is Q itself

    if pair == "BR":
        if side == "C":
            ats = atoms_of(a)
            return make_algebra("SET_STAR", len(ats) + 1, {"point": 0})
        point = a.op("point")
        others = [x for x in a.carrier() if x != point]
        size = 1 << len(others)
        return make_algebra(
            "BR",
            size,
            {
                "add": tuple(tuple(x ^ y for y in range(size)) for x in range(size)),
                "mul": tuple(tuple(x & y for y in range(size)) for x in range(size)),
                "zero": 0,
            },
        )

    if pair == "JSL01":
        if side == "C":
            one = a.op("one")
            rest = [x for x in a.carrier() if x != one]
            index = {x: i for i, x in enumerate(rest)}
            meet = _meet_table_from_join(a)
            table = tuple(tuple(index[meet[x][y]] for y in rest) for x in rest)
            return make_algebra("JSL", len(rest), {"join": table})
        # JSL side: adjoin a new bottom, then reverse the order
        n = a.size
        join = a.op("join")

        def leq(x, y):
            return join[x][y] == y

        new = n  # the adjoined element; becomes the top of the JSL01
        size = n + 1
        table = []
        for x in range(size):
            row = []
            for y in range(size):
                if x == new or y == new:
                    row.append(new)
                    continue
                lbs = [z for z in range(n) if leq(z, x) and leq(z, y)]
                if not lbs:
                    row.append(new)
                else:
                    acc = lbs[0]
                    for z in lbs[1:]:
                        acc = join[acc][z]
                    row.append(acc)
            table.append(tuple(row))
        if n == 0:
            zero = new
        else:
            zero = 0
            for x in range(n):
                zero = join[zero][x]
        return make_algebra(
            "JSL01", size, {"join": tuple(table), "zero": zero, "one": new}
        )

    raise StructureError(f"unsupported pair {pair}")


# ---------------------------------------------------------------------------
# dual morphisms


def _meet_of(a: FinAlgebra, elems):
    meet = a.op("meet") if a.tag in ("BA", "DL01") else a.op("mul")
    acc = elems[0]
    for x in elems[1:]:
        acc = meet[acc][x]
    return acc


def _join_of(a: FinAlgebra, elems, empty):
    join = a.op("join")
    acc = empty
    for x in elems:
        acc = join[acc][x]
    return acc


def _vect_matrix(h: AlgMorphism, p: int):
    """Matrix of a linear map w.r.t. standard bases (columns = basis images)."""
    src_dim = 0
    while p**src_dim < h.source.size:
        src_dim += 1
    tgt_dim = 0
    while p**tgt_dim < h.target.size:
        tgt_dim += 1
    cols = []
    for i in range(src_dim):
        img = h.table[p**i]
        cols.append([(img // p**j) % p for j in range(tgt_dim)])
    return cols, src_dim, tgt_dim


def _vect_table_from_matrix(cols, src_dim, tgt_dim, p):
    """Table of the linear map sending digit vectors through the column list."""
    table = []
    for x in range(p**src_dim):
        digits = [(x // p**i) % p for i in range(src_dim)]
        out = [0] * tgt_dim
        for i, d in enumerate(digits):
            for j in range(tgt_dim):
                out[j] = (out[j] + d * cols[i][j]) % p
        table.append(sum(v * p**j for j, v in enumerate(out)))
    return tuple(table)


def dual_morphism(pair: str, h: AlgMorphism) -> AlgMorphism:
    """Contravariant dual of a morphism, by the pair's explicit formula."""
    q, r = h.source, h.target
    side = side_of(pair, q.tag)
    dq, dr = dual_object(pair, q), dual_object(pair, r)
    p = vect_prime(q.tag)

    if p is not None:
        cols, sd, td = _vect_matrix(h, p)
        transposed = [[cols[i][j] for i in range(sd)] for j in range(td)]
        table = _vect_table_from_matrix(transposed, td, sd, p)
        return AlgMorphism(dr, dq, table)

    if pair in ("BA", "DL01") and side == "C":
        # hat h(r) = meet { q : h(q) >= r }
        ats_r = atoms_of(r) if pair == "BA" else join_irreducibles(r)
        ats_q = atoms_of(q) if pair == "BA" else join_irreducibles(q)
        table = []
        for rr in ats_r:
            above = [x for x in q.carrier() if alg_leq(r, rr, h.table[x])]
            table.append(ats_q.index(_meet_of(q, above)))
        return AlgMorphism(dr, dq, tuple(table))

    if pair in ("BA", "DL01") and side == "D":
        # dual of g: X -> Y is preimage on subsets / downsets
        if pair == "BA":
            table = []
            for mask in range(1 << r.size):
                pre = 0
                for x in range(q.size):
                    if mask >> h.table[x] & 1:
                        pre |= 1 << x
                table.append(pre)
            return AlgMorphism(dr, dq, tuple(table))
        masks_r = _downsets(r.order, r.size)
        masks_q = _downsets(q.order, q.size)
        index_q = {m: i for i, m in enumerate(masks_q)}
        table = []
        for mask in masks_r:
            pre = 0
            for x in range(q.size):
                if mask >> h.table[x] & 1:
                    pre |= 1 << x
            table.append(index_q[pre])
        return AlgMorphism(dr, dq, tuple(table))

    if pair == "JSL0":
        # hat h(r) = join { q : h(q) <= r }, join formed in the source
        zero_q = q.op("zero")
        table = []
        for rr in r.carrier():
            below = [x for x in q.carrier() if alg_leq(r, h.table[x], rr)]
            table.append(_join_of(q, below, zero_q))
        return AlgMorphism(dr, dq, tuple(table))

    if pair == "BR" and side == "C":
        ats_r = atoms_of(r)
        ats_q = atoms_of(q)
        table = [0]  # basepoint to basepoint
        for rr in ats_r:
            above = [x for x in q.carrier() if alg_leq(r, rr, h.table[x])]
            if above:
                m = _meet_of(q, above)
                table.append(ats_q.index(m) + 1)
            else:
                table.append(0)
        return AlgMorphism(dr, dq, tuple(table))

    if pair == "BR" and side == "D":
        point_q, point_r = q.op("point"), r.op("point")
        others_q = [x for x in q.carrier() if x != point_q]
        others_r = [x for x in r.carrier() if x != point_r]
        pos_q = {x: i for i, x in enumerate(others_q)}
        table = []
        for mask in range(1 << len(others_r)):
            chosen = {others_r[i] for i in range(len(others_r)) if mask >> i & 1}
            pre = 0
            for x in others_q:
                if h.table[x] in chosen:
                    pre |= 1 << pos_q[x]
            table.append(pre)
        return AlgMorphism(dr, dq, tuple(table))

    if pair == "JSL01" and side == "C":
        # hat h(r) = join { q : h(q) <= r }; h preserves the top, so the
        # join stays strictly below it
        one_q = q.op("one")
        rest_q = [x for x in q.carrier() if x != one_q]
        rest_r = [x for x in r.carrier() if x != r.op("one")]
        zero_q = q.op("zero")
        table = []
        for rr in rest_r:
            below = [x for x in q.carrier() if alg_leq(r, h.table[x], rr)]
            val = _join_of(q, below, zero_q)
            table.append(rest_q.index(val))
        return AlgMorphism(dr, dq, tuple(table))

    if pair == "JSL01" and side == "D":
        # fullness construction: h(q) = meet { r : q <= gbar(r) } in the duals
        # g: P1 -> P2 dualizes to a JSL01 morphism dual(P2) -> dual(P1)
        p1, p2 = q, r
        d1, d2 = dq, dr  # dual(P1), dual(P2): JSL01 algebras
        top1, top2 = d1.op("one"), d2.op("one")

        def gbar(x):
            return top2 if x == top1 else h.table[x]

        def leq2(x, y):
            return d2.op("join")[x][y] == y

        meet1 = _meet_table_from_join(d1)
        table = []
        for x in d2.carrier():
            above = [rr for rr in d1.carrier() if leq2(x, gbar(rr))]
            acc = above[0]
            for z in above[1:]:
                acc = meet1[acc][z]
            table.append(acc)
        return AlgMorphism(dr, dq, tuple(table))

    raise StructureError(f"unsupported pair/side for dual_morphism: {pair}")


# ---------------------------------------------------------------------------
# canonical double-dual isomorphism


def eta(pair: str, a: FinAlgebra) -> AlgMorphism:
    """Canonical isomorphism a -> dual(dual(a))."""
    side = side_of(pair, a.tag)
    dd = dual_object(pair, dual_object(pair, a))
    p = vect_prime(a.tag)

    if p is not None or pair == "JSL0":
        return AlgMorphism(a, dd, tuple(range(a.size)))
    if pair == "BA" and side == "C":
        ats = atoms_of(a)
        table = []
        for x in a.carrier():
            mask = 0
            for i, at in enumerate(ats):
                if alg_leq(a, at, x):
                    mask |= 1 << i
            table.append(mask)
        return AlgMorphism(a, dd, tuple(table))
    if pair == "BA" and side == "D":
        # atoms of the powerset BA are the singleton masks 1 << x, ascending
        return AlgMorphism(a, dd, tuple(range(a.size)))
    if pair == "DL01" and side == "C":
        irr = join_irreducibles(a)
        masks = _downsets(
            tuple(tuple(alg_leq(a, x, y) for y in irr) for x in irr), len(irr)
        )
        index = {m: i for i, m in enumerate(masks)}
        table = []
        for x in a.carrier():
            mask = 0
            for i, j in enumerate(irr):
                if alg_leq(a, j, x):
                    mask |= 1 << i
            table.append(index[mask])
        return AlgMorphism(a, dd, tuple(table))
    if pair == "DL01" and side == "D":
        masks = _downsets(a.order, a.size)
        lattice = dual_object(pair, a)
        irr = join_irreducibles(lattice)
        table = []
        for x in a.carrier():
            down = 0
            for y in a.carrier():
                if a.order[y][x]:
                    down |= 1 << y
            table.append(irr.index(masks.index(down)))
        return AlgMorphism(a, dd, tuple(table))
    if pair == "BR" and side == "C":
        ats = atoms_of(a)
        table = []
        for x in a.carrier():
            mask = 0
            for i, at in enumerate(ats):
                if alg_leq(a, at, x):
                    mask |= 1 << i
            table.append(mask)
        return AlgMorphism(a, dd, tuple(table))
    if pair == "BR" and side == "D":
        point = a.op("point")
        others = [x for x in a.carrier() if x != point]
        ring = dual_object(pair, a)
        ats = atoms_of(ring)
        table = []
        for x in a.carrier():
            if x == point:
                table.append(0)
            else:
                table.append(ats.index(1 << others.index(x)) + 1)
        return AlgMorphism(a, dd, tuple(table))
    if pair == "JSL01" and side == "C":
        one = a.op("one")
        rest = [x for x in a.carrier() if x != one]
        table = []
        for x in a.carrier():
            table.append(len(rest) if x == one else rest.index(x))
        return AlgMorphism(a, dd, tuple(table))
    if pair == "JSL01" and side == "D":
        # dual(dual(P)) drops the adjoined top again: identity on indices
        return AlgMorphism(a, dd, tuple(range(a.size)))
    raise StructureError(f"unsupported pair {pair}")


# ---------------------------------------------------------------------------
# canonical constants


@dataclass(frozen=True)
class ConstantsBundle:
    """The paper's fixed constants for a pair, in semantic labeling.

    O_C and O_D carriers use {0,1} with 1 = "accept" (for BR's O_D the
    basepoint is index 0, identified with 0 in O_C).  one_D equals
    dual_object(O_C) on the nose; O_D is dual_object(one_C) relabeled so
    that index 1 is the element hit by the dual of 1_{O_C}.
    """

    pair: str
    one_C: FinAlgebra
    O_C: FinAlgebra
    one_D: FinAlgebra
    O_D: FinAlgebra
    gen_one_C: int
    gen_one_D: int
    one_out_C: int
    one_out_D: int
    ident: tuple
    out_one_C: AlgMorphism  # the morphism 1_C -> O_C choosing 1
    relabel_OD: tuple  # dual_object(one_C) index -> O_D index


from .algebra import relabel_algebra as _relabel_algebra


def _two_chain(tag):
    if tag == "BA":
        return make_algebra(
            "BA",
            2,
            {"meet": ((0, 0), (0, 1)), "join": ((0, 1), (1, 1)), "not": (1, 0),
             "zero": 0, "one": 1},
        )
    if tag == "DL01":
        return make_algebra(
            "DL01",
            2,
            {"meet": ((0, 0), (0, 1)), "join": ((0, 1), (1, 1)), "zero": 0, "one": 1},
        )
    if tag == "JSL0":
        return make_algebra("JSL0", 2, {"join": ((0, 1), (1, 1)), "zero": 0})
    if tag == "JSL01":
        return make_algebra(
            "JSL01", 2, {"join": ((0, 1), (1, 1)), "zero": 0, "one": 1}
        )
    if tag == "BR":
        return make_algebra(
            "BR", 2, {"add": ((0, 1), (1, 0)), "mul": ((0, 0), (0, 1)), "zero": 0}
        )
    raise StructureError(tag)


@lru_cache(maxsize=None)
def canonical_constants(pair: str) -> ConstantsBundle:
    """The fixed constant choices of the pair's table."""
    p = vect_prime(c_tag(pair))

    if pair == "BA":
        # free BA on one generator: powerset on atoms {not-gen, gen};
        # the generator is element 2 so the dual of 1_{O_C} lands on index 1
        one_c = enumerate_algebras("BA", 4)[0]
        gen_c = 2
        o_c = _two_chain("BA")
        out_one = AlgMorphism(one_c, o_c, (0, 0, 1, 1))
    elif pair == "DL01":
        # free DL01 on one generator: 3-chain bottom < gen < top
        join = tuple(tuple(max(x, y) for y in range(3)) for x in range(3))
        meet = tuple(tuple(min(x, y) for y in range(3)) for x in range(3))
        one_c = make_algebra("DL01", 3, {"meet": meet, "join": join, "zero": 0, "one": 2})
        gen_c = 1
        o_c = _two_chain("DL01")
        out_one = AlgMorphism(one_c, o_c, (0, 1, 1))
    elif pair == "JSL0":
        one_c = _two_chain("JSL0")
        gen_c = 1
        o_c = _two_chain("JSL0")
        out_one = AlgMorphism(one_c, o_c, (0, 1))
    elif p is not None:
        one_c, _ = free_algebra(pair, ["x"])
        gen_c = 1
        o_c = one_c
        out_one = identity_morphism(one_c)
    elif pair == "BR":
        one_c = _two_chain("BR")
        gen_c = 1
        o_c = one_c
        out_one = identity_morphism(one_c)
    elif pair == "JSL01":
        # free JSL01 on one generator: 3-chain 0 < gen < 1
        join = tuple(tuple(max(x, y) for y in range(3)) for x in range(3))
        one_c = make_algebra("JSL01", 3, {"join": join, "zero": 0, "one": 2})
        gen_c = 1
        o_c = _two_chain("JSL01")
        out_one = AlgMorphism(one_c, o_c, (0, 1, 1))
    else:
        raise StructureError(f"unknown pair {pair}")

    one_d = dual_object(pair, o_c)
    gen_d = _generator_of_one_d(pair, one_d)

    raw_od = dual_object(pair, one_c)
    pos = dual_morphism(pair, out_one).table[gen_d]
    if raw_od.size == 2:
        perm = (0, 1) if pos == 1 else (1, 0)
    else:
        perm = tuple(range(raw_od.size))  # VECT(p) with p > 2: keep raw labels
    o_d = _relabel_algebra(raw_od, perm)
    one_out_d = perm[pos]

    ident = tuple(range(o_c.size)) if o_c.size == o_d.size else None
    return ConstantsBundle(
        pair=pair,
        one_C=one_c,
        O_C=o_c,
        one_D=one_d,
        O_D=o_d,
        gen_one_C=gen_c,
        gen_one_D=gen_d,
        one_out_C=1,
        one_out_D=one_out_d,
        ident=ident,
        out_one_C=out_one,
        relabel_OD=perm,
    )


def _generator_of_one_d(pair: str, one_d: FinAlgebra) -> int:
    """Index of the free generator inside dual_object(O_C)."""
    tag = one_d.tag
    if tag in ("SET", "POS", "JSL"):
        assert one_d.size == 1
        return 0
    if tag == "JSL0":
        return 1 - one_d.op("zero")  # the non-zero element of the 2-chain
    if tag == "SET_STAR":
        return 1 - one_d.op("point")
    if vect_prime(tag) is not None:
        return 1
    raise StructureError(tag)


def one_c_selector(pair: str, states: FinAlgebra, elem: int) -> AlgMorphism:
    """The unique C-morphism 1_C -> states sending the generator to elem."""
    bundle = canonical_constants(pair)
    one_c = bundle.one_C
    if pair == "BA":
        table = (states.op("zero"), states.op("not")[elem], elem, states.op("one"))
    elif pair in ("DL01", "JSL01"):
        table = (states.op("zero"), elem, states.op("one"))
    elif pair == "JSL0":
        table = (states.op("zero"), elem)
    elif vect_prime(pair) is not None:
        p = vect_prime(pair)
        table = tuple(states.op(f"smul{k}")[elem] for k in range(p))
    elif pair == "BR":
        table = (states.op("zero"), elem)
    else:
        raise StructureError(pair)
    return AlgMorphism(one_c, states, table)


def init_selector_table(pair: str, states: FinAlgebra, init: int) -> AlgMorphism:
    """The unique D-morphism one_D -> states sending the generator to init."""
    bundle = canonical_constants(pair)
    one_d = bundle.one_D
    tag = one_d.tag
    if tag in ("SET", "POS", "JSL"):
        table = (init,)
    elif tag == "JSL0":
        table = [None, None]
        table[bundle.gen_one_D] = init
        table[one_d.op("zero")] = states.op("zero")
        table = tuple(table)
    elif tag == "SET_STAR":
        table = [None, None]
        table[bundle.gen_one_D] = init
        table[one_d.op("point")] = states.op("point")
        table = tuple(table)
    elif vect_prime(tag) is not None:
        p = vect_prime(tag)
        table = tuple(states.op(f"smul{k}")[init] for k in range(p))
    else:
        raise StructureError(tag)
    return AlgMorphism(one_d, states, table)


def state_output(pair: str, states: FinAlgebra, elem: int) -> tuple:
    """Dual of a state selector: the output table dual(states) -> O_D."""
    bundle = canonical_constants(pair)
    sel = one_c_selector(pair, states, elem)
    dual_sel = dual_morphism(pair, sel)
    return tuple(bundle.relabel_OD[v] for v in dual_sel.table)


def out_from_dual_init(pair: str, states_d: FinAlgebra, init: int) -> tuple:
    """gamma_out of the dual coalgebra, from an L-algebra initial state."""
    bundle = canonical_constants(pair)
    sel = init_selector_table(pair, states_d, init)
    dual_sel = dual_morphism(pair, sel)
    e = eta(pair, bundle.O_C)
    inv = [0] * bundle.O_C.size
    for x, v in enumerate(e.table):
        inv[v] = x
    return tuple(inv[v] for v in dual_sel.table)


# ---------------------------------------------------------------------------
# law verification


def _objects_for(pair: str, side: str, max_size: int):
    tag = c_tag(pair) if side == "C" else d_tag(pair)
    p = vect_prime(tag)
    sizes: list = []
    if tag in ("BA", "BR"):
        sizes = [s for s in (1, 2, 4, 8) if s <= max_size]
    elif p is not None:
        sizes = [p**d for d in range(0, 4) if p**d <= max_size]
    elif tag == "JSL":
        sizes = list(range(0, max_size + 1))
    else:
        sizes = list(range(1, max_size + 1))
    out = []
    for n in sizes:
        out.extend(enumerate_algebras(tag, n))
    return out


def verify_preduality(pair: str, max_size: int, dual_morphism_fn=None) -> dict:
    """Machine-check the pair's duality laws on all objects up to max_size.

    Checks: dual objects validate; dual(id) = id; contravariant functoriality;
    double-dual isomorphism (eta) and its naturality; hom-set bijection
    |Hom(Q,R)| = |Hom(R^,Q^)|; faithfulness of dualization.  Returns a report
    dict; report["ok"] is False iff some law has a counterexample, recorded
    with a minimal witness.
    """
    dualize = dual_morphism_fn or dual_morphism
    report = {
        "pair": pair,
        "ok": True,
        "objects": 0,
        "morphisms": 0,
        "compositions": 0,
        "failures": [],
        "hom_counts": [],
    }

    def fail(law, witness):
        report["ok"] = False
        report["failures"].append({"law": law, "witness": witness})

    c_objs = _objects_for(pair, "C", max_size)
    d_side_max = max((dual_object(pair, q).size for q in c_objs), default=0)
    d_objs = _objects_for(pair, "D", min(max_size, max(d_side_max, 1)))
    report["objects"] = len(c_objs) + len(d_objs)

    # double-dual isomorphism + object validity, both sides
    from .algebra import validate_algebra

    for obj in c_objs + d_objs:
        dual = dual_object(pair, obj)
        if validate_algebra(dual):
            fail("dual-validates", f"dual of {obj.tag} size {obj.size}")
            continue
        e = eta(pair, obj)
        ok, why = check_morphism(e)
        if not ok or len(set(e.table)) != obj.size or e.target.size != obj.size:
            fail("double-dual-iso", f"{obj.tag} size {obj.size}: {why}")

    # morphism-level laws on the C side and between dual objects
    hom_cache = {}
    dual_cache = {}

    def homs(a, b):
        key = (a, b)
        if key not in hom_cache:
            hom_cache[key] = all_morphisms(a, b)
        return hom_cache[key]

    def dual_of(a, b, h):
        key = (a, b, h.table)
        if key not in dual_cache:
            dual_cache[key] = dualize(pair, h)
        return dual_cache[key]

    for q in c_objs:
        ident_dual = dualize(pair, identity_morphism(q))
        if ident_dual.table != tuple(range(ident_dual.source.size)):
            fail("dual-of-identity", f"{q.tag} size {q.size}")
    for q in c_objs:
        for r in c_objs:
            hs = homs(q, r)
            report["morphisms"] += len(hs)
            tables = set()
            for h in hs:
                dh = dual_of(q, r, h)
                ok, why = check_morphism(dh)
                if not ok:
                    fail("dual-is-morphism", f"{q.size}->{r.size}: {why}")
                tables.add(dh.table)
            if len(tables) != len(hs):
                fail("faithfulness", f"{q.size}->{r.size}")
            dcount = len(homs(dual_object(pair, r), dual_object(pair, q)))
            report["hom_counts"].append((q.size, r.size, len(hs), dcount))
            if dcount != len(hs):
                fail(
                    "hom-count",
                    f"|Hom({q.tag}{q.size},{r.tag}{r.size})|={len(hs)} vs dual {dcount}",
                )
            for h in hs:
                ddh = dualize(pair, dual_of(q, r, h))
                lhs = compose(ddh, eta(pair, q))
                rhs = compose(eta(pair, r), h)
                if lhs.table != rhs.table:
                    fail("eta-naturality", f"{q.size}->{r.size} table {h.table}")
                    break
    # contravariant functoriality over composable C-side pairs
    for q in c_objs:
        for r in c_objs:
            hs_qr = homs(q, r)
            if not hs_qr:
                continue
            for s in c_objs:
                hs_rs = homs(r, s)
                for h in hs_qr:
                    dh = dual_of(q, r, h)
                    for g in hs_rs:
                        dg = dual_of(r, s, g)
                        lhs = dual_of(q, s, compose(g, h))
                        rhs = compose(dh, dg)
                        report["compositions"] += 1
                        if lhs.table != rhs.table:
                            fail(
                                "functoriality",
                                f"{q.size}->{r.size}->{s.size}: {h.table},{g.table}",
                            )
                            return report
    return report
