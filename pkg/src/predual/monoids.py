"""Finite D-monoids: monoids internal to the D-side varieties.

A DMonoid is a carrier FinAlgebra plus a raw multiplication table and unit;
the bimorphism law (every section is a D-endomorphism) is validated, not
enforced by construction, so fault-injection tests stay expressible.  For
JSL0 carriers the bimorphism law is exactly the distributivity of an
idempotent semiring; for SET_STAR the basepoint must be an absorbing zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgMorphism,
    CapExceeded,
    FinAlgebra,
    StructureError,
    check_morphism,
    combine_elements,
    product,
    signature,
    subalgebra_on,
    table_isomorphism,
)
from .langlib import (
    DMonoidMorphismFree,
    FreeElement,
    free_combine,
    free_mul,
    free_unit,
    free_word,
    free_zero,
    make_free_morphism,
    rev_free,
)


@dataclass(frozen=True)
class DMonoid:
    carrier: FinAlgebra
    mult: tuple  # mult[x][y] = x o y
    unit: int

    @property
    def size(self):
        return self.carrier.size

    def mul(self, x, y):
        return self.mult[x][y]


def make_dmonoid(carrier: FinAlgebra, mult, unit: int) -> DMonoid:
    mult = tuple(tuple(row) for row in mult)
    n = carrier.size
    if len(mult) != n or any(len(row) != n for row in mult):
        raise StructureError("multiplication table has wrong shape")
    if not 0 <= unit < n:
        raise StructureError("unit out of range")
    return DMonoid(carrier, mult, unit)


def validate_dmonoid(m: DMonoid) -> list:
    """Monoid axioms + bimorphism law (+ zero absorption for SET_STAR)."""
    out = []
    n = m.size
    mult = m.mult
    for x in range(n):
        if mult[m.unit][x] != x or mult[x][m.unit] != x:
            out.append(f"unit law fails at {x}")
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if mult[mult[x][y]][z] != mult[x][mult[y][z]]:
                    out.append(f"associativity fails at ({x},{y},{z})")
                    break
            else:
                continue
            break
    for x in range(n):
        left = AlgMorphism(m.carrier, m.carrier, tuple(mult[x][y] for y in range(n)))
        right = AlgMorphism(m.carrier, m.carrier, tuple(mult[y][x] for y in range(n)))
        ok, why = check_morphism(left)
        if not ok:
            out.append(f"left multiplication by {x} is not a D-endomorphism: {why}")
        ok, why = check_morphism(right)
        if not ok:
            out.append(f"right multiplication by {x} is not a D-endomorphism: {why}")
    if m.carrier.tag == "SET_STAR":
        point = m.carrier.op("point")
        for x in range(n):
            if mult[x][point] != point or mult[point][x] != point:
                out.append(f"zero absorption fails at {x}")
    return out


@dataclass(frozen=True)
class GeneratedDMonoid:
    """A Sigma-generated D-monoid with representative free elements."""

    base: DMonoid
    alphabet: tuple
    gen_images: tuple  # tuple of (letter, carrier element)
    reprs: tuple  # tuple of (carrier element, FreeElement), one per element

    def gen(self, letter) -> int:
        for a, e in self.gen_images:
            if a == letter:
                return e
        raise StructureError(f"letter {letter!r} not a generator")

    def repr_of(self, elem) -> FreeElement:
        for e, fe in self.reprs:
            if e == elem:
                return fe
        raise StructureError(f"element {elem} has no representative")


def eval_in_dmonoid(m: DMonoid, gen_images: dict, x: FreeElement) -> int:
    """Evaluate a free element through letter images, using the D-structure."""
    terms = []
    for w, c in x.pairs:
        acc = m.unit
        for ch in w:
            acc = m.mult[acc][gen_images[ch]]
        terms.append((acc, c))
    return combine_elements(m.carrier, terms)


def morphism_from_images(tag: str, source_alphabet, images: dict):
    """The unique multiplicative extension of letter images.

    Images into a free D-monoid (FreeElements) produce a DMonoidMorphismFree;
    images into a DMonoid (given as (monoid, {letter: element})) produce an
    evaluation callable FreeElement -> element.
    """
    if isinstance(images, tuple):
        monoid, gen_map = images
        return lambda x: eval_in_dmonoid(monoid, gen_map, x)
    some = next(iter(images.values()))
    return make_free_morphism(tag, source_alphabet, some.alphabet, images)


def dagger_free(f: DMonoidMorphismFree) -> DMonoidMorphismFree:
    """rev . f . rev, acting wordwise on generator images."""
    return make_free_morphism(
        f.tag,
        f.source_alphabet,
        f.target_alphabet,
        {b: rev_free(f.image(b)) for b in f.source_alphabet},
    )


def associated_lalgebra(g: GeneratedDMonoid):
    """States = carrier, init = unit, transitions = right multiplication."""
    from .automata import LAlgebra, pair_of_d_tag

    pair = pair_of_d_tag(g.base.carrier.tag)
    trans = {
        a: tuple(g.base.mult[d][g.gen(a)] for d in range(g.base.size))
        for a in g.alphabet
    }
    return LAlgebra(pair, g.alphabet, g.base.carrier, tuple(sorted(trans.items())), g.base.unit)


# ---------------------------------------------------------------------------
# transition D-monoid of an L-algebra


@dataclass(frozen=True)
class EndoMonoidView:
    """A composition-closed set of D-endomorphism tables with witnesses."""

    host: FinAlgebra
    elements: tuple  # tuple of endo tables
    monoid: DMonoid
    witnesses: tuple  # tuple of (table, FreeElement), shortlex-minimal found


def _compose_tables(first, then):
    return tuple(then[v] for v in first)


def transition_dmonoid(lalg, cap: int = 64) -> EndoMonoidView:
    """Sub-D-monoid of [A,A] generated by the letter transitions.

    Closure under composition and the pointwise D-operations of the power
    algebra; multiplication (f, g) -> g . f, unit = identity.
    """
    host = lalg.states
    n = host.size
    tag = host.tag
    alphabet = lalg.alphabet
    ident = tuple(range(n))
    witness = {ident: free_unit(tag, alphabet) if tag not in ("SET", "POS") else free_word(tag, alphabet, "")}
    trans = dict(lalg.trans)
    order = [ident]
    # word closure first: BFS in shortlex order gives minimal word witnesses
    frontier = [ident]
    while frontier:
        nxt = []
        for t in frontier:
            for a in alphabet:
                u = _compose_tables(t, trans[a])
                if u not in witness:
                    w = witness[t]
                    witness[u] = free_mul(w, free_word(tag, alphabet, a))
                    order.append(u)
                    nxt.append(u)
                    if len(order) > cap:
                        raise CapExceeded(f"transition monoid exceeds cap {cap}")
        frontier = nxt
    # pointwise D-operation closure
    sig = signature(tag)
    changed = True
    while changed:
        changed = False
        current = list(order)
        for name, arity in sorted(sig.items()):
            op = host.op(name)
            if arity == 0:
                t = tuple(op for _ in range(n))
                if t not in witness:
                    witness[t] = (
                        free_zero(tag, alphabet)
                        if tag not in ("SET", "POS")
                        else None
                    )
                    order.append(t)
                    changed = True
            elif arity == 1:
                for t in current:
                    u = tuple(op[v] for v in t)
                    if u not in witness:
                        k = int(name[4:]) if name.startswith("smul") else 1
                        witness[u] = free_combine(tag, alphabet, [(witness[t], k)])
                        order.append(u)
                        changed = True
            else:
                for t1 in current:
                    for t2 in current:
                        u = tuple(op[x][y] for x, y in zip(t1, t2))
                        if u not in witness:
                            witness[u] = free_combine(
                                tag, alphabet, [(witness[t1], 1), (witness[t2], 1)]
                            )
                            order.append(u)
                            changed = True
                if changed:
                    break
        if len(order) > cap:
            raise CapExceeded(f"transition monoid exceeds cap {cap}")
    elements = tuple(sorted(order))
    index = {t: i for i, t in enumerate(elements)}
    ops = {}
    for name, arity in sig.items():
        op = host.op(name)
        if arity == 0:
            ops[name] = index[tuple(op for _ in range(n))]
        elif arity == 1:
            ops[name] = tuple(index[tuple(op[v] for v in t)] for t in elements)
        else:
            ops[name] = tuple(
                tuple(index[tuple(op[x][y] for x, y in zip(t1, t2))] for t2 in elements)
                for t1 in elements
            )
    horder = None
    if host.order is not None:
        horder = tuple(
            tuple(all(host.order[x][y] for x, y in zip(t1, t2)) for t2 in elements)
            for t1 in elements
        )
    from .algebra import make_algebra

    carrier = make_algebra(tag, len(elements), ops, horder)
    mult = tuple(
        tuple(index[_compose_tables(t1, t2)] for t2 in elements) for t1 in elements
    )
    monoid = make_dmonoid(carrier, mult, index[ident])
    return EndoMonoidView(
        host,
        elements,
        monoid,
        tuple(sorted((t, witness[t]) for t in elements if witness[t] is not None)),
    )


# ---------------------------------------------------------------------------
# subdirect products


def dmonoid_product(m1: DMonoid, m2: DMonoid):
    """Componentwise product DMonoid; returns (product, encode, decode)."""
    prod, _, _ = product(m1.carrier, m2.carrier)
    n2 = m2.size

    def enc(x, y):
        return x * n2 + y

    mult = tuple(
        tuple(
            enc(m1.mult[x1][y1], m2.mult[x2][y2])
            for y1 in range(m1.size)
            for y2 in range(m2.size)
        )
        for x1 in range(m1.size)
        for x2 in range(m2.size)
    )
    return make_dmonoid(prod, mult, enc(m1.unit, m2.unit)), enc


def _generated_sub_dmonoid(m: DMonoid, seeds: dict):
    """Closure of seed elements (with witnesses) under mult and D-operations.

    seeds: element -> FreeElement witness; the unit must be included.
    Returns (elements sorted, witness dict).
    """
    tag = m.carrier.tag
    sig = signature(tag)
    witness = dict(seeds)
    changed = True
    while changed:
        changed = False
        current = list(witness)
        for x in current:
            for y in current:
                z = m.mult[x][y]
                if z not in witness:
                    witness[z] = free_mul(witness[x], witness[y])
                    changed = True
        for name, arity in sorted(sig.items()):
            op = m.carrier.op(name)
            if arity == 0:
                if op not in witness:
                    witness[op] = free_zero(tag, next(iter(seeds.values())).alphabet)
                    changed = True
            elif arity == 1:
                k = int(name[4:]) if name.startswith("smul") else 1
                for x in current:
                    z = op[x]
                    if z not in witness:
                        witness[z] = free_combine(
                            tag, witness[x].alphabet, [(witness[x], k)]
                        )
                        changed = True
            else:
                for x in current:
                    for y in current:
                        z = op[x][y]
                        if z not in witness:
                            witness[z] = free_combine(
                                tag,
                                witness[x].alphabet,
                                [(witness[x], 1), (witness[y], 1)],
                            )
                            changed = True
    return sorted(witness), witness


def generated_dmonoid_from(m: DMonoid, alphabet, gen_images: dict) -> GeneratedDMonoid:
    """Sigma-generated sub-D-monoid of m (image of the induced morphism)."""
    tag = m.carrier.tag
    seeds = {m.unit: free_word(tag, alphabet, "")}
    for a in alphabet:
        seeds.setdefault(gen_images[a], free_word(tag, alphabet, a))
    elems, witness = _generated_sub_dmonoid(m, seeds)
    sub, inclusion = subalgebra_on(m.carrier, elems)
    index = {e: i for i, e in enumerate(elems)}
    mult = tuple(
        tuple(index[m.mult[x][y]] for y in elems) for x in elems
    )
    base = make_dmonoid(sub, mult, index[m.unit])
    return GeneratedDMonoid(
        base,
        tuple(alphabet),
        tuple((a, index[gen_images[a]]) for a in alphabet),
        tuple((index[e], witness[e]) for e in elems),
    )


def subdirect_product(g1: GeneratedDMonoid, g2: GeneratedDMonoid) -> GeneratedDMonoid:
    """Image of the pairing of two Sigma-generated D-monoids in their product.

    Both projections onto the factors are surjective (the factors are
    Sigma-generated); this is asserted during construction.
    """
    if g1.alphabet != g2.alphabet:
        raise StructureError("subdirect product requires a common alphabet")
    if g1.base.carrier.tag != g2.base.carrier.tag:
        raise StructureError("subdirect product requires a common tag")
    prod, enc = dmonoid_product(g1.base, g2.base)
    gen_images = {a: enc(g1.gen(a), g2.gen(a)) for a in g1.alphabet}
    result = generated_dmonoid_from(prod, g1.alphabet, gen_images)
    elems = _subdirect_carrier_elements(g1, g2)
    n2 = g2.base.size
    assert {e // n2 for e in elems} == set(range(g1.base.size))
    assert {e % n2 for e in elems} == set(range(g2.base.size))
    return result


def _subdirect_carrier_elements(g1: GeneratedDMonoid, g2: GeneratedDMonoid):
    """Original product-carrier indices of the subdirect image."""
    prod, enc = dmonoid_product(g1.base, g2.base)
    tag = g1.base.carrier.tag
    seeds = {enc(g1.base.unit, g2.base.unit): free_word(tag, g1.alphabet, "")}
    for a in g1.alphabet:
        seeds.setdefault(enc(g1.gen(a), g2.gen(a)), free_word(tag, g1.alphabet, a))
    elems, _ = _generated_sub_dmonoid(prod, seeds)
    return elems


# ---------------------------------------------------------------------------
# divisibility


def dmonoid_power(m: DMonoid, n: int, cap: int = 4096) -> DMonoid:
    if m.size**n > cap:
        raise CapExceeded(f"power {m.size}^{n} exceeds cap {cap}")
    acc = m
    for _ in range(n - 1):
        acc, _ = dmonoid_product(acc, m)
    return acc


def minimal_generators(m: DMonoid) -> list:
    """A greedy small generating set (under mult and D-operations)."""
    gens: list = []
    tag = m.carrier.tag
    alphabet = ("g",)

    def closure(gs):
        seeds = {m.unit: free_word(tag, alphabet, "")}
        for x in gs:
            seeds.setdefault(x, free_word(tag, alphabet, "g"))
        elems, _ = _generated_sub_dmonoid(m, seeds)
        return set(elems)

    covered = closure(gens)
    while len(covered) < m.size:
        nxt = min(x for x in range(m.size) if x not in covered)
        gens.append(nxt)
        covered = closure(gens)
    return gens


def divides(candidate, generator: DMonoid, n_max: int = 2, cap: int = 4096):
    """Is the candidate a quotient of a sub-D-monoid of generator^n, n <= n_max?

    Returns True / False, or None when a cap was exceeded (inconclusive,
    deliberately distinct from False).  The search lifts a generating set of
    the candidate to tuples of the power and closes under multiplication and
    the D-operations, propagating candidate values; a consistent, surjective,
    structure-preserving valuation is a witness division.
    """
    if isinstance(candidate, GeneratedDMonoid):
        cand = candidate.base
        gens = sorted({e for _, e in candidate.gen_images})
    else:
        cand = candidate
        gens = minimal_generators(cand)
    if cand.carrier.tag != generator.carrier.tag:
        raise StructureError("divides requires equal tags")
    tag = cand.carrier.tag
    sig = signature(tag)
    inconclusive = False
    for n in range(1, n_max + 1):
        try:
            power = dmonoid_power(generator, n, cap)
        except CapExceeded:
            inconclusive = True
            break
        if power.size ** len(gens) > 500_000:
            inconclusive = True
            break
        import itertools as _it

        for tuples in _it.product(range(power.size), repeat=len(gens)):
            value = {power.unit: cand.unit}
            consistent = True
            for t, g in zip(tuples, gens):
                if value.get(t, g) != g:
                    consistent = False
                    break
                value[t] = g
            if not consistent:
                continue
            changed = True
            while changed and consistent:
                changed = False
                current = list(value)
                for x in current:
                    for y in current:
                        z = power.mult[x][y]
                        v = cand.mult[value[x]][value[y]]
                        if z not in value:
                            value[z] = v
                            changed = True
                        elif value[z] != v:
                            consistent = False
                            break
                    if not consistent:
                        break
                if not consistent:
                    break
                for name, arity in sorted(sig.items()):
                    op_p = power.carrier.op(name)
                    op_c = cand.carrier.op(name)
                    if arity == 0:
                        if op_p not in value:
                            value[op_p] = op_c
                            changed = True
                        elif value[op_p] != op_c:
                            consistent = False
                    elif arity == 1:
                        for x in current:
                            z, v = op_p[x], op_c[value[x]]
                            if z not in value:
                                value[z] = v
                                changed = True
                            elif value[z] != v:
                                consistent = False
                                break
                    else:
                        for x in current:
                            for y in current:
                                z = op_p[x][y]
                                v = op_c[value[x]][value[y]]
                                if z not in value:
                                    value[z] = v
                                    changed = True
                                elif value[z] != v:
                                    consistent = False
                                    break
                            if not consistent:
                                break
                    if not consistent:
                        break
            if not consistent:
                continue
            if set(value.values()) != set(range(cand.size)):
                continue
            if cand.carrier.order is not None:
                ok = all(
                    cand.carrier.order[value[x]][value[y]]
                    for x in value
                    for y in value
                    if power.carrier.order[x][y]
                )
                if not ok:
                    continue
            return True
    return None if inconclusive else False


def are_dmonoids_isomorphic(m1: DMonoid, m2: DMonoid):
    """Isomorphism of D-monoids: carrier iso + mult/unit compatible."""
    if m1.size != m2.size or m1.carrier.tag != m2.carrier.tag:
        return None
    sig = sorted(signature(m1.carrier.tag).items())
    ops1 = [(ar, m1.carrier.op(name)) for name, ar in sig]
    ops2 = [(ar, m2.carrier.op(name)) for name, ar in sig]
    ops1 += [(2, m1.mult), (0, m1.unit)]
    ops2 += [(2, m2.mult), (0, m2.unit)]
    return table_isomorphism(
        m1.size, ops1, ops2, m1.carrier.order, m2.carrier.order
    )
