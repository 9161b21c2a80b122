"""Desk-scale simple varieties and bounded Eilenberg-correspondence checks.

A simple variety of languages is generated by one alphabet component; a
simple pseudovariety of D-monoids is generated by one finite D-monoid.  Both
sides are represented by their generators plus bounded membership procedures,
never materialized as classes.
"""

from __future__ import annotations

from .algebra import CapExceeded, StructureError, all_morphisms
from .automata import (
    Coalgebra,
    dual_automaton,
    dual_automaton_inv,
    dual_generated_monoid,
    generated_local_variety,
    is_local_variety,
    language_of_output,
    languages_of,
)
from .duality import canonical_constants, d_tag
from .langlib import (
    RegularLanguage,
    make_free_morphism,
    parse_regex,
    rev_free,
)
from .monoids import (
    DMonoid,
    GeneratedDMonoid,
    are_dmonoids_isomorphic,
    associated_lalgebra,
    divides,
    make_dmonoid,
    transition_dmonoid,
)


def representative_morphisms(q: Coalgebra, delta):
    """Morphisms f: free(Delta) -> free(Sigma) up to equal preimage Q^f.

    Q^f depends only on the transition-monoid element of each (reversed)
    letter image, and there are finitely many of those; letting images range
    over witnesses of the dual transition monoid is exhaustive.
    """
    delta = tuple(delta)
    if len(delta) > 3:
        raise CapExceeded("representative enumeration bounded at |Delta| <= 3")
    a = dual_automaton(q)
    view = transition_dmonoid(a)
    tag = a.states.tag
    images = [rev_free(w) for _, w in view.witnesses]
    import itertools

    out = []
    for combo in itertools.product(images, repeat=len(delta)):
        out.append(
            make_free_morphism(
                tag, delta, q.alphabet, {b: fe for b, fe in zip(delta, combo)}
            )
        )
    return out


def simple_variety_languages(q: Coalgebra, delta, cap: int = 4096) -> Coalgebra:
    """The Delta-component of the simple variety generated by q.

    Collects the state languages of all representative preimages Q^f, closes
    under the C-side operations and both derivatives, and asserts that the
    derivative closure adds nothing beyond the algebraic closure.
    """
    from .preimage import coalgebra_preimage
    from .langlib import closure_under_ops_and_derivs

    if not is_local_variety(q):
        raise StructureError("generator must be a local variety")
    collected = set()
    for f in representative_morphisms(q, delta):
        qf = coalgebra_preimage(q, f)
        collected.update(languages_of(qf))
    langs = closure_under_ops_and_derivs(q.pair, sorted(collected, key=RegularLanguage.sort_key), cap)
    # property check: the algebraic closure of the collected languages is
    # already closed under both derivatives
    algebraic = _algebraic_closure(q.pair, collected, cap)
    assert set(langs) == algebraic, "derivative closure added languages"
    return generated_local_variety(q.pair, sorted(langs, key=RegularLanguage.sort_key), cap)


def _algebraic_closure(tag, seeds, cap):
    from .langlib import empty_language, full_language, language_op

    seeds = sorted(seeds, key=RegularLanguage.sort_key)
    alphabet = seeds[0].alphabet
    current = set(seeds)
    current.add(empty_language(alphabet))
    if tag in ("BA", "DL01"):
        current.add(full_language(alphabet))
    changed = True
    while changed:
        changed = False
        langs = sorted(current, key=RegularLanguage.sort_key)
        for i, l1 in enumerate(langs):
            if tag == "BA":
                c = language_op(tag, "not", [l1])
                if c not in current:
                    current.add(c)
                    changed = True
            for l2 in langs[i:]:
                if tag in ("BA", "DL01"):
                    new = [language_op(tag, "meet", [l1, l2]), language_op(tag, "join", [l1, l2])]
                elif tag == "JSL0":
                    new = [language_op(tag, "join", [l1, l2])]
                elif tag == "VECT2":
                    new = [language_op(tag, "add", [l1, l2])]
                else:
                    new = [language_op(tag, "add", [l1, l2]), language_op(tag, "mul", [l1, l2])]
                for lang in new:
                    if lang not in current:
                        current.add(lang)
                        changed = True
        if len(current) > cap:
            raise CapExceeded("algebraic closure exceeded cap")
    return current


def free_monoid_in_simple_pseudovariety(d: DMonoid, sigma) -> GeneratedDMonoid:
    """The free Sigma-generated D-monoid inside the pseudovariety of d.

    Realized as the image of the induced map into d^(maps Sigma -> |d|):
    the generator a goes to the tuple (u(a))_u; the closure under
    multiplication and the D-operations is computed inside the power without
    materializing it.
    """
    sigma = tuple(sigma)
    if d.size > 4 or len(sigma) > 2:
        raise CapExceeded("free-monoid construction bounded at |D| <= 4, |Sigma| <= 2")
    import itertools

    assignments = list(itertools.product(range(d.size), repeat=len(sigma)))
    gen_images = {
        a: tuple(u[i] for u in assignments) for i, a in enumerate(sigma)
    }
    from .langlib import free_mul, free_word, free_zero, free_combine
    from .algebra import signature

    tag = d.carrier.tag
    witness = {tuple(d.unit for _ in assignments): free_word(tag, sigma, "")}
    for a in sigma:
        witness.setdefault(gen_images[a], free_word(tag, sigma, a))
    sig = signature(tag)
    changed = True
    while changed:
        changed = False
        current = list(witness)
        for t1 in current:
            for t2 in current:
                prod = tuple(d.mult[x][y] for x, y in zip(t1, t2))
                if prod not in witness:
                    witness[prod] = free_mul(witness[t1], witness[t2])
                    changed = True
        for name, arity in sorted(sig.items()):
            op = d.carrier.op(name)
            if arity == 0:
                t = tuple(op for _ in assignments)
                if t not in witness:
                    witness[t] = free_zero(tag, sigma)
                    changed = True
            elif arity == 1:
                k = int(name[4:]) if name.startswith("smul") else 1
                for t1 in current:
                    t = tuple(op[x] for x in t1)
                    if t not in witness:
                        witness[t] = free_combine(tag, sigma, [(witness[t1], k)])
                        changed = True
            else:
                for t1 in current:
                    for t2 in current:
                        t = tuple(op[x][y] for x, y in zip(t1, t2))
                        if t not in witness:
                            witness[t] = free_combine(
                                tag, sigma, [(witness[t1], 1), (witness[t2], 1)]
                            )
                            changed = True
        if len(witness) > 512:
            raise CapExceeded("free monoid closure exceeded cap")
    elements = sorted(witness)
    index = {t: i for i, t in enumerate(elements)}
    from .algebra import make_algebra, vect_prime, standardize_vect

    ops = {}
    for name, arity in sig.items():
        op = d.carrier.op(name)
        if arity == 0:
            ops[name] = index[tuple(op for _ in assignments)]
        elif arity == 1:
            ops[name] = tuple(index[tuple(op[x] for x in t)] for t in elements)
        else:
            ops[name] = tuple(
                tuple(index[tuple(op[x][y] for x, y in zip(t1, t2))] for t2 in elements)
                for t1 in elements
            )
    order = None
    if d.carrier.order is not None:
        order = tuple(
            tuple(all(d.carrier.order[x][y] for x, y in zip(t1, t2)) for t2 in elements)
            for t1 in elements
        )
    carrier = make_algebra(tag, len(elements), ops, order)
    perm = tuple(range(len(elements)))
    if vect_prime(tag) is not None:
        carrier, perm = standardize_vect(carrier)
    mult = [[None] * len(elements) for _ in elements]
    for t1 in elements:
        for t2 in elements:
            prod = tuple(d.mult[x][y] for x, y in zip(t1, t2))
            mult[perm[index[t1]]][perm[index[t2]]] = perm[index[prod]]
    base = make_dmonoid(carrier, tuple(tuple(r) for r in mult), perm[index[tuple(d.unit for _ in assignments)]])
    return GeneratedDMonoid(
        base,
        sigma,
        tuple((a, perm[index[gen_images[a]]]) for a in sigma),
        tuple(sorted((perm[index[t]], witness[t]) for t in elements)),
    )


def recognized_languages(g: GeneratedDMonoid, pair: str, output_cap: int = 4096):
    """All languages recognized by the monoid via some output morphism."""
    a = associated_lalgebra(g)
    bundle = canonical_constants(pair)
    outs = all_morphisms(a.states, bundle.O_D)
    if len(outs) > output_cap:
        raise CapExceeded("too many output morphisms")
    return sorted(
        {language_of_output(a, out.table) for out in outs},
        key=RegularLanguage.sort_key,
    )


def languages_of_simple_pseudovariety(d: DMonoid, sigma, pair: str, cap: int = 4096) -> Coalgebra:
    """The Sigma-languages of the simple pseudovariety generated by d.

    Returns the local variety of all languages recognized by the free monoid
    of the pseudovariety; asserts it agrees with the dual coalgebra of that
    free monoid (language sets coincide) and that its dual monoid is
    isomorphic to the free monoid.
    """
    if d.carrier.tag != d_tag(pair):
        raise StructureError(f"generator must be a {d_tag(pair)}-monoid")
    free = free_monoid_in_simple_pseudovariety(d, sigma)
    langs = recognized_languages(free, pair)
    variety = generated_local_variety(pair, langs, cap)
    dual_coalg = dual_automaton_inv(associated_lalgebra(free))
    assert set(languages_of(variety)) == set(languages_of(dual_coalg)), (
        "recognized languages differ from the dual coalgebra's state languages"
    )
    g = dual_generated_monoid(variety)
    assert are_dmonoids_isomorphic(g.base, free.base) is not None, (
        "dual monoid of the language variety differs from the free monoid"
    )
    return variety


def recognizes_language(free: GeneratedDMonoid, pair: str, lang: RegularLanguage) -> bool:
    """Does the monoid recognize the language through its canonical quotient?

    L is recognized via e iff the language morphism factors through e as a
    D-morphism, iff the image of the pairing <e, L> in F x O_D is the graph
    of a function (single-valued over the first component).  The image is the
    closure of the word pairs under the componentwise D-operations.
    """
    from .algebra import signature

    a = associated_lalgebra(free)
    if tuple(lang.alphabet) != a.alphabet:
        raise StructureError("alphabet mismatch")
    bundle = canonical_constants(pair)
    o_d = bundle.O_D
    # word pairs by BFS over (monoid element, DFA state)
    seen = {(a.init, 0)}
    frontier = [(a.init, 0)]
    pairs = set()
    while frontier:
        m, s = frontier.pop()
        pairs.add((m, 1 if s in lang.finals else 0))
        for i, letter in enumerate(a.alphabet):
            nxt = (a.tr(letter)[m], lang.delta[s][i])
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    # close under the D-operations, componentwise
    sig = signature(a.states.tag)
    changed = True
    while changed:
        changed = False
        current = list(pairs)
        for name, arity in sorted(sig.items()):
            op_f = a.states.op(name)
            op_o = o_d.op(name)
            if arity == 0:
                if (op_f, op_o) not in pairs:
                    pairs.add((op_f, op_o))
                    changed = True
            elif arity == 1:
                for m, v in current:
                    t = (op_f[m], op_o[v])
                    if t not in pairs:
                        pairs.add(t)
                        changed = True
            else:
                for m1, v1 in current:
                    for m2, v2 in current:
                        t = (op_f[m1][m2], op_o[v1][v2])
                        if t not in pairs:
                            pairs.add(t)
                            changed = True
    values = {}
    for m, v in pairs:
        if values.setdefault(m, v) != v:
            return False
    if a.states.order is not None:
        # ordered case: the induced output must also be monotone
        for m1, v1 in values.items():
            for m2, v2 in values.items():
                if a.states.order[m1][m2] and not o_d.order[v1][v2]:
                    return False
    return True


def check_eilenberg_simple(d: DMonoid, pair: str, sample_regexes, n_max: int = 2) -> dict:
    """Membership in the language variety iff division of the generator.

    The language side asks whether the free monoid of the pseudovariety
    recognizes L (equivalently, L lies in languages_of_simple_pseudovariety);
    the monoid side runs the bounded division search on the dual generated
    monoid of L's local variety.  Cap overruns on either side mark the sample
    inconclusive, never as a pass.
    """
    report = {"pair": pair, "checked": 0, "mismatches": [], "inconclusive": []}
    free_cache = {}
    for rx in sample_regexes:
        if isinstance(rx, tuple):
            rx, alphabet = rx
            lang = parse_regex(rx, alphabet)
        else:
            lang = parse_regex(rx)
        sigma = "".join(lang.alphabet)
        report["checked"] += 1
        if sigma not in free_cache:
            try:
                free_cache[sigma] = free_monoid_in_simple_pseudovariety(d, sigma)
            except CapExceeded:
                free_cache[sigma] = None
        if free_cache[sigma] is None:
            report["inconclusive"].append(rx)
            continue
        member = recognizes_language(free_cache[sigma], pair, lang)
        local = generated_local_variety(pair, [lang])
        s = dual_generated_monoid(local)
        verdict = divides(s, d, n_max)
        if verdict is None:
            report["inconclusive"].append(rx)
        elif verdict != member:
            report["mismatches"].append((rx, member, verdict))
    return report


def check_simvargen(pair: str, generator, sigma, delta) -> dict:
    """The simple variety is generated by any alphabet at least as large.

    Regenerates the variety from its own Delta-component and compares the
    Sigma-components.  generator may be a local-variety Coalgebra or a raw
    list of languages (non-closed families are reported as gaps).
    """
    if isinstance(generator, Coalgebra):
        q = generator
        family = set(languages_of(q))
    else:
        family = set(generator)
        q = generated_local_variety(pair, sorted(family, key=RegularLanguage.sort_key))
        if set(languages_of(q)) != family:
            return {
                "ok": False,
                "gap": sorted(
                    set(languages_of(q)) - family, key=RegularLanguage.sort_key
                ),
                "reason": "family is not closed; regeneration added languages",
            }
    if len(delta) < len(sigma):
        raise StructureError("need |Delta| >= |Sigma|")
    v_delta = simple_variety_languages(q, delta)
    regenerated = simple_variety_languages(v_delta, sigma)
    direct = simple_variety_languages(q, sigma)
    ok = set(languages_of(regenerated)) == set(languages_of(direct))
    return {"ok": ok, "gap": None if ok else "component mismatch", "reason": None}
