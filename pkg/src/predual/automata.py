"""Enriched deterministic automata and their dual equivalence.

A Coalgebra is a deterministic automaton in the C-side variety: a state
algebra, per-letter algebraic transition endomorphisms, and an output
morphism to O_C (no initial state).  An LAlgebra is the D-side counterpart:
transitions plus an initial state, no outputs.  Dualization exchanges the
two, sending the output morphism to the initial-state selector.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgMorphism,
    FinAlgebra,
    StructureError,
    _search_maps,
    check_morphism,
    combine_elements,
    product,
    signature,
    validate_algebra,
)
from .duality import (
    PAIR_D_SIDE,
    c_tag,
    canonical_constants,
    d_tag,
    dual_morphism,
    dual_object,
    eta,
    out_from_dual_init,
    state_output,
)
from .langlib import (
    FreeElement,
    RegularLanguage,
    closure_under_ops_and_derivs,
    free_combine,
    free_word,
    free_zero,
    from_components,
    language_op,
    left_deriv,
    right_deriv,
)
from .monoids import GeneratedDMonoid, make_dmonoid, validate_dmonoid


def pair_of_d_tag(tag: str) -> str:
    for pair, d in PAIR_D_SIDE.items():
        if d == tag:
            return pair
    raise StructureError(f"no pair has D-side tag {tag}")


@dataclass(frozen=True)
class Coalgebra:
    pair: str
    alphabet: tuple
    states: FinAlgebra
    trans: tuple  # sorted tuple of (letter, endo table)
    out: tuple  # table into O_C (accepting value is 1)

    def tr(self, letter):
        for a, t in self.trans:
            if a == letter:
                return t
        raise StructureError(f"letter {letter!r} not in alphabet")


@dataclass(frozen=True)
class LAlgebra:
    pair: str
    alphabet: tuple
    states: FinAlgebra
    trans: tuple
    init: int

    def tr(self, letter):
        for a, t in self.trans:
            if a == letter:
                return t
        raise StructureError(f"letter {letter!r} not in alphabet")


@dataclass(frozen=True)
class OutputMorphism:
    """A D-morphism from an LAlgebra's states to O_D (a choice of finals)."""

    host: LAlgebra
    table: tuple


def make_coalgebra(pair, alphabet, states, trans: dict, out) -> Coalgebra:
    alphabet = tuple(alphabet)
    if states.tag != c_tag(pair):
        raise StructureError(f"states must be {c_tag(pair)} for pair {pair}")
    q = Coalgebra(
        pair, alphabet, states, tuple(sorted((a, tuple(trans[a])) for a in alphabet)),
        tuple(out),
    )
    errors = validate_coalgebra(q)
    if errors:
        raise StructureError("; ".join(errors))
    return q


def _vect_encoding_errors(states: FinAlgebra) -> list:
    from .algebra import standardize_vect, vect_prime

    if vect_prime(states.tag) is None:
        return []
    _, perm = standardize_vect(states)
    if perm != tuple(range(states.size)):
        return ["VECT states must use the standard basis encoding"]
    return []


def validate_coalgebra(q: Coalgebra) -> list:
    out = []
    errs = validate_algebra(q.states) + _vect_encoding_errors(q.states)
    if errs:
        return [f"states: {e}" for e in errs]
    for a in q.alphabet:
        ok, why = check_morphism(AlgMorphism(q.states, q.states, q.tr(a)))
        if not ok:
            out.append(f"transition {a!r}: {why}")
    bundle = canonical_constants(q.pair)
    ok, why = check_morphism(AlgMorphism(q.states, bundle.O_C, q.out))
    if not ok:
        out.append(f"output: {why}")
    return out


def make_lalgebra(pair, alphabet, states, trans: dict, init: int) -> LAlgebra:
    alphabet = tuple(alphabet)
    if states.tag != d_tag(pair):
        raise StructureError(f"states must be {d_tag(pair)} for pair {pair}")
    a = LAlgebra(
        pair, alphabet, states, tuple(sorted((x, tuple(trans[x])) for x in alphabet)),
        init,
    )
    errors = validate_lalgebra(a)
    if errors:
        raise StructureError("; ".join(errors))
    return a


def validate_lalgebra(a: LAlgebra) -> list:
    out = []
    errs = validate_algebra(a.states) + _vect_encoding_errors(a.states)
    if errs:
        return [f"states: {e}" for e in errs]
    for x in a.alphabet:
        ok, why = check_morphism(AlgMorphism(a.states, a.states, a.tr(x)))
        if not ok:
            out.append(f"transition {x!r}: {why}")
    if not 0 <= a.init < a.states.size:
        out.append("initial state out of range")
    return out


# ---------------------------------------------------------------------------
# duality of automata


def dual_automaton(q: Coalgebra) -> LAlgebra:
    """(Q, gamma) -> (Q^, gamma^): the output morphism dualizes to the initial
    state selector."""
    bundle = canonical_constants(q.pair)
    dstates = dual_object(q.pair, q.states)
    trans = {}
    for a in q.alphabet:
        d = dual_morphism(q.pair, AlgMorphism(q.states, q.states, q.tr(a)))
        trans[a] = d.table
    out_m = AlgMorphism(q.states, bundle.O_C, q.out)
    init = dual_morphism(q.pair, out_m).table[bundle.gen_one_D]
    return LAlgebra(
        q.pair, q.alphabet, dstates, tuple(sorted((a, t) for a, t in trans.items())),
        init,
    )


def dual_automaton_inv(a: LAlgebra) -> Coalgebra:
    """(A, alpha) -> its dual coalgebra; the initial-state selector dualizes
    to the output morphism."""
    cstates = dual_object(a.pair, a.states)
    trans = {}
    for x in a.alphabet:
        d = dual_morphism(a.pair, AlgMorphism(a.states, a.states, a.tr(x)))
        trans[x] = d.table
    out = out_from_dual_init(a.pair, a.states, a.init)
    return Coalgebra(
        a.pair, a.alphabet, cstates, tuple(sorted((x, t) for x, t in trans.items())),
        out,
    )


def relabel_double_dual(pair: str, states: FinAlgebra, qdd: Coalgebra) -> Coalgebra:
    """Transport a coalgebra on dual(dual(states)) back onto the carrier."""
    e = eta(pair, states)
    inv = [0] * states.size
    for x, v in enumerate(e.table):
        inv[v] = x
    trans = {
        a: tuple(inv[qdd.tr(a)[e.table[x]]] for x in range(states.size))
        for a in qdd.alphabet
    }
    out = tuple(qdd.out[e.table[x]] for x in range(states.size))
    return Coalgebra(
        pair, qdd.alphabet, states,
        tuple(sorted((a, t) for a, t in trans.items())), out,
    )


# ---------------------------------------------------------------------------
# running words, languages


def run_word(a: LAlgebra, word) -> int:
    """e_A(word): apply the first letter first (alpha_w = alpha_an ... alpha_a1)."""
    s = a.init
    for ch in word:
        s = a.tr(ch)[s]
    return s


def run_word_co(q: Coalgebra, word) -> AlgMorphism:
    """gamma_w as a composite endomorphism table."""
    t = tuple(range(q.states.size))
    for ch in word:
        step = q.tr(ch)
        t = tuple(step[v] for v in t)
    return AlgMorphism(q.states, q.states, t)


def eval_free(a: LAlgebra, x: FreeElement) -> int:
    """e_A on a free element: combine word runs with the D-structure."""
    if tuple(x.alphabet) != a.alphabet:
        raise StructureError("alphabet mismatch")
    return combine_elements(
        a.states, [(run_word(a, w), c) for w, c in x.pairs]
    )


def language_of_state(q: Coalgebra, state: int) -> RegularLanguage:
    """Minimal automaton of {w : out(gamma_w(state)) = 1} (structure forgotten)."""
    delta = [
        tuple(q.tr(a)[s] for a in q.alphabet) for s in range(q.states.size)
    ]
    finals = {s for s in range(q.states.size) if q.out[s] == 1}
    return from_components(q.alphabet, delta, finals, state)


def language_of_output(a: LAlgebra, out) -> RegularLanguage:
    """Minimal automaton of {w : out(alpha_w(init)) = 1}."""
    table = out.table if isinstance(out, OutputMorphism) else tuple(out)
    delta = [
        tuple(a.tr(x)[s] for x in a.alphabet) for s in range(a.states.size)
    ]
    finals = {s for s in range(a.states.size) if table[s] == 1}
    return from_components(a.alphabet, delta, finals, a.init)


def state_output_morphism(q: Coalgebra, state: int) -> tuple:
    """Dual of a state selector: output table on the dual L-algebra."""
    return state_output(q.pair, q.states, state)


def right_derivative_view(q: Coalgebra, a) -> Coalgebra:
    """Same states and transitions; output becomes out . gamma_a."""
    step = q.tr(a)
    return Coalgebra(
        q.pair, q.alphabet, q.states, q.trans,
        tuple(q.out[step[s]] for s in range(q.states.size)),
    )


def shift_initial(a: LAlgebra, x: FreeElement) -> LAlgebra:
    """Same transitions, initial state e_A(x)."""
    return LAlgebra(a.pair, a.alphabet, a.states, a.trans, eval_free(a, x))


def shift_initial_co(q: Coalgebra, x: FreeElement) -> Coalgebra:
    """Q_x, defined through the dual: dual(Q_x) = dual(Q) with init e(rev x)."""
    from .langlib import rev_free

    shifted = shift_initial(dual_automaton(q), rev_free(x))
    qx = relabel_double_dual(q.pair, q.states, dual_automaton_inv(shifted))
    assert qx.trans == q.trans
    return qx


# ---------------------------------------------------------------------------
# coalgebra homomorphisms (bounded search)


def find_coalgebra_hom(src: Coalgebra, dst: Coalgebra):
    """A T_Sigma-coalgebra homomorphism src -> dst, or None (exhaustive).

    The table must be a C-algebra morphism, commute with every letter, and
    satisfy dst.out o h = src.out.  Transitions act as unary operations, so
    the generic forced-propagation search applies.
    """
    if src.pair != dst.pair or src.alphabet != dst.alphabet:
        raise StructureError("mismatched automata")
    sig = sorted(signature(src.states.tag).items())
    src_ops = [(ar, src.states.op(name)) for name, ar in sig]
    dst_ops = [(ar, dst.states.op(name)) for name, ar in sig]
    for a in src.alphabet:
        src_ops.append((1, src.tr(a)))
        dst_ops.append((1, dst.tr(a)))

    def allowed(x, v):
        return dst.out[v] == src.out[x]

    for table in _search_maps(
        src_ops, dst_ops, src.states.size, dst.states.size,
        src.states.order, dst.states.order, False, allowed=allowed,
    ):
        ok, _ = check_morphism(AlgMorphism(src.states, dst.states, table))
        if ok:
            return table
    return None


def find_lalgebra_hom(src: LAlgebra, dst: LAlgebra):
    """An L_Sigma-algebra homomorphism src -> dst, or None (exhaustive)."""
    if src.pair != dst.pair or src.alphabet != dst.alphabet:
        raise StructureError("mismatched automata")
    sig = sorted(signature(src.states.tag).items())
    src_ops = [(ar, src.states.op(name)) for name, ar in sig]
    dst_ops = [(ar, dst.states.op(name)) for name, ar in sig]
    for a in src.alphabet:
        src_ops.append((1, src.tr(a)))
        dst_ops.append((1, dst.tr(a)))
    for table in _search_maps(
        src_ops, dst_ops, src.states.size, dst.states.size,
        src.states.order, dst.states.order, False,
        fixed={src.init: dst.init},
    ):
        ok, _ = check_morphism(AlgMorphism(src.states, dst.states, table))
        if ok:
            return table
    return None


# ---------------------------------------------------------------------------
# subcoalgebras of the rational fixpoint, local varieties


HOM_SEARCH_BOUND = 8


def is_subcoalgebra_of_rho(q: Coalgebra) -> bool:
    """True iff q embeds in the coalgebra of all regular languages.

    Computes both criteria and asserts agreement: (i) all states accept
    pairwise distinct languages; (ii) the dual L-algebra is reachable
    (word images generate the carrier under the D-operations).
    """
    langs = [language_of_state(q, s) for s in range(q.states.size)]
    crit_langs = len(set(langs)) == q.states.size

    a = dual_automaton(q)
    seen = {a.init}
    frontier = [a.init]
    while frontier:
        s = frontier.pop()
        for letter in a.alphabet:
            t = a.tr(letter)[s]
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    from .algebra import generated_subalgebra

    closure = generated_subalgebra(a.states, seen)
    crit_reach = closure.source.size == a.states.size

    assert crit_langs == crit_reach, "rho-subcoalgebra criteria disagree"
    return crit_langs


def is_local_variety(q: Coalgebra) -> bool:
    """True iff q (a subcoalgebra of rho) is closed under right derivatives.

    Criterion (i): every right derivative of a state language is again a state
    language.  Criterion (ii), checked for carriers up to HOM_SEARCH_BOUND:
    a coalgebra homomorphism (Q)_a -> Q exists for every letter.  Both are
    computed and must agree.
    """
    if not is_subcoalgebra_of_rho(q):
        raise StructureError("is_local_variety requires a subcoalgebra of rho")
    langs = {language_of_state(q, s) for s in range(q.states.size)}
    crit_langs = all(
        right_deriv(l, a) in langs for l in langs for a in q.alphabet
    )
    if q.states.size <= HOM_SEARCH_BOUND:
        crit_hom = all(
            find_coalgebra_hom(right_derivative_view(q, a), q) is not None
            for a in q.alphabet
        )
        assert crit_langs == crit_hom, "local-variety criteria disagree"
    return crit_langs


def local_variety_witness(q: Coalgebra):
    """First (state language, letter) whose right derivative is missing."""
    langs = {language_of_state(q, s) for s in range(q.states.size)}
    for l in sorted(langs, key=RegularLanguage.sort_key):
        for a in q.alphabet:
            if right_deriv(l, a) not in langs:
                return l, a
    return None


def generated_local_variety(pair: str, seeds, cap: int = 4096) -> Coalgebra:
    """Least local variety containing the seed languages, as a coalgebra.

    The closure is computed on canonical automata; the states algebra carries
    the pair's C-side structure, transitions are left derivatives and the
    output is acceptance of the empty word.
    """
    tag = c_tag(pair)
    langs = closure_under_ops_and_derivs(tag, seeds, cap)
    alphabet = langs[0].alphabet
    index = {l: i for i, l in enumerate(langs)}
    sig = signature(tag)
    ops = {}
    for name, arity in sig.items():
        if arity == 0:
            ops[name] = index[language_op(tag, name, [langs[0]])]
        elif arity == 1:
            ops[name] = tuple(index[language_op(tag, name, [l])] for l in langs)
        else:
            ops[name] = tuple(
                tuple(index[language_op(tag, name, [l1, l2])] for l2 in langs)
                for l1 in langs
            )
    states = FinAlgebra(tag, len(langs), tuple(sorted(ops.items())), None)
    errors = validate_algebra(states)
    if errors:
        raise StructureError(f"closure is not a valid {tag} algebra: {errors[0]}")
    trans = {
        a: tuple(index[left_deriv(l, a)] for l in langs) for a in alphabet
    }
    out = tuple(1 if l.accepts("") else 0 for l in langs)
    from .algebra import standardize_vect, vect_prime

    if vect_prime(tag) is not None:
        # dual maps read matrices off the standard basis encoding
        states, perm = standardize_vect(states)
        inv = [0] * len(langs)
        for old, new in enumerate(perm):
            inv[new] = old
        trans = {
            a: tuple(perm[t[inv[x]]] for x in range(len(langs)))
            for a, t in trans.items()
        }
        out = tuple(out[inv[x]] for x in range(len(langs)))
    return Coalgebra(
        pair, alphabet, states, tuple(sorted((a, t) for a, t in trans.items())), out
    )


def languages_of(q: Coalgebra):
    return [language_of_state(q, s) for s in range(q.states.size)]


def language_quotient(q: Coalgebra):
    """Factorize the semantic map of a coalgebra through its language classes.

    States accepting equal languages are merged; returns (epi table, quotient
    coalgebra).  Nothing is normalized silently -- callers decide whether to
    use the quotient when a coalgebra fails the distinct-languages criterion.
    """
    langs = languages_of(q)
    classes = []
    epi = []
    for l in langs:
        if l not in classes:
            classes.append(l)
        epi.append(classes.index(l))
    n = len(classes)
    rep = [epi.index(i) for i in range(n)]
    sig = signature(q.states.tag)
    ops = {}
    for name, arity in sig.items():
        t = q.states.op(name)
        if arity == 0:
            ops[name] = epi[t]
        elif arity == 1:
            ops[name] = tuple(epi[t[rep[i]]] for i in range(n))
        else:
            ops[name] = tuple(
                tuple(epi[t[rep[i]][rep[j]]] for j in range(n)) for i in range(n)
            )
    states = FinAlgebra(q.states.tag, n, tuple(sorted(ops.items())), None)
    errors = validate_algebra(states)
    if errors:
        raise StructureError(f"language quotient is not a valid algebra: {errors[0]}")
    trans = {a: tuple(epi[q.tr(a)[rep[i]]] for i in range(n)) for a in q.alphabet}
    out = tuple(q.out[rep[i]] for i in range(n))
    quotient = Coalgebra(
        q.pair, q.alphabet, states,
        tuple(sorted((a, t) for a, t in trans.items())), out,
    )
    return tuple(epi), quotient


def output_value(a: LAlgebra, out, x) -> int:
    """The D-morphism view of an output: (out . e_A)(x) on a free element."""
    table = out.table if isinstance(out, OutputMorphism) else out
    return table[eval_free(a, x)]


# ---------------------------------------------------------------------------
# the dual Sigma-generated D-monoid


def dual_generated_monoid(q: Coalgebra, assume_local_variety: bool = False) -> GeneratedDMonoid:
    """The dual D-monoid of a local variety, with representative elements.

    The carrier is the dual object of the states; the unit is e(eps), the
    multiplication is defined on representatives via e(x) o e(y) = e(x * y).
    Word representatives are shortlex-minimal (breadth-first); elements not
    reachable by words alone (possible outside SET/POS) get canonical
    D-combinations of word representatives.
    """
    if not assume_local_variety and not is_local_variety(q):
        raise StructureError("dual_generated_monoid requires a local variety")
    a = dual_automaton(q)
    tag = a.states.tag
    alphabet = a.alphabet
    n = a.states.size
    # breadth-first word reachability gives shortlex-minimal word representatives
    reprs = {a.init: free_word(tag, alphabet, "")}
    word_of = {a.init: ""}
    frontier = [a.init]
    while frontier:
        nxt = []
        for s in frontier:
            for letter in alphabet:
                t = a.tr(letter)[s]
                if t not in reprs:
                    w = word_of[s] + letter
                    word_of[t] = w
                    reprs[t] = free_word(tag, alphabet, w)
                    nxt.append(t)
        frontier = nxt
    if len(reprs) < n:
        _close_reprs_under_ops(a, reprs)
    if len(reprs) < n:
        raise AssertionError("dual carrier not generated by words and D-operations")
    _minimize_reprs(a, reprs)
    from .langlib import free_mul

    mult = tuple(
        tuple(eval_free(a, free_mul(reprs[x], reprs[y])) for y in range(n))
        for x in range(n)
    )
    base = make_dmonoid(a.states, mult, a.init)
    problems = validate_dmonoid(base)
    if problems:
        raise AssertionError(f"dual monoid fails validation: {problems[0]}")
    gens = tuple((letter, run_word(a, letter)) for letter in alphabet)
    g = GeneratedDMonoid(base, alphabet, gens, tuple(sorted(reprs.items())))
    from .monoids import associated_lalgebra

    assert associated_lalgebra(g) == a, "associated L-algebra differs from the dual"
    return g


def _close_reprs_under_ops(a: LAlgebra, reprs: dict):
    tag = a.states.tag
    sig = signature(tag)
    changed = True
    while changed:
        changed = False
        current = list(reprs)
        for name, arity in sorted(sig.items()):
            op = a.states.op(name)
            if arity == 0:
                if op not in reprs:
                    reprs[op] = free_zero(tag, a.alphabet)
                    changed = True
            elif arity == 1:
                k = int(name[4:]) if name.startswith("smul") else 1
                for x in current:
                    if op[x] not in reprs:
                        reprs[op[x]] = free_combine(tag, a.alphabet, [(reprs[x], k)])
                        changed = True
            else:
                for x in current:
                    for y in current:
                        z = op[x][y]
                        if z not in reprs:
                            reprs[z] = free_combine(
                                tag, a.alphabet, [(reprs[x], 1), (reprs[y], 1)]
                            )
                            changed = True


def _minimize_reprs(a: LAlgebra, reprs: dict):
    """Replace representatives by shortlex-minimal combinations of word reps."""
    tag = a.states.tag
    if tag in ("SET", "POS"):
        return
    words = sorted(
        {w for fe in reprs.values() for w, _ in fe.pairs}, key=lambda w: (len(w), w)
    )
    if tag == "SET_STAR":
        candidates = [free_zero(tag, a.alphabet)] + [
            free_word(tag, a.alphabet, w) for w in words
        ]
    else:
        if len(words) > 12:
            return  # candidate pool too large; keep constructed reps
        from itertools import combinations
        from .algebra import vect_prime

        p = vect_prime(tag)
        candidates = [free_zero(tag, a.alphabet)]
        coeffs = range(1, (p or 2))
        pool = []
        for r in range(1, len(words) + 1):
            for combo in combinations(words, r):
                if p is None or p == 2:
                    pool.append([(w, 1) for w in combo])
                else:
                    from itertools import product as iproduct

                    for cs in iproduct(coeffs, repeat=r):
                        pool.append(list(zip(combo, cs)))
        from .langlib import make_free

        candidates += [make_free(tag, a.alphabet, pairs) for pairs in pool]
    candidates.sort(key=FreeElement.sort_key)
    best = {}
    for fe in candidates:
        elem = eval_free(a, fe)
        if elem not in best:
            best[elem] = fe
    for elem in reprs:
        if elem in best:
            reprs[elem] = best[elem]


# ---------------------------------------------------------------------------
# products of L-algebras / coproducts of coalgebras


def lalgebra_product(a1: LAlgebra, a2: LAlgebra) -> LAlgebra:
    if a1.pair != a2.pair or a1.alphabet != a2.alphabet:
        raise StructureError("mismatched automata")
    prod, _, _ = product(a1.states, a2.states)
    n2 = a2.states.size
    trans = {
        x: tuple(
            a1.tr(x)[s // n2] * n2 + a2.tr(x)[s % n2] for s in range(prod.size)
        )
        for x in a1.alphabet
    }
    return LAlgebra(
        a1.pair, a1.alphabet, prod,
        tuple(sorted((x, t) for x, t in trans.items())),
        a1.init * n2 + a2.init,
    )


def coalgebra_coproduct(q1: Coalgebra, q2: Coalgebra) -> Coalgebra:
    """Coproduct in the C-side category, computed through the duality."""
    return dual_automaton_inv(lalgebra_product(dual_automaton(q1), dual_automaton(q2)))


# ---------------------------------------------------------------------------
# bounded enumeration of coalgebras (fuel for the law suites)


def enumerate_coalgebras(pair, alphabet, max_states, limit=None):
    """All valid coalgebras of the pair with small carriers, deterministically.

    Yields coalgebras whose states algebra is enumerated up to max_states,
    transitions range over all endomorphisms and outputs over all morphisms
    to O_C.  limit caps the total count (deterministic prefix).
    """
    from .algebra import all_morphisms, enumerate_algebras, vect_prime

    bundle = canonical_constants(pair)
    tag = c_tag(pair)
    alphabet = tuple(alphabet)
    count = 0
    p = vect_prime(tag)
    if tag in ("BA", "BR"):
        sizes = [s for s in (1, 2, 4, 8) if s <= max_states]
    elif p is not None:
        sizes = [p**d for d in range(4) if p**d <= max_states]
    else:
        sizes = range(1, max_states + 1)
    for n in sizes:
        for states in enumerate_algebras(tag, n):
            endos = [f.table for f in all_morphisms(states, states)]
            outs = [f.table for f in all_morphisms(states, bundle.O_C)]
            import itertools

            for combo in itertools.product(endos, repeat=len(alphabet)):
                for out in outs:
                    yield Coalgebra(
                        pair,
                        alphabet,
                        states,
                        tuple(sorted(zip(alphabet, combo))),
                        out,
                    )
                    count += 1
                    if limit is not None and count >= limit:
                        return
