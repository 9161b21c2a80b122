"""Regular languages as canonical minimal DFAs, with derivative calculus.

The regex grammar accepts ∅ (empty language), ε (empty word), letters,
concatenation, union |, intersection &, complement ~ and Kleene star.
Star binds tightest, then ~ (prefix, applying to one starred factor),
then concatenation, then &, then |.

A RegularLanguage is a complete minimal DFA whose states are numbered
breadth-first from the initial state (always state 0) with letters taken in
alphabet order, so structural equality coincides with language equality.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import CapExceeded, StructureError, vect_prime


class RegexSyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


EMPTY = ("empty",)
EPS = ("eps",)


def _mk_lit(ch):
    return ("lit", ch)


def _mk_cat(r, s):
    if r == EMPTY or s == EMPTY:
        return EMPTY
    if r == EPS:
        return s
    if s == EPS:
        return r
    if r[0] == "cat":  # right-associate
        return _mk_cat(r[1], _mk_cat(r[2], s))
    return ("cat", r, s)


def _mk_or(items):
    flat = set()
    for r in items:
        if r[0] == "or":
            flat.update(r[1])
        elif r != EMPTY:
            flat.add(r)
    if ("not", EMPTY) in flat:
        return ("not", EMPTY)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return next(iter(flat))
    return ("or", frozenset(flat))


def _mk_and(items):
    flat = set()
    for r in items:
        if r[0] == "and":
            flat.update(r[1])
        elif r == EMPTY:
            return EMPTY
        elif r != ("not", EMPTY):
            flat.add(r)
    if not flat:
        return ("not", EMPTY)
    if len(flat) == 1:
        return next(iter(flat))
    return ("and", frozenset(flat))


def _mk_star(r):
    if r in (EMPTY, EPS):
        return EPS
    if r[0] == "star":
        return r
    return ("star", r)


def _mk_not(r):
    if r[0] == "not":
        return r[1]
    return ("not", r)


_META = set("()|&*~")
_EMPTY_CHARS = {"∅", "@"}
_EPS_CHARS = {"ε", "%"}


def _parse(text):
    pos = 0

    def peek():
        return text[pos] if pos < len(text) else None

    def parse_union():
        nonlocal pos
        node = parse_inter()
        while peek() == "|":
            pos += 1
            node = _mk_or([node, parse_inter()])
        return node

    def parse_inter():
        nonlocal pos
        node = parse_concat()
        while peek() == "&":
            pos += 1
            node = _mk_and([node, parse_concat()])
        return node

    def parse_concat():
        nonlocal pos
        node = parse_factor()
        while True:
            ch = peek()
            if ch is None or ch in "|&)":
                return node
            node = _mk_cat(node, parse_factor())

    def parse_factor():
        nonlocal pos
        ch = peek()
        if ch == "~":
            pos += 1
            return _mk_not(parse_factor())
        node = parse_atom()
        while peek() == "*":
            pos += 1
            node = _mk_star(node)
        return node

    def parse_atom():
        nonlocal pos
        ch = peek()
        if ch is None:
            raise RegexSyntaxError("unexpected end of regex", pos)
        if ch == "(":
            start = pos
            pos += 1
            node = parse_union()
            if peek() != ")":
                raise RegexSyntaxError("unbalanced parenthesis", start)
            pos += 1
            while peek() == "*":
                pos += 1
                node = _mk_star(node)
            return node
        if ch in _EMPTY_CHARS:
            pos += 1
            return EMPTY
        if ch in _EPS_CHARS:
            pos += 1
            return EPS
        if ch in _META:
            raise RegexSyntaxError(f"unexpected {ch!r}", pos)
        pos += 1
        return _mk_lit(ch)

    node = parse_union()
    if pos != len(text):
        raise RegexSyntaxError(f"unexpected {text[pos]!r}", pos)
    return node


def _nullable(r):
    kind = r[0]
    if kind in ("eps", "star"):
        return True
    if kind in ("empty", "lit"):
        return False
    if kind == "cat":
        return _nullable(r[1]) and _nullable(r[2])
    if kind == "or":
        return any(_nullable(x) for x in r[1])
    if kind == "and":
        return all(_nullable(x) for x in r[1])
    return not _nullable(r[1])  # not


def _deriv(r, a):
    kind = r[0]
    if kind in ("empty", "eps"):
        return EMPTY
    if kind == "lit":
        return EPS if r[1] == a else EMPTY
    if kind == "cat":
        head = _mk_cat(_deriv(r[1], a), r[2])
        if _nullable(r[1]):
            return _mk_or([head, _deriv(r[2], a)])
        return head
    if kind == "or":
        return _mk_or([_deriv(x, a) for x in r[1]])
    if kind == "and":
        return _mk_and([_deriv(x, a) for x in r[1]])
    if kind == "star":
        return _mk_cat(_deriv(r[1], a), r)
    return _mk_not(_deriv(r[1], a))  # not


def _regex_letters(r, acc):
    kind = r[0]
    if kind == "lit":
        acc.add(r[1])
    elif kind == "cat":
        _regex_letters(r[1], acc)
        _regex_letters(r[2], acc)
    elif kind in ("or", "and"):
        for x in r[1]:
            _regex_letters(x, acc)
    elif kind in ("star", "not"):
        _regex_letters(r[1], acc)


@dataclass(frozen=True)
class RegularLanguage:
    """Canonical minimal complete DFA; initial state is 0."""

    alphabet: tuple
    size: int
    delta: tuple  # delta[state][letter_index]
    finals: frozenset

    def letter_index(self, a):
        try:
            return self.alphabet.index(a)
        except ValueError:
            raise StructureError(f"letter {a!r} not in alphabet {self.alphabet}") from None

    def accepts(self, word) -> bool:
        s = 0
        for ch in word:
            s = self.delta[s][self.letter_index(ch)]
        return s in self.finals

    def is_empty(self) -> bool:
        return not self.finals

    def sort_key(self):
        return (len(self.alphabet), self.alphabet, self.size, self.delta,
                tuple(sorted(self.finals)))


def _minimize(alphabet, n, delta, finals, initial):
    """Trim + Moore partition refinement + canonical BFS renumbering."""
    k = len(alphabet)
    # reachable
    reach = [initial]
    seen = {initial}
    for s in reach:
        for i in range(k):
            t = delta[s][i]
            if t not in seen:
                seen.add(t)
                reach.append(t)
    # refine: classes only split, so a stable class count means a fixed point
    block = {s: int(s in finals) for s in reach}
    while True:
        sig = {
            s: (block[s],) + tuple(block[delta[s][i]] for i in range(k)) for s in reach
        }
        classes = {}
        new_block = {}
        for s in reach:
            key = sig[s]
            if key not in classes:
                classes[key] = len(classes)
            new_block[s] = classes[key]
        if len(classes) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    # representatives per class
    rep = {}
    for s in reach:
        rep.setdefault(block[s], s)
    # canonical BFS from the initial class
    order = [block[initial]]
    index = {block[initial]: 0}
    for c in order:
        s = rep[c]
        for i in range(k):
            t = block[delta[s][i]]
            if t not in index:
                index[t] = len(order)
                order.append(t)
    size = len(order)
    new_delta = tuple(
        tuple(index[block[delta[rep[c]][i]]] for i in range(k)) for c in order
    )
    new_finals = frozenset(index[c] for c in order if rep[c] in finals)
    return RegularLanguage(tuple(alphabet), size, new_delta, new_finals)


def parse_regex(text: str, alphabet=None) -> RegularLanguage:
    """Compile a regex to its canonical minimal DFA via Brzozowski derivatives."""
    ast = _parse(text)
    letters = set()
    _regex_letters(ast, letters)
    if alphabet is None:
        alphabet = sorted(letters)
        if not alphabet:
            raise RegexSyntaxError("cannot infer an alphabet; pass one explicitly", 0)
    else:
        alphabet = list(alphabet)
        if not set(letters) <= set(alphabet):
            raise StructureError(f"regex letters {sorted(letters)} not in alphabet {alphabet}")
    states = {ast: 0}
    worklist = [ast]
    rows = {}
    finals = set()
    while worklist:
        r = worklist.pop(0)
        if len(states) > 10000:
            raise CapExceeded("regex state cap exceeded")
        row = []
        for a in alphabet:
            d = _deriv(r, a)
            if d not in states:
                states[d] = len(states)
                worklist.append(d)
            row.append(states[d])
        rows[states[r]] = tuple(row)
        if _nullable(r):
            finals.add(states[r])
    delta = [rows[i] for i in range(len(states))]
    return _minimize(alphabet, len(states), delta, finals, 0)


def from_components(alphabet, delta, finals, initial) -> RegularLanguage:
    """Canonicalize an explicit complete DFA."""
    return _minimize(tuple(alphabet), len(delta), [tuple(r) for r in delta], set(finals), initial)


def empty_language(alphabet) -> RegularLanguage:
    k = len(alphabet)
    return RegularLanguage(tuple(alphabet), 1, ((0,) * k,), frozenset())


def full_language(alphabet) -> RegularLanguage:
    k = len(alphabet)
    return RegularLanguage(tuple(alphabet), 1, ((0,) * k,), frozenset({0}))


def epsilon_language(alphabet) -> RegularLanguage:
    return parse_regex("ε", alphabet)


def _product(l1: RegularLanguage, l2: RegularLanguage, keep) -> RegularLanguage:
    if l1.alphabet != l2.alphabet:
        raise StructureError("alphabet mismatch")
    k = len(l1.alphabet)
    n2 = l2.size
    delta = []
    finals = set()
    for s1 in range(l1.size):
        for s2 in range(n2):
            delta.append(
                tuple(l1.delta[s1][i] * n2 + l2.delta[s2][i] for i in range(k))
            )
            if keep(s1 in l1.finals, s2 in l2.finals):
                finals.add(s1 * n2 + s2)
    return _minimize(l1.alphabet, len(delta), delta, finals, 0)


def union(l1, l2):
    return _product(l1, l2, lambda a, b: a or b)


def intersection(l1, l2):
    return _product(l1, l2, lambda a, b: a and b)


def symmetric_difference(l1, l2):
    return _product(l1, l2, lambda a, b: a != b)


def complement(l: RegularLanguage) -> RegularLanguage:
    return _minimize(
        l.alphabet, l.size, l.delta, set(range(l.size)) - set(l.finals), 0
    )


def left_deriv(l: RegularLanguage, a) -> RegularLanguage:
    """{w : aw in L}"""
    return _minimize(l.alphabet, l.size, l.delta, set(l.finals), l.delta[0][l.letter_index(a)])


def right_deriv(l: RegularLanguage, a) -> RegularLanguage:
    """{w : wa in L} -- computed by shifting finals through the letter."""
    i = l.letter_index(a)
    finals = {s for s in range(l.size) if l.delta[s][i] in l.finals}
    return _minimize(l.alphabet, l.size, l.delta, finals, 0)


def word_deriv(l: RegularLanguage, word) -> RegularLanguage:
    for a in word:
        l = left_deriv(l, a)
    return l


def reversal(l: RegularLanguage) -> RegularLanguage:
    """Reverse-language DFA via the reversed-subset construction."""
    k = len(l.alphabet)
    start = frozenset(l.finals)
    states = {start: 0}
    worklist = [start]
    delta = []
    finals = set()
    while worklist:
        s = worklist.pop(0)
        row = []
        for i in range(k):
            t = frozenset(q for q in range(l.size) if l.delta[q][i] in s)
            if t not in states:
                states[t] = len(states)
                worklist.append(t)
            row.append(states[t])
        while len(delta) <= states[s]:
            delta.append(None)
        delta[states[s]] = tuple(row)
        if 0 in s:
            finals.add(states[s])
    return _minimize(l.alphabet, len(delta), delta, finals, 0)


LANGUAGE_OPS = {
    "BA": ("meet", "join", "not", "zero", "one"),
    "DL01": ("meet", "join", "zero", "one"),
    "JSL0": ("join", "zero"),
    "VECT2": ("add", "zero", "smul0", "smul1"),
    "BR": ("add", "mul", "zero"),
}


def language_op(tag: str, op: str, operands) -> RegularLanguage:
    """Apply a C-side algebraic operation to languages (per the tag signature)."""
    if tag not in LANGUAGE_OPS or op not in LANGUAGE_OPS[tag]:
        raise StructureError(f"operation {op!r} is not in the {tag} signature")
    operands = list(operands)
    if op == "join":
        return union(*operands)
    if op == "meet" or (op == "mul" and tag == "BR"):
        return intersection(*operands)
    if op == "not":
        return complement(operands[0])
    if op == "add":
        return symmetric_difference(*operands)
    if op == "smul0":
        return empty_language(operands[0].alphabet)
    if op == "smul1":
        return operands[0]
    if op == "zero":
        return empty_language(operands[0].alphabet)
    return full_language(operands[0].alphabet)  # one


# ---------------------------------------------------------------------------
# free D-monoid elements


def _shortlex(w):
    return (len(w), w)


@dataclass(frozen=True)
class FreeElement:
    """Element of the free D-monoid on an alphabet, in canonical form.

    pairs is a shortlex-sorted tuple of (word, coefficient).  SET/POS carry
    exactly one word; JSL0 a finite set (coefficients 1); VECT(p) a weighted
    finite set (coefficients in 1..p-1); SET_STAR at most one word, with the
    empty tuple denoting the absorbing zero.
    """

    tag: str
    alphabet: tuple
    pairs: tuple

    def is_zero(self):
        return not self.pairs

    def single_word(self):
        if len(self.pairs) != 1:
            raise StructureError(f"{self.tag} element is not a single word")
        return self.pairs[0][0]

    def sort_key(self):
        return (len(self.pairs),) + tuple(
            (_shortlex(w), c) for w, c in self.pairs
        )


def make_free(tag: str, alphabet, pairs) -> FreeElement:
    """Canonicalize a list of (word, coeff) pairs into a FreeElement."""
    alphabet = tuple(alphabet)
    p = vect_prime(tag)
    acc = {}
    for w, c in pairs:
        w = str(w)
        if any(ch not in alphabet for ch in w):
            raise StructureError(f"word {w!r} not over alphabet {alphabet}")
        if tag in ("SET", "POS", "SET_STAR", "JSL0"):
            if c != 1:
                raise StructureError("coefficients must be 1 for this tag")
            acc[w] = 1
        elif p is not None:
            acc[w] = (acc.get(w, 0) + c) % p
        else:
            raise StructureError(f"tag {tag} has no free monoid here")
    items = tuple(sorted(((w, c) for w, c in acc.items() if c), key=lambda x: _shortlex(x[0])))
    if tag in ("SET", "POS") and len(items) != 1:
        raise StructureError(f"{tag} elements are single words")
    if tag == "SET_STAR" and len(items) > 1:
        raise StructureError("SET_STAR elements are a word or zero")
    return FreeElement(tag, alphabet, items)


def free_word(tag, alphabet, word) -> FreeElement:
    return make_free(tag, alphabet, [(word, 1)])


def free_zero(tag, alphabet) -> FreeElement:
    if tag in ("SET", "POS"):
        raise StructureError(f"{tag} has no zero element")
    return FreeElement(tag, tuple(alphabet), ())


def free_unit(tag, alphabet) -> FreeElement:
    return free_word(tag, alphabet, "")


def rev_free(x: FreeElement) -> FreeElement:
    return make_free(x.tag, x.alphabet, [(w[::-1], c) for w, c in x.pairs])


def free_mul(x: FreeElement, y: FreeElement) -> FreeElement:
    """Multiplication of the free D-monoid: (weighted) concatenation."""
    if x.tag != y.tag or x.alphabet != y.alphabet:
        raise StructureError("tag/alphabet mismatch")
    p = vect_prime(x.tag)
    acc = {}
    for w1, c1 in x.pairs:
        for w2, c2 in y.pairs:
            w = w1 + w2
            if x.tag == "JSL0":
                acc[w] = 1
            elif p is not None:
                acc[w] = (acc.get(w, 0) + c1 * c2) % p
            else:
                acc[w] = 1
    return make_free(x.tag, x.alphabet, [(w, c) for w, c in acc.items() if c])


def free_combine(tag, alphabet, weighted) -> FreeElement:
    """D-structure combination of free elements: joins / weighted sums."""
    p = vect_prime(tag)
    acc = {}
    for elem, coeff in weighted:
        for w, c in elem.pairs:
            if tag == "JSL0":
                acc[w] = 1
            elif p is not None:
                acc[w] = (acc.get(w, 0) + coeff * c) % p
            else:
                raise StructureError(f"{tag} has no combination structure")
    return make_free(tag, alphabet, [(w, c) for w, c in acc.items() if c])


def eval_language(l: RegularLanguage, x: FreeElement) -> int:
    """The value of the language morphism on a free element.

    SET/POS: membership; JSL0: 1 iff some word lies in the language;
    VECT(p): the GF(p) sum of coefficients of member words; SET_STAR:
    zero evaluates to 0, words to membership.
    """
    if tuple(x.alphabet) != l.alphabet:
        raise StructureError("alphabet mismatch")
    p = vect_prime(x.tag)
    if x.tag in ("SET", "POS", "SET_STAR"):
        return 1 if x.pairs and l.accepts(x.pairs[0][0]) else 0
    if x.tag == "JSL0":
        return 1 if any(l.accepts(w) for w, _ in x.pairs) else 0
    total = 0
    for w, c in x.pairs:
        if l.accepts(w):
            total = (total + c) % p
    return total


# ---------------------------------------------------------------------------
# free D-monoid morphisms given by generator images


@dataclass(frozen=True)
class DMonoidMorphismFree:
    """Morphism between free D-monoids, presented by generator images."""

    tag: str
    source_alphabet: tuple
    target_alphabet: tuple
    images: tuple  # sorted tuple of (letter, FreeElement)

    def image(self, letter) -> FreeElement:
        for b, fe in self.images:
            if b == letter:
                return fe
        raise StructureError(f"letter {letter!r} not in source alphabet")


def make_free_morphism(tag, source_alphabet, target_alphabet, images: dict) -> DMonoidMorphismFree:
    source_alphabet = tuple(source_alphabet)
    target_alphabet = tuple(target_alphabet)
    if set(images) != set(source_alphabet):
        raise StructureError("images must cover the source alphabet exactly")
    frozen = []
    for b in source_alphabet:
        fe = images[b]
        if fe.tag != tag or tuple(fe.alphabet) != target_alphabet:
            raise StructureError(f"image of {b!r} has wrong tag or alphabet")
        frozen.append((b, fe))
    return DMonoidMorphismFree(tag, source_alphabet, target_alphabet, tuple(frozen))


def identity_free_morphism(tag, alphabet) -> DMonoidMorphismFree:
    return make_free_morphism(
        tag, alphabet, alphabet, {a: free_word(tag, alphabet, a) for a in alphabet}
    )


def apply_free(f: DMonoidMorphismFree, x: FreeElement) -> FreeElement:
    """The unique multiplicative-and-structural extension applied to x."""
    if x.tag != f.tag or tuple(x.alphabet) != f.source_alphabet:
        raise StructureError("element does not match the morphism source")
    terms = []
    for w, c in x.pairs:
        img = free_unit(f.tag, f.target_alphabet)
        for ch in w:
            img = free_mul(img, f.image(ch))
        terms.append((img, c))
    if f.tag in ("SET", "POS"):
        return terms[0][0]
    if f.tag == "SET_STAR":
        return terms[0][0] if terms else free_zero(f.tag, f.target_alphabet)
    return free_combine(f.tag, f.target_alphabet, terms)


def compose_free(f: DMonoidMorphismFree, g: DMonoidMorphismFree) -> DMonoidMorphismFree:
    """f after g (g: Gamma -> Delta, f: Delta -> Sigma)."""
    if g.target_alphabet != f.source_alphabet or f.tag != g.tag:
        raise StructureError("not composable")
    return make_free_morphism(
        f.tag,
        g.source_alphabet,
        f.target_alphabet,
        {b: apply_free(f, g.image(b)) for b in g.source_alphabet},
    )


def dagger(f: DMonoidMorphismFree) -> DMonoidMorphismFree:
    """Conjugation by reversal: letter images are reversed wordwise."""
    return make_free_morphism(
        f.tag,
        f.source_alphabet,
        f.target_alphabet,
        {b: rev_free(f.image(b)) for b in f.source_alphabet},
    )


def preimage_language(l: RegularLanguage, f: DMonoidMorphismFree) -> RegularLanguage:
    """{w over the source alphabet : eval_language(l, f*(w)) = 1}.

    Implemented by lifting the automaton of l through f with the transition
    semantics of the tag (word composition, subset tracking for JSL0,
    GF(p) vector tracking for VECT, dead-state absorption for SET_STAR).
    """
    if tuple(f.target_alphabet) != l.alphabet:
        raise StructureError("morphism target does not match language alphabet")
    src = tuple(f.source_alphabet)
    tag = f.tag
    p = vect_prime(tag)

    def run(state, word):
        for ch in word:
            state = l.delta[state][l.letter_index(ch)]
        return state

    if tag in ("SET", "POS"):
        delta = tuple(
            tuple(run(s, f.image(b).single_word()) for b in src) for s in range(l.size)
        )
        return _minimize(src, l.size, delta, set(l.finals), 0)

    if tag == "SET_STAR":
        dead = l.size  # absorbing reject state for zero images
        delta = []
        for s in range(l.size):
            row = []
            for b in src:
                img = f.image(b)
                row.append(dead if img.is_zero() else run(s, img.single_word()))
            delta.append(tuple(row))
        delta.append(tuple(dead for _ in src))
        return _minimize(src, l.size + 1, delta, set(l.finals), 0)

    if tag == "JSL0":
        start = frozenset({0})
        states = {start: 0}
        worklist = [start]
        delta = []
        finals = set()
        while worklist:
            cur = worklist.pop(0)
            row = []
            for b in src:
                nxt = frozenset(run(s, w) for s in cur for w, _ in f.image(b).pairs)
                if nxt not in states:
                    states[nxt] = len(states)
                    worklist.append(nxt)
                row.append(states[nxt])
            while len(delta) <= states[cur]:
                delta.append(None)
            delta[states[cur]] = tuple(row)
            if cur & l.finals:
                finals.add(states[cur])
        return _minimize(src, len(delta), delta, finals, 0)

    # VECT(p): state = coefficient vector over the DFA states
    start = tuple(1 if s == 0 else 0 for s in range(l.size))
    mats = {}
    for b in src:
        mat = [[0] * l.size for _ in range(l.size)]
        for w, c in f.image(b).pairs:
            for s in range(l.size):
                mat[s][run(s, w)] = (mat[s][run(s, w)] + c) % p
        mats[b] = mat
    states = {start: 0}
    worklist = [start]
    delta = []
    finals = set()
    while worklist:
        cur = worklist.pop(0)
        if len(states) > 4096:
            raise CapExceeded("preimage vector-state cap exceeded")
        row = []
        for b in src:
            mat = mats[b]
            nxt = [0] * l.size
            for s, coeff in enumerate(cur):
                if coeff:
                    for t in range(l.size):
                        if mat[s][t]:
                            nxt[t] = (nxt[t] + coeff * mat[s][t]) % p
            nxt = tuple(nxt)
            if nxt not in states:
                states[nxt] = len(states)
                worklist.append(nxt)
            row.append(states[nxt])
        while len(delta) <= states[cur]:
            delta.append(None)
        delta[states[cur]] = tuple(row)
        value = 0
        for s in l.finals:
            value = (value + cur[s]) % p
        if value == 1:
            finals.add(states[cur])
    return _minimize(src, len(delta), delta, finals, 0)


# ---------------------------------------------------------------------------
# closure under derivatives and language operations


def closure_under_ops_and_derivs(tag: str, seeds, cap: int = 4096):
    """Least set of languages containing seeds, closed under both derivatives
    and the tag's language operations (with constants).  Returns a sorted list.
    """
    seeds = list(seeds)
    if not seeds:
        raise StructureError("need at least one seed language")
    alphabet = seeds[0].alphabet
    if any(s.alphabet != alphabet for s in seeds):
        raise StructureError("seeds must share an alphabet")
    current = set(seeds)
    current.add(empty_language(alphabet))
    if tag in ("BA", "DL01"):
        current.add(full_language(alphabet))
    while True:
        added = set()

        def consider(lang):
            if lang not in current and lang not in added:
                added.add(lang)

        for lang in current:
            for a in alphabet:
                consider(left_deriv(lang, a))
                consider(right_deriv(lang, a))
        if tag == "BA":
            for lang in current:
                consider(complement(lang))
        langs = sorted(current, key=RegularLanguage.sort_key)
        for i, l1 in enumerate(langs):
            for l2 in langs[i:]:
                if tag in ("BA", "DL01"):
                    consider(union(l1, l2))
                    consider(intersection(l1, l2))
                elif tag == "JSL0":
                    consider(union(l1, l2))
                elif tag == "VECT2":
                    consider(symmetric_difference(l1, l2))
                else:  # BR
                    consider(symmetric_difference(l1, l2))
                    consider(intersection(l1, l2))
        if not added:
            break
        current |= added
        if len(current) > cap:
            raise CapExceeded(f"language closure exceeded cap {cap}")
    return sorted(current, key=RegularLanguage.sort_key)


# ---------------------------------------------------------------------------
# rational series over GF(p) (linear weighted automata)


def _rref(rows, p):
    """Row-reduce over GF(p); returns (basis rows, pivot columns)."""
    basis = []
    pivots = []
    for row in rows:
        row = list(row)
        for b, piv in zip(basis, pivots):
            factor = row[piv] * pow(b[piv], p - 2, p) % p
            if factor:
                row = [(x - factor * y) % p for x, y in zip(row, b)]
        for j, v in enumerate(row):
            if v:
                basis.append(row)
                pivots.append(j)
                break
    return basis, pivots


def _in_span(vec, basis, pivots, p):
    """Coordinates of vec in the basis, or None."""
    vec = list(vec)
    coords = [0] * len(basis)
    for i, (b, piv) in enumerate(zip(basis, pivots)):
        factor = vec[piv] * pow(b[piv], p - 2, p) % p
        if factor:
            coords[i] = factor
            vec = [(x - factor * y) % p for x, y in zip(vec, b)]
    if any(vec):
        return None
    return coords


@dataclass(frozen=True)
class RationalSeries:
    """Linear weighted automaton over GF(p); minimal when built via minimize."""

    p: int
    alphabet: tuple
    dim: int
    init: tuple  # row vector
    mats: tuple  # tuple of (letter, matrix as tuple of rows)
    out: tuple  # column vector

    def mat(self, letter):
        for a, m in self.mats:
            if a == letter:
                return m
        raise StructureError(f"letter {letter!r} not in alphabet")

    def value(self, word) -> int:
        vec = list(self.init)
        for ch in word:
            m = self.mat(ch)
            vec = [
                sum(vec[i] * m[i][j] for i in range(self.dim)) % self.p
                for j in range(self.dim)
            ]
        return sum(vec[i] * self.out[i] for i in range(self.dim)) % self.p


def make_series(p, alphabet, init, mats: dict, out) -> RationalSeries:
    alphabet = tuple(alphabet)
    dim = len(init)
    frozen = tuple(
        (a, tuple(tuple(v % p for v in row) for row in mats[a])) for a in alphabet
    )
    return RationalSeries(
        p, alphabet, dim, tuple(v % p for v in init), frozen, tuple(v % p for v in out)
    )


def _forward_reduce(s: RationalSeries) -> RationalSeries:
    """Restrict to the reachability span (preserves all values)."""
    p = s.p
    if not any(s.init):
        return make_series(p, s.alphabet, (0,), {a: [[0]] for a in s.alphabet}, (0,))
    basis, pivots = _rref([list(s.init)], p)
    frontier = [list(s.init)]
    while frontier:
        vec = frontier.pop()
        for a in s.alphabet:
            m = s.mat(a)
            img = [
                sum(vec[i] * m[i][j] for i in range(s.dim)) % p for j in range(s.dim)
            ]
            if _in_span(img, basis, pivots, p) is None:
                basis, pivots = _rref(basis + [img], p)
                frontier.append(img)
    r = len(basis)
    new_mats = {}
    for a in s.alphabet:
        m = s.mat(a)
        rows = []
        for b in basis:
            img = [sum(b[i] * m[i][j] for i in range(s.dim)) % p for j in range(s.dim)]
            rows.append(_in_span(img, basis, pivots, p))
        new_mats[a] = rows
    new_init = _in_span(list(s.init), basis, pivots, p)
    new_out = [sum(b[i] * s.out[i] for i in range(s.dim)) % p for b in basis]
    return make_series(p, s.alphabet, new_init, new_mats, new_out)


def _transpose_series(s: RationalSeries) -> RationalSeries:
    mats = {
        a: [[s.mat(a)[j][i] for j in range(s.dim)] for i in range(s.dim)]
        for a in s.alphabet
    }
    return make_series(s.p, s.alphabet, s.out, mats, s.init)


def minimize_series(s: RationalSeries) -> RationalSeries:
    """Schutzenberger minimization: reachability then observability reduction."""
    return _transpose_series(_forward_reduce(_transpose_series(_forward_reduce(s))))


def series_of_state(automaton: RationalSeries) -> RationalSeries:
    """Minimal rational series of a (possibly non-minimal) linear automaton."""
    return minimize_series(automaton)


def series_of_language(l: RegularLanguage, p: int) -> RationalSeries:
    """Characteristic series of a regular language over GF(p)."""
    mats = {}
    for i, a in enumerate(l.alphabet):
        m = [[0] * l.size for _ in range(l.size)]
        for s in range(l.size):
            m[s][l.delta[s][i]] = 1
        mats[a] = m
    init = [1 if s == 0 else 0 for s in range(l.size)]
    out = [1 if s in l.finals else 0 for s in range(l.size)]
    return minimize_series(make_series(p, l.alphabet, init, mats, out))


def series_preimage(s: RationalSeries, f: DMonoidMorphismFree) -> RationalSeries:
    """Substitute each letter by the weighted sum of its image's word matrices."""
    p = vect_prime(f.tag)
    if p != s.p:
        raise StructureError("field mismatch")
    if tuple(f.target_alphabet) != s.alphabet:
        raise StructureError("morphism target does not match series alphabet")

    def word_matrix(w):
        m = [[1 if i == j else 0 for j in range(s.dim)] for i in range(s.dim)]
        for ch in w:
            mc = s.mat(ch)
            m = [
                [
                    sum(m[i][k] * mc[k][j] for k in range(s.dim)) % p
                    for j in range(s.dim)
                ]
                for i in range(s.dim)
            ]
        return m

    mats = {}
    for b in f.source_alphabet:
        acc = [[0] * s.dim for _ in range(s.dim)]
        for w, c in f.image(b).pairs:
            wm = word_matrix(w)
            for i in range(s.dim):
                for j in range(s.dim):
                    acc[i][j] = (acc[i][j] + c * wm[i][j]) % p
        mats[b] = acc
    return minimize_series(
        make_series(p, f.source_alphabet, s.init, mats, s.out)
    )


# ---------------------------------------------------------------------------
# regex reconstruction (state elimination), used by the CLI


def language_to_regex(l: RegularLanguage) -> str:
    """A regex denoting l, reconstructed by state elimination."""
    if l.is_empty():
        return "∅"
    n = l.size
    START, END = n, n + 1
    edge = {}

    def add(u, v, expr):
        if expr is None:
            return
        cur = edge.get((u, v))
        edge[(u, v)] = expr if cur is None else f"{cur}|{expr}"

    for s in range(n):
        for i, a in enumerate(l.alphabet):
            add(s, l.delta[s][i], a)
    add(START, 0, "ε")
    for s in l.finals:
        add(s, END, "ε")
    for s in range(n):
        loop = edge.pop((s, s), None)
        star = f"({loop})*" if loop else ""
        ins = [(u, e) for (u, v), e in edge.items() if v == s and u != s]
        outs = [(v, e) for (u, v), e in edge.items() if u == s and v != s]
        for (u, _) in ins:
            edge.pop((u, s))
        for (v, _) in outs:
            edge.pop((s, v))
        for u, e1 in ins:
            for v, e2 in outs:
                add(u, v, f"({e1}){star}({e2})")
    return edge.get((START, END), "∅")
