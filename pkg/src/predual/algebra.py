"""Finite (ordered) universal algebra over the eight carrier varieties.

Carriers are index sets {0..n-1}; all structure is given by tables.  Supported
tags and signatures:

    SET       ()                      plain finite sets
    SET_STAR  (point,)                pointed sets, point is a constant
    POS       ()                      finite posets (order matrix required)
    BA        (meet, join, not, zero, one)
    DL01      (meet, join, zero, one)
    JSL0      (join, zero)
    JSL       (join,)                 join-semilattices, no constants
    JSL01     (join, zero, one)
    VECTp     (add, zero, smul0..smul{p-1})   vector spaces over GF(p)

The order matrix is stored only for POS; for lattice-like tags the order is
derived from the operation tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class StructureError(ValueError):
    """Malformed table shapes or signatures (distinct from law violations)."""


class BoundExceeded(ValueError):
    """A size or enumeration bound declared by the API was exceeded."""


class CapExceeded(RuntimeError):
    """A configurable closure/search cap was hit; result is inconclusive."""


VECT_PRIMES = (2, 3, 5)


def vect_tag(p: int) -> str:
    if p not in VECT_PRIMES:
        raise StructureError(f"unsupported field GF({p}); primes {VECT_PRIMES}")
    return f"VECT{p}"


def vect_prime(tag: str):
    """Return p for a VECTp tag, otherwise None."""
    if tag.startswith("VECT"):
        p = int(tag[4:])
        if p not in VECT_PRIMES:
            raise StructureError(f"unsupported tag {tag}")
        return p
    return None


def signature(tag: str) -> dict:
    """Operation name -> arity for the tag's fixed signature."""
    p = vect_prime(tag)
    if p is not None:
        sig = {"add": 2, "zero": 0}
        sig.update({f"smul{k}": 1 for k in range(p)})
        return sig
    try:
        return dict(_SIGNATURES[tag])
    except KeyError:
        raise StructureError(f"unknown variety tag {tag!r}") from None


_SIGNATURES = {
    "SET": {},
    "POS": {},
    "SET_STAR": {"point": 0},
    "JSL": {"join": 2},
    "JSL0": {"join": 2, "zero": 0},
    "JSL01": {"join": 2, "zero": 0, "one": 0},
    "DL01": {"meet": 2, "join": 2, "zero": 0, "one": 0},
    "BA": {"meet": 2, "join": 2, "not": 1, "zero": 0, "one": 0},
    "BR": {"add": 2, "mul": 2, "zero": 0},
}

ALL_TAGS = tuple(sorted(_SIGNATURES)) + tuple(vect_tag(p) for p in VECT_PRIMES)


def is_ordered_tag(tag: str) -> bool:
    return tag == "POS"


@dataclass(frozen=True)
class FinAlgebra:
    """Finite algebra: tag, carrier {0..size-1}, op tables, optional order."""

    tag: str
    size: int
    ops: tuple  # sorted tuple of (name, table); tables are ints / nested tuples
    order: tuple | None = None  # full boolean matrix, order[i][j] iff i <= j

    def op(self, name: str):
        for key, table in self.ops:
            if key == name:
                return table
        raise KeyError(name)

    def op_dict(self) -> dict:
        return dict(self.ops)

    def carrier(self):
        return range(self.size)


def _freeze_table(table, arity, size):
    if arity == 0:
        if not isinstance(table, int) or not (0 <= table < size):
            raise StructureError(f"constant out of range: {table!r}")
        return table
    if arity == 1:
        table = tuple(table)
        if len(table) != size or any(not (0 <= v < size) for v in table):
            raise StructureError("unary table has wrong shape")
        return table
    if arity == 2:
        table = tuple(tuple(row) for row in table)
        if len(table) != size or any(
            len(row) != size or any(not (0 <= v < size) for v in row) for row in table
        ):
            raise StructureError("binary table has wrong shape")
        return table
    raise StructureError(f"unsupported arity {arity}")


def make_algebra(tag: str, size: int, ops: dict, order=None) -> FinAlgebra:
    """Build a FinAlgebra, checking shapes against the tag's signature."""
    sig = signature(tag)
    if size < 0 or (size == 0 and any(ar == 0 for ar in sig.values())):
        raise StructureError("empty carrier requires a constant-free signature")
    if set(ops) != set(sig):
        raise StructureError(
            f"tag {tag} expects ops {sorted(sig)}, got {sorted(ops)}"
        )
    frozen = tuple(
        sorted((name, _freeze_table(ops[name], sig[name], size)) for name in ops)
    )
    if order is not None:
        if not is_ordered_tag(tag):
            raise StructureError(f"order matrix is only stored for POS, not {tag}")
        order = tuple(tuple(bool(v) for v in row) for row in order)
        if len(order) != size or any(len(row) != size for row in order):
            raise StructureError("order matrix has wrong shape")
    elif is_ordered_tag(tag):
        raise StructureError("POS algebras require an order matrix")
    return FinAlgebra(tag, size, frozen, order)


def apply_op(table, args):
    if isinstance(table, int):
        return table
    if len(args) == 1:
        return table[args[0]]
    return table[args[0]][args[1]]


# ---------------------------------------------------------------------------
# law validation


def order_matrix_violations(order) -> list:
    n = len(order)
    out = []
    for i in range(n):
        if not order[i][i]:
            out.append(f"order not reflexive at {i}")
    for i in range(n):
        for j in range(n):
            if i != j and order[i][j] and order[j][i]:
                out.append(f"order not antisymmetric at ({i},{j})")
            for k in range(n):
                if order[i][j] and order[j][k] and not order[i][k]:
                    out.append(f"order not transitive at ({i},{j},{k})")
    return out


def _check_semilattice(n, join, out, name="join"):
    for x in range(n):
        if join[x][x] != x:
            out.append(f"{name} not idempotent at {x}")
    for x in range(n):
        for y in range(n):
            if join[x][y] != join[y][x]:
                out.append(f"{name} not commutative at ({x},{y})")
            for z in range(n):
                if join[join[x][y]][z] != join[x][join[y][z]]:
                    out.append(f"{name} associativity violation at ({x},{y},{z})")
                    return  # one witness is enough per op


def _check_lattice(n, meet, join, out):
    _check_semilattice(n, meet, out, "meet")
    _check_semilattice(n, join, out, "join")
    for x in range(n):
        for y in range(n):
            if join[x][meet[x][y]] != x or meet[x][join[x][y]] != x:
                out.append(f"absorption violation at ({x},{y})")
                return


def _check_distributive(n, meet, join, out):
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                    out.append(f"distributivity violation at ({x},{y},{z})")
                    return


def validate_algebra(a: FinAlgebra) -> list:
    """Return the list of violated laws of a's equational theory (empty = valid)."""
    out: list = []
    n = a.size
    tag = a.tag
    p = vect_prime(tag)
    if a.order is not None:
        out.extend(order_matrix_violations(a.order))
    if tag in ("SET", "POS", "SET_STAR"):
        return out
    if tag in ("JSL", "JSL0", "JSL01"):
        join = a.op("join")
        _check_semilattice(n, join, out)
        if tag in ("JSL0", "JSL01"):
            zero = a.op("zero")
            for x in range(n):
                if join[x][zero] != x:
                    out.append(f"zero not a unit for join at {x}")
        if tag == "JSL01":
            one = a.op("one")
            for x in range(n):
                if join[x][one] != one:
                    out.append(f"one not absorbing for join at {x}")
        return out
    if tag in ("DL01", "BA"):
        meet, join = a.op("meet"), a.op("join")
        zero, one = a.op("zero"), a.op("one")
        _check_lattice(n, meet, join, out)
        _check_distributive(n, meet, join, out)
        for x in range(n):
            if join[x][zero] != x or meet[x][one] != x:
                out.append(f"bounds are not units at {x}")
        if tag == "BA":
            neg = a.op("not")
            for x in range(n):
                if meet[x][neg[x]] != zero or join[x][neg[x]] != one:
                    out.append(f"complement law violation at {x}")
        return out
    if tag == "BR":
        add, mul, zero = a.op("add"), a.op("mul"), a.op("zero")
        for x in range(n):
            if add[x][zero] != x:
                out.append(f"zero not a unit for add at {x}")
            if add[x][x] != zero:
                out.append(f"characteristic-2 law x+x=0 fails at {x}")
            if mul[x][x] != x:
                out.append(f"idempotence violation x*x=x at {x}")
        for x in range(n):
            for y in range(n):
                if add[x][y] != add[y][x]:
                    out.append(f"add not commutative at ({x},{y})")
                if mul[x][y] != mul[y][x]:
                    out.append(f"mul not commutative at ({x},{y})")
                for z in range(n):
                    if add[add[x][y]][z] != add[x][add[y][z]]:
                        out.append(f"add associativity violation at ({x},{y},{z})")
                        break
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
                        out.append(f"mul associativity violation at ({x},{y},{z})")
                        break
                    if mul[x][add[y][z]] != add[mul[x][y]][mul[x][z]]:
                        out.append(f"distributivity violation at ({x},{y},{z})")
                        break
                else:
                    continue
                break
        if not out:
            # derived view: meet = x*y, join = x+y+xy must form a distributive
            # lattice with bottom `zero` (finite boolean rings seen as lattices)
            join = tuple(
                tuple(add[add[x][y]][mul[x][y]] for y in range(n)) for x in range(n)
            )
            derived: list = []
            _check_lattice(n, mul, join, derived)
            _check_distributive(n, mul, join, derived)
            out.extend(f"derived lattice: {msg}" for msg in derived)
        return out
    if p is not None:
        add, zero = a.op("add"), a.op("zero")
        smul = [a.op(f"smul{k}") for k in range(p)]
        for x in range(n):
            if add[x][zero] != x:
                out.append(f"zero not a unit for add at {x}")
            acc = x
            for _ in range(p - 1):
                acc = add[acc][x]
            if acc != zero:
                out.append(f"characteristic-{p} law fails at {x}")
            if smul[0][x] != zero or smul[1][x] != x:
                out.append(f"scalar tables inconsistent at {x}")
            for k in range(2, p):
                if smul[k][x] != add[x][smul[k - 1][x]]:
                    out.append(f"scalar table smul{k} inconsistent at {x}")
        for x in range(n):
            for y in range(n):
                if add[x][y] != add[y][x]:
                    out.append(f"add not commutative at ({x},{y})")
                for z in range(n):
                    if add[add[x][y]][z] != add[x][add[y][z]]:
                        out.append(f"add associativity violation at ({x},{y},{z})")
                        return out
        return out
    raise StructureError(f"unknown tag {tag}")


# ---------------------------------------------------------------------------
# derived order (used for atoms, join-irreducibles, duals)


def alg_leq(a: FinAlgebra, x: int, y: int) -> bool:
    """The natural order of a lattice-like algebra (POS: stored matrix)."""
    tag = a.tag
    if tag == "POS":
        return a.order[x][y]
    if tag in ("JSL", "JSL0", "JSL01"):
        return a.op("join")[x][y] == y
    if tag in ("DL01", "BA"):
        return a.op("meet")[x][y] == x
    if tag == "BR":
        return a.op("mul")[x][y] == x
    raise StructureError(f"tag {tag} has no derived order")


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class AlgMorphism:
    source: FinAlgebra
    target: FinAlgebra
    table: tuple

    def __call__(self, x: int) -> int:
        return self.table[x]


def make_morphism(source: FinAlgebra, target: FinAlgebra, table) -> AlgMorphism:
    table = tuple(table)
    if len(table) != source.size or any(not (0 <= v < target.size) for v in table):
        raise StructureError("morphism table has wrong shape")
    return AlgMorphism(source, target, table)


def identity_morphism(a: FinAlgebra) -> AlgMorphism:
    return AlgMorphism(a, a, tuple(range(a.size)))


def compose(g: AlgMorphism, f: AlgMorphism) -> AlgMorphism:
    """g after f."""
    if f.target != g.source:
        raise StructureError("morphisms not composable")
    return AlgMorphism(f.source, g.target, tuple(g.table[v] for v in f.table))


def check_morphism(f: AlgMorphism):
    """Return (ok, first counterexample message or None)."""
    a, b, t = f.source, f.target, f.table
    if a.tag != b.tag:
        return False, f"tag mismatch {a.tag} vs {b.tag}"
    if len(t) != a.size:
        return False, "table size mismatch"
    sig = signature(a.tag)
    for name, arity in sorted(sig.items()):
        ta, tb = a.op(name), b.op(name)
        if arity == 0:
            if t[ta] != tb:
                return False, f"{name} not preserved: f({ta})={t[ta]} != {tb}"
        elif arity == 1:
            for x in range(a.size):
                if t[ta[x]] != tb[t[x]]:
                    return False, f"{name} not preserved at {x}"
        else:
            for x in range(a.size):
                for y in range(a.size):
                    if t[ta[x][y]] != tb[t[x]][t[y]]:
                        return False, f"{name} not preserved at ({x},{y})"
    if a.order is not None:
        for x in range(a.size):
            for y in range(a.size):
                if a.order[x][y] and not b.order[t[x]][t[y]]:
                    return False, f"not monotone at ({x},{y})"
    return True, None


# ---------------------------------------------------------------------------
# products, subalgebras, factorization


def product(a: FinAlgebra, b: FinAlgebra):
    """Componentwise product; returns (product, proj1, proj2)."""
    if a.tag != b.tag:
        raise StructureError("product requires equal tags")
    n, m = a.size, b.size
    size = n * m

    def enc(i, j):
        return i * m + j

    sig = signature(a.tag)
    ops = {}
    for name, arity in sig.items():
        ta, tb = a.op(name), b.op(name)
        if arity == 0:
            ops[name] = enc(ta, tb)
        elif arity == 1:
            ops[name] = tuple(enc(ta[x // m], tb[x % m]) for x in range(size))
        else:
            ops[name] = tuple(
                tuple(enc(ta[x // m][y // m], tb[x % m][y % m]) for y in range(size))
                for x in range(size)
            )
    order = None
    if a.order is not None:
        order = tuple(
            tuple(
                a.order[x // m][y // m] and b.order[x % m][y % m]
                for y in range(size)
            )
            for x in range(size)
        )
    prod = make_algebra(a.tag, size, ops, order)
    p1 = AlgMorphism(prod, a, tuple(x // m for x in range(size)))
    p2 = AlgMorphism(prod, b, tuple(x % m for x in range(size)))
    return prod, p1, p2


def pairing(f: AlgMorphism, g: AlgMorphism, prod: FinAlgebra) -> AlgMorphism:
    """<f,g> into the product of f.target and g.target."""
    if f.source != g.source:
        raise StructureError("pairing requires a common source")
    m = g.target.size
    return AlgMorphism(
        f.source, prod, tuple(f.table[x] * m + g.table[x] for x in range(f.source.size))
    )


def subalgebra_on(a: FinAlgebra, subset) -> tuple:
    """Algebra induced on an op-closed subset; returns (sub, inclusion).

    VECT carriers are re-encoded into the standard basis form (subspaces of a
    standard space are not index-aligned), so dualization stays valid.
    """
    elems = sorted(subset)
    index = {e: i for i, e in enumerate(elems)}
    sig = signature(a.tag)
    ops = {}
    for name, arity in sig.items():
        t = a.op(name)
        if arity == 0:
            ops[name] = index[t]
        elif arity == 1:
            ops[name] = tuple(index[t[e]] for e in elems)
        else:
            ops[name] = tuple(tuple(index[t[e][f]] for f in elems) for e in elems)
    order = None
    if a.order is not None:
        order = tuple(tuple(a.order[e][f] for f in elems) for e in elems)
    sub = make_algebra(a.tag, len(elems), ops, order)
    inclusion_table = list(elems)
    if vect_prime(a.tag) is not None:
        sub, perm = standardize_vect(sub)
        relocated = [None] * len(elems)
        for old, new in enumerate(perm):
            relocated[new] = inclusion_table[old]
        inclusion_table = relocated
    return sub, AlgMorphism(sub, a, tuple(inclusion_table))


def generated_subalgebra(a: FinAlgebra, seeds) -> AlgMorphism:
    """Inclusion of the smallest subalgebra containing seeds (and constants)."""
    sig = signature(a.tag)
    closed = set(seeds)
    for name, arity in sig.items():
        if arity == 0:
            closed.add(a.op(name))
    frontier = True
    while frontier:
        frontier = False
        current = sorted(closed)
        for name, arity in sig.items():
            t = a.op(name)
            if arity == 1:
                for x in current:
                    if t[x] not in closed:
                        closed.add(t[x])
                        frontier = True
            elif arity == 2:
                for x in current:
                    for y in current:
                        if t[x][y] not in closed:
                            closed.add(t[x][y])
                            frontier = True
    _, inclusion = subalgebra_on(a, closed)
    return inclusion


@dataclass(frozen=True)
class FactorizationPair:
    epi: AlgMorphism
    mono: AlgMorphism


def factorize(f: AlgMorphism) -> FactorizationPair:
    """Surjection-onto-image followed by an (order-embedding) inclusion.

    The image carries the order induced from the target, which realizes the
    (epi, strong mono) factorization system for ordered tags.
    """
    image = sorted(set(f.table))
    img_alg, mono = subalgebra_on(f.target, image)
    index = {e: i for i, e in enumerate(image)}
    epi = AlgMorphism(f.source, img_alg, tuple(index[v] for v in f.table))
    return FactorizationPair(epi, mono)


def pushforward_order(order, class_of, n_classes):
    """Quotient order: transitive closure of the pushed-forward relation.

    Returns the matrix, or None when the closure is not antisymmetric
    (an invalid ordered quotient).
    """
    n = len(order)
    q = [[i == j for j in range(n_classes)] for i in range(n_classes)]
    for x in range(n):
        for y in range(n):
            if order[x][y]:
                q[class_of[x]][class_of[y]] = True
    changed = True
    while changed:
        changed = False
        for i in range(n_classes):
            for j in range(n_classes):
                if q[i][j]:
                    for k in range(n_classes):
                        if q[j][k] and not q[i][k]:
                            q[i][k] = True
                            changed = True
    for i in range(n_classes):
        for j in range(n_classes):
            if i != j and q[i][j] and q[j][i]:
                return None
    return tuple(tuple(row) for row in q)


# ---------------------------------------------------------------------------
# free algebras on the D side


def free_algebra(tag: str, names) -> tuple:
    """Free D-side algebra on a finite set; returns (algebra, injection table).

    injection[i] is the carrier index of the i-th generator.
    """
    names = list(names)
    k = len(names)
    p = vect_prime(tag)
    if tag == "SET":
        return make_algebra("SET", k, {}), tuple(range(k))
    if tag == "POS":
        order = tuple(tuple(i == j for j in range(k)) for i in range(k))
        return make_algebra("POS", k, {}, order), tuple(range(k))
    if tag == "SET_STAR":
        return make_algebra("SET_STAR", k + 1, {"point": 0}), tuple(range(1, k + 1))
    if tag == "JSL0":
        size = 1 << k
        join = tuple(tuple(x | y for y in range(size)) for x in range(size))
        alg = make_algebra("JSL0", size, {"join": join, "zero": 0})
        return alg, tuple(1 << i for i in range(k))
    if p is not None:
        size = p**k

        def digits(x):
            return [(x // p**i) % p for i in range(k)]

        def enc(ds):
            return sum(d * p**i for i, d in enumerate(ds))

        add = tuple(
            tuple(enc([(u + v) % p for u, v in zip(digits(x), digits(y))]) for y in range(size))
            for x in range(size)
        )
        ops = {"add": add, "zero": 0}
        for c in range(p):
            ops[f"smul{c}"] = tuple(enc([(c * d) % p for d in digits(x)]) for x in range(size))
        alg = make_algebra(tag, size, ops)
        return alg, tuple(p**i for i in range(k))
    raise StructureError(f"free algebras are not provided for tag {tag}")


def relabel_algebra(a: FinAlgebra, perm) -> FinAlgebra:
    """Apply a carrier permutation (old index -> new index) to all structure."""
    inv = [0] * a.size
    for old, new in enumerate(perm):
        inv[new] = old
    ops = {}
    for name, arity in signature(a.tag).items():
        t = a.op(name)
        if arity == 0:
            ops[name] = perm[t]
        elif arity == 1:
            ops[name] = tuple(perm[t[inv[x]]] for x in range(a.size))
        else:
            ops[name] = tuple(
                tuple(perm[t[inv[x]][inv[y]]] for y in range(a.size))
                for x in range(a.size)
            )
    order = None
    if a.order is not None:
        order = tuple(
            tuple(a.order[inv[x]][inv[y]] for y in range(a.size))
            for x in range(a.size)
        )
    return make_algebra(a.tag, a.size, ops, order)


def standardize_vect(a: FinAlgebra):
    """Relabel a VECT(p) algebra into the standard base-p coordinate encoding.

    Dual maps are transposed matrices w.r.t. the standard basis, so every
    VECT carrier that will be dualized must use index = sum(c_i * p^i) over a
    fixed basis.  Returns (standardized algebra, permutation old -> new).
    """
    p = vect_prime(a.tag)
    if p is None:
        raise StructureError("standardize_vect expects a VECT tag")
    zero = a.op("zero")
    add = a.op("add")
    smul = [a.op(f"smul{k}") for k in range(p)]
    basis = []
    span = {zero}
    for x in range(a.size):
        if x not in span:
            basis.append(x)
            span = {zero}
            for elem in _span_elements(add, smul, basis, zero, p):
                span.add(elem)
    perm = [None] * a.size
    dim = len(basis)
    for code in range(p**dim):
        acc = zero
        for i in range(dim):
            c = (code // p**i) % p
            acc = add[acc][smul[c][basis[i]]]
        if perm[acc] is not None:
            raise StructureError("VECT carrier is not a free GF(p) module")
        perm[acc] = code
    if any(v is None for v in perm):
        raise StructureError("VECT basis does not span the carrier")
    return relabel_algebra(a, tuple(perm)), tuple(perm)


def _span_elements(add, smul, basis, zero, p):
    elems = [zero]
    for b in basis:
        elems = [add[e][smul[k][b]] for e in elems for k in range(p)]
    return elems


# ---------------------------------------------------------------------------
# element combination: evaluating a formal D-combination in a carrier


def combine_elements(a: FinAlgebra, weighted) -> int:
    """Evaluate a formal combination [(element, coeff), ...] in the algebra.

    SET/POS expect exactly one pair; JSL0/JSL fold joins; VECT(p) folds
    weighted sums; SET_STAR treats the empty combination as the basepoint.
    """
    tag = a.tag
    p = vect_prime(tag)
    items = list(weighted)
    if tag in ("SET", "POS"):
        if len(items) != 1 or items[0][1] != 1:
            raise StructureError(f"{tag} elements are single points")
        return items[0][0]
    if tag == "SET_STAR":
        if not items:
            return a.op("point")
        if len(items) != 1 or items[0][1] != 1:
            raise StructureError("SET_STAR combinations have at most one point")
        return items[0][0]
    if tag in ("JSL0", "JSL01"):
        join = a.op("join")
        acc = a.op("zero")
        for x, c in items:
            if c != 1:
                raise StructureError("semilattice coefficients must be 1")
            acc = join[acc][x]
        return acc
    if tag == "JSL":
        if not items:
            raise StructureError("JSL has no empty joins")
        join = a.op("join")
        acc = items[0][0]
        for x, _ in items[1:]:
            acc = join[acc][x]
        return acc
    if p is not None:
        add = a.op("add")
        acc = a.op("zero")
        for x, c in items:
            acc = add[acc][a.op(f"smul{c % p}")[x]]
        return acc
    raise StructureError(f"tag {tag} has no combination structure")


# ---------------------------------------------------------------------------
# morphism enumeration / isomorphism search


def _op_items(alg: FinAlgebra):
    return [(name, signature(alg.tag)[name], alg.op(name)) for name, _ in alg.ops]


def _search_maps(
    src_ops, dst_ops, n, m, src_order, dst_order, bijective, fixed=None, allowed=None
):
    """Backtracking enumeration of structure-preserving tables with forcing.

    src_ops/dst_ops: lists of (arity, table) pairs, matched positionally.
    Yields tuples of length n with values < m.  Forced values are propagated
    eagerly (all op applications with fully assigned arguments pin results).
    allowed(x, v) may veto individual assignments.
    """
    table = [None] * n
    used = [False] * m

    def assign(x, v, trail):
        if table[x] is not None:
            return table[x] == v
        if bijective and used[v]:
            return False
        if allowed is not None and not allowed(x, v):
            return False
        table[x] = v
        if bijective:
            used[v] = True
        trail.append(x)
        return True

    def undo(trail):
        for x in reversed(trail):
            if bijective:
                used[table[x]] = False
            table[x] = None
        trail.clear()

    def propagate(trail):
        changed = True
        while changed:
            changed = False
            for (ar, ts), (_, td) in zip(src_ops, dst_ops):
                if ar == 0:
                    before = table[ts]
                    if not assign(ts, td, trail):
                        return False
                    changed = changed or before is None
                elif ar == 1:
                    for x in range(n):
                        if table[x] is None:
                            continue
                        r, img = ts[x], td[table[x]]
                        if table[r] is None:
                            if not assign(r, img, trail):
                                return False
                            changed = True
                        elif table[r] != img:
                            return False
                else:
                    for x in range(n):
                        if table[x] is None:
                            continue
                        row = ts[x]
                        drow = td[table[x]]
                        for y in range(n):
                            if table[y] is None:
                                continue
                            r, img = row[y], drow[table[y]]
                            if table[r] is None:
                                if not assign(r, img, trail):
                                    return False
                                changed = True
                            elif table[r] != img:
                                return False
        if src_order is not None:
            for x in range(n):
                if table[x] is None:
                    continue
                for y in range(n):
                    if table[y] is None:
                        continue
                    if src_order[x][y] and not dst_order[table[x]][table[y]]:
                        return False
        return True

    def rec():
        try:
            x = table.index(None)
        except ValueError:
            yield tuple(table)
            return
        for v in range(m):
            if bijective and used[v]:
                continue
            trail = []
            if assign(x, v, trail) and propagate(trail):
                yield from rec()
            undo(trail)

    root = []
    ok = True
    if fixed:
        for k, v in fixed.items():
            if not assign(k, v, root):
                ok = False
                break
    if ok and propagate(root):
        yield from rec()
    undo(root)


def all_morphisms(a: FinAlgebra, b: FinAlgebra, fixed=None) -> list:
    """All homomorphisms a -> b (monotone for ordered tags)."""
    if a.tag != b.tag:
        return []
    src = [(ar, a.op(name)) for name, ar in sorted(signature(a.tag).items())]
    dst = [(ar, b.op(name)) for name, ar in sorted(signature(b.tag).items())]
    result = []
    for table in _search_maps(src, dst, a.size, b.size, a.order, b.order, False, fixed):
        f = AlgMorphism(a, b, table)
        ok, _ = check_morphism(f)
        if ok:
            result.append(f)
    return result


def table_isomorphism(n, ops_a, ops_b, order_a=None, order_b=None):
    """Bijection {0..n-1} -> {0..n-1} preserving matched op tables and order.

    ops_a/ops_b: lists of (arity, table), matched positionally.
    Returns a table or None.
    """
    for table in _search_maps(ops_a, ops_b, n, n, order_a, order_b, True):
        # full verification (the search prunes but double-check exactly)
        ok = True
        for (ar, ts), (_, td) in zip(ops_a, ops_b):
            if ar == 0:
                ok = table[ts] == td
            elif ar == 1:
                ok = all(table[ts[x]] == td[table[x]] for x in range(n))
            else:
                ok = all(
                    table[ts[x][y]] == td[table[x]][table[y]]
                    for x in range(n)
                    for y in range(n)
                )
            if not ok:
                break
        if ok and order_a is not None:
            ok = all(
                order_a[x][y] == order_b[table[x]][table[y]]
                for x in range(n)
                for y in range(n)
            )
        if ok:
            return table
    return None


def are_isomorphic(a: FinAlgebra, b: FinAlgebra, max_size: int = 12):
    """Witness isomorphism between finite algebras, or None (brute force)."""
    if a.tag != b.tag or a.size != b.size:
        return None
    if a.size > max_size:
        raise BoundExceeded(f"isomorphism search bounded at {max_size} elements")
    ops_a = [(ar, a.op(name)) for name, ar in sorted(signature(a.tag).items())]
    ops_b = [(ar, b.op(name)) for name, ar in sorted(signature(b.tag).items())]
    table = table_isomorphism(a.size, ops_a, ops_b, a.order, b.order)
    if table is None:
        return None
    return AlgMorphism(a, b, table)


# ---------------------------------------------------------------------------
# bounded enumeration up to isomorphism


@lru_cache(maxsize=None)
def _posets_upto(n: int):
    """All posets on {0..n-1} whose order refines the index order, up to iso.

    Every finite poset has a linear extension, so these representatives are
    exhaustive up to isomorphism.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found = []
    for mask in range(1 << len(pairs)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for b, (i, j) in enumerate(pairs):
            if mask >> b & 1:
                rel[i][j] = True
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                if not rel[i][j]:
                    continue
                for k in range(j + 1, n):
                    if rel[j][k] and not rel[i][k]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            continue
        matrix = tuple(tuple(row) for row in rel)
        if not any(
            table_isomorphism(n, [], [], matrix, other) is not None for other in found
        ):
            found.append(matrix)
    return tuple(found)


def _poset_joins(order, n):
    """Binary join table from an order matrix, or None if some join is missing."""
    join = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            ubs = [z for z in range(n) if order[x][z] and order[y][z]]
            least = [z for z in ubs if all(order[z][w] for w in ubs)]
            if len(least) != 1:
                return None
            join[x][y] = least[0]
    return tuple(tuple(row) for row in join)


def _poset_meets(order, n):
    rev = tuple(tuple(order[j][i] for j in range(n)) for i in range(n))
    return _poset_joins(rev, n)


def _powerset_ba(k: int) -> FinAlgebra:
    size = 1 << k
    full = size - 1
    return make_algebra(
        "BA",
        size,
        {
            "meet": tuple(tuple(x & y for y in range(size)) for x in range(size)),
            "join": tuple(tuple(x | y for y in range(size)) for x in range(size)),
            "not": tuple(full ^ x for x in range(size)),
            "zero": 0,
            "one": full,
        },
    )


def _powerset_br(k: int) -> FinAlgebra:
    size = 1 << k
    return make_algebra(
        "BR",
        size,
        {
            "add": tuple(tuple(x ^ y for y in range(size)) for x in range(size)),
            "mul": tuple(tuple(x & y for y in range(size)) for x in range(size)),
            "zero": 0,
        },
    )


def enumerate_algebras(tag: str, n: int) -> list:
    """All algebras of the tag with exactly n elements, up to isomorphism."""
    p = vect_prime(tag)
    if tag in ("JSL0", "DL01", "POS", "JSL", "JSL01"):
        if n > 6:
            raise BoundExceeded(f"{tag} enumeration bounded at size 6")
    if tag == "SET":
        if n < 1:
            raise BoundExceeded("need n >= 1")
        return [make_algebra("SET", n, {})]
    if tag == "SET_STAR":
        if n < 1:
            raise BoundExceeded("need n >= 1")
        return [make_algebra("SET_STAR", n, {"point": 0})]
    if tag == "POS":
        return [make_algebra("POS", n, {}, order) for order in _posets_upto(n)]
    if tag == "JSL":
        if n == 0:
            return [make_algebra("JSL", 0, {"join": ()})]
        out = []
        for order in _posets_upto(n):
            join = _poset_joins(order, n)
            if join is not None:
                out.append(make_algebra("JSL", n, {"join": join}))
        return out
    if tag in ("JSL0", "JSL01"):
        out = []
        for order in _posets_upto(n):
            join = _poset_joins(order, n)
            if join is None:
                continue
            bottoms = [z for z in range(n) if all(order[z][w] for w in range(n))]
            if not bottoms:
                continue
            ops = {"join": join, "zero": bottoms[0]}
            if tag == "JSL01":
                tops = [z for z in range(n) if all(order[w][z] for w in range(n))]
                if not tops:
                    continue
                ops["one"] = tops[0]
            out.append(make_algebra(tag, n, ops))
        return out
    if tag == "DL01":
        out = []
        for order in _posets_upto(n):
            join = _poset_joins(order, n)
            meet = _poset_meets(order, n)
            if join is None or meet is None:
                continue
            bottoms = [z for z in range(n) if all(order[z][w] for w in range(n))]
            tops = [z for z in range(n) if all(order[w][z] for w in range(n))]
            if not bottoms or not tops:
                continue
            alg = make_algebra(
                "DL01", n,
                {"meet": meet, "join": join, "zero": bottoms[0], "one": tops[0]},
            )
            if not validate_algebra(alg):
                out.append(alg)
        return out
    if tag in ("BA", "BR"):
        if n not in (1, 2, 4, 8, 16):
            raise BoundExceeded("BA/BR sizes restricted to powers of two up to 16")
        k = n.bit_length() - 1
        return [_powerset_ba(k) if tag == "BA" else _powerset_br(k)]
    if p is not None:
        dim = 0
        size = 1
        while size < n:
            size *= p
            dim += 1
        if size != n or dim > 3:
            raise BoundExceeded(f"VECT{p} sizes are p^dim with dim <= 3")
        alg, _ = free_algebra(tag, [f"e{i}" for i in range(dim)])
        return [alg]
    raise StructureError(f"unknown tag {tag}")
