"""Canonical document formats: byte-stable JSON for every value kind.

Every document carries a "kind" discriminator; dumps() sorts keys and uses
fixed separators so identical values serialize to identical bytes.
"""

from __future__ import annotations

import json

from .algebra import AlgMorphism, FinAlgebra, StructureError, make_algebra, make_morphism, signature
from .automata import Coalgebra, LAlgebra, make_coalgebra, make_lalgebra
from .langlib import (
    DMonoidMorphismFree,
    FreeElement,
    RegularLanguage,
    from_components,
    make_free,
    free_zero,
    make_free_morphism,
)
from .monoids import DMonoid, GeneratedDMonoid, make_dmonoid


def _table_to_lists(table, arity):
    if arity == 0:
        return table
    if arity == 1:
        return list(table)
    return [list(row) for row in table]


def algebra_doc(a: FinAlgebra) -> dict:
    doc = {
        "kind": "algebra",
        "tag": a.tag,
        "size": a.size,
        "ops": {
            name: _table_to_lists(a.op(name), signature(a.tag)[name])
            for name, _ in a.ops
        },
    }
    if a.order is not None:
        doc["order"] = [[1 if v else 0 for v in row] for row in a.order]
    return doc


def algebra_from_doc(doc) -> FinAlgebra:
    order = doc.get("order")
    if order is not None:
        order = [[bool(v) for v in row] for row in order]
    return make_algebra(doc["tag"], doc["size"], doc["ops"], order)


def morphism_doc(f: AlgMorphism) -> dict:
    return {
        "kind": "morphism",
        "tag": f.source.tag,
        "source": algebra_doc(f.source),
        "target": algebra_doc(f.target),
        "map": list(f.table),
    }


def morphism_from_doc(doc) -> AlgMorphism:
    return make_morphism(
        algebra_from_doc(doc["source"]), algebra_from_doc(doc["target"]), doc["map"]
    )


def language_doc(l: RegularLanguage) -> dict:
    return {
        "kind": "language",
        "alphabet": list(l.alphabet),
        "states": l.size,
        "delta": [list(row) for row in l.delta],
        "finals": sorted(l.finals),
        "initial": 0,
    }


def language_from_doc(doc) -> RegularLanguage:
    return from_components(
        doc["alphabet"], doc["delta"], doc["finals"], doc.get("initial", 0)
    )


def free_element_doc(x: FreeElement) -> dict:
    return {
        "kind": "free-element",
        "tag": x.tag,
        "alphabet": list(x.alphabet),
        "pairs": [[w, c] for w, c in x.pairs],
    }


def free_element_from_doc(doc) -> FreeElement:
    if not doc["pairs"]:
        return free_zero(doc["tag"], doc["alphabet"])
    return make_free(doc["tag"], doc["alphabet"], [(w, c) for w, c in doc["pairs"]])


def free_morphism_doc(f: DMonoidMorphismFree) -> dict:
    return {
        "kind": "free-morphism",
        "tag": f.tag,
        "source_alphabet": list(f.source_alphabet),
        "target_alphabet": list(f.target_alphabet),
        "images": {b: free_element_doc(fe) for b, fe in f.images},
    }


def free_morphism_from_doc(doc) -> DMonoidMorphismFree:
    return make_free_morphism(
        doc["tag"],
        doc["source_alphabet"],
        doc["target_alphabet"],
        {b: free_element_from_doc(d) for b, d in doc["images"].items()},
    )


def coalgebra_doc(q: Coalgebra) -> dict:
    return {
        "kind": "coalgebra",
        "pair": q.pair,
        "alphabet": list(q.alphabet),
        "states": algebra_doc(q.states),
        "trans": {a: list(t) for a, t in q.trans},
        "out": list(q.out),
    }


def coalgebra_from_doc(doc) -> Coalgebra:
    return make_coalgebra(
        doc["pair"],
        doc["alphabet"],
        algebra_from_doc(doc["states"]),
        {a: tuple(t) for a, t in doc["trans"].items()},
        doc["out"],
    )


def lalgebra_doc(a: LAlgebra) -> dict:
    return {
        "kind": "lalgebra",
        "pair": a.pair,
        "alphabet": list(a.alphabet),
        "states": algebra_doc(a.states),
        "trans": {x: list(t) for x, t in a.trans},
        "init": a.init,
    }


def lalgebra_from_doc(doc) -> LAlgebra:
    return make_lalgebra(
        doc["pair"],
        doc["alphabet"],
        algebra_from_doc(doc["states"]),
        {a: tuple(t) for a, t in doc["trans"].items()},
        doc["init"],
    )


def dmonoid_doc(m: DMonoid) -> dict:
    return {
        "kind": "dmonoid",
        "tag": m.carrier.tag,
        "carrier": algebra_doc(m.carrier),
        "mult": [list(row) for row in m.mult],
        "unit": m.unit,
    }


def dmonoid_from_doc(doc) -> DMonoid:
    return make_dmonoid(algebra_from_doc(doc["carrier"]), doc["mult"], doc["unit"])


def generated_dmonoid_doc(g: GeneratedDMonoid) -> dict:
    doc = dmonoid_doc(g.base)
    doc["kind"] = "generated-dmonoid"
    doc["alphabet"] = list(g.alphabet)
    doc["generators"] = {a: e for a, e in g.gen_images}
    doc["representatives"] = {
        str(e): free_element_doc(fe) for e, fe in g.reprs
    }
    return doc


def generated_dmonoid_from_doc(doc) -> GeneratedDMonoid:
    base = make_dmonoid(
        algebra_from_doc(doc["carrier"]), doc["mult"], doc["unit"]
    )
    return GeneratedDMonoid(
        base,
        tuple(doc["alphabet"]),
        tuple(sorted(doc["generators"].items())),
        tuple(
            sorted((int(e), free_element_from_doc(d)) for e, d in doc["representatives"].items())
        ),
    )


_TO_DOC = {
    FinAlgebra: algebra_doc,
    AlgMorphism: morphism_doc,
    RegularLanguage: language_doc,
    FreeElement: free_element_doc,
    DMonoidMorphismFree: free_morphism_doc,
    Coalgebra: coalgebra_doc,
    LAlgebra: lalgebra_doc,
    DMonoid: dmonoid_doc,
    GeneratedDMonoid: generated_dmonoid_doc,
}

_FROM_DOC = {
    "algebra": algebra_from_doc,
    "morphism": morphism_from_doc,
    "language": language_from_doc,
    "free-element": free_element_from_doc,
    "free-morphism": free_morphism_from_doc,
    "coalgebra": coalgebra_from_doc,
    "lalgebra": lalgebra_from_doc,
    "dmonoid": dmonoid_from_doc,
    "generated-dmonoid": generated_dmonoid_from_doc,
}


def to_doc(value) -> dict:
    for cls, fn in _TO_DOC.items():
        if isinstance(value, cls):
            return fn(value)
    raise StructureError(f"no document form for {type(value).__name__}")


def from_doc(doc):
    kind = doc.get("kind")
    if kind not in _FROM_DOC:
        raise StructureError(f"unknown document kind {kind!r}")
    return _FROM_DOC[kind](doc)


def dumps(value) -> str:
    doc = value if isinstance(value, dict) else to_doc(value)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str):
    return from_doc(json.loads(text))


# ---------------------------------------------------------------------------
# DOT export


def dot_automaton(value) -> str:
    """Transition graph; order edges of ordered state algebras are dashed."""
    lines = ["digraph automaton {", "  rankdir=LR;"]
    if isinstance(value, Coalgebra):
        accepting = {s for s in range(value.states.size) if value.out[s] == 1}
        for s in range(value.states.size):
            shape = "doublecircle" if s in accepting else "circle"
            lines.append(f'  q{s} [shape={shape} label="{s}"];')
    else:
        for s in range(value.states.size):
            lines.append(f'  q{s} [shape=circle label="{s}"];')
        lines.append(f"  start [shape=point];")
        lines.append(f"  start -> q{value.init};")
    for a, t in value.trans:
        for s, v in enumerate(t):
            lines.append(f'  q{s} -> q{v} [label="{a}"];')
    if value.states.order is not None:
        for x in range(value.states.size):
            for y in range(value.states.size):
                if x != y and value.states.order[x][y]:
                    lines.append(f"  q{x} -> q{y} [style=dashed arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_hasse(a: FinAlgebra) -> str:
    """Hasse diagram of a lattice-like algebra or poset."""
    from .algebra import alg_leq

    lines = ["digraph hasse {", "  rankdir=BT;"]
    for x in range(a.size):
        lines.append(f'  n{x} [shape=none label="{x}"];')
    for x in range(a.size):
        for y in range(a.size):
            if x == y or not alg_leq(a, x, y):
                continue
            if any(
                alg_leq(a, x, z) and alg_leq(a, z, y) and z not in (x, y)
                for z in range(a.size)
            ):
                continue
            lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
