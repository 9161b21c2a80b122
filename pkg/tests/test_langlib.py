import itertools
import random

import pytest

from predual.algebra import StructureError
from predual.langlib import (
    DMonoidMorphismFree,
    RegexSyntaxError,
    apply_free,
    closure_under_ops_and_derivs,
    complement,
    dagger,
    empty_language,
    eval_language,
    free_mul,
    free_word,
    free_zero,
    full_language,
    identity_free_morphism,
    intersection,
    language_op,
    language_to_regex,
    left_deriv,
    make_free,
    make_free_morphism,
    make_series,
    minimize_series,
    parse_regex,
    preimage_language,
    rev_free,
    reversal,
    right_deriv,
    series_of_language,
    series_preimage,
    symmetric_difference,
    union,
)


def words_upto(alphabet, n):
    for k in range(n + 1):
        for tup in itertools.product(alphabet, repeat=k):
            yield "".join(tup)


def test_parse_ab_star_is_three_states():
    l = parse_regex("(ab)*")
    assert l.alphabet == ("a", "b") and l.size == 3
    assert l.accepts("") and l.accepts("abab") and not l.accepts("aba")


def test_parse_complement_of_empty_is_full():
    l = parse_regex("~∅", alphabet="ab")
    assert l.size == 1 and l.accepts("") and l.accepts("ba")


def test_parse_aa_star_two_states():
    l = parse_regex("(aa)*")
    assert l.size == 2
    assert l.accepts("aa") and not l.accepts("a")


def test_parse_errors_are_positional():
    with pytest.raises(RegexSyntaxError) as e:
        parse_regex("(ab")
    assert e.value.pos == 0
    with pytest.raises(RegexSyntaxError) as e:
        parse_regex("a|*b")
    assert e.value.pos == 2


def test_equivalent_regexes_share_canonical_form():
    pairs = [
        ("(a|b)*", "~∅"),
        ("a(ba)*", "(ab)*a"),
        ("(aa)*|a(aa)*", "a*"),
        ("~(~a&~b)", "a|b"),
        ("(a|b)(a|b)*", "(a|b)*(a|b)"),
    ]
    for x, y in pairs:
        assert parse_regex(x, "ab") == parse_regex(y, "ab")


def test_derivative_examples():
    ab = parse_regex("(ab)*")
    assert left_deriv(ab, "a") == parse_regex("b(ab)*")
    assert right_deriv(ab, "a") == empty_language("ab")
    assert right_deriv(ab, "b") == parse_regex("(ab)*a")
    full = full_language("ab")
    assert left_deriv(full, "a") == full


def test_derivative_membership_law():
    corpus = ["(ab)*", "(aa)*", "a*b*", "(a|b)*a", "ab", "∅"]
    for rx in corpus:
        l = parse_regex(rx, "ab")
        for a in "ab":
            dl = left_deriv(l, a)
            dr = right_deriv(l, a)
            for w in words_upto("ab", 6):
                assert dl.accepts(w) == l.accepts(a + w)
                assert dr.accepts(w) == l.accepts(w + a)


def test_right_deriv_agrees_with_reversal_route():
    for rx in ["(ab)*", "(aa|bb)*", "a*b*"]:
        l = parse_regex(rx, "ab")
        for a in "ab":
            via_rev = reversal(left_deriv(reversal(l), a))
            assert right_deriv(l, a) == via_rev


def test_language_ops():
    l = parse_regex("(ab)*")
    assert symmetric_difference(l, l) == empty_language("ab")
    aa = parse_regex("(aa)*")
    odd = parse_regex("a(aa)*")
    assert union(aa, odd) == parse_regex("a*")
    assert complement(empty_language("ab")) == full_language("ab")
    assert language_op("BA", "join", [aa, odd]) == parse_regex("a*")
    with pytest.raises(StructureError):
        language_op("JSL0", "not", [l])


def test_eval_language_per_tag():
    aa = parse_regex("(aa)*")
    x = make_free("JSL0", "a", [("a", 1), ("aa", 1)])
    assert eval_language(aa, x) == 1
    y = make_free("VECT2", "a", [("", 1), ("aa", 1)])
    assert eval_language(aa, y) == 0  # two member words, even
    z = free_zero("SET_STAR", "a")
    assert eval_language(aa, z) == 0
    w = free_word("SET", "a", "aa")
    assert eval_language(aa, w) == 1


def test_reversal_and_rev_free():
    assert reversal(parse_regex("(ab)*")) == parse_regex("(ba)*")
    x = make_free("JSL0", "ab", [("ab", 1), ("a", 1)])
    assert rev_free(x) == make_free("JSL0", "ab", [("ba", 1), ("a", 1)])
    for rx in ["(ab)*", "a*b*", "(a|b)*a"]:
        l = parse_regex(rx, "ab")
        assert reversal(reversal(l)) == l


def test_free_mul_examples():
    a = make_free("JSL0", "a", [("a", 1)])
    ea = make_free("JSL0", "a", [("", 1), ("a", 1)])
    assert free_mul(a, ea) == make_free("JSL0", "a", [("a", 1), ("aa", 1)])
    v = make_free("VECT2", "a", [("", 1), ("a", 1)])
    assert free_mul(v, v) == make_free("VECT2", "a", [("", 1), ("aa", 1)])
    z = free_zero("SET_STAR", "a")
    w = free_word("SET_STAR", "a", "a")
    assert free_mul(z, w) == z and free_mul(w, z) == z


def test_preimage_set_tag():
    f = make_free_morphism(
        "SET", "b", "ab", {"b": free_word("SET", "ab", "ab")}
    )
    assert preimage_language(parse_regex("(ab)*"), f) == parse_regex("b*", "b")


def test_preimage_jsl0_tag():
    f = make_free_morphism(
        "JSL0", "b", "a", {"b": make_free("JSL0", "a", [("a", 1), ("aa", 1)])}
    )
    assert preimage_language(parse_regex("(aa)*"), f) == parse_regex("b*", "b")


def test_preimage_set_star_zero_image():
    f = make_free_morphism("SET_STAR", "b", "a", {"b": free_zero("SET_STAR", "a")})
    aa = parse_regex("(aa)*")
    assert preimage_language(aa, f) == parse_regex("ε", "b")
    a_odd = parse_regex("a(aa)*")
    assert preimage_language(a_odd, f) == empty_language("b")


def test_preimage_agrees_with_wordwise_eval():
    corpus = {
        "SET": [("b", "ab", {"b": ("ab",)}), ("bc", "ab", {"b": ("a",), "c": ("ba",)})],
        "JSL0": [("b", "a", {"b": ("a", "aa")}), ("bc", "ab", {"b": ("a",), "c": ("b", "ab")})],
        "VECT2": [("b", "a", {"b": ("", "a")}), ("bc", "ab", {"b": ("a",), "c": ("b", "ab")})],
        "SET_STAR": [("bc", "ab", {"b": ("ab",), "c": ()})],
    }
    langs = ["(ab)*", "(aa)*", "a*b*", "(a|b)*a"]
    for tag, fs in corpus.items():
        for src, tgt, images in fs:
            f = make_free_morphism(
                tag,
                src,
                tgt,
                {
                    b: (
                        make_free(tag, tgt, [(w, 1) for w in ws])
                        if (ws or tag not in ("SET_STAR",))
                        else free_zero(tag, tgt)
                    )
                    for b, ws in images.items()
                },
            )
            for rx in langs:
                try:
                    l = parse_regex(rx, tgt)
                except StructureError:
                    continue  # regex letters outside this target alphabet
                pre = preimage_language(l, f)
                for w in words_upto(src, 6):
                    x = free_word(tag, src, w)
                    assert pre.accepts(w) == (eval_language(l, apply_free(f, x)) == 1), (
                        tag, rx, w,
                    )


def test_dagger():
    f = make_free_morphism("SET", "b", "ab", {"b": free_word("SET", "ab", "ab")})
    assert dagger(f).image("b") == free_word("SET", "ab", "ba")
    g = make_free_morphism("SET", "b", "ab", {"b": free_word("SET", "ab", "aba")})
    assert dagger(g).image("b") == g.image("b")
    assert dagger(dagger(f)) == f


def test_apply_free_multiplicativity():
    f = make_free_morphism(
        "JSL0", "b", "a", {"b": make_free("JSL0", "a", [("a", 1), ("aa", 1)])}
    )
    bb = free_word("JSL0", "b", "bb")
    assert apply_free(f, bb) == make_free(
        "JSL0", "a", [("aa", 1), ("aaa", 1), ("aaaa", 1)]
    )
    ident = identity_free_morphism("SET", "ab")
    w = free_word("SET", "ab", "abba")
    assert apply_free(ident, w) == w


def test_closure_ba_of_even_a():
    langs = closure_under_ops_and_derivs("BA", [parse_regex("(aa)*")])
    assert len(langs) == 4
    expected = {
        parse_regex("(aa)*"),
        parse_regex("a(aa)*"),
        parse_regex("a*"),
        empty_language("a"),
    }
    assert set(langs) == expected


def test_closure_jsl0_of_empty_is_singleton():
    langs = closure_under_ops_and_derivs("JSL0", [empty_language("a")])
    assert langs == [empty_language("a")]


def test_closure_vect2_is_a_gf2_span():
    langs = closure_under_ops_and_derivs("VECT2", [parse_regex("(aa)*")])
    assert len(langs) == 4  # dimension 2: span of (aa)* and a(aa)*
    assert parse_regex("a*") in set(langs)
    # power of two and xor-closed
    for l1 in langs:
        for l2 in langs:
            assert symmetric_difference(l1, l2) in set(langs)


def test_language_to_regex_roundtrip():
    for rx in ["(ab)*", "(aa)*", "a*b*", "(a|b)*a", "∅", "ε"]:
        l = parse_regex(rx, "ab")
        assert parse_regex(language_to_regex(l), "ab") == l


# -- series ------------------------------------------------------------------


def test_series_characteristic_values():
    aa = parse_regex("(aa)*")
    s = series_of_language(aa, 2)
    assert s.dim == 2
    for w in words_upto("a", 8):
        assert s.value(w) == (1 if aa.accepts(w) else 0)


def test_series_minimization_preserves_values():
    rng = random.Random(7)
    for p in (2, 3):
        for _ in range(10):
            dim = rng.randint(1, 4)
            alphabet = "ab"
            mats = {
                a: [[rng.randrange(p) for _ in range(dim)] for _ in range(dim)]
                for a in alphabet
            }
            init = [rng.randrange(p) for _ in range(dim)]
            out = [rng.randrange(p) for _ in range(dim)]
            s = make_series(p, alphabet, init, mats, out)
            m = minimize_series(s)
            assert m.dim <= s.dim
            for w in words_upto(alphabet, 2 * dim):
                assert s.value(w) == m.value(w), (p, w)


def test_series_preimage_identity_substitution():
    aa = parse_regex("(aa)*")
    s = series_of_language(aa, 2)
    f = make_free_morphism("VECT2", "b", "a", {"b": free_word("VECT2", "a", "a")})
    pre = series_preimage(s, f)
    for n in range(9):
        assert pre.value("b" * n) == s.value("a" * n)


def test_series_preimage_binomial_parities():
    # f(b) = eps + a: value on b^n is sum_k C(n,k) * [k even] mod 2
    aa = parse_regex("(aa)*")
    s = series_of_language(aa, 2)
    f = make_free_morphism(
        "VECT2", "b", "a", {"b": make_free("VECT2", "a", [("", 1), ("a", 1)])}
    )
    pre = series_preimage(s, f)
    import math

    for n in range(9):
        expected = sum(math.comb(n, k) for k in range(0, n + 1, 2)) % 2
        assert pre.value("b" * n) == expected


def test_series_preimage_matches_sum_formula():
    # beta'(w) = sum_v f*(w)(v) * beta(v), evaluated by brute force
    rng = random.Random(11)
    for p in (2, 3):
        tag = f"VECT{p}"
        dim = 3
        mats = {
            "a": [[rng.randrange(p) for _ in range(dim)] for _ in range(dim)],
            "b": [[rng.randrange(p) for _ in range(dim)] for _ in range(dim)],
        }
        s = make_series(
            p,
            "ab",
            [rng.randrange(p) for _ in range(dim)],
            mats,
            [rng.randrange(p) for _ in range(dim)],
        )
        f = make_free_morphism(
            tag,
            "c",
            "ab",
            {"c": make_free(tag, "ab", [("a", 1), ("b", p - 1), ("ab", 1)])},
        )
        pre = series_preimage(s, f)
        for n in range(0, 9):
            w = "c" * n
            img = free_word(tag, "c", w)
            fx = apply_free(f, img)
            brute = sum(c * s.value(v) for v, c in fx.pairs) % p
            assert pre.value(w) == brute


def test_zero_series_preimage_is_zero():
    s = make_series(2, "a", [0], {"a": [[1]]}, [0])
    f = make_free_morphism("VECT2", "b", "a", {"b": free_word("VECT2", "a", "aa")})
    pre = series_preimage(s, f)
    assert all(pre.value("b" * n) == 0 for n in range(6))
