import json

import pytest

from predual.cli import main
from predual.serialize import dumps, from_doc, loads, to_doc


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_syntactic_ab_star_is_order_six(capsys):
    code, out, _ = run_cli(capsys, "syntactic", "--tag", "BA", "--regex", "(ab)*", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "generated-dmonoid"
    assert len(doc["mult"]) == 6


def test_dualize_jsl0_chain(capsys, tmp_path):
    chain = {
        "kind": "algebra",
        "tag": "JSL0",
        "size": 2,
        "ops": {"join": [[0, 1], [1, 1]], "zero": 0},
    }
    path = tmp_path / "chain2.alg"
    path.write_text(json.dumps(chain))
    code, out, _ = run_cli(capsys, "dualize", "--pair", "JSL0", "--in", str(path), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["ops"]["zero"] == 1  # reversed chain: old top is the new zero
    assert doc["ops"]["join"][0][1] == 0


def test_dualize_check_exit_zero(capsys):
    code, out, _ = run_cli(capsys, "dualize", "--pair", "BA", "--check", "--max-size", "4")
    assert code == 0
    assert json.loads(out)["ok"]


def test_dualize_invalid_algebra_is_a_counterexample(capsys, tmp_path):
    bad = {
        "kind": "algebra",
        "tag": "JSL0",
        "size": 2,
        "ops": {"join": [[0, 0], [0, 1]], "zero": 0},  # not commutativity-safe
    }
    path = tmp_path / "bad.alg"
    path.write_text(json.dumps(bad))
    code, out, _ = run_cli(capsys, "dualize", "--pair", "JSL0", "--in", str(path))
    assert code == 1
    assert "violations" in out


def test_check_laws_lrev_holds(capsys):
    code, out, _ = run_cli(
        capsys, "check-laws", "--laws", "lrev", "--pairs", "BA", "--max-states", "8"
    )
    assert code == 0
    assert "lrev: holds" in out


def test_minimize_and_deriv(capsys):
    code, out, _ = run_cli(capsys, "minimize", "--regex", "(ab)*", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["states"] == 3
    code, out, _ = run_cli(
        capsys, "deriv", "--side", "right", "--letter", "b", "--regex", "(ab)*", "--json"
    )
    assert code == 0
    from predual.langlib import parse_regex

    assert from_doc(json.loads(out)) == parse_regex("(ab)*a")


def test_usage_error_exit_code(capsys):
    assert main(["deriv", "--side", "up", "--letter", "a", "--regex", "a"]) == 2
    assert main([]) == 2


def test_localvariety_and_roundtrip(capsys):
    code, out, _ = run_cli(
        capsys, "localvariety", "--tag", "BA", "--regex", "(aa)*", "--json"
    )
    assert code == 0
    q = from_doc(json.loads(out))
    assert q.states.size == 4
    assert dumps(q) == out  # canonical round trip


def test_varlang_parity(capsys, tmp_path):
    monoid = {
        "kind": "dmonoid",
        "tag": "SET",
        "carrier": {"kind": "algebra", "tag": "SET", "size": 2, "ops": {}},
        "mult": [[0, 1], [1, 0]],
        "unit": 0,
    }
    path = tmp_path / "z2.mon"
    path.write_text(json.dumps(monoid))
    code, out, _ = run_cli(
        capsys, "varlang", "--monoid", str(path), "--alphabet", "a", "--pair", "BA", "--json"
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["languages"]) == 4
    # every reconstructed regex reparses to its language
    from predual.langlib import parse_regex

    for lang_doc, rx in zip(doc["languages"], doc["regexes"]):
        assert parse_regex(rx, lang_doc["alphabet"]) == from_doc(lang_doc)


def test_eilenberg_check_cli(capsys, tmp_path):
    monoid = {
        "kind": "dmonoid",
        "tag": "SET",
        "carrier": {"kind": "algebra", "tag": "SET", "size": 2, "ops": {}},
        "mult": [[0, 1], [1, 0]],
        "unit": 0,
    }
    mpath = tmp_path / "z2.mon"
    mpath.write_text(json.dumps(monoid))
    spath = tmp_path / "samples.json"
    spath.write_text(json.dumps(["(aa)*", "(ab)*", "a*"]))
    code, out, _ = run_cli(
        capsys, "eilenberg-check", "--monoid", str(mpath), "--samples", str(spath),
        "--pair", "BA", "--nmax", "2",
    )
    assert code == 0
    report = json.loads(out)
    assert report["mismatches"] == [] and report["checked"] == 3


def test_preimage_cli(capsys, tmp_path):
    fdoc = {
        "kind": "free-morphism",
        "tag": "SET",
        "source_alphabet": ["b"],
        "target_alphabet": ["a", "b"],
        "images": {
            "b": {"kind": "free-element", "tag": "SET", "alphabet": ["a", "b"],
                   "pairs": [["ab", 1]]}
        },
    }
    path = tmp_path / "map.json"
    path.write_text(json.dumps(fdoc))
    code, out, _ = run_cli(
        capsys, "preimage", "--map", str(path), "--regex", "(ab)*", "--json"
    )
    assert code == 0
    from predual.langlib import parse_regex

    assert from_doc(json.loads(out)) == parse_regex("b*", "b")


def test_enumerate_cli(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--tag", "JSL0", "--size", "3")
    assert code == 0
    assert out.startswith("1 algebra(s)")


def test_byte_identical_reruns(capsys):
    _, out1, _ = run_cli(capsys, "syntactic", "--tag", "BA", "--regex", "(ab)*", "--json")
    _, out2, _ = run_cli(capsys, "syntactic", "--tag", "BA", "--regex", "(ab)*", "--json")
    assert out1 == out2


def test_document_roundtrips():
    from predual.algebra import enumerate_algebras, identity_morphism
    from predual.automata import generated_local_variety, dual_automaton, dual_generated_monoid
    from predual.langlib import parse_regex, free_word, make_free_morphism

    values = [
        enumerate_algebras("BA", 4)[0],
        enumerate_algebras("POS", 3)[1],
        identity_morphism(enumerate_algebras("JSL0", 3)[0]),
        parse_regex("(ab)*"),
        free_word("SET", "ab", "ab"),
        make_free_morphism("SET", "b", "ab", {"b": free_word("SET", "ab", "ab")}),
        generated_local_variety("BA", [parse_regex("(aa)*")]),
        dual_automaton(generated_local_variety("BA", [parse_regex("(aa)*")])),
        dual_generated_monoid(generated_local_variety("BA", [parse_regex("(aa)*")])).base,
        dual_generated_monoid(generated_local_variety("BA", [parse_regex("(aa)*")])),
    ]
    for value in values:
        assert loads(dumps(value)) == value


def test_check_laws_with_corpus_file(capsys, tmp_path):
    corpus = {"pairs": ["BA"], "seeds": {"a": ["(aa)*", "a*"]}}
    path = tmp_path / "corpus.json"
    path.write_text(json.dumps(corpus))
    code, out, _ = run_cli(
        capsys, "check-laws", "--corpus", str(path), "--laws", "lrev,proppre"
    )
    assert code == 0
    assert "lrev: holds" in out and "proppre: holds" in out


def test_preimage_side_mismatch_is_usage_error(capsys, tmp_path):
    from predual.automata import generated_local_variety
    from predual.langlib import parse_regex
    from predual.serialize import dumps as sdumps

    q = generated_local_variety("BA", [parse_regex("(aa)*")])
    qpath = tmp_path / "q.json"
    qpath.write_text(sdumps(q))
    fdoc = {
        "kind": "free-morphism",
        "tag": "SET",
        "source_alphabet": ["b"],
        "target_alphabet": ["a"],
        "images": {"b": {"kind": "free-element", "tag": "SET", "alphabet": ["a"],
                          "pairs": [["a", 1]]}},
    }
    fpath = tmp_path / "f.json"
    fpath.write_text(json.dumps(fdoc))
    code, _, err = run_cli(
        capsys, "preimage", "--map", str(fpath), "--automaton", str(qpath),
        "--side", "D",
    )
    assert code == 2


def test_dot_outputs(capsys):
    code, out, _ = run_cli(
        capsys, "localvariety", "--tag", "BA", "--regex", "(aa)*", "--dot"
    )
    assert code == 0
    assert out.startswith("digraph automaton")
