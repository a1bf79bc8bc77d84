import pytest

from demi.corpus import ConstantRecord, evaluate, load_corpus, verify
from demi.errors import CorpusError
from demi.numerics import matched_digits


def test_shipped_corpus_shape():
    records = load_corpus()
    names = [r.name for r in records]
    assert len(records) == 51
    assert len(set(names)) == len(names)
    assert {f"psi({x})" for x in [*range(3, 11), *range(-10, -2)]} <= set(names)
    assert all(r.min_match_digits <= 40 for r in records)


def test_record_validation():
    with pytest.raises(CorpusError):
        ConstantRecord("x", "s", 5, "1.2.3")
    with pytest.raises(CorpusError):
        ConstantRecord("x", "s", 9, "1.2345")
    assert ConstantRecord("x", "s", 5, "-0.012345").min_match_digits == 5


def test_malformed_files(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("psi(0)\thalfexp\t30\n")
    with pytest.raises(CorpusError):
        load_corpus(bad)
    bad.write_text("# only a comment\n")
    with pytest.raises(CorpusError):
        load_corpus(bad)
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "missing.tsv")


def test_unknown_name(ctx30):
    with pytest.raises(CorpusError):
        evaluate("zeta(3)", ctx30)


def test_evaluate_pattern_names(ctx30):
    assert matched_digits(evaluate("h(e^-1)", ctx30), "0.97799934154339643974252620984") >= 29
    assert matched_digits(evaluate("ln_half(3)", ctx30),
                          "1.79042891325614540324620443046") >= 29


def test_verify_filter_and_cap(ctx30):
    results = verify(load_corpus(), ctx30, only="f*")
    assert [r.name for r in results] == ["f(0)", "f(1)", "f'(1)", "f''(0)", "f''''(0)"]
    assert all(r.passed for r in results)
    assert results[0].required == 30  # 40 on file, capped at the requested digits


@pytest.mark.slow
def test_full_replay_at_forty_digits():
    from demi.numerics import PrecisionContext
    results = verify(load_corpus(), PrecisionContext(40))
    failed = [(r.name, r.matched, r.required) for r in results if not r.passed]
    assert not failed
