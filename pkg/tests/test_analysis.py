"""Brute-force oracles: occurrence scans, regulators, SAP, cubes, pr bounds."""

import functools

import pytest

import apwords as ap
from apwords import (
    Alphabet,
    Regulator,
    aligned_occurrences,
    check_regulator,
    check_sap,
    default_cut_grid,
    empirical_regulator,
    is_cube_free,
    make_sequence,
    occurrences,
    periodic,
    periodic_regulator,
    pr_upper_estimate,
    read,
    reg_thm21,
    scaled,
    thm21,
    thue_morse,
    tm_triple_fixture,
    verdict_fields,
    verdict_tsv,
    word,
)


@functools.lru_cache(maxsize=None)
def tm_empirical(horizon=2 ** 16):
    return ap.empirical_regulator(thue_morse(), horizon)


def test_occurrences_doubled_block():
    # the level-1 block inside its own square sits only at offsets 0 and 5
    seq = periodic(word("1001110011", ap.BINARY))
    assert occurrences(word("10011"), seq, 0, 5) == [0, 5]


def test_occurrences_rejects_empty_factor():
    with pytest.raises(ValueError):
        occurrences(word("", ap.BINARY), thue_morse(), 0, 10)


def test_occurrences_tm_prefix():
    assert occurrences(word("0"), thue_morse(), 0, 7) == [0, 3, 5, 6]


def test_occurrences_overlapping():
    seq = periodic(word("111", ap.BINARY))
    assert occurrences(word("11"), seq, 0, 4) == [0, 1, 2, 3, 4]


def test_aligned_occurrences():
    seq = periodic(word("1001110011", ap.BINARY))
    assert aligned_occurrences(word("10011"), seq, 5, 0, 5) == [0, 5]
    assert aligned_occurrences(word("10011"), seq, 1, 0, 5) == [0, 5]
    assert aligned_occurrences(word("10011"), seq, 3, 0, 5) == [0]


def test_block_alignment_in_quintuple_suffix():
    # past the first level-0 run, level-1 blocks repeat with period 5; all
    # occurrences in the next level window are aligned to that grid
    suf = make_sequence("suffix:4:thm21")
    occ = occurrences(word("10011"), suf, 0, 20)
    assert occ == [0, 5, 10, 15, 20]
    assert aligned_occurrences(word("10011"), suf, 5, 0, 20) == occ


def test_empirical_regulator_tm():
    B = tm_empirical()
    assert B.value(1) == 3
    # independent scan oracle for B(1): widest start-gap between equal letters
    text = read(thue_morse(), 0, 2 ** 16 - 1).text()
    worst = 0
    for ch in "01":
        starts = [i for i, c in enumerate(text) if c == ch]
        gaps = [starts[0]] + [b - a for a, b in zip(starts, starts[1:])]
        worst = max(worst, max(gaps))
    assert B.value(1) == worst


def test_empirical_regulator_simple_fixtures():
    ab = periodic(word("ab", Alphabet(("a", "b"))))
    assert empirical_regulator(ab, 1024).value(1) == 2
    ones = periodic(word("1", ap.BINARY))
    B = empirical_regulator(ones, 1024)
    for n in range(1, 9):
        assert B.value(n) == n


def test_empirical_regulator_monotone_and_bounded_below():
    B = tm_empirical()
    prev = 0
    for n in range(1, 17):
        v = B.value(n)
        assert v >= n and v >= prev
        prev = v


def test_empirical_regulator_horizon_guard():
    B = empirical_regulator(thue_morse(), 64)
    with pytest.raises(ap.ResourceLimitError):
        B.value(40)


def test_check_regulator_quintuple():
    v = check_regulator(thm21(), reg_thm21(), 5 ** 5, 6)
    assert v.status == "pass"
    assert v.note == "pass-at-horizon"
    assert v.counterexample is None


def test_check_regulator_constant_fails_with_reproducible_witness():
    seq = thm21()
    v = check_regulator(seq, Regulator(lambda n: 10, "derived", "const10"), 5 ** 5, 8)
    assert v.status == "fail"
    ce = v.counterexample
    assert ce is not None
    # reproduce: the factor is absent from the reported window
    lo, hi = ce.window_start, ce.window_start + ce.window_len - len(ce.factor)
    assert occurrences(ce.factor, seq, lo, hi) == []


def test_check_regulator_constant_sequence():
    ones = periodic(word("1", ap.BINARY))
    v = check_regulator(ones, Regulator(lambda n: n, "derived", "id"), 512, 6)
    assert v.status == "pass"


def test_check_regulator_monotone_falsifier():
    # passing for R implies passing for any pointwise-larger R'
    r = reg_thm21()
    assert check_regulator(thm21(), r, 5 ** 5, 6).status == "pass"
    assert check_regulator(thm21(), scaled(r, 2), 5 ** 5, 6).status == "pass"


def test_check_regulator_small_horizon_inconclusive():
    v = check_regulator(thm21(), reg_thm21(), 100, 8)
    assert v.status == "inconclusive"


def test_check_sap_tm():
    v = check_sap(thue_morse(), 2 ** 16, 16)
    assert v.status == "pass"


def test_check_sap_periodic():
    v = check_sap(periodic(word("abc", Alphabet(("a", "b", "c")))), 2 ** 12, 6)
    assert v.status == "pass"


def test_check_sap_quintuple_detects_nonrecurrent_blocks():
    v = check_sap(thm21(), 5 ** 6, 20)
    assert v.status == "fail"
    assert v.counterexample is not None
    # the level-1 quadruple block (length 20, last seen at position 9) is a
    # witnessed non-recurring factor
    c1 = word("10011" * 4)
    assert any(f.factor == c1 for _, f in v.failures)
    # reported counterexamples are reproducible non-recurrences
    ce = v.counterexample
    tail_occ = occurrences(ce.factor, thm21(), 5 ** 6 // 2, 5 ** 6 - len(ce.factor))
    assert tail_occ == []


def test_cube_free_examples():
    v = is_cube_free(word("010101"))
    assert v.status == "fail"
    # counterexample: repeated unit u plus the window holding uuu
    ce = v.counterexample
    assert ce.window_len == 3 * len(ce.factor)
    assert word("010101").symbols[ce.window_start : ce.window_start + ce.window_len] \
        == ce.factor.symbols * 3
    assert is_cube_free(read(thue_morse(), 0, 2 ** 10 - 1)).status == "pass"
    assert is_cube_free(word("0")).status == "pass"
    assert is_cube_free(word("", ap.BINARY)).status == "pass"


def test_cube_free_vs_naive_oracle():
    import random

    def naive(text):
        n = len(text)
        for p in range(1, n // 3 + 1):
            for i in range(n - 3 * p + 1):
                if text[i : i + p] == text[i + p : i + 2 * p] == text[i + 2 * p : i + 3 * p]:
                    return False
        return True

    rng = random.Random(5)
    for _ in range(200):
        text = "".join(rng.choice("01") for _ in range(rng.randint(1, 24)))
        got = is_cube_free(word(text, ap.BINARY)).status == "pass"
        assert got == naive(text)


def test_default_cut_grid():
    assert default_cut_grid(64) == [0, 1, 2, 4, 8, 16, 32]
    assert default_cut_grid(2) == [0, 1]


def test_pr_estimate_tm_is_zero():
    assert pr_upper_estimate(thue_morse(), 2 ** 12, 8) == 0


def test_pr_estimate_triple_block_fixture_is_positive():
    # the prepended cube 010101 never recurs in the tail, so cut 0 fails
    est = pr_upper_estimate(tm_triple_fixture(1), 2 ** 12, 8)
    assert est is not None and est >= 1


def test_verdict_report_shape():
    v = check_sap(periodic(word("ab", Alphabet(("a", "b")))), 1024, 4)
    fields = verdict_fields("check-sap", "periodic:ab", 4, v)
    assert list(fields) == [
        "op",
        "spec",
        "horizon",
        "n_max",
        "status",
        "note",
        "failure_count",
        "counterexample",
    ]
    line = verdict_tsv(fields)
    assert line.split("\t")[0] == "check-sap"
    assert line.split("\t")[4] == "pass"


def test_lower_bound_consistency_periodic():
    for text in ["ab", "abc", "aabb"]:
        sigma = Alphabet(tuple(sorted(set(text))))
        seq = periodic(word(text, sigma))
        B = empirical_regulator(seq, 2048)
        R = periodic_regulator(len(text))
        for n in range(1, 9):
            assert B.value(n) <= R(n)
