import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molbench.errors import EmptyScoredSet
from molbench.evalmetrics import (
    ParsedAnswer,
    bleu_n,
    classification_metrics,
    meteor,
    parse_binary,
    parse_numeric,
    parse_vector,
    regression_metrics,
    rouge,
    tokenize,
)

OK_YES = ParsedAnswer("ok", yes_no=True)
OK_NO = ParsedAnswer("ok", yes_no=False)
UNPARSED = ParsedAnswer("unparsed")


def num(x):
    return ParsedAnswer("ok", number=float(x))


# --- parsing -----------------------------------------------------------------

def test_parse_binary_affirmation():
    assert parse_binary("Yes, this molecule inhibits BACE-1.").yes_no is True
    assert parse_binary("no").yes_no is False
    assert parse_binary("NO WAY").yes_no is False
    assert parse_binary("True.").yes_no is True


def test_parse_binary_first_token_wins():
    assert parse_binary("Yes. Actually no.").yes_no is True
    assert parse_binary("No... well, yes").yes_no is False


def test_parse_binary_unparsed():
    assert not parse_binary("The answer is unclear").ok
    assert not parse_binary("").ok
    # substrings inside words must not trigger
    assert not parse_binary("nostalgia yesterday").ok


def test_parse_numeric():
    assert parse_numeric("-3.21 mol/L approximately").number == pytest.approx(-3.21)
    assert parse_numeric("about 1.5e-3 units").number == pytest.approx(1.5e-3)
    assert parse_numeric("42").number == 42.0
    assert not parse_numeric("no idea").ok


def test_parse_vector():
    names = ["alpha", "gap", "homo", "lumo", "mu", "cv",
             "gibbs", "enthalpy", "extent", "internal", "zero", "zpve"]
    lines = "\n".join(f"{name}: {i}.5" for i, name in enumerate(names))
    parsed = parse_vector(lines, 12)
    assert parsed.ok
    assert parsed.vector[0] == pytest.approx(0.5)
    assert parsed.vector[11] == pytest.approx(11.5)
    assert not parse_vector("1 2 3", 12).ok


# --- classification ------------------------------------------------------------

def test_all_correct():
    acc, f1, _ = classification_metrics([OK_YES, OK_NO], [True, False])
    assert acc == 1.0 and f1 == 1.0


def test_spec_confusion_fixture():
    preds = [OK_YES, OK_YES, OK_NO, OK_NO]
    golds = [True, False, True, False]
    acc, f1, _ = classification_metrics(preds, golds)
    assert acc == 0.5
    assert f1 == 0.5


def test_unparsed_counts_wrong_and_negative():
    acc, f1, _ = classification_metrics([UNPARSED, OK_YES], [True, True])
    assert acc == 0.5  # unparsed is incorrect even though gold is True
    assert f1 == pytest.approx(2 * 1.0 * 0.5 / 1.5)  # treated as negative pred


def test_f1_zero_when_undefined():
    acc, f1, diagnostic = classification_metrics([OK_NO, OK_NO], [False, False])
    assert acc == 1.0
    assert f1 == 0.0
    assert diagnostic


def test_empty_scored_set():
    with pytest.raises(EmptyScoredSet):
        classification_metrics([], [])


def test_random_fixture_matches_confusion_oracle():
    rng = random.Random(99)
    preds, golds = [], []
    for _ in range(100):
        roll = rng.random()
        preds.append(UNPARSED if roll < 0.1 else (OK_YES if roll < 0.55 else OK_NO))
        golds.append(rng.random() < 0.5)
    acc, f1, _ = classification_metrics(preds, golds)
    # independent confusion-matrix computation
    tp = sum(1 for p, g in zip(preds, golds) if p.ok and p.yes_no and g)
    fp = sum(1 for p, g in zip(preds, golds) if p.ok and p.yes_no and not g)
    fn = sum(1 for p, g in zip(preds, golds)
             if (not p.ok or not p.yes_no) and g)
    correct = sum(1 for p, g in zip(preds, golds) if p.ok and p.yes_no == g)
    assert acc == pytest.approx(correct / 100)
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    assert f1 == pytest.approx(2 * precision * recall / (precision + recall))


def test_f1_invariant_under_paired_permutation():
    rng = random.Random(5)
    preds = [OK_YES if rng.random() < 0.5 else OK_NO for _ in range(50)]
    golds = [rng.random() < 0.5 for _ in range(50)]
    base = classification_metrics(preds, golds)
    order = list(range(50))
    rng.shuffle(order)
    shuffled = classification_metrics([preds[i] for i in order],
                                      [golds[i] for i in order])
    assert base == shuffled


# --- regression ----------------------------------------------------------------

def test_regression_perfect():
    assert regression_metrics([num(1), num(2)], [1.0, 2.0]) == (0.0, 0.0)


def test_regression_spec_fixture():
    mae, rmse = regression_metrics([num(0), num(2)], [1.0, 1.0])
    assert mae == 1.0 and rmse == 1.0


def test_regression_excludes_unparsed():
    mae, rmse = regression_metrics([num(1), UNPARSED], [2.0, 100.0])
    assert mae == 1.0 and rmse == 1.0


def test_regression_empty():
    with pytest.raises(EmptyScoredSet):
        regression_metrics([UNPARSED], [1.0])


def test_regression_thousand_pairs_reference():
    rng = random.Random(123)
    preds = [rng.uniform(-10, 10) for _ in range(1000)]
    golds = [rng.uniform(-10, 10) for _ in range(1000)]
    mae, rmse = regression_metrics([num(p) for p in preds], golds)
    errors = [abs(p - g) for p, g in zip(preds, golds)]
    assert mae == pytest.approx(math.fsum(errors) / 1000, abs=1e-12)
    assert rmse == pytest.approx(
        math.sqrt(math.fsum(e * e for e in errors) / 1000), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)),
                min_size=1, max_size=40))
def test_rmse_at_least_mae(pairs):
    preds = [num(p) for p, _ in pairs]
    golds = [g for _, g in pairs]
    mae, rmse = regression_metrics(preds, golds)
    assert rmse >= mae - 1e-9


# --- BLEU ------------------------------------------------------------------------

def test_bleu_identity():
    assert bleu_n("the cat sat", ["the cat sat"], 2) == pytest.approx(1.0)
    assert bleu_n("a b c d e", ["a b c d e"], 4) == pytest.approx(1.0)


def test_bleu_disjoint_zero():
    assert bleu_n("alpha beta", ["gamma delta"], 2) == 0.0


def test_bleu2_hand_fixture():
    # cand "the cat sat on the mat" vs ref "the cat is on the mat"
    # p1 = 5/6, p2 = 3/5, BP = 1 -> sqrt(0.5)
    candidate = "the cat sat on the mat"
    reference = "the cat is on the mat"
    expected = math.exp((math.log(5 / 6) + math.log(3 / 5)) / 2)
    assert bleu_n(candidate, [reference], 2) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_bleu4_zero_precision_rule():
    # same pair: no common 4-gram -> BLEU-4 exactly 0 (no smoothing)
    assert bleu_n("the cat sat on the mat", ["the cat is on the mat"], 4) == 0.0


def test_bleu4_hand_fixture():
    # counts worked by hand: p1=5/6, p2=3/5, p3=2/4, p4=1/3
    candidate = "a b c d e f"
    reference = "a b c d x f"
    expected = math.exp(
        (math.log(5 / 6) + math.log(3 / 5) + math.log(2 / 4) + math.log(1 / 3)) / 4)
    assert bleu_n(candidate, [reference], 4) == pytest.approx(expected, abs=1e-12)


def test_bleu_brevity_penalty():
    # cand len 3, ref len 5, perfect precisions -> exp(1 - 5/3)
    assert bleu_n("a b c", ["a b c d e"], 2) == pytest.approx(
        math.exp(1 - 5 / 3), abs=1e-12)


def test_bleu_multi_reference_clipping():
    assert bleu_n("a b", ["a x", "y b"], 1) == pytest.approx(1.0)
    assert bleu_n("a b", ["a x", "y b"], 2) == 0.0


def test_bleu_candidate_reference_asymmetry():
    a = "the small cat"
    b = "the small small cat"
    assert bleu_n(a, [b], 2) != bleu_n(b, [a], 2)


# --- ROUGE ----------------------------------------------------------------------

def test_rouge_identity():
    for variant in ("1", "2", "L"):
        assert rouge("a b c", "a b c", variant) == pytest.approx(1.0)


def test_rouge_disjoint():
    for variant in ("1", "2", "L"):
        assert rouge("a b", "c d", variant) == 0.0


def test_rouge_spec_fixture():
    assert rouge("the cat sat", "the cat ran", "1") == pytest.approx(2 / 3)
    assert rouge("the cat sat", "the cat ran", "L") == pytest.approx(2 / 3)
    assert rouge("the cat sat", "the cat ran", "2") == pytest.approx(1 / 2)


def test_rouge_lcs_non_contiguous():
    # LCS("a b c d", "a x c d") = 3 -> F1 = 3/4... P=3/4 R=3/4
    assert rouge("a b c d", "a x c d", "L") == pytest.approx(3 / 4)


# --- METEOR ----------------------------------------------------------------------

def test_meteor_single_word_identity():
    assert meteor("same", "same") == pytest.approx(0.5)


def test_meteor_zero_matches():
    assert meteor("aaa bbb", "ccc ddd") == 0.0


def test_meteor_identity_five_tokens():
    # m=5, F=1, chunks=1 -> 1 * (1 - 0.5 * (1/5)**3) = 0.996
    assert meteor("a b c d e", "a b c d e") == pytest.approx(0.996)


def test_meteor_hand_fixture_swapped_words():
    # cand "the quick brown fox jumps" / ref "the brown quick fox jumps"
    # greedy-leftmost alignment gives chunks=4, m=5, F_mean=1
    expected = 1.0 * (1.0 - 0.5 * (4 / 5) ** 3)
    assert meteor("the quick brown fox jumps",
                  "the brown quick fox jumps") == pytest.approx(expected, abs=1e-12)


def test_meteor_precision_recall_weighting():
    # cand "a b" vs ref "a b c d": m=2, P=1, R=1/2
    # F_mean = 10*1*0.5/(0.5+9) = 5/9.5; chunks=1 -> penalty=0.5*(1/2)**3
    expected = (5 / 9.5) * (1 - 0.5 * 0.125)
    assert meteor("a b", "a b c d") == pytest.approx(expected, abs=1e-12)


def test_meteor_asymmetry_pinned():
    a, b = "a b", "a b c d"
    assert meteor(a, b) != meteor(b, a)


# --- tokenizer --------------------------------------------------------------------

def test_tokenize_rules():
    assert tokenize("Hello, World!") == ["hello", "world"]
    assert tokenize("keep-dash 3.5 end.") == ["keep-dash", "3.5", "end"]
    assert tokenize("  spaced\tout\nlines ") == ["spaced", "out", "lines"]


def test_all_text_metrics_in_unit_range():
    rng = random.Random(31)
    vocabulary = ["mol", "ring", "acid", "ester", "amine", "salt", "polar"]
    for _ in range(200):
        cand = " ".join(rng.choice(vocabulary) for _ in range(rng.randint(1, 12)))
        ref = " ".join(rng.choice(vocabulary) for _ in range(rng.randint(1, 12)))
        for score in (bleu_n(cand, [ref], 2), bleu_n(cand, [ref], 4),
                      rouge(cand, ref, "1"), rouge(cand, ref, "2"),
                      rouge(cand, ref, "L"), meteor(cand, ref)):
            assert 0.0 <= score <= 1.0
