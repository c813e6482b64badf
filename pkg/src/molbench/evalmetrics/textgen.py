"""BLEU, ROUGE, and METEOR for the description task.

All three share one tokenizer: lowercase, split on Unicode whitespace, strip
trailing punctuation. BLEU is the original corpus definition without
smoothing (any zero n-gram precision zeroes the score); ROUGE variants are
reported as F1; METEOR uses the exact-match stage only, with the greedy
leftmost alignment documented below.
"""

from __future__ import annotations

import math
from collections import Counter

_TRAILING_PUNCT = ".,;:!?\"')"


def tokenize(text: str) -> list[str]:
    tokens = []
    for raw in text.lower().split():
        token = raw.rstrip(_TRAILING_PUNCT)
        if token:
            tokens.append(token)
    return tokens


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_n(candidate: str, references: list[str], n: int) -> float:
    """Geometric mean of modified 1..n-gram precisions times brevity penalty."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = tokenize(candidate)
    refs = [tokenize(ref) for ref in references]
    if not cand or not refs:
        return 0.0
    log_sum = 0.0
    for order in range(1, n + 1):
        cand_counts = _ngrams(cand, order)
        total = sum(cand_counts.values())
        if total == 0:
            return 0.0
        max_ref: Counter = Counter()
        for ref in refs:
            for gram, count in _ngrams(ref, order).items():
                if count > max_ref[gram]:
                    max_ref[gram] = count
        clipped = sum(min(count, max_ref[gram]) for gram, count in cand_counts.items())
        if clipped == 0:
            return 0.0
        log_sum += math.log(clipped / total)
    closest = min(refs, key=lambda ref: (abs(len(ref) - len(cand)), len(ref)))
    r, c = len(closest), len(cand)
    brevity = 1.0 if c > r else math.exp(1.0 - r / c)
    return brevity * math.exp(log_sum / n)


def _f1(overlap: float, cand_total: float, ref_total: float) -> float:
    if cand_total == 0 or ref_total == 0 or overlap == 0:
        return 0.0
    precision = overlap / cand_total
    recall = overlap / ref_total
    return 2 * precision * recall / (precision + recall)


def rouge(candidate: str, reference: str, variant: str) -> float:
    """ROUGE-1/2 from clipped n-gram overlap, ROUGE-L from LCS; all as F1."""
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if variant in ("1", "2", 1, 2):
        order = int(variant)
        cand_counts = _ngrams(cand, order)
        ref_counts = _ngrams(ref, order)
        overlap = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
        return _f1(overlap, sum(cand_counts.values()), sum(ref_counts.values()))
    if variant in ("L", "l"):
        return _f1(_lcs_length(cand, ref), len(cand), len(ref))
    raise ValueError(f"unknown ROUGE variant {variant!r}")


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token_a in a:
        current = [0]
        for j, token_b in enumerate(b, start=1):
            if token_a == token_b:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def meteor(candidate: str, reference: str) -> float:
    """Exact-unigram METEOR: F_mean = 10PR/(R+9P), penalty = 0.5(chunks/m)^3.

    Alignment rule (pinned): walk candidate positions left to right, pairing
    each with the leftmost unused reference position holding the same token;
    a chunk is a maximal run where both sides advance by one.
    """
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return 0.0
    used = [False] * len(ref)
    alignment: list[tuple[int, int]] = []
    for i, token in enumerate(cand):
        for j, ref_token in enumerate(ref):
            if not used[j] and ref_token == token:
                used[j] = True
                alignment.append((i, j))
                break
    matches = len(alignment)
    if matches == 0:
        return 0.0
    precision = matches / len(cand)
    recall = matches / len(ref)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    chunks = 1
    for (i_prev, j_prev), (i_cur, j_cur) in zip(alignment, alignment[1:]):
        if i_cur != i_prev + 1 or j_cur != j_prev + 1:
            chunks += 1
    penalty = 0.5 * (chunks / matches) ** 3
    return f_mean * (1.0 - penalty)
