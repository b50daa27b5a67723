"""Shared fixture corpora, generated deterministically."""

import itertools

from polytok.bpe import WordFreq

STEMS = [
    "kaka", "tuni", "pira", "suli", "voqe", "mika", "ratu", "nipa",
    "qetu", "livo", "kani", "tupa", "niqe", "pasu", "qemi", "ralu",
]
SUFFIXES = ["t", "mek", "mi", "nun", "ngu", "lu", "tuq", "it"]


def stem_suffix_corpus(n_stems=16, n_suffixes=8, n_two_suffix=48):
    """Concatenative stem x suffix corpus with Zipf counts.

    Bare suffix particles and bare stems rank highest, single-suffix
    words next, two-suffix words last, mirroring the frequency layering
    of natural agglutinative text. Default size is 200 word types.
    """
    stems = STEMS[:n_stems]
    suffixes = SUFFIXES[:n_suffixes]
    forms = list(suffixes) + list(stems)
    forms += [s + x for s, x in itertools.product(stems, suffixes)]
    two = [
        s + x + y
        for s, (x, y) in itertools.product(stems, itertools.permutations(suffixes, 2))
        if x != y
    ]
    forms += two[:n_two_suffix]
    return [WordFreq(form, max(1, 3000 // rank)) for rank, form in enumerate(forms, start=1)]
