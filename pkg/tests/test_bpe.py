import random
import string
from collections import Counter

import pytest

from polytok import bpe
from polytok.bpe import MergeTable, WordFreq
from polytok.errors import InputError, ParseError

FOUR_WORDS = [WordFreq("low", 5), WordFreq("lower", 2), WordFreq("newest", 6), WordFreq("widest", 3)]


# ---------------------------------------------------------------- oracles

def oracle_symbols(word):
    return list(word[:-1]) + [word[-1] + "</w>"]


def oracle_pair_counts(seqs):
    """Brute-force weighted adjacent-pair counting."""
    counts = Counter()
    for symbols, freq in seqs:
        for k in range(len(symbols) - 1):
            counts[(symbols[k], symbols[k + 1])] += freq
    return counts


def oracle_replay(word, merges):
    """Independent greedy re-application of merges in table order."""
    symbols = oracle_symbols(word)
    for left, right in merges:
        result = []
        k = 0
        while k < len(symbols):
            if k + 1 < len(symbols) and (symbols[k], symbols[k + 1]) == (left, right):
                result.append(left + right)
                k += 2
            else:
                result.append(symbols[k])
                k += 1
        symbols = result
    out = [s + "@@" for s in symbols[:-1]]
    out.append(symbols[-1][: -len("</w>")])
    return out


def random_words(n, seed, alphabet=string.ascii_lowercase, max_len=12):
    rng = random.Random(seed)
    return ["".join(rng.choice(alphabet) for _ in range(rng.randint(1, max_len))) for _ in range(n)]


# ----------------------------------------------------------------- learn

class TestLearnMerges:
    def test_first_merge_is_es_with_freq_9(self):
        counts = oracle_pair_counts([(oracle_symbols(w), c) for w, c in FOUR_WORDS])
        best_freq = max(counts.values())
        winners = sorted(p for p, c in counts.items() if c == best_freq)
        assert best_freq == 9
        assert winners[0] == ("e", "s")

        table = bpe.learn_merges(FOUR_WORDS, 1)
        assert table.merges == (("e", "s"),)

    def test_single_pair_word(self):
        # With the default minimum pair frequency of 2, a hapax pair is
        # not merged; lowering the threshold exposes the pair itself.
        assert bpe.learn_merges([WordFreq("aa", 1)], 1).merges == ()
        assert bpe.learn_merges([WordFreq("aa", 1)], 1, min_pair_freq=1).merges == (("a", "a</w>"),)

    def test_large_merge_counts_accepted(self):
        for n in (10_000, 15_000, 30_000):
            table = bpe.learn_merges(FOUR_WORDS, n)
            assert table.requested == n
            assert table.learned <= n

    def test_every_merge_was_max_frequency(self):
        words = [WordFreq(w, c) for w, c in Counter(random_words(80, seed=3, alphabet="abcd", max_len=8)).items()]
        table = bpe.learn_merges(words, 25)
        seqs = [(oracle_symbols(w), c) for w, c in words]
        for merge in table.merges:
            counts = oracle_pair_counts(seqs)
            best = max(counts.values())
            assert counts[merge] == best
            # replay the recorded merge before checking the next one
            seqs = [(oracle_replay_step(s, merge), c) for s, c in seqs]

    def test_empty_word_list_rejected(self):
        with pytest.raises(InputError):
            bpe.learn_merges([], 5)

    def test_bad_words_rejected(self):
        with pytest.raises(InputError):
            bpe.learn_merges([WordFreq("a b", 1)], 1)
        with pytest.raises(InputError):
            bpe.learn_merges([WordFreq("", 1)], 1)

    def test_determinism(self):
        a = bpe.learn_merges(FOUR_WORDS, 10)
        b = bpe.learn_merges(FOUR_WORDS, 10)
        assert a == b

    def test_learned_count_monotone_in_requested(self):
        words = [WordFreq(w, c) for w, c in Counter(random_words(60, seed=11, alphabet="abcde", max_len=9)).items()]
        learned = [bpe.learn_merges(words, n).learned for n in (1, 5, 20, 80, 300)]
        assert learned == sorted(learned)

    def test_alphabet_recorded(self):
        table = bpe.learn_merges(FOUR_WORDS, 1)
        assert table.alphabet == frozenset("lowernst" + "wide")


def oracle_replay_step(symbols, merge):
    left, right = merge
    result = []
    k = 0
    while k < len(symbols):
        if k + 1 < len(symbols) and (symbols[k], symbols[k + 1]) == (left, right):
            result.append(left + right)
            k += 2
        else:
            result.append(symbols[k])
            k += 1
    return result


# ----------------------------------------------------------------- apply

class TestApplyMerges:
    def test_full_merge_no_marker(self):
        table = MergeTable((("a", "a</w>"),), requested=1, alphabet=frozenset("a"))
        assert bpe.apply_merges("aa", table) == ["aa"]

    def test_empty_table_character_fallback(self):
        table = MergeTable((), requested=1, alphabet=frozenset("ab"))
        assert bpe.apply_merges("ab", table) == ["a@@", "b"]

    def test_lowest_matches_reference_replay(self):
        table = bpe.learn_merges(FOUR_WORDS, 10)
        assert bpe.apply_merges("lowest", table) == oracle_replay("lowest", table.merges)

    def test_unknown_characters_stay_singletons(self):
        table = bpe.learn_merges(FOUR_WORDS, 10)
        out = bpe.apply_merges("løw", table)
        assert "".join(t.removesuffix("@@") for t in out) == "løw"

    def test_apply_agrees_with_oracle_on_random_words(self):
        table = bpe.learn_merges(FOUR_WORDS, 10)
        for word in random_words(200, seed=5):
            assert bpe.apply_merges(word, table) == oracle_replay(word, table.merges)


class TestSegmentCorpus:
    def test_single_line(self):
        table = MergeTable((("a", "a</w>"),), requested=1, alphabet=frozenset("a"))
        assert bpe.segment_corpus([["aa"]], table) == [["aa"]]

    def test_line_structure_preserved(self):
        table = bpe.learn_merges(FOUR_WORDS, 3)
        lines = [["low", "newest"], [], ["widest"]]
        out = bpe.segment_corpus(lines, table)
        assert len(out) == 3
        assert out[1] == []
        assert [bpe.unsegment(row) for row in out] == [["low", "newest"], [], ["widest"]]

    def test_per_language_tables_differ(self):
        src = bpe.learn_merges([WordFreq("qanrutaa", 4), WordFreq("qanertuq", 4)], 5)
        tgt = bpe.learn_merges([WordFreq("speaking", 4), WordFreq("speaks", 4)], 5)
        assert src.merges != tgt.merges


class TestUnsegment:
    def test_basic_join(self):
        assert bpe.unsegment(["lo@@", "west"]) == ["lowest"]

    def test_identity_on_unmarked(self):
        assert bpe.unsegment(["a", "b"]) == ["a", "b"]
        assert bpe.unsegment(bpe.unsegment(["a@@", "b"])) == ["ab"]

    def test_dangling_marker_flagged(self):
        tokens, dangling = bpe.unsegment_line(["a@@", "b@@"])
        assert tokens == ["ab"]
        assert dangling == 1

    def test_round_trip_random_words(self):
        tables = [
            bpe.learn_merges(FOUR_WORDS, 10),
            bpe.learn_merges([WordFreq(w, i % 7 + 1) for i, w in enumerate(set(random_words(60, seed=1)))], 40),
            bpe.learn_merges([WordFreq("aaaa", 9), WordFreq("aaab", 5), WordFreq("abab", 4)], 6),
        ]
        words = random_words(1000, seed=2)
        for table in tables:
            for word in words:
                assert bpe.unsegment(bpe.apply_merges(word, table)) == [word]


class TestVocabularyBound:
    def test_distinct_tokens_bounded(self):
        words = [WordFreq(w, c) for w, c in Counter(random_words(120, seed=9, alphabet="abcdef", max_len=10)).items()]
        table = bpe.learn_merges(words, 50)
        lines = [[w for w, _ in words]]
        seen = {tok for row in bpe.segment_corpus(lines, table) for tok in row}
        assert len(seen) <= 2 * len(table.alphabet) + table.learned


class TestMergesFile:
    def test_round_trip(self, tmp_path):
        table = bpe.learn_merges(FOUR_WORDS, 10)
        path = tmp_path / "merges.txt"
        bpe.save_merges(table, path)
        text = path.read_text(encoding="utf-8")
        assert text.startswith(f"#bpe-merges v1 requested=10 learned={table.learned}\n")
        loaded = bpe.load_merges(path)
        assert loaded.merges == table.merges
        assert loaded.requested == table.requested

    def test_byte_identical_saves(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        bpe.save_merges(bpe.learn_merges(FOUR_WORDS, 10), a)
        bpe.save_merges(bpe.learn_merges(FOUR_WORDS, 10), b)
        assert a.read_bytes() == b.read_bytes()

    def test_bad_header(self, tmp_path):
        path = tmp_path / "merges.txt"
        path.write_text("#wrong\n", encoding="utf-8")
        with pytest.raises(ParseError):
            bpe.load_merges(path)

    def test_bad_merge_line(self, tmp_path):
        path = tmp_path / "merges.txt"
        path.write_text("#bpe-merges v1 requested=1 learned=1\na b c\n", encoding="utf-8")
        with pytest.raises(ParseError) as exc:
            bpe.load_merges(path)
        assert exc.value.line == 2


def test_word_frequencies():
    assert bpe.word_frequencies([["a", "b"], ["a"]]) == [WordFreq("a", 2), WordFreq("b", 1)]
