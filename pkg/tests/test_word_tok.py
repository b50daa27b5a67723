import pytest

from polytok.word_tok import TokMode, detokenize, tokenize, tokenize_lines

ENG = TokMode.ENGLISH
APO = TokMode.APOSTROPHE_PRESERVING

# Small mixed corpus for the round-trip and preservation properties.
FIXTURE_LINES = [
    "the dog hadn't eaten.",
    "they'd haul them up, wouldn't they?",
    "He said: \"go home\" (and left).",
    "it's o'clock somewhere; really!",
    "I'm sure you're right, we've seen it.",
    "she'll win... maybe [someday]!",
    "a good hunter . ''",
    "`` quoted speech '' ends here .",
    "one, two, three: four.",
    "",
]
FIXTURE_APO = [
    "pissuryullrunrituk",
    "Yup'ik qaygimi nerciquq.",
    "angyam iluani, kuigem ceñiini!",
    "qang'a tua-i.",
]


class TestTokenize:
    def test_clitic_nt(self):
        assert tokenize("the dog hadn't eaten.", ENG) == ["the", "dog", "had", "n't", "eaten", "."]

    def test_clitic_d(self):
        assert tokenize("they'd haul", ENG) == ["they", "'d", "haul"]

    def test_apostrophe_preserving(self):
        assert tokenize("pissuryullrunrituk", APO) == ["pissuryullrunrituk"]
        assert tokenize("Yup'ik", APO) == ["Yup'ik"]

    def test_all_punct_marks_delimit(self):
        line = 'a.b,c!d?e;f:g"h(i)j[k]l'
        out = tokenize(line, ENG)
        assert out == [
            "a", ".", "b", ",", "c", "!", "d", "?", "e", ";", "f", ":",
            "g", '"', "h", "(", "i", ")", "j", "[", "k", "]", "l",
        ]

    def test_double_quote_pairs_single_tokens(self):
        assert tokenize("`` hi ''", ENG) == ["``", "hi", "''"]
        assert tokenize("hunter.''", ENG) == ["hunter", ".", "''"]

    def test_all_clitics(self):
        assert tokenize("he's they'll we're you've I'm they'd isn't", ENG) == [
            "he", "'s", "they", "'ll", "we", "'re", "you", "'ve", "I", "'m",
            "they", "'d", "is", "n't",
        ]

    def test_stacked_clitics(self):
        assert tokenize("they'd've", ENG) == ["they", "'d", "'ve"]

    def test_bare_clitic_not_split(self):
        # no stem to detach from, so the chunk stays whole
        assert tokenize("n't 'd", ENG) == ["n't", "'d"]

    def test_internal_apostrophe_kept_in_english(self):
        assert tokenize("o'clock", ENG) == ["o'clock"]

    def test_digits_and_hyphens_not_split(self):
        assert tokenize("in 1995 it was well-known", ENG) == ["in", "1995", "it", "was", "well-known"]
        assert tokenize("tua-i 100", APO) == ["tua-i", "100"]

    def test_apostrophe_mode_keeps_punct_delimiting(self):
        assert tokenize("qaygimi, nerciquq.", APO) == ["qaygimi", ",", "nerciquq", "."]

    def test_empty_line(self):
        assert tokenize("", ENG) == []
        assert tokenize("   ", ENG) == []

    @pytest.mark.parametrize("mode,lines", [(ENG, FIXTURE_LINES), (APO, FIXTURE_APO)])
    def test_character_preservation(self, mode, lines):
        for line in lines:
            tokens = tokenize(line, mode)
            assert "".join(tokens) == "".join(line.split())

    @pytest.mark.parametrize("mode,lines", [(ENG, FIXTURE_LINES), (APO, FIXTURE_APO)])
    def test_no_empty_or_spacey_tokens(self, mode, lines):
        for line in lines:
            for tok in tokenize(line, mode):
                assert tok
                assert not any(ch.isspace() for ch in tok)

    def test_mode_accepts_strings(self):
        assert tokenize("Yup'ik", "apostrophe-preserving") == ["Yup'ik"]
        with pytest.raises(ValueError):
            tokenize("x", "klingon")


class TestDetokenize:
    def test_punct_reattachment(self):
        assert detokenize(["the", "dog", "."]) == "the dog."

    def test_clitic_reattachment(self):
        assert detokenize(["they", "'d", "haul"]) == "they'd haul"
        assert detokenize(["had", "n't"]) == "hadn't"

    def test_empty(self):
        assert detokenize([]) == ""

    def test_parens(self):
        assert detokenize(["(", "so", ")"]) == "(so)"

    @pytest.mark.parametrize("mode,lines", [(ENG, FIXTURE_LINES), (APO, FIXTURE_APO)])
    def test_round_trip(self, mode, lines):
        for line in lines:
            once = tokenize(line, mode)
            again = tokenize(detokenize(once, mode), mode)
            assert again == once


def test_tokenize_lines_lowercase():
    out = tokenize_lines(["The DOG"], ENG, lowercase=True)
    assert out == [["the", "dog"]]
