"""Baseline word tokenizer: splits on whitespace, delimits punctuation,
and (in English mode) detaches clitics.

Two modes exist because the source language writes a gemination marker
as an apostrophe: English text wants "hadn't" -> "had n't", while
apostrophe-preserving mode must keep words like "Yup'ik" intact.
"""

from __future__ import annotations

from enum import Enum

# Marks that always stand alone as tokens.
_PUNCT = set('.,!?;:"()[]')
# Closing marks that detokenization glues to the previous token.
_CLOSING = set(".,!?;:)")
# English clitic endings, longest first so n't wins over 't etc.
_CLITICS = ("n't", "'ll", "'re", "'ve", "'s", "'d", "'m")


class TokMode(Enum):
    ENGLISH = "english"
    APOSTROPHE_PRESERVING = "apostrophe-preserving"


def _coerce_mode(mode) -> TokMode:
    if isinstance(mode, TokMode):
        return mode
    return TokMode(mode)


def _split_punct(chunk: str, keep_apostrophes: bool) -> list[str]:
    """Split one whitespace-free chunk into word and punctuation pieces.

    Doubled quote characters ('' and ``) form single two-character tokens;
    in apostrophe-preserving mode the apostrophe is an ordinary letter, so
    only `` gets that treatment there.
    """
    pieces = []
    word = []
    i = 0
    while i < len(chunk):
        c = chunk[i]
        pair = chunk[i : i + 2]
        if pair in ("''", "``") and not (keep_apostrophes and c == "'"):
            if word:
                pieces.append("".join(word))
                word = []
            pieces.append(pair)
            i += 2
        elif c in _PUNCT:
            if word:
                pieces.append("".join(word))
                word = []
            pieces.append(c)
            i += 1
        else:
            word.append(c)
            i += 1
    if word:
        pieces.append("".join(word))
    return pieces


def _split_clitics(word: str) -> list[str]:
    """Peel clitic endings off a word, repeatedly, e.g. they'd've ->
    [they, 'd, 've]. The remaining stem must stay non-empty."""
    tail = []
    while True:
        lowered = word.lower()
        for clitic in _CLITICS:
            if lowered.endswith(clitic) and len(word) > len(clitic):
                cut = len(word) - len(clitic)
                tail.append(word[cut:])
                word = word[:cut]
                break
        else:
            break
    return [word] + tail[::-1]


def tokenize(line: str, mode=TokMode.ENGLISH) -> list[str]:
    """Tokenize one line. Tokens never contain whitespace and concatenate
    back to the input with all whitespace removed."""
    mode = _coerce_mode(mode)
    keep = mode is TokMode.APOSTROPHE_PRESERVING
    tokens = []
    for chunk in line.split():
        for piece in _split_punct(chunk, keep):
            if not keep and piece and piece[0] not in _PUNCT and piece not in ("''", "``"):
                tokens.extend(_split_clitics(piece))
            else:
                tokens.append(piece)
    return tokens


def detokenize(tokens, mode=TokMode.ENGLISH) -> str:
    """Join tokens with spaces, then reattach punctuation and clitics."""
    _coerce_mode(mode)  # both modes detokenize identically; validate anyway
    out = []
    for tok in tokens:
        if not out:
            out.append(tok)
        elif tok in _CLOSING or tok == "n't" or tok.startswith("'"):
            out.append(tok)
        elif out[-1] == "(":
            out.append(tok)
        else:
            out.append(" " + tok)
    return "".join(out)


def tokenize_lines(lines, mode=TokMode.ENGLISH, lowercase: bool = False) -> list[list[str]]:
    mode = _coerce_mode(mode)
    result = []
    for line in lines:
        if lowercase:
            line = line.lower()
        result.append(tokenize(line, mode))
    return result
