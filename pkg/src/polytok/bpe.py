"""Byte-pair encoding: learn merge operations from word frequencies and
apply them as a subword tokenizer.

Words start as character sequences with the end-of-word marker "</w>"
fused onto the final character; learned merges are replayed in order at
application time. Non-final subwords carry the continuation marker "@@"
so segmentation is reversible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import InputError, ParseError

END_MARKER = "</w>"
CONT_MARKER = "@@"
MERGES_HEADER_PREFIX = "#bpe-merges v1"


class WordFreq(NamedTuple):
    word: str
    count: int


@dataclass(frozen=True)
class MergeTable:
    merges: tuple[tuple[str, str], ...]
    requested: int
    alphabet: frozenset[str]

    @property
    def learned(self) -> int:
        return len(self.merges)


def _word_symbols(word: str) -> list[str]:
    if not word:
        return []
    return list(word[:-1]) + [word[-1] + END_MARKER]


def _merge_pair(symbols: list[str], left: str, right: str) -> list[str]:
    """One left-to-right pass replacing every adjacent (left, right).

    A single pass is exhaustive: the fused symbol is strictly longer than
    either side, so no new occurrence of the same pair can appear.
    """
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _pair_counts(seqs: list[tuple[list[str], int]]) -> Counter:
    counts = Counter()
    for symbols, count in seqs:
        for pair in zip(symbols, symbols[1:]):
            counts[pair] += count
    return counts


def learn_merges(words: Iterable[WordFreq], n_merges: int, min_pair_freq: int = 2) -> MergeTable:
    """Learn up to n_merges merge operations from frequency-weighted word
    types.

    Each step merges the adjacent symbol pair with the highest total
    weighted frequency, ties broken by ascending byte order of the pair.
    Learning stops early once the best pair's frequency drops below
    min_pair_freq (default 2: hapax pairs do not generalize).
    """
    words = list(words)
    if not words:
        raise InputError("cannot learn merges from an empty word list")
    if n_merges < 1:
        raise ValueError("n_merges must be positive")
    alphabet = set()
    seqs = []
    for word, count in words:
        if not word or any(ch.isspace() for ch in word):
            raise InputError(f"invalid word {word!r}: must be non-empty and whitespace-free")
        if count < 1:
            raise InputError(f"invalid count {count} for word {word!r}")
        alphabet.update(word)
        seqs.append((_word_symbols(word), count))

    merges = []
    for _ in range(n_merges):
        counts = _pair_counts(seqs)
        if not counts:
            break
        pair, freq = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if freq < min_pair_freq:
            break
        merges.append(pair)
        left, right = pair
        seqs = [(_merge_pair(s, left, right), c) for s, c in seqs]
    return MergeTable(tuple(merges), requested=n_merges, alphabet=frozenset(alphabet))


def apply_merges(word: str, table: MergeTable) -> list[str]:
    """Segment one word by replaying the table's merges in order.

    Characters never seen during learning simply stay as singleton
    symbols. The final token has the end-of-word marker stripped; all
    earlier tokens get the continuation marker appended.
    """
    symbols = _word_symbols(word)
    if not symbols:
        return []
    for left, right in table.merges:
        if len(symbols) == 1:
            break
        symbols = _merge_pair(symbols, left, right)
    tokens = [s + CONT_MARKER for s in symbols[:-1]]
    last = symbols[-1]
    if last.endswith(END_MARKER):
        last = last[: -len(END_MARKER)]
    tokens.append(last)
    return tokens


def segment_corpus(lines, table: MergeTable) -> list[list[str]]:
    """Apply the merge table to every token of every line."""
    cache: dict[str, list[str]] = {}
    out = []
    for tokens in lines:
        row = []
        for tok in tokens:
            seg = cache.get(tok)
            if seg is None:
                seg = apply_merges(tok, table)
                cache[tok] = seg
            row.extend(seg)
        out.append(row)
    return out


def unsegment_line(tokens) -> tuple[list[str], int]:
    """Rejoin continuation-marked runs; returns (tokens, dangling count).

    A line-final token still carrying the marker is joined with nothing
    and counted as dangling.
    """
    out = []
    buf = ""
    dangling = 0
    for tok in tokens:
        if tok.endswith(CONT_MARKER):
            buf += tok[: -len(CONT_MARKER)]
        else:
            out.append(buf + tok)
            buf = ""
    if buf:
        out.append(buf)
        dangling = 1
    return out, dangling


def unsegment(tokens) -> list[str]:
    """Inverse of continuation marking; idempotent on marker-free input."""
    return unsegment_line(tokens)[0]


def save_merges(table: MergeTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{MERGES_HEADER_PREFIX} requested={table.requested} learned={table.learned}\n")
        for left, right in table.merges:
            if " " in left or " " in right:
                raise ValueError(f"merge symbols may not contain spaces: {(left, right)!r}")
            fh.write(f"{left} {right}\n")


def load_merges(path) -> MergeTable:
    """Load a merge table. The alphabet is reconstructed from the merge
    symbols themselves; it is only needed for diagnostics, not for
    applying merges."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split()
        if (
            len(parts) != 4
            or " ".join(parts[:2]) != MERGES_HEADER_PREFIX
            or not parts[2].startswith("requested=")
            or not parts[3].startswith("learned=")
        ):
            raise ParseError(f"expected header {MERGES_HEADER_PREFIX!r} ...", path=str(path), line=1)
        try:
            requested = int(parts[2].split("=", 1)[1])
            learned = int(parts[3].split("=", 1)[1])
        except ValueError:
            raise ParseError("bad header counts", path=str(path), line=1)
        merges = []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split(" ")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise ParseError("expected 'left right'", path=str(path), line=lineno)
            merges.append((fields[0], fields[1]))
    if len(merges) != learned:
        raise ParseError(f"header says learned={learned} but file has {len(merges)} merges", path=str(path))
    alphabet = set()
    for left, right in merges:
        for sym in (left, right):
            if sym.endswith(END_MARKER):
                sym = sym[: -len(END_MARKER)]
            alphabet.update(sym)
    return MergeTable(tuple(merges), requested=requested, alphabet=frozenset(alphabet))


def word_frequencies(lines) -> list[WordFreq]:
    """Count word types over token lines, in first-occurrence order."""
    counts = Counter()
    for tokens in lines:
        counts.update(tokens)
    return [WordFreq(w, c) for w, c in counts.items()]
