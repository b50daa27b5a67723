"""Parallel corpus loading, train/dev/test splitting, and vocabulary
truncation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AlignmentError, ParseError, SplitSizeError
from .rng import SplitMix64

DEFAULT_UNK = "<unk>"
VOCAB_HEADER = "#vocab v1"


@dataclass(frozen=True)
class SentencePair:
    index: int
    source: str
    target: str


@dataclass(frozen=True)
class ParallelCorpus:
    pairs: tuple[SentencePair, ...]
    name: str = "corpus"

    def __len__(self) -> int:
        return len(self.pairs)

    def source_lines(self) -> list[str]:
        return [p.source for p in self.pairs]

    def target_lines(self) -> list[str]:
        return [p.target for p in self.pairs]


@dataclass(frozen=True)
class SplitSpec:
    dev_count: int
    test_count: int
    seed: int = 0

    def __post_init__(self):
        if self.dev_count < 1 or self.test_count < 1:
            raise SplitSizeError("dev_count and test_count must be positive")


@dataclass(frozen=True)
class Vocabulary:
    """Most-frequent tokens of a corpus, capped at `limit` entries.

    Entries are ordered by descending count, ties by ascending byte order
    of the token. The unknown token never appears among the entries.
    """

    entries: tuple[tuple[str, int], ...]
    limit: int
    unk_token: str = DEFAULT_UNK
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(t for t, _ in self.entries))

    def __contains__(self, token: str) -> bool:
        return token in self._members

    def __len__(self) -> int:
        return len(self.entries)


def _read_lines(path) -> list[str]:
    """Read one sentence per line, decoding strictly so a bad byte is
    reported with its line number. Trailing CR is tolerated."""
    lines = []
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, start=1):
            try:
                text = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ParseError(f"invalid UTF-8 ({exc.reason})", path=str(path), line=lineno) from exc
            lines.append(text.rstrip("\r\n").strip())
    return lines


def load_parallel(source_path, target_path, name: str | None = None) -> ParallelCorpus:
    """Zip two one-sentence-per-line files into an aligned corpus.

    Lines are whitespace-trimmed; blank lines are kept as empty sentences
    so alignment is never disturbed.
    """
    src = _read_lines(source_path)
    tgt = _read_lines(target_path)
    if len(src) != len(tgt):
        raise AlignmentError(
            f"line count mismatch: {source_path} has {len(src)} lines, "
            f"{target_path} has {len(tgt)}"
        )
    pairs = tuple(SentencePair(i, s, t) for i, (s, t) in enumerate(zip(src, tgt)))
    if name is None:
        name = Path(source_path).stem
    return ParallelCorpus(pairs, name=name)


def split_indices(n: int, spec: SplitSpec) -> tuple[list[int], list[int], list[int]]:
    """Partition range(n) into (train, dev, test) index lists.

    Dev and test indices are a uniform draw without replacement fully
    determined by the seed (splitmix64 partial Fisher-Yates); each list
    is returned in ascending order.
    """
    held_out = spec.dev_count + spec.test_count
    if held_out >= n:
        raise SplitSizeError(
            f"dev+test ({spec.dev_count}+{spec.test_count}) must be smaller "
            f"than the corpus ({n} pairs)"
        )
    rng = SplitMix64(spec.seed)
    drawn = rng.sample_indices(n, held_out)
    dev = set(drawn[: spec.dev_count])
    test = set(drawn[spec.dev_count :])
    train = [i for i in range(n) if i not in dev and i not in test]
    return train, sorted(dev), sorted(test)


def _subcorpus(corpus: ParallelCorpus, indices: list[int], suffix: str) -> ParallelCorpus:
    pairs = tuple(
        SentencePair(new, corpus.pairs[old].source, corpus.pairs[old].target)
        for new, old in enumerate(indices)
    )
    return ParallelCorpus(pairs, name=f"{corpus.name}.{suffix}")


def split(corpus: ParallelCorpus, spec: SplitSpec):
    """Split a corpus into (train, dev, test), preserving original order
    within each part."""
    train_idx, dev_idx, test_idx = split_indices(len(corpus), spec)
    return (
        _subcorpus(corpus, train_idx, "train"),
        _subcorpus(corpus, dev_idx, "dev"),
        _subcorpus(corpus, test_idx, "test"),
    )


def build_vocab(lines, limit: int, unk_token: str = DEFAULT_UNK) -> Vocabulary:
    """Keep the `limit` most frequent tokens; ties broken by ascending
    byte order. A token equal to the unknown symbol is never kept."""
    if limit < 1:
        raise ValueError("vocabulary limit must be positive")
    counts = Counter()
    for tokens in lines:
        counts.update(tokens)
    counts.pop(unk_token, None)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return Vocabulary(tuple(ranked[:limit]), limit=limit, unk_token=unk_token)


def apply_vocab(tokens, vocab: Vocabulary) -> list[str]:
    """Replace out-of-vocabulary tokens with the unknown symbol."""
    return [t if t in vocab else vocab.unk_token for t in tokens]


def oov_rate(lines, vocab: Vocabulary) -> float:
    """Fraction of tokens that fall outside the vocabulary."""
    total = 0
    oov = 0
    for tokens in lines:
        for t in tokens:
            total += 1
            if t not in vocab:
                oov += 1
    return oov / total if total else 0.0


def save_vocab(vocab: Vocabulary, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(VOCAB_HEADER + "\n")
        for token, count in vocab.entries:
            fh.write(f"{token}\t{count}\n")


def load_vocab(path, unk_token: str = DEFAULT_UNK) -> Vocabulary:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != VOCAB_HEADER:
            raise ParseError(f"expected header {VOCAB_HEADER!r}", path=str(path), line=1)
        entries = []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError("expected token<TAB>count", path=str(path), line=lineno)
            token, count_text = parts
            try:
                count = int(count_text)
            except ValueError:
                raise ParseError(f"bad count {count_text!r}", path=str(path), line=lineno)
            if count < 1:
                raise ParseError("counts must be positive", path=str(path), line=lineno)
            entries.append((token, count))
    return Vocabulary(tuple(entries), limit=max(1, len(entries)), unk_token=unk_token)


def write_lines(path, lines) -> None:
    """Write sentences (token lists or plain strings) one per line, LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            if not isinstance(line, str):
                line = " ".join(line)
            fh.write(line + "\n")


def read_token_lines(path) -> list[list[str]]:
    return [line.split() for line in _read_lines(path)]
