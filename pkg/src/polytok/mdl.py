"""Unsupervised morphological segmentation by minimum description length.

The model is a unigram morph lexicon. Its cost has two parts, both in
bits: coding the lexicon (each morph type spelled out character by
character under a frozen character code, plus an end marker) and coding
the corpus (each morph token at -log2 of its relative frequency). Batch
training greedily re-segments one word type at a time by recursive
binary splitting, accepting a new analysis only when it lowers the total
cost, so the cost trajectory is non-increasing by construction.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InputError, ParseError
from .rng import SplitMix64

MODEL_HEADER_PREFIX = "#segmodel v1"
ANALYSES_HEADER = "#analyses"
DEFAULT_UNSEEN_PENALTY = 20.0  # bits per character


@dataclass(frozen=True)
class TrainConfig:
    convergence_threshold: float = 0.005
    max_epochs: int = 20
    seed: int = 0
    unseen_morph_penalty: float = DEFAULT_UNSEEN_PENALTY

    def __post_init__(self):
        if not 0.0 < self.convergence_threshold < 1.0:
            raise ValueError("convergence_threshold must be in (0, 1)")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be positive")


@dataclass
class SegModel:
    lexicon: dict[str, int]
    total_tokens: int
    char_costs: dict[str, float]
    end_cost: float
    analyses: dict[str, list[str]]
    # Application-time fallback; not part of the stored model.
    viterbi_penalty: float = field(default=DEFAULT_UNSEEN_PENALTY, compare=False)
    # Training history: (maintained cost, from-scratch cost) per epoch.
    epoch_costs: list[tuple[float, float]] = field(default_factory=list, compare=False)
    initial_cost: float = field(default=0.0, compare=False)

    def codelength(self, morph: str) -> float:
        return sum(self.char_costs[ch] for ch in morph) + self.end_cost


def _plogp(x: int) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def _estimate_char_costs(word_types: Iterable[str]) -> tuple[dict[str, float], float]:
    """Character code lengths from the word-type list, frozen thereafter.

    One end-marker event is counted per type, so the end marker shares
    the same distribution as the characters.
    """
    types = sorted(set(word_types))
    if not types:
        raise InputError("cannot estimate character costs from zero word types")
    counts = Counter()
    for w in types:
        counts.update(w)
    total_units = sum(counts.values()) + len(types)
    char_costs = {ch: -math.log2(n / total_units) for ch, n in sorted(counts.items())}
    end_cost = -math.log2(len(types) / total_units)
    return char_costs, end_cost


def model_cost(model: SegModel) -> float:
    """Total description length in bits: lexicon coding plus corpus coding."""
    lex = 0.0
    for morph in sorted(model.lexicon):
        lex += model.codelength(morph)
    log_total = math.log2(model.total_tokens) if model.total_tokens else 0.0
    corpus = 0.0
    for morph in sorted(model.lexicon):
        count = model.lexicon[morph]
        corpus += count * (log_total - math.log2(count))
    return lex + corpus


class _Trainer:
    """Mutable counts plus incrementally maintained cost aggregates.

    cost = lex_cost + total*log2(total) - sum_m count(m)*log2(count(m)).
    Candidate evaluation never mutates state; committed updates are
    tracked so a whole word update can be reverted bit-exactly.
    """

    def __init__(self, char_costs, end_cost):
        self.char_costs = char_costs
        self.end_cost = end_cost
        self.counts: dict[str, int] = {}
        self.total = 0
        self.sum_plogp = 0.0
        self.lex_cost = 0.0
        self._touched: dict[str, int] | None = None

    def codelength(self, morph: str) -> float:
        return sum(self.char_costs[ch] for ch in morph) + self.end_cost

    def cost(self) -> float:
        return self.lex_cost + _plogp(self.total) - self.sum_plogp

    def apply(self, deltas: dict[str, int]) -> None:
        for morph, d in deltas.items():
            if d == 0:
                continue
            old = self.counts.get(morph, 0)
            new = old + d
            if new < 0:
                raise AssertionError(f"negative count for morph {morph!r}")
            if self._touched is not None and morph not in self._touched:
                self._touched[morph] = old
            self.sum_plogp += _plogp(new) - _plogp(old)
            if old == 0 and new > 0:
                self.lex_cost += self.codelength(morph)
            elif old > 0 and new == 0:
                self.lex_cost -= self.codelength(morph)
            if new == 0:
                self.counts.pop(morph, None)
            else:
                self.counts[morph] = new
            self.total += d

    def cost_if(self, deltas: dict[str, int]) -> float:
        """Cost after hypothetically applying deltas; no state change."""
        sum_plogp = self.sum_plogp
        lex = self.lex_cost
        total = self.total
        for morph, d in deltas.items():
            old = self.counts.get(morph, 0)
            new = old + d
            sum_plogp += _plogp(new) - _plogp(old)
            if old == 0 and new > 0:
                lex += self.codelength(morph)
            elif old > 0 and new == 0:
                lex -= self.codelength(morph)
            total += d
        return lex + _plogp(total) - sum_plogp

    def _greedy_split(self, form: str, count: int) -> list[str]:
        """Choose keep-whole vs the best binary split, recursing on the
        halves; the chosen configuration is committed to the counts.
        Precondition: `count` occurrences of `form` are currently
        uncounted."""
        keep_cost = self.cost_if({form: count})
        best_cost = None
        best_i = 0
        for i in range(1, len(form)):
            prefix, suffix = form[:i], form[i:]
            deltas = {prefix: count}
            deltas[suffix] = deltas.get(suffix, 0) + count
            cand = self.cost_if(deltas)
            if best_cost is None or cand < best_cost:
                best_cost = cand
                best_i = i
        if best_i and best_cost < keep_cost:
            prefix, suffix = form[:best_i], form[best_i:]
            deltas = {prefix: count}
            deltas[suffix] = deltas.get(suffix, 0) + count
            self.apply(deltas)
            self.apply({prefix: -count})
            left = self._greedy_split(prefix, count)
            self.apply({suffix: -count})
            right = self._greedy_split(suffix, count)
            return left + right
        self.apply({form: count})
        return [form]

    def optimize_word(self, word: str, count: int, analyses: dict[str, list[str]]) -> None:
        old_analysis = analyses[word]
        old_cost = self.cost()
        snapshot = (self.sum_plogp, self.lex_cost, self.total)
        touched: dict[str, int] = {}
        self._touched = touched
        try:
            removal = Counter()
            for morph in old_analysis:
                removal[morph] -= count
            self.apply(removal)
            segments = self._greedy_split(word, count)
        finally:
            self._touched = None
        if self.cost() < old_cost:
            analyses[word] = segments
        else:
            # Bit-exact revert keeps the epoch cost sequence non-increasing.
            self.sum_plogp, self.lex_cost, self.total = snapshot
            for morph, old in touched.items():
                if old == 0:
                    self.counts.pop(morph, None)
                else:
                    self.counts[morph] = old


def train(words: Iterable[tuple[str, int]], config: TrainConfig | None = None) -> SegModel:
    """Batch-train a segmentation model on frequency-weighted word types.

    Every type starts unsplit. Each epoch revisits all types in a
    seed-determined random order and greedily re-segments them; training
    stops once an epoch's relative cost reduction falls below the
    configured threshold, or at max_epochs.
    """
    if config is None:
        config = TrainConfig()
    freqs: Counter = Counter()
    for word, count in words:
        if not word or any(ch.isspace() for ch in word):
            raise InputError(f"invalid word {word!r}: must be non-empty and whitespace-free")
        if count < 1:
            raise InputError(f"invalid count {count} for word {word!r}")
        freqs[word] += count
    if not freqs:
        raise InputError("cannot train on an empty word list")

    char_costs, end_cost = _estimate_char_costs(freqs)
    trainer = _Trainer(char_costs, end_cost)
    analyses = {word: [word] for word in freqs}
    for word, count in freqs.items():
        trainer.apply({word: count})
    initial_cost = trainer.cost()

    def as_model() -> SegModel:
        return SegModel(
            lexicon=dict(sorted(trainer.counts.items())),
            total_tokens=trainer.total,
            char_costs=char_costs,
            end_cost=end_cost,
            analyses={w: list(a) for w, a in analyses.items()},
            viterbi_penalty=config.unseen_morph_penalty,
        )

    rng = SplitMix64(config.seed)
    order = list(freqs.items())
    history: list[tuple[float, float]] = []
    previous = initial_cost
    for _ in range(config.max_epochs):
        rng.shuffle(order)
        for word, count in order:
            trainer.optimize_word(word, count, analyses)
        maintained = trainer.cost()
        history.append((maintained, model_cost(as_model())))
        reduction = (previous - maintained) / previous if previous > 0 else 0.0
        if reduction < config.convergence_threshold:
            break
        previous = maintained

    model = as_model()
    model.epoch_costs = history
    model.initial_cost = initial_cost
    return model


def segment_viterbi(word: str, model: SegModel, unseen_penalty: float | None = None) -> list[str]:
    """Minimum-cost segmentation of a word under the trained morph code.

    Substrings absent from the lexicon may still be used, at a penalty of
    unseen_penalty bits per character. Ties are broken by fewer morphs,
    then by preferring the longest morph from the left.
    """
    if not word:
        raise InputError("cannot segment an empty word")
    penalty = model.viterbi_penalty if unseen_penalty is None else unseen_penalty
    log_total = math.log2(model.total_tokens) if model.total_tokens else 0.0
    n = len(word)

    def morph_cost(morph: str) -> float:
        count = model.lexicon.get(morph)
        if count:
            return log_total - math.log2(count)
        return penalty * len(morph)

    # best[i] solves the suffix word[i:]; working backwards makes the
    # "longest first morph" tie-break a local comparison.
    best: list[tuple[float, int]] = [(0.0, 0)] * (n + 1)
    choice = [n] * (n + 1)
    for i in range(n - 1, -1, -1):
        best_key = None
        best_j = i + 1
        for j in range(i + 1, n + 1):
            tail_cost, tail_morphs = best[j]
            key = (morph_cost(word[i:j]) + tail_cost, tail_morphs + 1, i - j)
            if best_key is None or key < best_key:
                best_key = key
                best_j = j
        best[i] = (best_key[0], best_key[1])
        choice[i] = best_j

    segments = []
    i = 0
    while i < n:
        j = choice[i]
        segments.append(word[i:j])
        i = j
    return segments


def save_model(model: SegModel, path) -> None:
    """Write the model deterministically: lexicon then analyses, each
    sorted by byte order, so identical models save byte-identically."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{MODEL_HEADER_PREFIX} total={model.total_tokens}\n")
        for morph in sorted(model.lexicon):
            fh.write(f"{model.lexicon[morph]}\t{morph}\n")
        fh.write(ANALYSES_HEADER + "\n")
        for word in sorted(model.analyses):
            fh.write(f"{word}\t{' '.join(model.analyses[word])}\n")


def load_model(path) -> SegModel:
    lexicon: dict[str, int] = {}
    analyses: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split()
        if len(parts) != 3 or " ".join(parts[:2]) != MODEL_HEADER_PREFIX or not parts[2].startswith("total="):
            raise ParseError(f"expected header {MODEL_HEADER_PREFIX!r} total=<N>", path=str(path), line=1)
        try:
            total = int(parts[2].split("=", 1)[1])
        except ValueError:
            raise ParseError("bad total in header", path=str(path), line=1)
        in_analyses = False
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            if line == ANALYSES_HEADER:
                in_analyses = True
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError("expected two tab-separated fields", path=str(path), line=lineno)
            if not in_analyses:
                count_text, morph = fields
                try:
                    count = int(count_text)
                except ValueError:
                    raise ParseError(f"bad count {count_text!r}", path=str(path), line=lineno)
                if count < 1 or not morph:
                    raise ParseError("lexicon entries need a positive count and a morph", path=str(path), line=lineno)
                if morph in lexicon:
                    raise ParseError(f"duplicate morph {morph!r}", path=str(path), line=lineno)
                lexicon[morph] = count
            else:
                word, morphs_text = fields
                morphs = morphs_text.split(" ")
                if "".join(morphs) != word:
                    raise ParseError(f"analysis does not concatenate to {word!r}", path=str(path), line=lineno)
                for m in morphs:
                    if m not in lexicon:
                        raise ParseError(f"analysis uses unknown morph {m!r}", path=str(path), line=lineno)
                analyses[word] = morphs
    if not lexicon:
        raise ParseError("model has an empty lexicon", path=str(path))
    if total != sum(lexicon.values()):
        raise ParseError(f"header total={total} does not match lexicon sum {sum(lexicon.values())}", path=str(path))
    # Character costs are a pure function of the word-type list, so they
    # are recomputed rather than stored.
    char_costs, end_cost = _estimate_char_costs(analyses if analyses else lexicon)
    return SegModel(
        lexicon=lexicon,
        total_tokens=total,
        char_costs=char_costs,
        end_cost=end_cost,
        analyses=analyses,
    )
