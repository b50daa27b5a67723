"""Rule-based morphological parser for agglutinative words.

A grammar is a base lexicon plus an ordered suffix inventory. Every
suffix carries a morphophonological join operator describing what it
does to the stem boundary on attachment. Analysis inverts generation by
depth-first suffix peeling; words no derivation explains pass through
unresolved, as a single token.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .errors import GenerationError, ParseError


class Join(Enum):
    PLAIN = "plain"
    DROP_FINAL_CONSONANT = "drop-final-consonant"
    DROP_FINAL_E = "drop-final-e"


OP_SYMBOLS = {"+": Join.PLAIN, "-": Join.DROP_FINAL_CONSONANT, "~": Join.DROP_FINAL_E}


class SuffixRule(NamedTuple):
    form: str
    join: Join
    gloss: str
    terminal: bool


@dataclass(frozen=True)
class RuleSet:
    bases: dict[str, str]  # base form -> gloss
    suffixes: tuple[SuffixRule, ...]
    consonants: frozenset[str]
    max_suffixes: int = 8

    def generate(self, base: str, rules) -> str:
        return generate(base, rules, self.consonants)


@dataclass(frozen=True)
class Analysis:
    morphemes: tuple[tuple[str, str], ...]  # (surface contribution, gloss)
    resolved: bool

    def surface_tokens(self) -> list[str]:
        return [s for s, _ in self.morphemes if s]


def generate(base: str, rules, consonants) -> str:
    """Attach suffix rules left to right, applying each join operator."""
    stem = base
    for rule in rules:
        if rule.join is Join.PLAIN:
            stem = stem + rule.form
        elif rule.join is Join.DROP_FINAL_CONSONANT:
            if not stem or stem[-1] not in consonants:
                raise GenerationError(
                    f"suffix -{rule.form} ({rule.gloss}) drops a final consonant, "
                    f"but stem {stem!r} does not end in one"
                )
            stem = stem[:-1] + rule.form
        elif rule.join is Join.DROP_FINAL_E:
            if not stem.endswith("e"):
                raise GenerationError(
                    f"suffix -{rule.form} ({rule.gloss}) drops a final 'e', "
                    f"but stem {stem!r} does not end in 'e'"
                )
            stem = stem[:-1] + rule.form
        else:  # pragma: no cover - enum is closed
            raise GenerationError(f"unknown join operator {rule.join!r}")
    return stem


def _try_attach(stem: str, rule: SuffixRule, consonants) -> str | None:
    if rule.join is Join.PLAIN:
        return stem + rule.form
    if rule.join is Join.DROP_FINAL_CONSONANT:
        if stem and stem[-1] in consonants:
            return stem[:-1] + rule.form
        return None
    if stem.endswith("e"):
        return stem[:-1] + rule.form
    return None


def _build_analysis(base: str, base_gloss: str, rules) -> Analysis:
    # Surface contributions: a deleting operator eats the final character
    # of the last non-empty contribution so far, so contributions always
    # concatenate to the generated surface form.
    contribs = [base]
    glosses = [base_gloss]
    for rule in rules:
        if rule.join is not Join.PLAIN:
            k = len(contribs) - 1
            while not contribs[k]:
                k -= 1
            contribs[k] = contribs[k][:-1]
        contribs.append(rule.form)
        glosses.append(rule.gloss)
    return Analysis(tuple(zip(contribs, glosses)), resolved=True)


def analyze(word: str, ruleset: RuleSet) -> list[Analysis]:
    """Return every derivation of `word` up to max_suffixes suffixes.

    Results are sorted by fewest morphemes, then by gloss sequence. When
    the grammar explains nothing, a single unresolved analysis holding
    the whole word is returned.
    """
    if not word or any(ch.isspace() for ch in word):
        raise ValueError("word must be non-empty and whitespace-free")
    found: list[tuple[str, tuple[SuffixRule, ...]]] = []
    n = len(word)

    def walk(stem: str, used: tuple[SuffixRule, ...]) -> None:
        if len(stem) > n:
            return
        if stem == word:
            if not used or used[-1].terminal:
                found.append((stem_base, used))
            return  # every operator grows the stem, so no way back
        if len(stem) == n:
            return
        if len(used) == ruleset.max_suffixes:
            return
        # All characters but the boundary one are frozen forever.
        if word[: len(stem) - 1] != stem[:-1]:
            return
        for rule in ruleset.suffixes:
            extended = _try_attach(stem, rule, ruleset.consonants)
            if extended is not None:
                walk(extended, used + (rule,))

    for stem_base in ruleset.bases:
        walk(stem_base, ())

    if not found:
        return [Analysis(((word, ""),), resolved=False)]
    analyses = [_build_analysis(base, ruleset.bases[base], rules) for base, rules in found]
    analyses.sort(
        key=lambda a: (len(a.morphemes), tuple(g for _, g in a.morphemes), tuple(s for s, _ in a.morphemes))
    )
    return analyses


def tokenize_corpus(lines, ruleset: RuleSet) -> list[list[str]]:
    """Replace each word with its best analysis' surface morphemes,
    continuation-marked on all but the last; unresolved words pass
    through unchanged."""
    cache: dict[str, list[str]] = {}
    out = []
    for tokens in lines:
        row = []
        for tok in tokens:
            pieces = cache.get(tok)
            if pieces is None:
                best = analyze(tok, ruleset)[0]
                surfaces = best.surface_tokens()
                pieces = [s + "@@" for s in surfaces[:-1]] + surfaces[-1:]
                cache[tok] = pieces
            row.extend(pieces)
        out.append(row)
    return out


def load_rules(path) -> RuleSet:
    """Parse a grammar file; see the README for the format."""
    bases: dict[str, str] = {}
    suffixes: list[SuffixRule] = []
    consonants: set[str] = set()
    max_suffixes = 8
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#consonants"):
                consonants.update("".join(line[len("#consonants") :].split()))
                continue
            if line.startswith("#max-suffixes"):
                try:
                    max_suffixes = int(line[len("#max-suffixes") :].strip())
                except ValueError:
                    raise ParseError("bad #max-suffixes value", path=str(path), line=lineno)
                if max_suffixes < 1:
                    raise ParseError("#max-suffixes must be positive", path=str(path), line=lineno)
                continue
            if line.startswith("#"):
                continue
            fields = line.split("\t")
            kind = fields[0]
            if kind == "base":
                if len(fields) != 3:
                    raise ParseError("expected base<TAB>form<TAB>gloss", path=str(path), line=lineno)
                _, form, gloss = fields
                if not form or " " in form:
                    raise ParseError("base form must be non-empty and space-free", path=str(path), line=lineno)
                if form in bases:
                    raise ParseError(f"duplicate base {form!r}", path=str(path), line=lineno)
                bases[form] = gloss
            elif kind == "suffix":
                if len(fields) != 5:
                    raise ParseError(
                        "expected suffix<TAB>form<TAB>op<TAB>terminal<TAB>gloss", path=str(path), line=lineno
                    )
                _, form, op, terminal, gloss = fields
                if not form or " " in form:
                    raise ParseError("suffix form must be non-empty and space-free", path=str(path), line=lineno)
                if op not in OP_SYMBOLS:
                    raise ParseError(f"unknown join operator {op!r} (use + - ~)", path=str(path), line=lineno)
                join = OP_SYMBOLS[op]
                if join is not Join.PLAIN and len(form) < 2:
                    # Deleting operators must still grow the word, or the
                    # analyzer's search would not terminate.
                    raise ParseError(
                        "deleting operators need forms of at least 2 characters", path=str(path), line=lineno
                    )
                if terminal not in ("yes", "no"):
                    raise ParseError(f"terminal must be 'yes' or 'no', got {terminal!r}", path=str(path), line=lineno)
                suffixes.append(SuffixRule(form, join, gloss, terminal == "yes"))
            else:
                raise ParseError(f"unknown entry kind {kind!r}", path=str(path), line=lineno)
    return RuleSet(bases, tuple(suffixes), frozenset(consonants), max_suffixes)


def bundled_grammar_path():
    """Path of the illustrative toy grammar shipped with the package."""
    from importlib.resources import files

    return files("polytok").joinpath("data/toy_grammar.rules")
