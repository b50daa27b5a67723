"""End-to-end experiment runner: split, tokenize under a strategy, build
vocabularies, and emit datasets plus a manifest of digests and corpus
statistics.

Learned artifacts (merge tables, segmentation models, vocabularies) come
from the train split only, so dev and test never shape the tokenizer
they are evaluated with.
"""

from __future__ import annotations

import configparser
import hashlib
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from . import bleu as bleu_mod
from . import bpe as bpe_mod
from . import corpus as corpus_mod
from . import mdl as mdl_mod
from . import rules as rules_mod
from . import word_tok
from .errors import ComparisonError, DataError, ParseError, StageError

STRATEGIES = ("unparsed", "rule-based", "mdl", "bpe")
MANIFEST_HEADER = "#manifest v1 digest=sha256"
MANIFEST_NAME = "manifest.txt"
SPLITS = ("train", "dev", "test")


@dataclass(frozen=True)
class ExperimentConfig:
    strategy: str
    source_path: str
    target_path: str
    output_dir: str
    dev_count: int
    test_count: int
    seed: int = 0
    vocab_limit: int = 30000
    merge_ops: int | None = None
    rules_path: str | None = None
    name: str = ""

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise DataError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if (self.merge_ops is not None) != (self.strategy == "bpe"):
            raise DataError("merge_ops must be given exactly when strategy is 'bpe'")
        if self.strategy == "rule-based" and not self.rules_path:
            raise DataError("rule-based strategy needs rules_path")
        if self.vocab_limit < 1:
            raise DataError("vocab_limit must be positive")
        if not self.name:
            label = self.strategy
            if self.merge_ops is not None:
                label += f"-{self.merge_ops}"
            object.__setattr__(self, "name", label)


@dataclass
class RunManifest:
    config: ExperimentConfig
    base_dir: str
    artifacts: dict[str, str] = field(default_factory=dict)  # key -> relative path
    digests: dict[str, str] = field(default_factory=dict)  # key -> sha256 hex
    stats: dict[str, str] = field(default_factory=dict)

    def path_of(self, key: str) -> Path:
        return Path(self.base_dir) / self.artifacts[key]


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def _tokenize_sides(corpus):
    src = word_tok.tokenize_lines(corpus.source_lines(), word_tok.TokMode.APOSTROPHE_PRESERVING)
    tgt = word_tok.tokenize_lines(corpus.target_lines(), word_tok.TokMode.ENGLISH)
    return src, tgt


def _mark_continuations(morphs: list[str]) -> list[str]:
    return [m + bpe_mod.CONT_MARKER for m in morphs[:-1]] + morphs[-1:]


def _segment_with_model(lines, model: mdl_mod.SegModel) -> list[list[str]]:
    cache: dict[str, list[str]] = {}
    out = []
    for tokens in lines:
        row = []
        for tok in tokens:
            seg = cache.get(tok)
            if seg is None:
                seg = _mark_continuations(mdl_mod.segment_viterbi(tok, model))
                cache[tok] = seg
            row.extend(seg)
        out.append(row)
    return out


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def run_experiment(config: ExperimentConfig) -> RunManifest:
    """Run one experiment; returns its manifest. The experiment directory
    is removed again if any stage fails."""
    exp_dir = Path(config.output_dir) / config.name
    exp_dir.mkdir(parents=True, exist_ok=True)
    try:
        manifest = _run_experiment_inner(config, exp_dir)
    except Exception:
        shutil.rmtree(exp_dir, ignore_errors=True)
        raise
    return manifest


def _run_experiment_inner(config: ExperimentConfig, exp_dir: Path) -> RunManifest:
    manifest = RunManifest(config=config, base_dir=str(exp_dir))

    def record(key: str, filename: str, content=None):
        path = exp_dir / filename
        if content is not None:
            corpus_mod.write_lines(path, content)
        manifest.artifacts[key] = filename
        manifest.digests[key] = file_digest(path)

    full = _stage("load", corpus_mod.load_parallel, config.source_path, config.target_path)
    spec = corpus_mod.SplitSpec(config.dev_count, config.test_count, config.seed)
    parts = dict(zip(SPLITS, _stage("split", corpus_mod.split, full, spec)))

    tokenized = {name: _stage("tokenize", _tokenize_sides, part) for name, part in parts.items()}

    train_src = tokenized["train"][0]
    if config.strategy == "unparsed":
        segmented = {name: src for name, (src, _) in tokenized.items()}
    elif config.strategy == "rule-based":
        ruleset = _stage("learn", rules_mod.load_rules, config.rules_path)
        segmented = {
            name: _stage("segment", rules_mod.tokenize_corpus, src, ruleset)
            for name, (src, _) in tokenized.items()
        }
    elif config.strategy == "mdl":
        record("learn_input.src", "learn_input.src", train_src)
        model = _stage(
            "learn",
            mdl_mod.train,
            bpe_mod.word_frequencies(train_src),
            mdl_mod.TrainConfig(seed=config.seed),
        )
        _stage("learn", mdl_mod.save_model, model, exp_dir / "segmodel.txt")
        record("model", "segmodel.txt")
        segmented = {
            name: _stage("segment", _segment_with_model, src, model)
            for name, (src, _) in tokenized.items()
        }
    else:  # bpe
        record("learn_input.src", "learn_input.src", train_src)
        table = _stage("learn", bpe_mod.learn_merges, bpe_mod.word_frequencies(train_src), config.merge_ops)
        _stage("learn", bpe_mod.save_merges, table, exp_dir / "merges.txt")
        record("merges", "merges.txt")
        segmented = {
            name: _stage("segment", bpe_mod.segment_corpus, src, table)
            for name, (src, _) in tokenized.items()
        }

    src_vocab = _stage("vocab", corpus_mod.build_vocab, segmented["train"], config.vocab_limit)
    tgt_vocab = _stage("vocab", corpus_mod.build_vocab, tokenized["train"][1], config.vocab_limit)
    _stage("vocab", corpus_mod.save_vocab, src_vocab, exp_dir / "vocab.src")
    _stage("vocab", corpus_mod.save_vocab, tgt_vocab, exp_dir / "vocab.tgt")
    record("vocab.src", "vocab.src")
    record("vocab.tgt", "vocab.tgt")

    stats = manifest.stats
    stats["src_vocab_size"] = str(len(src_vocab))
    stats["tgt_vocab_size"] = str(len(tgt_vocab))
    for name in SPLITS:
        src_lines = segmented[name]
        tgt_lines = tokenized[name][1]
        out_src = [corpus_mod.apply_vocab(toks, src_vocab) for toks in src_lines]
        out_tgt = [corpus_mod.apply_vocab(toks, tgt_vocab) for toks in tgt_lines]
        record(f"{name}.src", f"{name}.src", out_src)
        record(f"{name}.tgt", f"{name}.tgt", out_tgt)
        n_lines = len(src_lines)
        src_tokens = sum(len(t) for t in src_lines)
        tgt_tokens = sum(len(t) for t in tgt_lines)
        stats[f"{name}.lines"] = str(n_lines)
        stats[f"{name}.src_tokens"] = str(src_tokens)
        stats[f"{name}.tgt_tokens"] = str(tgt_tokens)
        stats[f"{name}.src_types"] = str(len({t for toks in src_lines for t in toks}))
        stats[f"{name}.tgt_types"] = str(len({t for toks in tgt_lines for t in toks}))
        stats[f"{name}.src_tokens_per_line"] = f"{src_tokens / n_lines:.3f}" if n_lines else "0.000"
        stats[f"{name}.src_oov_rate"] = f"{corpus_mod.oov_rate(src_lines, src_vocab):.6f}"
        stats[f"{name}.tgt_oov_rate"] = f"{corpus_mod.oov_rate(tgt_lines, tgt_vocab):.6f}"

    save_manifest(manifest, exp_dir / MANIFEST_NAME)
    return manifest


def render_manifest(manifest: RunManifest) -> str:
    cfg = manifest.config
    lines = [MANIFEST_HEADER]
    lines.append(f"name: {cfg.name}")
    lines.append(f"strategy: {cfg.strategy}")
    lines.append(f"merge_ops: {cfg.merge_ops if cfg.merge_ops is not None else '-'}")
    lines.append(f"vocab_limit: {cfg.vocab_limit}")
    lines.append(f"seed: {cfg.seed}")
    lines.append(f"dev_count: {cfg.dev_count}")
    lines.append(f"test_count: {cfg.test_count}")
    lines.append(f"source: {cfg.source_path}")
    lines.append(f"target: {cfg.target_path}")
    lines.append(f"rules: {cfg.rules_path if cfg.rules_path else '-'}")
    for key in sorted(manifest.artifacts):
        lines.append(f"artifact.{key}: {manifest.artifacts[key]}")
    for key in sorted(manifest.digests):
        lines.append(f"sha256.{key}: {manifest.digests[key]}")
    for key in sorted(manifest.stats):
        lines.append(f"stat.{key}: {manifest.stats[key]}")
    return "\n".join(lines) + "\n"


def save_manifest(manifest: RunManifest, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_manifest(manifest))


def load_manifest(path) -> RunManifest:
    path = Path(path)
    fields: dict[str, str] = {}
    artifacts: dict[str, str] = {}
    digests: dict[str, str] = {}
    stats: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != MANIFEST_HEADER:
            raise ParseError(f"expected header {MANIFEST_HEADER!r}", path=str(path), line=1)
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            if ": " not in line:
                raise ParseError("expected 'key: value'", path=str(path), line=lineno)
            key, value = line.split(": ", 1)
            if key.startswith("artifact."):
                artifacts[key[len("artifact.") :]] = value
            elif key.startswith("sha256."):
                digests[key[len("sha256.") :]] = value
            elif key.startswith("stat."):
                stats[key[len("stat.") :]] = value
            else:
                fields[key] = value
    try:
        config = ExperimentConfig(
            strategy=fields["strategy"],
            source_path=fields["source"],
            target_path=fields["target"],
            output_dir=str(path.parent.parent),
            dev_count=int(fields["dev_count"]),
            test_count=int(fields["test_count"]),
            seed=int(fields["seed"]),
            vocab_limit=int(fields["vocab_limit"]),
            merge_ops=None if fields["merge_ops"] == "-" else int(fields["merge_ops"]),
            rules_path=None if fields["rules"] == "-" else fields["rules"],
            name=fields["name"],
        )
    except KeyError as exc:
        raise ParseError(f"manifest is missing key {exc}", path=str(path))
    return RunManifest(config=config, base_dir=str(path.parent), artifacts=artifacts, digests=digests, stats=stats)


def _format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    out = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    out.append("  ".join("-" * w for w in widths))
    for row in rows:
        out.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(out) + "\n"


def compare_runs(manifests: list[RunManifest], hyp_files: dict[tuple[str, str], str] | None = None) -> str:
    """Tabulate corpus statistics across runs; adds a BLEU column per
    split for runs with a supplied hypothesis file."""
    if len(manifests) < 2:
        raise ComparisonError("need at least two runs to compare")
    for split in SPLITS:
        sizes = {m.stats.get(f"{split}.lines") for m in manifests}
        if len(sizes) != 1:
            raise ComparisonError(f"runs disagree on {split} size: {sorted(sizes)}")
    hyp_files = hyp_files or {}
    bleu_splits = sorted({split for (_, split) in hyp_files})

    headers = ["name", "strategy", "merges", "src_vocab", "tgt_vocab", "src_tok/line", "dev_oov", "test_oov"]
    headers += [f"bleu_{split}" for split in bleu_splits]
    rows = []
    for m in manifests:
        cfg = m.config
        row = [
            cfg.name,
            cfg.strategy,
            str(cfg.merge_ops) if cfg.merge_ops is not None else "-",
            m.stats["src_vocab_size"],
            m.stats["tgt_vocab_size"],
            m.stats["train.src_tokens_per_line"],
            m.stats["dev.src_oov_rate"],
            m.stats["test.src_oov_rate"],
        ]
        for split in bleu_splits:
            hyp_path = hyp_files.get((cfg.name, split))
            if hyp_path is None:
                row.append("-")
                continue
            hyp = corpus_mod.read_token_lines(hyp_path)
            ref = corpus_mod.read_token_lines(m.path_of(f"{split}.tgt"))
            if len(hyp) != len(ref):
                raise ComparisonError(
                    f"hypothesis for {cfg.name}/{split} has {len(hyp)} lines, reference has {len(ref)}"
                )
            report = bleu_mod.corpus_bleu(list(zip(hyp, ref)))
            row.append(f"{100.0 * report.score:.2f}")
        rows.append(row)
    return _format_table(headers, rows)


def read_experiment_configs(path, overrides: dict | None = None) -> list[ExperimentConfig]:
    """Read experiment sections from a key = value config file.

    Sections named `[experiment]` or `[experiment <name>]` each define a
    run; `[defaults]` supplies shared keys. Values in `overrides` (from
    CLI flags) win over the file.
    """
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except configparser.Error as exc:
        raise ParseError(str(exc), path=str(path))
    defaults = dict(parser["defaults"]) if parser.has_section("defaults") else {}
    configs = []
    for section in parser.sections():
        if section != "experiment" and not section.startswith("experiment "):
            if section == "defaults":
                continue
            raise ParseError(f"unknown section [{section}]", path=str(path))
        merged = dict(defaults)
        merged.update(dict(parser[section]))
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
        name = section[len("experiment") :].strip()
        if name and "name" not in merged:
            merged["name"] = name
        configs.append(config_from_mapping(merged))
    if not configs:
        raise ParseError("no [experiment] sections found", path=str(path))
    return configs


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    def need(key):
        if key not in mapping or mapping[key] in (None, ""):
            raise DataError(f"experiment config is missing {key!r}")
        return mapping[key]

    return ExperimentConfig(
        strategy=str(need("strategy")),
        source_path=str(need("source")),
        target_path=str(need("target")),
        output_dir=str(need("output_dir")),
        dev_count=int(need("dev_count")),
        test_count=int(need("test_count")),
        seed=int(mapping.get("seed") or 0),
        vocab_limit=int(mapping.get("vocab_limit") or 30000),
        merge_ops=int(mapping["merge_ops"]) if mapping.get("merge_ops") not in (None, "", "-") else None,
        rules_path=str(mapping["rules"]) if mapping.get("rules") not in (None, "") else None,
        name=str(mapping.get("name") or ""),
    )
