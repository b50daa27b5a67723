"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bleu as bleu_mod
from . import bpe as bpe_mod
from . import corpus as corpus_mod
from . import mdl as mdl_mod
from . import pipeline as pipeline_mod
from . import rules as rules_mod
from . import word_tok
from .errors import AlignmentError, DataError, InternalError, PolytokError


def _read_input_lines(path):
    if path is None:
        return [line.rstrip("\r\n") for line in sys.stdin]
    return corpus_mod._read_lines(path)


def _write_output(path, lines):
    if path is None:
        for line in lines:
            if not isinstance(line, str):
                line = " ".join(line)
            sys.stdout.write(line + "\n")
    else:
        corpus_mod.write_lines(path, lines)


def _cmd_split(args) -> int:
    corpus = corpus_mod.load_parallel(args.source, args.target)
    spec = corpus_mod.SplitSpec(args.dev, args.test, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, part in zip(pipeline_mod.SPLITS, corpus_mod.split(corpus, spec)):
        corpus_mod.write_lines(out / f"{name}.src", part.source_lines())
        corpus_mod.write_lines(out / f"{name}.tgt", part.target_lines())
        print(f"{name}: {len(part)} pairs")
    return 0


def _cmd_tokenize(args) -> int:
    lines = _read_input_lines(args.input)
    tokenized = word_tok.tokenize_lines(lines, args.mode, lowercase=args.lowercase)
    _write_output(args.out, tokenized)
    return 0


def _cmd_bpe_learn(args) -> int:
    lines = corpus_mod.read_token_lines(args.input)
    table = bpe_mod.learn_merges(bpe_mod.word_frequencies(lines), args.merges, min_pair_freq=args.min_pair_freq)
    bpe_mod.save_merges(table, args.out)
    print(f"learned {table.learned} of {table.requested} requested merges -> {args.out}")
    return 0


def _cmd_bpe_apply(args) -> int:
    table = bpe_mod.load_merges(args.table)
    lines = corpus_mod.read_token_lines(args.input)
    _write_output(args.out, bpe_mod.segment_corpus(lines, table))
    return 0


def _cmd_morf_train(args) -> int:
    lines = corpus_mod.read_token_lines(args.input)
    config = mdl_mod.TrainConfig(
        convergence_threshold=args.threshold,
        max_epochs=args.max_epochs,
        seed=args.seed,
        unseen_morph_penalty=args.penalty,
    )
    model = mdl_mod.train(bpe_mod.word_frequencies(lines), config)
    mdl_mod.save_model(model, args.out)
    final = model.epoch_costs[-1][0] if model.epoch_costs else model.initial_cost
    print(
        f"trained {len(model.analyses)} types in {len(model.epoch_costs)} epochs, "
        f"cost {model.initial_cost:.1f} -> {final:.1f} bits -> {args.out}"
    )
    return 0


def _cmd_morf_segment(args) -> int:
    model = mdl_mod.load_model(args.model)
    lines = corpus_mod.read_token_lines(args.input)
    cache: dict[str, list[str]] = {}
    out = []
    for tokens in lines:
        row = []
        for tok in tokens:
            seg = cache.get(tok)
            if seg is None:
                seg = mdl_mod.segment_viterbi(tok, model, unseen_penalty=args.penalty)
                if not args.no_mark:
                    seg = [m + bpe_mod.CONT_MARKER for m in seg[:-1]] + seg[-1:]
                cache[tok] = seg
            row.extend(seg)
        out.append(row)
    _write_output(args.out, out)
    return 0


def _cmd_parse(args) -> int:
    ruleset = rules_mod.load_rules(args.rules)
    lines = corpus_mod.read_token_lines(args.input)
    if not args.emit_glosses:
        _write_output(args.out, rules_mod.tokenize_corpus(lines, ruleset))
        return 0
    cache: dict[str, list[str]] = {}
    out = []
    for tokens in lines:
        row = []
        for tok in tokens:
            pieces = cache.get(tok)
            if pieces is None:
                best = rules_mod.analyze(tok, ruleset)[0]
                if best.resolved:
                    pieces = [f"{surface}|{gloss}" for surface, gloss in best.morphemes if surface]
                else:
                    pieces = [tok]
                cache[tok] = pieces
            row.extend(pieces)
        out.append(row)
    _write_output(args.out, out)
    return 0


def _cmd_vocab_build(args) -> int:
    lines = corpus_mod.read_token_lines(args.input)
    vocab = corpus_mod.build_vocab(lines, args.limit)
    corpus_mod.save_vocab(vocab, args.out)
    print(f"kept {len(vocab)} tokens (limit {args.limit}) -> {args.out}")
    return 0


def _cmd_vocab_apply(args) -> int:
    vocab = corpus_mod.load_vocab(args.vocab)
    lines = corpus_mod.read_token_lines(args.input)
    _write_output(args.out, [corpus_mod.apply_vocab(tokens, vocab) for tokens in lines])
    return 0


def _cmd_bleu(args) -> int:
    hyp = corpus_mod.read_token_lines(args.hyp)
    ref = corpus_mod.read_token_lines(args.ref)
    if len(hyp) != len(ref):
        raise AlignmentError(f"hypothesis has {len(hyp)} lines, reference has {len(ref)}")
    report = bleu_mod.corpus_bleu(list(zip(hyp, ref)), order=args.order)
    print(bleu_mod.format_report(report))
    return 0


def _cmd_run(args) -> int:
    overrides = {
        "strategy": args.strategy,
        "source": args.source,
        "target": args.target,
        "output_dir": args.out_dir,
        "dev_count": args.dev,
        "test_count": args.test,
        "seed": args.seed,
        "vocab_limit": args.vocab_limit,
        "merge_ops": args.merge_ops,
        "rules": args.rules,
        "name": args.name,
    }
    if args.config:
        configs = pipeline_mod.read_experiment_configs(args.config, overrides)
    else:
        configs = [pipeline_mod.config_from_mapping({k: v for k, v in overrides.items() if v is not None})]
    for config in configs:
        manifest = pipeline_mod.run_experiment(config)
        print(Path(manifest.base_dir) / pipeline_mod.MANIFEST_NAME)
    return 0


def _cmd_compare(args) -> int:
    manifests = [pipeline_mod.load_manifest(p) for p in args.manifests]
    hyp_files = {}
    for item in args.hyp or []:
        try:
            key, path = item.split("=", 1)
            run_name, split = key.split(":", 1)
        except ValueError:
            raise DataError(f"bad --hyp value {item!r}; expected NAME:SPLIT=PATH")
        hyp_files[(run_name, split)] = path
    sys.stdout.write(pipeline_mod.compare_runs(manifests, hyp_files))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polytok",
        description="Corpus preprocessing and evaluation toolkit for polysynthetic-language MT",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="split a parallel corpus into train/dev/test")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--dev", type=int, required=True)
    p.add_argument("--test", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=_cmd_split)

    p = sub.add_parser("tokenize", help="word-tokenize text")
    p.add_argument("--mode", choices=[m.value for m in word_tok.TokMode], default="english")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--input")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_tokenize)

    p = sub.add_parser("bpe-learn", help="learn BPE merge operations")
    p.add_argument("--input", required=True)
    p.add_argument("--merges", type=int, required=True)
    p.add_argument("--min-pair-freq", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_bpe_learn)

    p = sub.add_parser("bpe-apply", help="apply a learned merge table")
    p.add_argument("--table", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_bpe_apply)

    p = sub.add_parser("morf-train", help="train the MDL segmentation model")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=0.005)
    p.add_argument("--max-epochs", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--penalty", type=float, default=mdl_mod.DEFAULT_UNSEEN_PENALTY)
    p.set_defaults(fn=_cmd_morf_train)

    p = sub.add_parser("morf-segment", help="segment text with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--penalty", type=float, default=None)
    p.add_argument("--no-mark", action="store_true", help="omit @@ continuation markers")
    p.set_defaults(fn=_cmd_morf_segment)

    p = sub.add_parser("parse", help="rule-based morphological tokenization")
    p.add_argument("--rules", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--emit-glosses", action="store_true")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("vocab", help="build or apply a vocabulary")
    vocab_sub = p.add_subparsers(dest="vocab_command", required=True)
    pb = vocab_sub.add_parser("build")
    pb.add_argument("--input", required=True)
    pb.add_argument("--limit", type=int, required=True)
    pb.add_argument("--out", required=True)
    pb.set_defaults(fn=_cmd_vocab_build)
    pa = vocab_sub.add_parser("apply")
    pa.add_argument("--vocab", required=True)
    pa.add_argument("--input", required=True)
    pa.add_argument("--out")
    pa.set_defaults(fn=_cmd_vocab_apply)

    p = sub.add_parser("bleu", help="score tokenized hypothesis against reference")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--order", type=int, default=4)
    p.set_defaults(fn=_cmd_bleu)

    p = sub.add_parser("run", help="run one experiment or a config-file sweep")
    p.add_argument("--config")
    p.add_argument("--strategy", choices=pipeline_mod.STRATEGIES)
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--out-dir")
    p.add_argument("--dev", type=int)
    p.add_argument("--test", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--vocab-limit", type=int)
    p.add_argument("--merge-ops", type=int)
    p.add_argument("--rules")
    p.add_argument("--name")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("compare", help="tabulate statistics (and BLEU) across runs")
    p.add_argument("manifests", nargs="+")
    p.add_argument("--hyp", action="append", metavar="NAME:SPLIT=PATH")
    p.set_defaults(fn=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.fn(args)
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except PolytokError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
