"""Command-line entry point: ``rdrkit {pair,merge,binarize,rdr,baseline}``.

Exit status: 0 success, 1 usage error, 2 parse or validation failure,
3 prediction coverage mismatch.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from typing import Iterator, Sequence, TextIO

from .baselines import (
    FeatureSpec,
    OracleConfig,
    OracleMode,
    load_model,
    majority_predict,
    oracle_predict,
    perceptron_predict,
    perceptron_train,
    save_model,
)
from .corpus import (
    CorpusError,
    load_corpus,
    load_inventory,
    load_predictions,
    serialize_corpus,
    serialize_predictions,
)
from .metrics import MACRO_MODES, CoverageError, evaluate_rdr, report_to_json, report_to_table
from .transform import PairedCorpus, binarize, merge_paired, pair_corpus, serialize_binary

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_COVERAGE = 0, 1, 2, 3

log = logging.getLogger("rdrkit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextmanager
def _open_out(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fp:
            yield fp


def cmd_pair(args) -> int:
    inv = load_inventory(args.inventory)
    corpus = load_corpus(args.input, inv)
    paired = pair_corpus(corpus)
    with _open_out(args.output) as fp:
        fp.write(serialize_corpus(paired.paired))
    print(f"{len(paired.paired)} samples", file=sys.stderr)
    return EXIT_OK


def cmd_merge(args) -> int:
    inv = load_inventory(args.inventory)
    merged = merge_paired(pair_corpus(load_corpus(args.input, inv)))
    with _open_out(args.output) as fp:
        fp.write(serialize_corpus(merged))
    print(f"{len(merged)} samples", file=sys.stderr)
    return EXIT_OK


def cmd_binarize(args) -> int:
    inv = load_inventory(args.inventory)
    corpus = load_corpus(args.input, inv)
    samples = binarize(corpus, args.seed, include_undirected=not args.exclude_other)
    with _open_out(args.output) as fp:
        fp.write(serialize_binary(samples))
    print(f"{len(samples)} binary samples", file=sys.stderr)
    return EXIT_OK


def cmd_rdr(args) -> int:
    inv = load_inventory(args.inventory)
    gold_a = load_corpus(args.gold_a, inv)
    if args.gold_b:
        paired = PairedCorpus(gold_a, load_corpus(args.gold_b, inv))
    else:
        paired = pair_corpus(gold_a)
    preds_a = load_predictions(args.pred_a, inv)
    preds_b = load_predictions(args.pred_b, inv)
    report = evaluate_rdr(paired, preds_a, preds_b, macro_mode=args.macro_mode)
    text = report_to_json(report) if args.format == "structured" else report_to_table(report, args.name)
    with _open_out(args.output) as fp:
        fp.write(text)
    return EXIT_OK


def cmd_baseline(args) -> int:
    inv = load_inventory(args.inventory)
    test = load_corpus(args.input, inv)
    kind = args.kind
    if kind in ("oracle-aware", "oracle-blind"):
        if not args.gold_a:
            raise UsageError("oracle baselines need --gold-a")
        mode = OracleMode.DIRECTION_AWARE if kind == "oracle-aware" else OracleMode.DIRECTION_BLIND
        preds = oracle_predict(test, load_corpus(args.gold_a, inv), OracleConfig(mode))
    elif kind == "majority":
        if not args.train:
            raise UsageError("majority baseline needs --train")
        preds = majority_predict(load_corpus(args.train, inv), test)
    else:
        if args.model:
            with open(args.model, encoding="utf-8") as fp:
                model = load_model(fp)
        elif args.train:
            spec = FeatureSpec(positions=not args.no_positions, marker_order=not args.no_marker_order)
            model = perceptron_train(load_corpus(args.train, inv), spec, args.epochs, args.seed)
        else:
            raise UsageError("perceptron baseline needs --train or --model")
        if args.save_model:
            with open(args.save_model, "w", encoding="utf-8", newline="\n") as fp:
                save_model(model, fp)
        preds = perceptron_predict(model, test)
    with _open_out(args.output) as fp:
        fp.write(serialize_predictions(preds))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rdrkit", description="Paired-set construction and direction-aware scoring.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_output=True):
        p.add_argument("--inventory", default="semeval",
                       help="builtin name 'semeval' or a label-inventory file")
        if with_output:
            p.add_argument("--output", "-o", help="output path (default: stdout)")

    p = sub.add_parser("pair", help="write the marker-swapped paired set of a corpus")
    p.add_argument("--input", "-i", required=True)
    common(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("merge", help="write a corpus followed by its paired set")
    p.add_argument("--input", "-i", required=True)
    common(p)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("binarize", help="write one positive and one sampled negative per sample")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--exclude-other", action="store_true",
                   help="never draw the undirected label as a negative")
    common(p)
    p.set_defaults(func=cmd_binarize)

    p = sub.add_parser("rdr", help="score paired predictions")
    p.add_argument("--gold-a", required=True)
    p.add_argument("--gold-b", help="explicit paired gold file; derived from --gold-a when omitted")
    p.add_argument("--pred-a", required=True)
    p.add_argument("--pred-b", required=True)
    p.add_argument("--format", choices=("structured", "table"), default="table")
    p.add_argument("--macro-mode", choices=MACRO_MODES, default="official")
    p.add_argument("--name", help="method name for the table row")
    common(p)
    p.set_defaults(func=cmd_rdr)

    p = sub.add_parser("baseline", help="write predictions from a reference predictor")
    p.add_argument("--kind", required=True,
                   choices=("oracle-aware", "oracle-blind", "majority", "perceptron"))
    p.add_argument("--input", "-i", required=True, help="corpus to predict")
    p.add_argument("--gold-a", help="set A gold (oracle kinds)")
    p.add_argument("--train", help="training corpus (majority, perceptron)")
    p.add_argument("--model", help="load a saved perceptron instead of training")
    p.add_argument("--save-model", help="write the trained perceptron here")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-marker-order", action="store_true")
    p.add_argument("--no-positions", action="store_true")
    common(p)
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rdrkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoverageError as exc:
        print(f"rdrkit: coverage error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except (CorpusError, ValueError) as exc:
        print(f"rdrkit: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"rdrkit: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
