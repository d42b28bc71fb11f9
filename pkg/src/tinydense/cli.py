"""Command-line interface: describe, predict, evaluate, emit, selftest.

Exit codes: 0 success, 1 selftest failure, 2 input/parse/validation error,
3 dimension mismatch, 4 output I/O error.
"""

import argparse
import json
import sys
from dataclasses import replace

from . import codegen, evaluation, network, selftest
from .inference import Batch, forward, predict
from .linalg import ShapeError

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_INPUT = 2
EXIT_DIMENSION = 3
EXIT_IO = 4


def _threshold_value(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must be in [0, 1], got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tinydense",
        description="Dense-network inference and MicroPython deployment toolchain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_arg(p):
        p.add_argument("model", help="model file path, or a built-in name "
                                     f"({', '.join(network.BUILTIN_NAMES)})")

    def add_run_flags(p):
        p.add_argument("--scaling", choices=evaluation.SCALING_MODES, default="none",
                       help="feature scaling computed from the data itself")
        p.add_argument("--mode", choices=("paper-compat", "corrected"), default=None,
                       help="dispatch mode override (default: the model's own mode)")
        p.add_argument("--threshold", type=_threshold_value, default=None,
                       help="decision threshold override, in [0, 1]")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("describe", help="print the model card")
    add_model_arg(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("predict", help="print probability and label per sample")
    add_model_arg(p)
    p.add_argument("data", help="CSV of feature rows (label column optional)")
    add_run_flags(p)

    p = sub.add_parser("evaluate", help="score the model against a labeled CSV")
    add_model_arg(p)
    p.add_argument("data", help="CSV of feature rows with a trailing label column")
    add_run_flags(p)

    p = sub.add_parser("emit", help="write a self-contained MicroPython program")
    add_model_arg(p)
    p.add_argument("--out", required=True, help="output file path")
    p.add_argument("--compat", action="store_true",
                   help="reproduce the historical activation/dispatch source")
    p.add_argument("--include-eval", action="store_true",
                   help="embed the bundled dataset and an accuracy block")

    sub.add_parser("selftest", help="run the embedded invariant suite")
    return parser


def _load_model(ref: str) -> network.NetworkSpec:
    if ref in network.BUILTIN_NAMES:
        return network.builtin(ref)
    try:
        text = open(ref, encoding="utf-8").read()
    except OSError as err:
        raise network.ModelFormatError(f"cannot read model {ref!r}: {err}") from err
    return network.load(text)


def _read_text(path: str) -> str:
    try:
        return open(path, encoding="utf-8").read()
    except OSError as err:
        raise evaluation.DatasetFormatError(f"cannot read data {path!r}: {err}") from err


def _apply_overrides(spec, args) -> network.NetworkSpec:
    if args.mode is not None:
        spec = replace(spec, dispatch_mode=args.mode.replace("-", "_"))
    if args.threshold is not None:
        spec = replace(spec, threshold=args.threshold)
    return spec


def _cmd_describe(args) -> int:
    spec = _load_model(args.model)
    if args.json:
        n_weights = sum(l.weights.rows * l.weights.cols for l in spec.layers)
        n_biases = sum(len(l.biases) for l in spec.layers)
        doc = {
            "name": spec.name,
            "input_dim": spec.input_dim,
            "widths": spec.widths(),
            "activations": [l.activation.kind for l in spec.layers],
            "neurons": sum(l.units for l in spec.layers),
            "parameters": n_weights + n_biases,
            "dispatch_mode": spec.dispatch_mode,
            "threshold": spec.threshold,
            "parameter_bytes": {"binary64": (n_weights + n_biases) * 8,
                                "binary32": (n_weights + n_biases) * 4},
        }
        print(json.dumps(doc, indent=2))
    else:
        print(codegen.emit_model_card(spec), end="")
    return EXIT_OK


def _cmd_predict(args) -> int:
    spec = _apply_overrides(_load_model(args.model), args)
    features = evaluation.load_features_csv(_read_text(args.data))
    scaled, _ = evaluation.scale_features(features, args.scaling)
    batch = Batch(scaled)
    probabilities = forward(spec, batch).row(0) if spec.layers[-1].units == 1 else None
    if probabilities is None:
        raise ShapeError("predict needs a single-output network")
    labels = predict(spec, batch)
    if args.json:
        print(json.dumps({"model": spec.name,
                          "probabilities": probabilities,
                          "labels": labels}, indent=2))
    else:
        for p, label in zip(probabilities, labels):
            print(f"{p!r} {label}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    spec = _apply_overrides(_load_model(args.model), args)
    ds = evaluation.load_csv(_read_text(args.data), name=args.data)
    report = evaluation.evaluate(spec, ds, scaling=args.scaling)
    if args.json:
        print(report.to_json(), end="")
        return EXIT_OK
    cm = report.confusion_matrix
    print(f"Model: {report.model}  (mode={report.dispatch_mode}, "
          f"scaling={report.scaling}, threshold={report.threshold!r})")
    print(f"Samples: {cm.total}  (positive label = {report.positive_label})")
    rows = [
        ("", "Predicted Positive", "Predicted Negative"),
        ("Actual Positive", str(cm.tp), str(cm.fn)),
        ("Actual Negative", str(cm.fp), str(cm.tn)),
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    for r in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    print(f"Accuracy: {report.accuracy * 100:.1f}%")
    return EXIT_OK


def _cmd_emit(args) -> int:
    spec = _load_model(args.model)
    demo_features = demo_labels = None
    if args.include_eval:
        ds = evaluation.bundled_dataset()
        if spec.input_dim != ds.features.cols:
            raise ShapeError(
                f"bundled dataset has {ds.features.cols} features, model "
                f"{spec.name!r} expects {spec.input_dim}"
            )
        demo_features = ds.features.to_rows()
        demo_labels = list(ds.labels)
    text = codegen.emit_micropython(
        spec,
        compat=args.compat,
        include_eval=args.include_eval,
        demo_features=demo_features,
        demo_labels=demo_labels,
    )
    data = text.encode("utf-8")
    try:
        with open(args.out, "wb") as f:
            f.write(data)
    except OSError as err:
        print(f"cannot write {args.out!r}: {err}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(data)} bytes to {args.out}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = selftest.run_selftest()
    failed = [(name, detail) for name, detail in results if detail is not None]
    for name, detail in results:
        print(f"{'FAIL' if detail else 'ok':4s} {name}" + (f": {detail}" if detail else ""))
    if failed:
        print(f"selftest failed: {failed[0][0]}", file=sys.stderr)
        return EXIT_SELFTEST
    return EXIT_OK


_COMMANDS = {
    "describe": _cmd_describe,
    "predict": _cmd_predict,
    "evaluate": _cmd_evaluate,
    "emit": _cmd_emit,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ShapeError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DIMENSION
    except (ValueError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    sys.exit(main())
