"""Command-line entry point for the offline workflows.

Machine output is JSON on stdout; diagnostics go to stderr. Exit codes:
0 success, 1 domain error (bad data), 2 usage error. Every option can also
be set through a WASMFP_-prefixed environment variable; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .classifier import (
    ClassifierConfig,
    SetterRatios,
    classify_fingerprint,
    evaluate,
    fit_thresholds,
    is_chromium,
    labeled_ratios_from_database,
)
from .matching import (
    fit_model,
    fit_pca,
    load_database,
    nearest_euclidean,
    nearest_mahalanobis,
    nearest_pca,
    save_database,
)
from .simulate import (
    builtin_profiles,
    profile_from_dict,
    resolve_counts,
    sample_dataset,
)
from .wasmgen import catalog, emit_module, manifest, test_names, validate_module


def _env(name: str) -> str | None:
    return os.environ.get(f"WASMFP_{name}")


def _env_str(name: str, fallback: str | None = None) -> str | None:
    value = _env(name)
    return value if value is not None else fallback


def _env_float(name: str, fallback: float) -> float:
    value = _env(name)
    return float(value) if value is not None else fallback


def _env_int(name: str, fallback: int | None) -> int | None:
    value = _env(name)
    return int(value) if value is not None else fallback


def _emit(doc, pretty: bool) -> None:
    print(json.dumps(doc, indent=2 if pretty else None))


def _load_fingerprint(path: str) -> list[float]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(doc, list):
        return [float(v) for v in doc]
    timings = doc.get("timings_ms")
    if timings is None:
        raise ValueError(f"{path}: expected a 'timings_ms' field or a bare array")
    names = doc.get("test_names")
    if names is not None and list(names) != list(test_names()):
        raise ValueError(f"{path}: test_names do not match the catalog order")
    return [float(v) for v in timings]


def _thresholds(args) -> ClassifierConfig:
    return ClassifierConfig(ss1_threshold=args.ss1, ss2_threshold=args.ss2)


def _add_threshold_opts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ss1", type=float, default=_env_float("SS1", 3.05),
                        help="setter-1/getter-0 ratio threshold")
    parser.add_argument("--ss2", type=float, default=_env_float("SS2", 3.10),
                        help="setter-2/getter-0 ratio threshold")


def _cmd_gen_wasm(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for desc in catalog():
        blob = emit_module(desc.id)
        report = validate_module(blob)
        if not report.ok:
            raise ValueError(f"emitted module {desc.id} failed validation: "
                             f"{report.defects}")
        path = out / f"test-{desc.id:02d}.wasm"
        path.write_bytes(blob.bytes)
        written.append(path.name)
    (out / "manifest.json").write_text(json.dumps({"tests": manifest()}),
                                       encoding="utf-8")
    _emit({"out": str(out), "modules": written, "manifest": "manifest.json"},
          args.pretty)
    return 0


def _cmd_classify(args) -> int:
    config = _thresholds(args)
    if args.ratios is not None:
        parts = [float(p) for p in args.ratios.split(",")]
        if len(parts) != 2:
            raise ValueError("--ratios expects two comma-separated values")
        verdict = is_chromium(SetterRatios(*parts), config)
    elif args.input is not None:
        verdict = classify_fingerprint(_load_fingerprint(args.input), config)
    else:
        raise ValueError("provide --input or --ratios")
    _emit(verdict.to_dict(), args.pretty)
    return 0


def _cmd_fit_thresholds(args) -> int:
    labeled = labeled_ratios_from_database(load_database(args.dataset))
    config, report = fit_thresholds(labeled, method=args.method)
    _emit({"ss1_threshold": config.ss1_threshold,
           "ss2_threshold": config.ss2_threshold,
           "report": report}, args.pretty)
    return 0


def _cmd_evaluate(args) -> int:
    labeled = labeled_ratios_from_database(load_database(args.dataset))
    result = evaluate(labeled, _thresholds(args))
    _emit(result.to_dict(), args.pretty)
    return 0


def _cmd_simulate(args) -> int:
    if args.profiles == "builtin":
        profiles = builtin_profiles()
    else:
        docs = json.loads(Path(args.profiles).read_text(encoding="utf-8"))
        profiles = [profile_from_dict(d) for d in docs]
    spec = [int(p) for p in str(args.per_class).split(",")]
    counts = resolve_counts(profiles, spec)
    db = sample_dataset(profiles, counts, seed=args.seed)
    if args.out:
        save_database(db, args.out)
        _emit({"out": args.out, "columns": db.m, "seed": args.seed}, args.pretty)
    else:
        from .matching import database_to_dict
        _emit(database_to_dict(db), args.pretty)
    return 0


def _cmd_match(args) -> int:
    db = load_database(args.db)
    query = _load_fingerprint(args.query)
    if args.model == "euclidean":
        index, distance = nearest_euclidean(query, db)
    elif args.model == "mahalanobis":
        index, distance = nearest_mahalanobis(query, fit_model(db))
    elif args.model == "pca":
        k = args.pca_k if args.pca_k is not None else min(5, db.n)
        index, distance = nearest_pca(query, fit_model(db, pca_k=k))
    else:  # argparse choices guard this
        raise ValueError(f"unknown model {args.model!r}")
    _emit({"model": args.model, "index": index,
           "label": db.labels[index], "distance": distance}, args.pretty)
    return 0


def _cmd_pca_fit(args) -> int:
    db = load_database(args.db)
    basis = fit_pca(db, args.k)
    doc = {
        "k": basis.k,
        "explained_variance_ratio": basis.explained_variance_ratio.tolist(),
        "mean": basis.mean.tolist(),
        "components": basis.components.tolist(),
    }
    if args.out:
        Path(args.out).write_text(json.dumps(doc), encoding="utf-8")
        _emit({"out": args.out, "k": basis.k,
               "explained_variance_ratio": doc["explained_variance_ratio"]},
              args.pretty)
    else:
        _emit(doc, args.pretty)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        store_path=Path(args.store),
        thresholds=_thresholds(args),
        model_path=Path(args.model) if args.model else None,
        pca_k=args.pca_k,
        harness_path=Path(args.harness) if args.harness else None,
        fsync=args.fsync,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port,
                log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wasmfp",
        description="WebAssembly timing-test fingerprinting toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-wasm", help="write the 20 wasm modules and manifest")
    p.add_argument("--out", default=_env_str("OUT"), required=_env("OUT") is None)
    p.set_defaults(func=_cmd_gen_wasm)

    p = sub.add_parser("classify", help="chromium verdict for one fingerprint")
    p.add_argument("--input", default=_env_str("INPUT"),
                   help="fingerprint JSON with a timings_ms field")
    p.add_argument("--ratios", default=_env_str("RATIOS"),
                   help="precomputed SS1/SG0,SS2/SG0 pair")
    _add_threshold_opts(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("fit-thresholds", help="fit thresholds from labeled data")
    p.add_argument("--dataset", default=_env_str("DATASET"),
                   required=_env("DATASET") is None)
    p.add_argument("--method", choices=("class-min", "grid"),
                   default=_env_str("METHOD", "class-min"))
    p.set_defaults(func=_cmd_fit_thresholds)

    p = sub.add_parser("evaluate", help="confusion matrix on labeled data")
    p.add_argument("--dataset", default=_env_str("DATASET"),
                   required=_env("DATASET") is None)
    _add_threshold_opts(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("simulate", help="sample a synthetic labeled dataset")
    p.add_argument("--profiles", default=_env_str("PROFILES", "builtin"),
                   help="'builtin' or a profiles JSON file")
    p.add_argument("--per-class", default=_env_str("PER_CLASS", "10"),
                   help="count spec: one value, chromium,firefox totals, "
                        "or one value per profile")
    p.add_argument("--seed", type=int, default=_env_int("SEED", 1))
    p.add_argument("--out", default=_env_str("OUT"))
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("match", help="nearest database entry for a fingerprint")
    p.add_argument("--db", default=_env_str("DB"), required=_env("DB") is None)
    p.add_argument("--query", default=_env_str("QUERY"),
                   required=_env("QUERY") is None)
    p.add_argument("--model", choices=("euclidean", "mahalanobis", "pca"),
                   default=_env_str("MODEL_NAME", "euclidean"))
    p.add_argument("--pca-k", type=int, default=_env_int("PCA_K", None))
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("pca-fit", help="fit a PCA basis to a database")
    p.add_argument("--db", default=_env_str("DB"), required=_env("DB") is None)
    p.add_argument("-k", "--k", type=int, default=_env_int("K", 5))
    p.add_argument("--out", default=_env_str("OUT"))
    p.set_defaults(func=_cmd_pca_fit)

    p = sub.add_parser("serve", help="run the collection service")
    p.add_argument("--host", default=_env_str("HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=_env_int("PORT", 8000))
    p.add_argument("--store", default=_env_str("STORE", "fingerprints.jsonl"))
    p.add_argument("--model", default=_env_str("MODEL"),
                   help="fingerprint database JSON to match against")
    p.add_argument("--pca-k", type=int, default=_env_int("PCA_K", None))
    p.add_argument("--harness", default=_env_str("HARNESS"),
                   help="built probe harness bundle to serve at /harness.js")
    p.add_argument("--fsync", action="store_true",
                   default=_env("FSYNC") is not None)
    _add_threshold_opts(p)
    p.set_defaults(func=_cmd_serve)

    for name, sp in sub.choices.items():
        sp.add_argument("--pretty", action="store_true",
                        default=_env("PRETTY") is not None,
                        help="indent JSON output")

    return parser


def dispatch(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
