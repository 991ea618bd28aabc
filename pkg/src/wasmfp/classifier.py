"""Chromium-engine detection from scripted-setter timing ratios.

Chromium-based engines run accessor properties backed by wasm exports far
slower than other JS/wasm interactions; the two setter tests divided by the
zero-argument getter baseline separate the engines with a pair of fixed
thresholds. Both comparisons are inclusive (>=) and both must hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .wasmgen.catalog import name_to_index

SETTER_1 = "scripted-setter-1"
SETTER_2 = "scripted-setter-2"
GETTER_0 = "scripted-getter-0"

DEFAULT_SS1_THRESHOLD = 3.05
DEFAULT_SS2_THRESHOLD = 3.10

CHROMIUM = "chromium"
OTHER = "other"


@dataclass(frozen=True)
class SetterRatios:
    ss1_over_sg0: float
    ss2_over_sg0: float

    def __post_init__(self) -> None:
        for name, value in (("ss1_over_sg0", self.ss1_over_sg0),
                            ("ss2_over_sg0", self.ss2_over_sg0)):
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be finite and positive, got {value}")


@dataclass(frozen=True)
class ClassifierConfig:
    ss1_threshold: float = DEFAULT_SS1_THRESHOLD
    ss2_threshold: float = DEFAULT_SS2_THRESHOLD

    def __post_init__(self) -> None:
        if self.ss1_threshold <= 0 or self.ss2_threshold <= 0:
            raise ValueError("thresholds must be positive")


@dataclass(frozen=True)
class ChromiumVerdict:
    ratios: SetterRatios
    config: ClassifierConfig
    is_chromium: bool

    def to_dict(self) -> dict:
        return {
            "ratios": {
                "ss1_over_sg0": self.ratios.ss1_over_sg0,
                "ss2_over_sg0": self.ratios.ss2_over_sg0,
            },
            "config": {
                "ss1_threshold": self.config.ss1_threshold,
                "ss2_threshold": self.config.ss2_threshold,
            },
            "is_chromium": self.is_chromium,
        }


def compute_ratios(fp, test_index_map: dict[str, int] | None = None) -> SetterRatios:
    """Setter/getter ratios from a full timing vector.

    `test_index_map` maps test names to vector positions; defaults to the
    catalog order. A non-positive or missing getter baseline signals a
    corrupted probe run and raises ValueError.
    """
    index = test_index_map if test_index_map is not None else name_to_index()
    values = list(fp)
    try:
        ss1 = float(values[index[SETTER_1]])
        ss2 = float(values[index[SETTER_2]])
        sg0 = float(values[index[GETTER_0]])
    except (KeyError, IndexError) as exc:
        raise ValueError(f"fingerprint is missing a required test: {exc}") from None
    for name, value in ((SETTER_1, ss1), (SETTER_2, ss2), (GETTER_0, sg0)):
        if not math.isfinite(value):
            raise ValueError(f"{name} timing is not finite: {value}")
    if sg0 <= 0:
        raise ValueError(f"{GETTER_0} timing must be positive, got {sg0}")
    return SetterRatios(ss1_over_sg0=ss1 / sg0, ss2_over_sg0=ss2 / sg0)


def is_chromium(ratios: SetterRatios,
                config: ClassifierConfig | None = None) -> ChromiumVerdict:
    """Both ratios at or above their thresholds => chromium."""
    cfg = config if config is not None else ClassifierConfig()
    decision = (ratios.ss1_over_sg0 >= cfg.ss1_threshold
                and ratios.ss2_over_sg0 >= cfg.ss2_threshold)
    return ChromiumVerdict(ratios=ratios, config=cfg, is_chromium=decision)


def classify_fingerprint(fp, config: ClassifierConfig | None = None,
                         test_index_map: dict[str, int] | None = None) -> ChromiumVerdict:
    """Convenience entry point taking raw per-test timings."""
    return is_chromium(compute_ratios(fp, test_index_map), config)


@dataclass(frozen=True)
class EvaluationResult:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total

    @property
    def false_positive_rate(self) -> float:
        denom = self.fp + self.tn
        return self.fp / denom if denom else 0.0

    @property
    def false_negative_rate(self) -> float:
        denom = self.fn + self.tp
        return self.fn / denom if denom else 0.0

    def to_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn,
            "accuracy": self.accuracy,
            "false_positive_rate": self.false_positive_rate,
        }


def evaluate(labeled: list[tuple[SetterRatios, str]],
             config: ClassifierConfig | None = None) -> EvaluationResult:
    """Confusion counts of the threshold rule over (ratios, label) pairs.

    Labels are 'chromium' (positive class) or anything else (negative).
    """
    if not labeled:
        raise ValueError("dataset is empty")
    cfg = config if config is not None else ClassifierConfig()
    tp = fp = tn = fn = 0
    for ratios, label in labeled:
        predicted = is_chromium(ratios, cfg).is_chromium
        actual = label == CHROMIUM
        if actual and predicted:
            tp += 1
        elif actual:
            fn += 1
        elif predicted:
            fp += 1
        else:
            tn += 1
    return EvaluationResult(tp=tp, fp=fp, tn=tn, fn=fn)


def fit_thresholds(labeled: list[tuple[SetterRatios, str]],
                   method: str = "class-min") -> tuple[ClassifierConfig, dict]:
    """Fit thresholds from labeled ratios and report quality at that choice.

    'class-min' (default) takes the per-dimension minimum over the chromium
    class, so every chromium sample stays at or above the thresholds.
    'grid' searches observed values for the accuracy-maximizing pair.
    """
    chromium = [r for r, lbl in labeled if lbl == CHROMIUM]
    others = [r for r, lbl in labeled if lbl != CHROMIUM]
    if not chromium:
        raise ValueError("no chromium samples in dataset")
    if not others:
        raise ValueError("no non-chromium samples in dataset")

    if method == "class-min":
        cfg = ClassifierConfig(
            ss1_threshold=min(r.ss1_over_sg0 for r in chromium),
            ss2_threshold=min(r.ss2_over_sg0 for r in chromium))
    elif method == "grid":
        cfg = _grid_search(labeled)
    else:
        raise ValueError(f"unknown method {method!r}")

    result = evaluate(labeled, cfg)
    report = {
        "counts": {CHROMIUM: len(chromium), OTHER: len(others)},
        "accuracy": result.accuracy,
        "false_positive_rate": result.false_positive_rate,
        "false_negative_rate": result.false_negative_rate,
        "confusion": {"tp": result.tp, "fp": result.fp,
                      "tn": result.tn, "fn": result.fn},
        "method": method,
    }
    return cfg, report


def label_class(label: dict) -> str:
    """Binary class of a database label: chromium-engine or other."""
    if "class" in label:
        return CHROMIUM if str(label["class"]).lower() == CHROMIUM else OTHER
    browser = str(label.get("browser", "")).lower()
    return CHROMIUM if browser in ("chrome", "edge", "chromium") else OTHER


def labeled_ratios_from_database(db) -> list[tuple[SetterRatios, str]]:
    """Per-column setter ratios and binary class from a fingerprint database."""
    index = {name: i for i, name in enumerate(db.test_names)}
    return [(compute_ratios(db.matrix[:, j], index), label_class(db.labels[j]))
            for j in range(db.m)]


def _grid_search(labeled: list[tuple[SetterRatios, str]]) -> ClassifierConfig:
    ss1_candidates = sorted({r.ss1_over_sg0 for r, _ in labeled})
    ss2_candidates = sorted({r.ss2_over_sg0 for r, _ in labeled})
    best: tuple[float, float, float] | None = None
    for t1 in ss1_candidates:
        for t2 in ss2_candidates:
            cfg = ClassifierConfig(ss1_threshold=t1, ss2_threshold=t2)
            acc = evaluate(labeled, cfg).accuracy
            key = (acc, -t1, -t2)  # prefer lower thresholds on ties
            if best is None or key > best[0]:
                best = (key, t1, t2)
    assert best is not None
    return ClassifierConfig(ss1_threshold=best[1], ss2_threshold=best[2])
