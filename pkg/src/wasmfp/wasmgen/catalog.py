"""The fixed catalog of the 20 JS/wasm interaction timing tests."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_ITERATIONS = 100_000


@dataclass(frozen=True)
class TimingTestDescriptor:
    """Static definition of one timing test.

    `required_imports` lists (namespace, name, signature) triples the test's
    wasm module imports from JS; `required_exports` are the export names the
    probe harness calls.
    """

    id: int
    name: str
    description: str
    required_exports: tuple[str, ...] = ()
    required_imports: tuple[tuple[str, str, str], ...] = ()
    default_iterations: int = DEFAULT_ITERATIONS


_CATALOG: tuple[TimingTestDescriptor, ...] = (
    TimingTestDescriptor(
        1, "math-builtin",
        "Wasm loop invoking the imported JS cosine builtin once per iteration.",
        required_exports=("callCosInLoop",),
        required_imports=(("js", "cos", "f64->f64"),),
    ),
    TimingTestDescriptor(
        2, "wasm-to-js",
        "Wasm loop invoking an imported two-argument JS function.",
        required_exports=("callJsInLoop",),
        required_imports=(("js", "twoArg", "(i32,i32)->i32"),),
    ),
    TimingTestDescriptor(
        3, "call-known-0",
        "JS loop calling a zero-argument wasm function with zero arguments.",
        required_exports=("known_0",),
    ),
    TimingTestDescriptor(
        4, "call-known-1",
        "JS loop calling a one-argument wasm function with one argument.",
        required_exports=("known_1",),
    ),
    TimingTestDescriptor(
        5, "call-known-2",
        "JS loop calling a two-argument wasm function with two arguments.",
        required_exports=("known_2",),
    ),
    TimingTestDescriptor(
        6, "call-known-2-r",
        "JS loop calling a two-argument wasm function with one argument.",
        required_exports=("known_2",),
    ),
    TimingTestDescriptor(
        7, "call-generic-2",
        "JS loop alternating between a JS function and a wasm function, "
        "two arguments each.",
        required_exports=("generic_2",),
    ),
    TimingTestDescriptor(
        8, "call-generic-2-r",
        "JS loop alternating between a JS function and a wasm function, "
        "one argument short.",
        required_exports=("generic_2",),
    ),
    TimingTestDescriptor(
        9, "scripted-getter-0",
        "Reads an accessor property whose getter is a zero-argument wasm "
        "function.",
        required_exports=("get_global_zero",),
    ),
    TimingTestDescriptor(
        10, "scripted-getter-1",
        "Reads an accessor property whose getter is a one-argument wasm "
        "function.",
        required_exports=("get_global_one",),
    ),
    TimingTestDescriptor(
        11, "scripted-setter-1",
        "Assigns an accessor property whose setter is a one-argument wasm "
        "function.",
        required_exports=("set_global_one",),
    ),
    TimingTestDescriptor(
        12, "scripted-setter-2",
        "Assigns an accessor property whose setter is a two-argument wasm "
        "function.",
        required_exports=("set_global_two",),
    ),
    TimingTestDescriptor(
        13, "F.p.apply-array",
        "Function.prototype.apply on a wasm function with an argument array "
        "of the expected length.",
        required_exports=("apply_target",),
    ),
    TimingTestDescriptor(
        14, "F.p.apply-array-r",
        "Function.prototype.apply on a wasm function with an argument array "
        "one element short.",
        required_exports=("apply_target",),
    ),
    TimingTestDescriptor(
        15, "F.p.apply-args",
        "Function.prototype.apply on a wasm function with the arguments "
        "object, expected length.",
        required_exports=("apply_target",),
    ),
    TimingTestDescriptor(
        16, "F.p.apply-args-r",
        "Function.prototype.apply on a wasm function with the arguments "
        "object, one element short.",
        required_exports=("apply_target",),
    ),
    TimingTestDescriptor(
        17, "F.p.call",
        "Function.prototype.call on a wasm function with the expected "
        "argument count.",
        required_exports=("call_target",),
    ),
    TimingTestDescriptor(
        18, "F.p.call-r",
        "Function.prototype.call on a wasm function with one argument fewer "
        "than expected.",
        required_exports=("call_target",),
    ),
    TimingTestDescriptor(
        19, "if-add-wasm",
        "Wasm function that guards on its first argument plus one and "
        "returns the i32 sum of both arguments.",
        required_exports=("if_add",),
    ),
    TimingTestDescriptor(
        20, "if-add-js",
        "Plain JS function doing the guarded i32 add; no wasm module "
        "involved.",
    ),
)


def catalog() -> tuple[TimingTestDescriptor, ...]:
    """All 20 timing tests, in id order. Stable across calls."""
    return _CATALOG


def descriptor(test_id: int) -> TimingTestDescriptor:
    if not 1 <= test_id <= len(_CATALOG):
        raise ValueError(f"test_id out of range: {test_id} (expected 1..20)")
    return _CATALOG[test_id - 1]


def test_names() -> tuple[str, ...]:
    return tuple(t.name for t in _CATALOG)


def name_to_index() -> dict[str, int]:
    """Map from test name to zero-based vector position."""
    return {t.name: i for i, t in enumerate(_CATALOG)}


def manifest() -> list[dict]:
    """JSON-ready listing of every test: id, name, exports, iterations."""
    return [
        {
            "id": t.id,
            "name": t.name,
            "exports": list(t.required_exports),
            "default_iterations": t.default_iterations,
        }
        for t in _CATALOG
    ]
