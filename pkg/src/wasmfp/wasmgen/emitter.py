"""Emits the wasm binary module for each timing test.

Each test gets its own minimal module: the interaction pattern under test
lives at the JS/wasm call boundary, so the function bodies stay as small as
the test allows. Emission is deterministic, byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

from .builder import (
    ELSE, END, F64, I32, I32_ADD, I32_LT_S, I32_NE, IF_I32, LOOP_VOID,
    ModuleBuilder, br_if, call, f64_const, global_get, global_set, i32_const,
    local_get, local_set,
)
from .catalog import descriptor


@dataclass(frozen=True)
class WasmModuleBlob:
    """A serialized module plus the export names it declares."""

    test_id: int
    bytes: bytes
    exports: tuple[str, ...]


def _loop_calling_cos() -> bytes:
    # callCosInLoop(iterations: i32, angle: f64) -> f64
    # do-while over: result = cos(angle); i += 1; continue while i < iterations
    b = ModuleBuilder()
    t_cos = b.type_index((F64,), (F64,))
    t_main = b.type_index((I32, F64), (F64,))
    cos = b.import_function("js", "cos", t_cos)
    i, result = 2, 3  # locals after the two params
    body = (
        i32_const(0) + local_set(i)
        + f64_const(0.0) + local_set(result)
        + LOOP_VOID
        + local_get(1) + call(cos) + local_set(result)
        + local_get(i) + i32_const(1) + I32_ADD + local_set(i)
        + local_get(i) + local_get(0) + I32_LT_S + br_if(0)
        + END
        + local_get(result)
    )
    fn = b.add_function(t_main, [(1, I32), (1, F64)], body)
    b.export_function("callCosInLoop", fn)
    return b.build()


def _loop_calling_two_arg_js() -> bytes:
    # callJsInLoop(iterations: i32, a: i32, b: i32) -> i32
    b = ModuleBuilder()
    t_js = b.type_index((I32, I32), (I32,))
    t_main = b.type_index((I32, I32, I32), (I32,))
    two_arg = b.import_function("js", "twoArg", t_js)
    i, acc = 3, 4
    body = (
        i32_const(0) + local_set(i)
        + LOOP_VOID
        + local_get(1) + local_get(2) + call(two_arg) + local_set(acc)
        + local_get(i) + i32_const(1) + I32_ADD + local_set(i)
        + local_get(i) + local_get(0) + I32_LT_S + br_if(0)
        + END
        + local_get(acc)
    )
    fn = b.add_function(t_main, [(2, I32)], body)
    b.export_function("callJsInLoop", fn)
    return b.build()


def _arity_0(export_name: str) -> bytes:
    b = ModuleBuilder()
    fn = b.add_function(b.type_index((), (I32,)), [], i32_const(0))
    b.export_function(export_name, fn)
    return b.build()


def _arity_1(export_name: str) -> bytes:
    b = ModuleBuilder()
    fn = b.add_function(b.type_index((I32,), (I32,)), [], local_get(0))
    b.export_function(export_name, fn)
    return b.build()


def _arity_2_add(export_name: str) -> bytes:
    b = ModuleBuilder()
    fn = b.add_function(b.type_index((I32, I32), (I32,)), [],
                        local_get(0) + local_get(1) + I32_ADD)
    b.export_function(export_name, fn)
    return b.build()


def _global_getter(export_name: str, arity: int) -> bytes:
    b = ModuleBuilder()
    g = b.add_global_i32(0)
    params = (I32,) * arity
    fn = b.add_function(b.type_index(params, (I32,)), [], global_get(g))
    b.export_function(export_name, fn)
    return b.build()


def _global_setter(export_name: str, arity: int) -> bytes:
    b = ModuleBuilder()
    g = b.add_global_i32(0)
    params = (I32,) * arity
    fn = b.add_function(b.type_index(params, ()), [],
                        local_get(0) + global_set(g))
    b.export_function(export_name, fn)
    return b.build()


def _guarded_add(export_name: str) -> bytes:
    # if (a + 1 != 0) return a + b; else return 0
    b = ModuleBuilder()
    body = (
        local_get(0) + i32_const(1) + I32_ADD
        + i32_const(0) + I32_NE
        + IF_I32
        + local_get(0) + local_get(1) + I32_ADD
        + ELSE
        + i32_const(0)
        + END
    )
    fn = b.add_function(b.type_index((I32, I32), (I32,)), [], body)
    b.export_function(export_name, fn)
    return b.build()


def _empty_module() -> bytes:
    # tests that run entirely in JS still fetch a valid (empty) module
    return ModuleBuilder().build()


_BUILDERS = {
    1: _loop_calling_cos,
    2: _loop_calling_two_arg_js,
    3: lambda: _arity_0("known_0"),
    4: lambda: _arity_1("known_1"),
    5: lambda: _arity_2_add("known_2"),
    6: lambda: _arity_2_add("known_2"),
    7: lambda: _arity_2_add("generic_2"),
    8: lambda: _arity_2_add("generic_2"),
    9: lambda: _global_getter("get_global_zero", 0),
    10: lambda: _global_getter("get_global_one", 1),
    11: lambda: _global_setter("set_global_one", 1),
    12: lambda: _global_setter("set_global_two", 2),
    13: lambda: _arity_2_add("apply_target"),
    14: lambda: _arity_2_add("apply_target"),
    15: lambda: _arity_2_add("apply_target"),
    16: lambda: _arity_2_add("apply_target"),
    17: lambda: _arity_2_add("call_target"),
    18: lambda: _arity_2_add("call_target"),
    19: lambda: _guarded_add("if_add"),
    20: _empty_module,
}


def emit_module(test_id: int) -> WasmModuleBlob:
    """Build the wasm binary for one timing test.

    Raises ValueError when test_id is outside 1..20.
    """
    desc = descriptor(test_id)  # validates the range
    data = _BUILDERS[test_id]()
    return WasmModuleBlob(test_id=test_id, bytes=data,
                          exports=desc.required_exports)
