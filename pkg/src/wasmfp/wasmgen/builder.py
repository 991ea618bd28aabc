"""Byte-level wasm module assembly (MVP feature set, no toolchain).

Only the pieces the timing-test modules need: function types, function
imports, one mutable i32 global, function exports, and code bodies built
from a small instruction vocabulary.
"""

from __future__ import annotations

import struct

from . import leb

MAGIC = b"\x00\x61\x73\x6d"
VERSION = b"\x01\x00\x00\x00"

# value types
I32 = 0x7F
I64 = 0x7E
F32 = 0x7D
F64 = 0x7C

# section ids
SEC_TYPE = 1
SEC_IMPORT = 2
SEC_FUNCTION = 3
SEC_GLOBAL = 6
SEC_EXPORT = 7
SEC_CODE = 10

# straight-line opcodes
END = b"\x0b"
ELSE = b"\x05"
LOOP_VOID = b"\x03\x40"
IF_I32 = b"\x04\x7f"
I32_ADD = b"\x6a"
I32_NE = b"\x47"
I32_LT_S = b"\x48"


def local_get(index: int) -> bytes:
    return b"\x20" + leb.encode_u(index)


def local_set(index: int) -> bytes:
    return b"\x21" + leb.encode_u(index)


def global_get(index: int) -> bytes:
    return b"\x23" + leb.encode_u(index)


def global_set(index: int) -> bytes:
    return b"\x24" + leb.encode_u(index)


def i32_const(value: int) -> bytes:
    return b"\x41" + leb.encode_s(value)


def f64_const(value: float) -> bytes:
    return b"\x44" + struct.pack("<d", value)


def call(func_index: int) -> bytes:
    return b"\x10" + leb.encode_u(func_index)


def br_if(depth: int) -> bytes:
    return b"\x0d" + leb.encode_u(depth)


def _name(text: str) -> bytes:
    encoded = text.encode("utf-8")
    return leb.encode_u(len(encoded)) + encoded


def _vec(items: list[bytes]) -> bytes:
    return leb.encode_u(len(items)) + b"".join(items)


def _section(section_id: int, payload: bytes) -> bytes:
    return bytes([section_id]) + leb.encode_u(len(payload)) + payload


class ModuleBuilder:
    """Accumulates types, imports, functions, globals and exports, then
    serializes them into a binary module with sections in id order."""

    def __init__(self) -> None:
        self._types: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        self._imports: list[tuple[str, str, int]] = []
        self._func_types: list[int] = []
        self._bodies: list[bytes] = []
        self._globals: list[tuple[int, bool, bytes]] = []
        self._exports: list[tuple[str, int]] = []

    def type_index(self, params: tuple[int, ...], results: tuple[int, ...]) -> int:
        sig = (tuple(params), tuple(results))
        if sig in self._types:
            return self._types.index(sig)
        self._types.append(sig)
        return len(self._types) - 1

    def import_function(self, module: str, name: str, type_index: int) -> int:
        if self._func_types:
            raise ValueError("imports must be declared before local functions")
        self._imports.append((module, name, type_index))
        return len(self._imports) - 1

    def add_function(self, type_index: int,
                     locals_: list[tuple[int, int]],
                     body: bytes) -> int:
        """Add a local function; `body` excludes the trailing end opcode.

        `locals_` is a list of (count, valtype) runs, wasm-style.
        Returns the function index (import space comes first).
        """
        self._func_types.append(type_index)
        locals_vec = _vec([leb.encode_u(count) + bytes([vt])
                           for count, vt in locals_])
        self._bodies.append(locals_vec + body + END)
        return len(self._imports) + len(self._func_types) - 1

    def add_global_i32(self, init: int, mutable: bool = True) -> int:
        self._globals.append((I32, mutable, i32_const(init)))
        return len(self._globals) - 1

    def export_function(self, name: str, func_index: int) -> None:
        self._exports.append((name, func_index))

    def build(self) -> bytes:
        out = bytearray(MAGIC + VERSION)
        if self._types:
            entries = [b"\x60" + _vec([bytes([p]) for p in params])
                       + _vec([bytes([r]) for r in results])
                       for params, results in self._types]
            out += _section(SEC_TYPE, _vec(entries))
        if self._imports:
            entries = [_name(mod) + _name(field) + b"\x00" + leb.encode_u(ti)
                       for mod, field, ti in self._imports]
            out += _section(SEC_IMPORT, _vec(entries))
        if self._func_types:
            out += _section(SEC_FUNCTION,
                            _vec([leb.encode_u(ti) for ti in self._func_types]))
        if self._globals:
            entries = [bytes([vt, 0x01 if mut else 0x00]) + init + END
                       for vt, mut, init in self._globals]
            out += _section(SEC_GLOBAL, _vec(entries))
        if self._exports:
            entries = [_name(name) + b"\x00" + leb.encode_u(idx)
                       for name, idx in self._exports]
            out += _section(SEC_EXPORT, _vec(entries))
        if self._bodies:
            entries = [leb.encode_u(len(body)) + body for body in self._bodies]
            out += _section(SEC_CODE, _vec(entries))
        return bytes(out)
