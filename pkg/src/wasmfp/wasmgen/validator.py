"""Structural validator for wasm binaries.

Decodes the container format directly from the published binary layout:
preamble, section framing, LEB128 length fields, and the type / import /
function / global / export / code section payloads. It shares no code or
constants with the emitter so the two sides stay independent checks of one
another. Function bodies are not type-checked or executed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

_MAGIC = b"\x00asm"
_VERSION = b"\x01\x00\x00\x00"

_VALTYPES = {0x7F, 0x7E, 0x7D, 0x7C, 0x7B, 0x70, 0x6F}
_MAX_SECTION_ID = 12
_SECTION_NAMES = {
    0: "custom", 1: "type", 2: "import", 3: "function", 4: "table",
    5: "memory", 6: "global", 7: "export", 8: "start", 9: "element",
    10: "code", 11: "data", 12: "datacount",
}
# init-expression opcodes and their immediate kinds
_CONST_OPS = {0x41: "s32", 0x42: "s64", 0x43: "f32", 0x44: "f64", 0x23: "u32"}


class _Truncated(Exception):
    pass


class _Malformed(Exception):
    pass


@dataclass
class ValidationReport:
    """Outcome of structural validation: ok iff no defects were found."""

    defects: list[str] = field(default_factory=list)
    exports: tuple[str, ...] = ()
    sections: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.defects


class _Cursor:
    def __init__(self, data: bytes, base: int = 0):
        self.data = data
        self.pos = 0
        self.base = base  # offset inside the containing stream, for messages

    def at_end(self) -> bool:
        return self.pos >= len(self.data)

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise _Truncated()
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def byte(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        result = 0
        shift = 0
        for i in range(5):
            b = self.byte()
            result |= (b & 0x7F) << shift
            if not b & 0x80:
                if result >> 32:
                    raise _Malformed("LEB128 value exceeds 32 bits")
                return result
            shift += 7
        raise _Malformed("LEB128 length field longer than 5 bytes")

    def name(self) -> str:
        length = self.u32()
        raw = self.take(length)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            raise _Malformed("name is not valid UTF-8")

    def valtype(self) -> int:
        vt = self.byte()
        if vt not in _VALTYPES:
            raise _Malformed(f"bad value type 0x{vt:02x}")
        return vt

    def limits(self) -> None:
        flag = self.byte()
        if flag not in (0x00, 0x01):
            raise _Malformed(f"bad limits flag 0x{flag:02x}")
        self.u32()
        if flag == 0x01:
            self.u32()

    def skip_init_expr(self) -> None:
        op = self.byte()
        kind = _CONST_OPS.get(op)
        if kind is None:
            raise _Malformed(f"unsupported init-expression opcode 0x{op:02x}")
        if kind == "f32":
            self.take(4)
        elif kind == "f64":
            self.take(8)
        elif kind == "s64":
            self._sleb(64)
        elif kind == "s32":
            self._sleb(32)
        else:
            self.u32()
        if self.byte() != 0x0B:
            raise _Malformed("init expression missing end opcode")

    def _sleb(self, bits: int) -> int:
        result = 0
        shift = 0
        limit = (bits + 6) // 7
        for i in range(limit):
            b = self.byte()
            result |= (b & 0x7F) << shift
            shift += 7
            if not b & 0x80:
                if b & 0x40 and shift < bits:
                    result -= 1 << shift
                return result
        raise _Malformed(f"signed LEB128 longer than {limit} bytes")


@dataclass
class _Counts:
    types: int = 0
    imported_funcs: int = 0
    imported_tables: int = 0
    imported_memories: int = 0
    imported_globals: int = 0
    local_funcs: int = 0
    tables: int = 0
    memories: int = 0
    globals_: int = 0
    code_entries: int = 0


def validate_bytes(data: bytes) -> ValidationReport:
    """Decode section structure and report every structural defect found.

    Never raises on garbled input; defects are collected in the report.
    """
    report = ValidationReport()
    cur = _Cursor(bytes(data))

    try:
        magic = cur.take(4)
    except _Truncated:
        report.defects.append("unexpected end while reading magic")
        return report
    if magic != _MAGIC:
        report.defects.append(f"bad magic {magic.hex()}")
        return report
    try:
        version = cur.take(4)
    except _Truncated:
        report.defects.append("unexpected end while reading version")
        return report
    if version != _VERSION:
        report.defects.append(f"unsupported version {version.hex()}")
        return report

    counts = _Counts()
    exports: list[str] = []
    section_ids: list[int] = []
    last_noncustom = 0

    while not cur.at_end():
        section_id = cur.byte()
        try:
            size = cur.u32()
            payload = cur.take(size)
        except _Truncated:
            report.defects.append(
                f"unexpected end in section {section_id} header/payload")
            break
        except _Malformed as exc:
            report.defects.append(str(exc))
            break

        section_ids.append(section_id)
        if section_id > _MAX_SECTION_ID:
            report.defects.append(f"unknown section id {section_id}")
            continue
        if section_id != 0:
            if section_id == last_noncustom:
                report.defects.append(
                    f"duplicate {_SECTION_NAMES[section_id]} section")
                continue
            if section_id < last_noncustom:
                report.defects.append(
                    f"section {_SECTION_NAMES[section_id]} out of order")
                continue
            last_noncustom = section_id

        sub = _Cursor(payload, base=cur.pos - size)
        try:
            _parse_section(section_id, sub, counts, exports, report)
            if section_id != 0 and not sub.at_end():
                report.defects.append(
                    f"section size mismatch in {_SECTION_NAMES[section_id]}: "
                    f"{len(payload) - sub.pos} trailing bytes")
        except _Truncated:
            report.defects.append(
                f"unexpected end inside {_SECTION_NAMES[section_id]} section")
        except _Malformed as exc:
            report.defects.append(
                f"{_SECTION_NAMES[section_id]} section: {exc}")

    if counts.code_entries != counts.local_funcs:
        report.defects.append(
            f"code entries ({counts.code_entries}) do not match declared "
            f"functions ({counts.local_funcs})")

    report.exports = tuple(exports)
    report.sections = tuple(section_ids)
    return report


def _parse_section(section_id: int, cur: _Cursor, counts: _Counts,
                   exports: list[str], report: ValidationReport) -> None:
    if section_id == 0:
        cur.name()  # custom sections: name then free-form bytes
        cur.pos = len(cur.data)
    elif section_id == 1:
        for _ in range(cur.u32()):
            if cur.byte() != 0x60:
                raise _Malformed("type entry does not start with 0x60")
            for _ in range(cur.u32()):
                cur.valtype()
            for _ in range(cur.u32()):
                cur.valtype()
            counts.types += 1
    elif section_id == 2:
        for _ in range(cur.u32()):
            cur.name()
            cur.name()
            kind = cur.byte()
            if kind == 0x00:
                type_idx = cur.u32()
                if type_idx >= counts.types:
                    report.defects.append(
                        f"import references unknown type index {type_idx}")
                counts.imported_funcs += 1
            elif kind == 0x01:
                cur.valtype()
                cur.limits()
                counts.imported_tables += 1
            elif kind == 0x02:
                cur.limits()
                counts.imported_memories += 1
            elif kind == 0x03:
                cur.valtype()
                cur.byte()
                counts.imported_globals += 1
            else:
                raise _Malformed(f"bad import kind 0x{kind:02x}")
    elif section_id == 3:
        for _ in range(cur.u32()):
            type_idx = cur.u32()
            if type_idx >= counts.types:
                report.defects.append(
                    f"function references unknown type index {type_idx}")
            counts.local_funcs += 1
    elif section_id == 4:
        for _ in range(cur.u32()):
            cur.valtype()
            cur.limits()
            counts.tables += 1
    elif section_id == 5:
        for _ in range(cur.u32()):
            cur.limits()
            counts.memories += 1
    elif section_id == 6:
        for _ in range(cur.u32()):
            cur.valtype()
            mut = cur.byte()
            if mut not in (0x00, 0x01):
                raise _Malformed(f"bad mutability flag 0x{mut:02x}")
            cur.skip_init_expr()
            counts.globals_ += 1
    elif section_id == 7:
        seen: set[str] = set()
        kind_limits = {
            0x00: counts.imported_funcs + counts.local_funcs,
            0x01: counts.imported_tables + counts.tables,
            0x02: counts.imported_memories + counts.memories,
            0x03: counts.imported_globals + counts.globals_,
        }
        for _ in range(cur.u32()):
            name = cur.name()
            kind = cur.byte()
            index = cur.u32()
            if kind not in kind_limits:
                raise _Malformed(f"bad export kind 0x{kind:02x}")
            if name in seen:
                report.defects.append(f"duplicate export name {name!r}")
            seen.add(name)
            if index >= kind_limits[kind]:
                report.defects.append(
                    f"export {name!r} references unknown index {index}")
            exports.append(name)
    elif section_id == 8:
        cur.u32()
    elif section_id == 9:
        cur.pos = len(cur.data)  # element segments: framing already checked
    elif section_id == 10:
        n = cur.u32()
        for _ in range(n):
            body_size = cur.u32()
            body = cur.take(body_size)
            entry = _Cursor(body)
            for _ in range(entry.u32()):
                entry.u32()
                entry.valtype()
            if not body or body[-1] != 0x0B:
                report.defects.append("code body missing end opcode")
            counts.code_entries += 1
    elif section_id == 11:
        cur.pos = len(cur.data)  # data segments: framing already checked
    elif section_id == 12:
        cur.u32()


def validate_module(blob) -> ValidationReport:
    """Validate a WasmModuleBlob, including its declared export names."""
    report = validate_bytes(blob.bytes)
    decoded = set(report.exports)
    for name in blob.exports:
        if name not in decoded:
            report.defects.append(f"missing declared export {name!r}")
    return report
