"""Generation and structural validation of the timing-test wasm modules."""

from .catalog import (
    DEFAULT_ITERATIONS,
    TimingTestDescriptor,
    catalog,
    descriptor,
    manifest,
    name_to_index,
    test_names,
)
from .emitter import WasmModuleBlob, emit_module
from .validator import ValidationReport, validate_bytes, validate_module

__all__ = [
    "DEFAULT_ITERATIONS",
    "TimingTestDescriptor",
    "ValidationReport",
    "WasmModuleBlob",
    "catalog",
    "descriptor",
    "emit_module",
    "manifest",
    "name_to_index",
    "test_names",
    "validate_bytes",
    "validate_module",
]
