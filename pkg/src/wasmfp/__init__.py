"""wasmfp: WebAssembly timing-test browser fingerprinting toolkit."""

__version__ = "0.1.0"
