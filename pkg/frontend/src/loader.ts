// Fetching and instantiating the per-test wasm modules.

export type WasmExports = Record<string, unknown>;

// JS functions the looping modules import.
export function standardImports(): WebAssembly.Imports {
  return {
    js: {
      cos: Math.cos,
      twoArg: (a: number, b: number): number => (a + b) | 0,
    },
  };
}

// Copy any view into a fresh ArrayBuffer; node Buffers share a pooled
// allocation, so .buffer alone would hand wasm the wrong bytes.
export function toArrayBuffer(bytes: ArrayBuffer | Uint8Array): ArrayBuffer {
  if (!(bytes instanceof Uint8Array)) {
    return bytes;
  }
  const copy = new Uint8Array(bytes.byteLength);
  copy.set(bytes);
  return copy.buffer;
}

export async function instantiate(
  bytes: ArrayBuffer | Uint8Array,
): Promise<WasmExports> {
  const result = await WebAssembly.instantiate(
    toArrayBuffer(bytes),
    standardImports(),
  );
  return result.instance.exports as WasmExports;
}

export async function fetchAndInstantiate(
  testId: number,
  baseUrl = "",
): Promise<WasmExports> {
  const resp = await fetch(`${baseUrl}/wasm/${testId}`);
  if (!resp.ok) {
    throw new Error(`wasm fetch failed for test ${testId}: ${resp.status}`);
  }
  return instantiate(await resp.arrayBuffer());
}
