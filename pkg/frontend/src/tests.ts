// The 20 timing-test bodies. Each runs `limit` interactions of one
// JS/wasm call pattern against that test's instantiated module.

import type { TestDescriptor } from "./catalog";
import type { WasmExports } from "./loader";

export type WasmFn = (...args: number[]) => number;

export interface TimingTestCase {
  descriptor: TestDescriptor;
  iterations: number;
  run: () => unknown;
}

function exportedFn(exports: WasmExports, name: string): WasmFn {
  const fn = exports[name];
  if (typeof fn !== "function") {
    throw new Error(`missing wasm export: ${name}`);
  }
  return fn as WasmFn;
}

// Kept on a mutable holder and guarded so the engine treats it as a real
// call target rather than folding it into the loop below.
const opaque: { ifAddJs: (a: number, b: number) => number } = {
  ifAddJs(a: number, b: number): number {
    if (a + 1) {
      return ((a | 0) + (b | 0)) | 0;
    }
    return 0;
  },
};

function jsTwoArg(a: number, b: number): number {
  return (a + b) | 0;
}

export function scriptedGetterTest(
  getter: WasmFn,
  limit: number,
): number {
  const holder = {};
  Object.defineProperty(holder, "x", { get: getter });
  let acc = 0;
  for (let i = 0; i < limit; i++) {
    acc += (holder as { x: number }).x;
  }
  return acc;
}

export function scriptedSetterTest(
  setter: WasmFn,
  limit: number,
): void {
  const holder = {};
  Object.defineProperty(holder, "x", { set: setter });
  for (let i = 0; i < limit; i++) {
    (holder as { x: number }).x = i;
  }
}

type Body = (exports: WasmExports, limit: number) => unknown;

const BODIES: Record<string, Body> = {
  "math-builtin": (exports, limit) =>
    exportedFn(exports, "callCosInLoop")(limit, 0.5),

  "wasm-to-js": (exports, limit) =>
    exportedFn(exports, "callJsInLoop")(limit, 2, 3),

  "call-known-0": (exports, limit) => {
    const fn = exportedFn(exports, "known_0");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn();
    return acc;
  },

  "call-known-1": (exports, limit) => {
    const fn = exportedFn(exports, "known_1");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn(i);
    return acc;
  },

  "call-known-2": (exports, limit) => {
    const fn = exportedFn(exports, "known_2");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn(i, 1);
    return acc;
  },

  "call-known-2-r": (exports, limit) => {
    const fn = exportedFn(exports, "known_2");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn(i); // one argument short
    return acc;
  },

  "call-generic-2": (exports, limit) => {
    const wasmFn = exportedFn(exports, "generic_2");
    let acc = 0;
    for (let i = 0; i < limit; i++) {
      const target = i % 2 === 0 ? jsTwoArg : wasmFn;
      acc += target(i, 1);
    }
    return acc;
  },

  "call-generic-2-r": (exports, limit) => {
    const wasmFn = exportedFn(exports, "generic_2");
    let acc = 0;
    for (let i = 0; i < limit; i++) {
      const target = i % 2 === 0 ? jsTwoArg : wasmFn;
      acc += (target as WasmFn)(i); // one argument short
    }
    return acc;
  },

  "scripted-getter-0": (exports, limit) =>
    scriptedGetterTest(exportedFn(exports, "get_global_zero"), limit),

  "scripted-getter-1": (exports, limit) =>
    scriptedGetterTest(exportedFn(exports, "get_global_one"), limit),

  "scripted-setter-1": (exports, limit) =>
    scriptedSetterTest(exportedFn(exports, "set_global_one"), limit),

  "scripted-setter-2": (exports, limit) =>
    scriptedSetterTest(exportedFn(exports, "set_global_two"), limit),

  "F.p.apply-array": (exports, limit) => {
    const fn = exportedFn(exports, "apply_target");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn.apply(null, [i, 1]);
    return acc;
  },

  "F.p.apply-array-r": (exports, limit) => {
    const fn = exportedFn(exports, "apply_target");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn.apply(null, [i]);
    return acc;
  },

  "F.p.apply-args": (exports, limit) => {
    const fn = exportedFn(exports, "apply_target");
    function viaArguments(_a: number, _b: number): number {
      // eslint-disable-next-line prefer-rest-params
      return fn.apply(null, arguments as unknown as number[]);
    }
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += viaArguments(i, 1);
    return acc;
  },

  "F.p.apply-args-r": (exports, limit) => {
    const fn = exportedFn(exports, "apply_target");
    function viaArguments(_a: number): number {
      // eslint-disable-next-line prefer-rest-params
      return fn.apply(null, arguments as unknown as number[]);
    }
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += viaArguments(i);
    return acc;
  },

  "F.p.call": (exports, limit) => {
    const fn = exportedFn(exports, "call_target");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn.call(null, i, 1);
    return acc;
  },

  "F.p.call-r": (exports, limit) => {
    const fn = exportedFn(exports, "call_target");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn.call(null, i); // one short
    return acc;
  },

  "if-add-wasm": (exports, limit) => {
    const fn = exportedFn(exports, "if_add");
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += fn(i, 1);
    return acc;
  },

  "if-add-js": (_exports, limit) => {
    let acc = 0;
    for (let i = 0; i < limit; i++) acc += opaque.ifAddJs(i, 1);
    return acc;
  },
};

export function buildTestCase(
  descriptor: TestDescriptor,
  exports: WasmExports,
  iterations?: number,
): TimingTestCase {
  const body = BODIES[descriptor.name];
  if (body === undefined) {
    throw new Error(`unknown timing test: ${descriptor.name}`);
  }
  const limit = iterations ?? descriptor.default_iterations;
  return {
    descriptor,
    iterations: limit,
    run: () => body(exports, limit),
  };
}
