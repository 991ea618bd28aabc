// Anti-fingerprinting hooks: slow scripted setters down so engines become
// indistinguishable, and wrap wasm exports with random delays.

export type Uninstall = () => void;

function busyWaitMs(duration: number): void {
  if (duration <= 0) return;
  const end = performance.now() + duration;
  while (performance.now() < end) {
    // spin; the synchronous path cannot yield
  }
}

// Replaces Object.defineProperty so every accessor setter defined from now
// on busy-waits a randomly drawn duration before running. The draw happens
// once at install time; maxDelayMs=0 leaves behavior unchanged.
export function mitigateDefineProperty(
  maxDelayMs: number,
  rng: () => number = Math.random,
): Uninstall {
  const delay = rng() * maxDelayMs;
  const originalDefineProperty = Object.defineProperty;

  function delayedDefineProperty<T>(
    obj: T,
    prop: PropertyKey,
    descriptor: PropertyDescriptor,
  ): T {
    if ("set" in descriptor && typeof descriptor.set === "function") {
      const originalSetter = descriptor.set;
      descriptor = {
        ...descriptor,
        set(value: unknown) {
          busyWaitMs(delay);
          originalSetter.call(this, value);
        },
      };
    }
    return originalDefineProperty(obj, prop, descriptor);
  }

  Object.defineProperty = delayedDefineProperty as typeof Object.defineProperty;
  return () => {
    Object.defineProperty = originalDefineProperty;
  };
}

// Wraps every function export in an async version that waits a uniform
// random delay in [0, maxDelayMs) before calling through. Non-function
// exports (memories, globals) pass through untouched.
export function hookWasmExports<T extends Record<string, unknown>>(
  exports: T,
  maxDelayMs = 200,
  rng: () => number = Math.random,
): Record<string, unknown> {
  const hooked: Record<string, unknown> = {};
  for (const [key, value] of Object.entries(exports)) {
    if (typeof value === "function") {
      const fn = value as (...args: unknown[]) => unknown;
      hooked[key] = async (...args: unknown[]) => {
        const delay = rng() * maxDelayMs;
        await new Promise((resolve) => setTimeout(resolve, delay));
        return fn(...args);
      };
    } else {
      hooked[key] = value;
    }
  }
  return hooked;
}
