// Fingerprint generation: time each test's run and collect the vector.

import type { TimingTestCase } from "./tests";

export interface ProbeError {
  index: number;
  name: string;
  message: string;
}

export interface FingerprintResult {
  timingsMs: number[];
  testNames: string[];
  errors: ProbeError[];
}

export interface RunOptions {
  // one untimed pass per test first, so compilation and inline-cache
  // warm-up do not land in the measured run
  warmup?: boolean;
  now?: () => number;
}

export function runFingerprint(
  tests: TimingTestCase[],
  options: RunOptions = {},
): FingerprintResult {
  const warmup = options.warmup ?? true;
  const now = options.now ?? (() => performance.now());
  const timingsMs: number[] = [];
  const testNames: string[] = [];
  const errors: ProbeError[] = [];

  for (let i = 0; i < tests.length; i++) {
    const test = tests[i];
    testNames.push(test.descriptor.name);
    try {
      if (warmup) {
        test.run();
      }
      const startTime = now();
      test.run();
      const endTime = now();
      timingsMs.push(endTime - startTime);
    } catch (exc) {
      timingsMs.push(Number.NaN); // per-test error marker
      errors.push({
        index: i,
        name: test.descriptor.name,
        message: exc instanceof Error ? exc.message : String(exc),
      });
    }
  }
  return { timingsMs, testNames, errors };
}
