// Detection side: spot fingerprinting-style timing abuse by counting
// high-resolution timer reads and profiling wasm export execution times.

export interface AbuseFlag {
  kind: "excessive-timer-access" | "suspicious-timing";
  detail: string;
}

export interface TimingAbuseMonitor {
  readonly timerAccessCount: number;
  readonly flags: AbuseFlag[];
  wrapExports<T extends Record<string, unknown>>(
    exports: T,
  ): Record<string, unknown>;
  uninstall(): void;
}

// Installs a counting wrapper around performance.now. One flag fires the
// first time the read count exceeds `threshold`; counts are exact. The
// monitor itself measures with the original timer so its own profiling
// never inflates the count.
export function detectTimingAbuse(
  threshold = 100,
  onFlag?: (flag: AbuseFlag) => void,
): TimingAbuseMonitor {
  const originalNow = performance.now.bind(performance);
  let accessCount = 0;
  const flags: AbuseFlag[] = [];

  const raise = (flag: AbuseFlag) => {
    flags.push(flag);
    onFlag?.(flag);
  };

  performance.now = function (): number {
    accessCount += 1;
    if (accessCount === threshold + 1) {
      raise({
        kind: "excessive-timer-access",
        detail: `timer read ${accessCount} exceeded threshold ${threshold}`,
      });
    }
    return originalNow();
  };

  return {
    get timerAccessCount() {
      return accessCount;
    },
    flags,
    wrapExports<T extends Record<string, unknown>>(exports: T) {
      const hooked: Record<string, unknown> = {};
      for (const [key, value] of Object.entries(exports)) {
        if (typeof value === "function") {
          const fn = value as (...args: unknown[]) => unknown;
          hooked[key] = (...args: unknown[]) => {
            const startTime = originalNow();
            const result = fn(...args);
            const executionTime = originalNow() - startTime;
            if (executionTime < 1) {
              raise({
                kind: "suspicious-timing",
                detail: `${key} executed in ${executionTime.toFixed(4)} ms`,
              });
            }
            return result;
          };
        } else {
          hooked[key] = value;
        }
      }
      return hooked;
    },
    uninstall() {
      performance.now = originalNow;
    },
  };
}
