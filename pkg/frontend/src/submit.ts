// Posting the finished fingerprint back to the collection service.

import type { FingerprintResult } from "./harness";

export interface SubmitOptions {
  session: string;
  userAgent: string;
  clientHint?: Record<string, unknown>;
}

export async function postFingerprint(
  result: FingerprintResult,
  options: SubmitOptions,
  baseUrl = "",
): Promise<{ id: string }> {
  if (result.errors.length > 0) {
    throw new Error(
      `submission aborted, ${result.errors.length} test(s) failed: ` +
        result.errors.map((e) => e.name).join(", "),
    );
  }
  const resp = await fetch(`${baseUrl}/api/fingerprint`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({
      session: options.session,
      test_names: result.testNames,
      timings_ms: result.timingsMs,
      user_agent: options.userAgent,
      client_hint: options.clientHint ?? null,
    }),
  });
  if (resp.status !== 201) {
    throw new Error(`submission rejected: ${resp.status}`);
  }
  return (await resp.json()) as { id: string };
}

export async function fetchRecord(
  id: string,
  baseUrl = "",
): Promise<Record<string, unknown>> {
  const resp = await fetch(`${baseUrl}/api/fingerprints/${id}`);
  if (!resp.ok) {
    throw new Error(`record fetch failed: ${resp.status}`);
  }
  return (await resp.json()) as Record<string, unknown>;
}
