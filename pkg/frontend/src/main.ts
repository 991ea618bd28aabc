// Browser entry point: fetch the manifest and modules, run the tests in
// catalog order, show the results, and post the fingerprint.

import { fetchManifest } from "./catalog";
import { runFingerprint } from "./harness";
import { fetchAndInstantiate } from "./loader";
import { fetchRecord, postFingerprint } from "./submit";
import { buildTestCase, type TimingTestCase } from "./tests";

function output(text: string): void {
  const el = document.getElementById("probe-output");
  if (el) {
    el.textContent = text;
  }
}

function sessionToken(): string {
  const script = document.currentScript as HTMLScriptElement | null;
  return script?.dataset.session
    ?? document.querySelector<HTMLMetaElement>('meta[name="session"]')?.content
    ?? "anonymous";
}

async function probe(): Promise<void> {
  const session = sessionToken();
  output("fetching timing tests...");
  const manifest = await fetchManifest();

  const cases: TimingTestCase[] = [];
  for (const descriptor of manifest.tests) {
    const exports = await fetchAndInstantiate(descriptor.id);
    cases.push(buildTestCase(descriptor, exports));
  }

  output("running timing tests...");
  const result = runFingerprint(cases);
  const lines = result.testNames.map(
    (name, i) => `${name.padEnd(20)} ${result.timingsMs[i].toFixed(2)} ms`,
  );

  if (result.errors.length > 0) {
    output(lines.join("\n") + "\n\nerrors: " +
      result.errors.map((e) => `${e.name}: ${e.message}`).join("; "));
    return;
  }

  const { id } = await postFingerprint(result, {
    session,
    userAgent: navigator.userAgent,
  });
  const record = await fetchRecord(id);
  const verdict = record.verdict as { is_chromium?: boolean } | null;
  lines.push("");
  lines.push(`submitted as ${id}`);
  lines.push(`reported user-agent: ${navigator.userAgent}`);
  lines.push(`detected engine: ${
    verdict?.is_chromium ? "chromium-based" : "not chromium-based"}`);
  output(lines.join("\n"));
}

probe().catch((exc) => output(`probe failed: ${exc}`));
