export { fetchManifest, type Manifest, type TestDescriptor } from "./catalog";
export { detectTimingAbuse, type AbuseFlag, type TimingAbuseMonitor } from "./detect";
export { runFingerprint, type FingerprintResult, type ProbeError, type RunOptions } from "./harness";
export { fetchAndInstantiate, instantiate, standardImports, type WasmExports } from "./loader";
export { hookWasmExports, mitigateDefineProperty, type Uninstall } from "./mitigation";
export { fetchRecord, postFingerprint, type SubmitOptions } from "./submit";
export { buildTestCase, scriptedGetterTest, scriptedSetterTest, type TimingTestCase, type WasmFn } from "./tests";
