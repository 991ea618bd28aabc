// Test catalog as served by the collection service at /manifest.json.

export interface TestDescriptor {
  id: number;
  name: string;
  exports: string[];
  default_iterations: number;
}

export interface Manifest {
  tests: TestDescriptor[];
}

export async function fetchManifest(baseUrl = ""): Promise<Manifest> {
  const resp = await fetch(`${baseUrl}/manifest.json`);
  if (!resp.ok) {
    throw new Error(`manifest fetch failed: ${resp.status}`);
  }
  return (await resp.json()) as Manifest;
}
