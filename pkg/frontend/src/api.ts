import type { LabelsDoc, VisData } from "./types.js";

const VIS_PATH = "/api/vis";
const LABELS_PATH = "/api/labels";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status?: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

function asObject(data: unknown, what: string): Record<string, unknown> {
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new ApiError(`${what}: expected a JSON object`);
  }
  return data as Record<string, unknown>;
}

/** Shape check tight enough that downstream code can index without guards. */
export function validateVis(data: unknown): VisData {
  const obj = asObject(data, "vis data");
  const n = obj["n_topics"];
  if (typeof n !== "number" || !Number.isInteger(n) || n < 1) {
    throw new ApiError("vis data: n_topics must be a positive integer");
  }
  for (const key of ["topics", "terms", "phi"]) {
    if (!Array.isArray(obj[key])) throw new ApiError(`vis data: ${key} must be an array`);
  }
  if ((obj["topics"] as unknown[]).length !== n) {
    throw new ApiError("vis data: topics length disagrees with n_topics");
  }
  for (const triplet of obj["phi"] as unknown[]) {
    if (!Array.isArray(triplet) || triplet.length !== 3) {
      throw new ApiError("vis data: phi entries must be [topic, term, value] triplets");
    }
  }
  return data as VisData;
}

export async function fetchVis(baseUrl = ""): Promise<VisData> {
  const res = await fetch(baseUrl + VIS_PATH);
  if (!res.ok) throw new ApiError(`GET ${VIS_PATH} failed with status ${res.status}`, res.status);
  return validateVis(await res.json());
}

export async function fetchLabels(baseUrl = ""): Promise<Map<number, string>> {
  const res = await fetch(baseUrl + LABELS_PATH);
  if (!res.ok) {
    throw new ApiError(`GET ${LABELS_PATH} failed with status ${res.status}`, res.status);
  }
  const doc = asObject(await res.json(), "labels");
  const labels = asObject(doc["labels"] ?? {}, "labels.labels");
  const out = new Map<number, string>();
  for (const [key, value] of Object.entries(labels)) {
    const topic = Number(key);
    const entry = asObject(value, `labels[${key}]`);
    if (Number.isInteger(topic) && typeof entry["label"] === "string") {
      out.set(topic, entry["label"]);
    }
  }
  return out;
}

/** PUT replaces the whole label file; callers pass the complete set, not a delta. */
export async function putLabels(
  labels: Map<number, string>,
  baseUrl = "",
): Promise<{ saved: number }> {
  const doc: LabelsDoc = { format_version: 1, labels: {} };
  for (const [topic, text] of labels) doc.labels[String(topic)] = { label: text };
  const res = await fetch(baseUrl + LABELS_PATH, {
    method: "PUT",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(doc),
  });
  if (!res.ok) {
    let detail = "";
    try {
      detail = (await res.text()).trim();
    } catch {
      // response body is best-effort context only
    }
    throw new ApiError(
      `PUT ${LABELS_PATH} failed with status ${res.status}${detail ? `: ${detail}` : ""}`,
      res.status,
    );
  }
  const body = asObject(await res.json(), "save response");
  const saved = body["saved"];
  return { saved: typeof saved === "number" ? saved : labels.size };
}
