import type { FilterConfig, JobConfigBody } from "./types.js";

/** Raw values of the job setup form, before conversion. */
export interface JobFormValues {
  corpus_root: string;
  snapshot_date: string;
  source_kind: "api" | "dump";
  api_base_url: string;
  dump_path: string;
  chunk_count: number;
  chunk_index: number;
  worker_count: number;
  min_cyrillic_ratio: number;
  drop_latin_only_columns: boolean;
  drop_numeric_only_columns: boolean;
  drop_mostly_null_rows: boolean;
  drop_mostly_null_columns: boolean;
  null_threshold: number;
  min_rows: number;
  min_cols: number;
}

export const DEFAULT_FORM: JobFormValues = {
  corpus_root: "",
  snapshot_date: new Date().toISOString().slice(0, 10),
  source_kind: "api",
  api_base_url: "",
  dump_path: "",
  chunk_count: 1,
  chunk_index: 0,
  worker_count: 2,
  min_cyrillic_ratio: 0,
  drop_latin_only_columns: false,
  drop_numeric_only_columns: false,
  drop_mostly_null_rows: false,
  drop_mostly_null_columns: false,
  null_threshold: 0.7,
  min_rows: 0,
  min_cols: 0,
};

export type FieldErrors = Partial<Record<keyof JobFormValues, string>>;

/**
 * Client-side mirror of the server's config validation. The server
 * stays authoritative; this only anchors errors to fields before
 * submitting.
 */
export function validateJobForm(v: JobFormValues): FieldErrors {
  const errors: FieldErrors = {};
  if (!v.corpus_root.trim()) {
    errors.corpus_root = "corpus root is required";
  }
  if (v.source_kind === "api" && !v.api_base_url.trim()) {
    errors.api_base_url = "api.php URL is required for a live crawl";
  }
  if (v.source_kind === "dump" && !v.dump_path.trim()) {
    errors.dump_path = "dump path is required when reading a dump";
  }
  if (!Number.isInteger(v.chunk_count) || v.chunk_count < 1) {
    errors.chunk_count = "chunk count must be an integer ≥ 1";
  }
  if (!Number.isInteger(v.chunk_index) || v.chunk_index < 0) {
    errors.chunk_index = "chunk index must be an integer ≥ 0";
  } else if (Number.isInteger(v.chunk_count) && v.chunk_index >= v.chunk_count) {
    errors.chunk_index = "chunk index must be smaller than chunk count";
  }
  if (!Number.isInteger(v.worker_count) || v.worker_count < 1) {
    errors.worker_count = "worker count must be an integer ≥ 1";
  }
  if (!(v.min_cyrillic_ratio >= 0 && v.min_cyrillic_ratio <= 1)) {
    errors.min_cyrillic_ratio = "ratio must be between 0 and 1";
  }
  if (!(v.null_threshold > 0 && v.null_threshold <= 1)) {
    errors.null_threshold = "threshold must be in (0, 1]";
  }
  if (!Number.isInteger(v.min_rows) || v.min_rows < 0) {
    errors.min_rows = "min rows must be an integer ≥ 0";
  }
  if (!Number.isInteger(v.min_cols) || v.min_cols < 0) {
    errors.min_cols = "min cols must be an integer ≥ 0";
  }
  return errors;
}

export function toFilterConfig(v: JobFormValues): FilterConfig {
  return {
    min_cyrillic_ratio: v.min_cyrillic_ratio,
    drop_latin_only_columns: v.drop_latin_only_columns,
    drop_numeric_only_columns: v.drop_numeric_only_columns,
    drop_mostly_null_rows: v.drop_mostly_null_rows,
    drop_mostly_null_columns: v.drop_mostly_null_columns,
    null_threshold: v.null_threshold,
    min_rows: v.min_rows,
    min_cols: v.min_cols,
  };
}

export function toJobConfigBody(v: JobFormValues): JobConfigBody {
  return {
    corpus_root: v.corpus_root.trim(),
    snapshot_date: v.snapshot_date,
    source:
      v.source_kind === "api"
        ? { api_base_url: v.api_base_url.trim() }
        : { dump_path: v.dump_path.trim() },
    filters: toFilterConfig(v),
    chunk_count: v.chunk_count,
    chunk_index: v.chunk_index,
    worker_count: v.worker_count,
  };
}
