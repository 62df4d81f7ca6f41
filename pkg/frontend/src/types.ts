// Shapes mirroring the service's JSON bodies.

export type JobPhase = "listing" | "crawling" | "paused" | "finished" | "failed";

export interface SourceConfig {
  api_base_url?: string | null;
  dump_path?: string | null;
  site_base_url?: string | null;
  max_concurrent_requests?: number;
  min_request_interval?: number;
  max_retries?: number;
  backoff_base?: number;
}

export interface FilterConfig {
  min_cyrillic_ratio: number;
  drop_latin_only_columns: boolean;
  drop_numeric_only_columns: boolean;
  drop_mostly_null_rows: boolean;
  drop_mostly_null_columns: boolean;
  null_threshold: number;
  min_rows: number;
  min_cols: number;
}

export interface JobConfigBody {
  corpus_root: string;
  snapshot_date: string;
  source: SourceConfig;
  filters?: FilterConfig;
  chunk_count: number;
  chunk_index: number;
  worker_count: number;
}

export interface JobState {
  phase: JobPhase;
  pages_total: number | null;
  pages_done: number;
  avg_page_seconds: number | null;
  pages_left: number | null;
  eta_seconds: number | null;
  started_at: string;
  updated_at: string;
  error?: string | null;
}

export interface JobResource {
  job_id: string;
  config: JobConfigBody;
  state: JobState;
}

export interface TableMetadata {
  page_id: number;
  offset: number;
  url: string;
  page_title: string;
  caption: string | null;
  context_before: string[];
  context_after: string[];
  n_rows: number;
  n_cols: number;
  column_numeric: boolean[];
  header_rows: number;
  extracted_at: string;
  snapshot_date: string;
}

export interface SearchResponse {
  items: TableMetadata[];
  total_matches: number;
  limit: number;
  offset: number;
}

export interface TablePayload {
  metadata: TableMetadata;
  grid: string[][];
}

export interface SearchParams {
  root?: string;
  title_substring?: string;
  caption_substring?: string;
  min_rows?: number;
  max_rows?: number;
  min_cols?: number;
  max_cols?: number;
  has_numeric_column?: boolean;
  limit?: number;
  offset?: number;
}

export interface CorpusStats {
  pages_total: number;
  tables_total: number;
  rows_total: number;
  columns_total: number;
  cells_total: number;
  avg_cells_per_table: number;
  avg_tables_per_page: number;
  avg_cells_per_row: number;
  avg_cells_per_column: number;
  avg_chars_per_cell: number;
  avg_cyrillic_per_cell: number;
  avg_latin_per_cell: number;
  pct_nonstring_cells: number;
  pct_mostly_null_rows: number;
  pct_mostly_null_columns: number;
  pct_cyrillic_only_columns: number;
  pct_latin_only_columns: number;
  pct_numeric_only_columns: number;
  empty: boolean;
  unreadable_tables: number;
}
