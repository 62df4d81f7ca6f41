import { escapeHtml } from "../format.js";
import type { FieldErrors, JobFormValues } from "../validation.js";

function err(errors: FieldErrors, field: keyof JobFormValues): string {
  const message = errors[field];
  return message ? `<span class="field-error">${escapeHtml(message)}</span>` : "";
}

function num(name: string, label: string, value: number, errors: FieldErrors,
             step = "1"): string {
  return `<label>${label}
    <input type="number" name="${name}" value="${value}" step="${step}">
    ${err(errors, name as keyof JobFormValues)}
  </label>`;
}

function flag(name: string, label: string, value: boolean): string {
  return `<label class="flag"><input type="checkbox" name="${name}"
    ${value ? "checked" : ""}> ${label}</label>`;
}

export function renderJobForm(v: JobFormValues, errors: FieldErrors = {}): string {
  return `
  <form id="job-form" class="job-form">
    <fieldset>
      <legend>Job</legend>
      <label>Corpus directory
        <input name="corpus_root" value="${escapeHtml(v.corpus_root)}" placeholder="./corpus">
        ${err(errors, "corpus_root")}
      </label>
      <label>Snapshot date
        <input type="date" name="snapshot_date" value="${escapeHtml(v.snapshot_date)}">
      </label>
      ${num("worker_count", "Workers", v.worker_count, errors)}
    </fieldset>
    <fieldset>
      <legend>Source</legend>
      <label class="flag"><input type="radio" name="source_kind" value="api"
        ${v.source_kind === "api" ? "checked" : ""}> live wiki API</label>
      <label class="flag"><input type="radio" name="source_kind" value="dump"
        ${v.source_kind === "dump" ? "checked" : ""}> offline dump</label>
      <label>api.php URL
        <input name="api_base_url" value="${escapeHtml(v.api_base_url)}"
               placeholder="https://ru.wikipedia.org/w/api.php">
        ${err(errors, "api_base_url")}
      </label>
      <label>Dump path
        <input name="dump_path" value="${escapeHtml(v.dump_path)}">
        ${err(errors, "dump_path")}
      </label>
    </fieldset>
    <fieldset>
      <legend>Parallelization</legend>
      ${num("chunk_count", "Chunk count", v.chunk_count, errors)}
      ${num("chunk_index", "Chunk index", v.chunk_index, errors)}
    </fieldset>
    <fieldset>
      <legend>Language filters</legend>
      ${num("min_cyrillic_ratio", "Min Cyrillic ratio", v.min_cyrillic_ratio, errors, "0.05")}
      ${num("null_threshold", "Null threshold", v.null_threshold, errors, "0.05")}
      ${num("min_rows", "Min rows", v.min_rows, errors)}
      ${num("min_cols", "Min cols", v.min_cols, errors)}
      ${flag("drop_latin_only_columns", "Drop Latin-only columns", v.drop_latin_only_columns)}
      ${flag("drop_numeric_only_columns", "Drop numeric-only columns", v.drop_numeric_only_columns)}
      ${flag("drop_mostly_null_rows", "Drop mostly-NULL rows", v.drop_mostly_null_rows)}
      ${flag("drop_mostly_null_columns", "Drop mostly-NULL columns", v.drop_mostly_null_columns)}
    </fieldset>
    <button type="submit" data-action="start-job">Start crawl</button>
  </form>`;
}

/** Read the form back into values; browser-only (needs a live DOM). */
export function readJobForm(form: HTMLFormElement): JobFormValues {
  const data = new FormData(form);
  const text = (name: string) => String(data.get(name) ?? "");
  const int = (name: string) => {
    const raw = text(name).trim();
    const parsed = Number(raw);
    return Number.isInteger(parsed) && raw !== "" ? parsed : NaN;
  };
  const real = (name: string) => Number(text(name));
  const checked = (name: string) => data.get(name) !== null;
  return {
    corpus_root: text("corpus_root"),
    snapshot_date: text("snapshot_date"),
    source_kind: text("source_kind") === "dump" ? "dump" : "api",
    api_base_url: text("api_base_url"),
    dump_path: text("dump_path"),
    chunk_count: int("chunk_count"),
    chunk_index: int("chunk_index"),
    worker_count: int("worker_count"),
    min_cyrillic_ratio: real("min_cyrillic_ratio"),
    drop_latin_only_columns: checked("drop_latin_only_columns"),
    drop_numeric_only_columns: checked("drop_numeric_only_columns"),
    drop_mostly_null_rows: checked("drop_mostly_null_rows"),
    drop_mostly_null_columns: checked("drop_mostly_null_columns"),
    null_threshold: real("null_threshold"),
    min_rows: int("min_rows"),
    min_cols: int("min_cols"),
  };
}
