import type { JobState } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Derived pages-left; always pages_total - pages_done when both known. */
export function pagesLeft(state: JobState): number | null {
  if (state.pages_total === null) return null;
  return state.pages_total - state.pages_done;
}

export function progressPercent(state: JobState): number | null {
  if (state.pages_total === null) return null;
  if (state.pages_total === 0) return 100;
  return (100 * state.pages_done) / state.pages_total;
}

export function formatDuration(seconds: number | null | undefined): string {
  if (seconds === null || seconds === undefined || !isFinite(seconds)) return "–";
  if (seconds < 0) return "–";
  const total = Math.round(seconds);
  const h = Math.floor(total / 3600);
  const m = Math.floor((total % 3600) / 60);
  const s = total % 60;
  if (h > 0) return `${h}h ${m}m`;
  if (m > 0) return `${m}m ${s}s`;
  return `${s}s`;
}

export function formatAvg(seconds: number | null): string {
  if (seconds === null || !isFinite(seconds)) return "–";
  return `${seconds.toFixed(2)} s/page`;
}
