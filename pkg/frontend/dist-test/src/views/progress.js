import { escapeHtml, formatAvg, formatDuration, pagesLeft, progressPercent } from "../format.js";
export function canPause(state) {
    return state.phase === "crawling" || state.phase === "listing";
}
export function canResume(state) {
    return state.phase === "paused" || state.phase === "failed";
}
function phaseBadge(state) {
    return `<span class="badge badge-${state.phase}">${state.phase}</span>`;
}
/** Pure render of one job's progress card; the app wires the buttons. */
export function renderProgressCard(job, stale = false) {
    const state = job.state;
    const pct = progressPercent(state);
    const left = pagesLeft(state);
    const bar = pct === null
        ? `<div class="bar indeterminate"><div class="fill"></div></div>`
        : `<div class="bar"><div class="fill" style="width: ${pct.toFixed(1)}%"></div></div>`;
    const staleBanner = stale
        ? `<div class="stale-banner">connection lost – showing last known state</div>`
        : "";
    const counts = state.pages_total === null
        ? `<span>listing page titles…</span>`
        : `<span>${state.pages_done} / ${state.pages_total} pages</span>
         <span>${left} left</span>`;
    const errorLine = state.error
        ? `<div class="job-error">${escapeHtml(state.error)}</div>`
        : "";
    return `
  <article class="job-card" data-job-id="${escapeHtml(job.job_id)}">
    <header>
      <code>${escapeHtml(job.job_id)}</code>
      ${phaseBadge(state)}
      <span class="corpus-root">${escapeHtml(job.config.corpus_root)}</span>
    </header>
    ${staleBanner}
    ${bar}
    <div class="job-numbers">
      ${counts}
      <span>${formatAvg(state.avg_page_seconds)}</span>
      <span>ETA ${formatDuration(state.eta_seconds)}</span>
    </div>
    ${errorLine}
    <div class="job-actions">
      <button data-action="pause" data-job-id="${escapeHtml(job.job_id)}"
              ${canPause(state) ? "" : "disabled"}>Pause</button>
      <button data-action="resume" data-job-id="${escapeHtml(job.job_id)}"
              ${canResume(state) ? "" : "disabled"}>Resume</button>
    </div>
  </article>`;
}
