import { escapeHtml } from "../format.js";
/** Rows above this are windowed out of the detail view for rendering speed. */
export const GRID_RENDER_LIMIT = 200;
export function renderSearchResults(resp) {
    if (resp.items.length === 0) {
        return `<p class="empty-state">No tables match this query.</p>`;
    }
    const cards = resp.items
        .map((m) => {
        const caption = m.caption
            ? `<div class="result-caption">${escapeHtml(m.caption)}</div>`
            : "";
        return `
      <article class="result-card" data-action="open-table"
               data-page-id="${m.page_id}" data-offset="${m.offset}">
        <header>${escapeHtml(m.page_title)}</header>
        ${caption}
        <div class="result-meta">
          <span>${m.n_rows} × ${m.n_cols}</span>
          <span>id ${m.page_id}_${m.offset}</span>
          ${m.column_numeric.some(Boolean) ? "<span>numeric columns</span>" : ""}
        </div>
      </article>`;
    })
        .join("\n");
    const page = Math.floor(resp.offset / resp.limit) + 1;
    const pages = Math.max(1, Math.ceil(resp.total_matches / resp.limit));
    return `
  <div class="result-summary">${resp.total_matches} match(es), page ${page} of ${pages}</div>
  <div class="result-list">${cards}</div>
  <div class="pager">
    <button data-action="page-prev" ${resp.offset === 0 ? "disabled" : ""}>Previous</button>
    <button data-action="page-next"
            ${resp.offset + resp.limit >= resp.total_matches ? "disabled" : ""}>Next</button>
  </div>`;
}
export function renderContext(words, label) {
    if (words.length === 0)
        return "";
    return `<details class="context"><summary>${label} (${words.length} words)</summary>
  <p>${escapeHtml(words.join(" "))}</p></details>`;
}
/** Full detail view: metadata, context windows, the grid, CSV link. */
export function renderTableDetail(payload, csvUrl, renderLimit = GRID_RENDER_LIMIT) {
    const meta = payload.metadata;
    const shown = payload.grid.slice(0, renderLimit);
    const windowed = payload.grid.length > shown.length;
    const rowsHtml = shown
        .map((row, r) => {
        const tag = r < meta.header_rows ? "th" : "td";
        const cells = row.map((cell) => `<${tag}>${escapeHtml(cell)}</${tag}>`).join("");
        return `<tr>${cells}</tr>`;
    })
        .join("\n");
    const windowNote = windowed
        ? `<p class="window-note">showing first ${renderLimit} of ${meta.n_rows} rows – download the CSV for the full table</p>`
        : "";
    const caption = meta.caption
        ? `<caption>${escapeHtml(meta.caption)}</caption>`
        : "";
    return `
  <section class="table-detail">
    <header>
      <h2>${escapeHtml(meta.page_title)}</h2>
      <a href="${escapeHtml(meta.url)}" target="_blank" rel="noopener">source page</a>
      <a href="${escapeHtml(csvUrl)}" download>download CSV</a>
    </header>
    <dl class="table-meta">
      <dt>id</dt><dd>${meta.page_id}_${meta.offset}</dd>
      <dt>size</dt><dd>${meta.n_rows} rows × ${meta.n_cols} columns</dd>
      <dt>header rows</dt><dd>${meta.header_rows}</dd>
      <dt>numeric columns</dt>
      <dd>${meta.column_numeric.map((f) => (f ? "1" : "0")).join(" ")}</dd>
      <dt>snapshot</dt><dd>${escapeHtml(meta.snapshot_date)}</dd>
    </dl>
    ${renderContext(meta.context_before, "Context before")}
    <table class="grid">${caption}
    ${rowsHtml}
    </table>
    ${windowNote}
    ${renderContext(meta.context_after, "Context after")}
  </section>`;
}
