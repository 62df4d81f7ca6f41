// Application glue: tabs, poll lifecycle, event wiring. All state lives
// on the server; a full page reload rebuilds every view from the API.

import { Api, ApiError } from "./api.js";
import { escapeHtml } from "./format.js";
import { Poller } from "./poller.js";
import type { JobResource, SearchParams } from "./types.js";
import { DEFAULT_FORM, type JobFormValues, toJobConfigBody, validateJobForm } from "./validation.js";
import { renderSearchResults, renderTableDetail } from "./views/browser.js";
import { renderProgressCard } from "./views/progress.js";
import { readJobForm, renderJobForm } from "./views/setup.js";

const api = new Api("");

const ACTIVE_POLL_MS = 1000;
const PAUSED_POLL_MS = 10_000;

type Tab = "setup" | "jobs" | "browse";

class App {
  private root: HTMLElement;
  private tab: Tab = "jobs";
  private jobs: JobResource[] = [];
  private stale = false;
  private formValues: JobFormValues = { ...DEFAULT_FORM };
  private searchParams: SearchParams = { limit: 20, offset: 0 };
  private poller: Poller<{ jobs: JobResource[] }>;

  constructor(root: HTMLElement) {
    this.root = root;
    this.poller = new Poller({
      fetch: () => api.listJobs(),
      onData: (data) => {
        this.jobs = data.jobs;
        this.stale = false;
        if (this.tab === "jobs") this.renderTab();
      },
      onStale: () => {
        this.stale = true;
        if (this.tab === "jobs") this.renderTab();
      },
      interval: () =>
        this.jobs.some((j) => j.state.phase === "crawling" || j.state.phase === "listing")
          ? ACTIVE_POLL_MS
          : PAUSED_POLL_MS,
    });
    root.addEventListener("click", (event) => void this.onClick(event));
    root.addEventListener("submit", (event) => void this.onSubmit(event));
    this.renderShell();
    this.poller.start();
  }

  private renderShell(): void {
    this.root.innerHTML = `
      <nav class="tabs">
        <button data-action="tab" data-tab="setup">New job</button>
        <button data-action="tab" data-tab="jobs">Jobs</button>
        <button data-action="tab" data-tab="browse">Browse corpus</button>
      </nav>
      <main id="view"></main>
      <div id="notice"></div>`;
    this.renderTab();
  }

  private view(): HTMLElement {
    return this.root.querySelector("#view") as HTMLElement;
  }

  private notice(message: string): void {
    const box = this.root.querySelector("#notice") as HTMLElement;
    box.innerHTML = message ? `<div class="notice">${message}</div>` : "";
  }

  private renderTab(): void {
    for (const button of this.root.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
      button.classList.toggle("active", button.dataset.tab === this.tab);
    }
    if (this.tab === "setup") {
      this.view().innerHTML = renderJobForm(this.formValues, {});
    } else if (this.tab === "jobs") {
      const cards = this.jobs.map((j) => renderProgressCard(j, this.stale)).join("\n");
      this.view().innerHTML =
        this.jobs.length === 0
          ? `<p class="empty-state">No jobs yet – start one under “New job”.</p>`
          : cards;
    } else {
      this.view().innerHTML = `
        <form id="search-form" class="search-form">
          <input name="title_substring" placeholder="page title contains…">
          <input name="caption_substring" placeholder="caption contains…">
          <input name="min_rows" type="number" placeholder="min rows">
          <input name="max_rows" type="number" placeholder="max rows">
          <input name="min_cols" type="number" placeholder="min cols">
          <input name="max_cols" type="number" placeholder="max cols">
          <button type="submit">Search</button>
        </form>
        <div id="search-results"></div>
        <div id="table-detail"></div>`;
      void this.runSearch();
    }
  }

  private async onClick(event: Event): Promise<void> {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action;
    if (action === "tab") {
      this.tab = target.dataset.tab as Tab;
      this.renderTab();
    } else if (action === "pause" || action === "resume") {
      const jobId = target.dataset.jobId as string;
      try {
        await (action === "pause" ? api.pause(jobId) : api.resume(jobId));
        await this.poller.tick(); // reflect within one interval
      } catch (error) {
        this.notice(describe(error));
      }
    } else if (action === "open-table") {
      const pageId = Number(target.dataset.pageId);
      const offset = Number(target.dataset.offset);
      try {
        const payload = await api.table(pageId, offset, this.searchParams.root);
        const detail = this.view().querySelector("#table-detail") as HTMLElement;
        detail.innerHTML = renderTableDetail(
          payload,
          api.tableCsvUrl(pageId, offset, this.searchParams.root),
        );
        detail.scrollIntoView({ behavior: "smooth" });
      } catch (error) {
        this.notice(describe(error));
      }
    } else if (action === "page-prev" || action === "page-next") {
      const limit = this.searchParams.limit ?? 20;
      const offset = this.searchParams.offset ?? 0;
      this.searchParams.offset = Math.max(
        0, action === "page-next" ? offset + limit : offset - limit,
      );
      void this.runSearch();
    }
  }

  private async onSubmit(event: Event): Promise<void> {
    const form = event.target as HTMLFormElement;
    event.preventDefault();
    if (form.id === "job-form") {
      this.formValues = readJobForm(form);
      const errors = validateJobForm(this.formValues);
      if (Object.keys(errors).length > 0) {
        this.view().innerHTML = renderJobForm(this.formValues, errors);
        return;
      }
      try {
        await api.createJob(toJobConfigBody(this.formValues));
        this.notice("");
        this.tab = "jobs";
        await this.poller.tick();
        this.renderTab();
      } catch (error) {
        this.notice(describe(error));
      }
    } else if (form.id === "search-form") {
      const data = new FormData(form);
      const read = (name: string) => String(data.get(name) ?? "").trim();
      const readInt = (name: string) => (read(name) === "" ? undefined : Number(read(name)));
      this.searchParams = {
        ...this.searchParams,
        title_substring: read("title_substring") || undefined,
        caption_substring: read("caption_substring") || undefined,
        min_rows: readInt("min_rows"),
        max_rows: readInt("max_rows"),
        min_cols: readInt("min_cols"),
        max_cols: readInt("max_cols"),
        offset: 0,
      };
      void this.runSearch();
    }
  }

  private async runSearch(): Promise<void> {
    const box = this.view().querySelector("#search-results");
    if (!box) return;
    try {
      const resp = await api.search(this.searchParams);
      box.innerHTML = renderSearchResults(resp);
    } catch (error) {
      box.innerHTML = `<p class="empty-state">${describe(error)}</p>`;
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return escapeHtml(`${error.code}: ${error.message}`);
  }
  return escapeHtml(String(error));
}

const mount = document.getElementById("app");
if (mount) new App(mount);
