// Live-service integration: drives the real HTTP service (with a mock
// wiki behind it) through the same client, validation, and render code
// the browser uses. Requires python3 with the package installed.
import assert from "node:assert/strict";
import { spawn } from "node:child_process";
import { once } from "node:events";
import { existsSync } from "node:fs";
import * as path from "node:path";
import * as readline from "node:readline";
import { after, before, test } from "node:test";
import { fileURLToPath } from "node:url";
import { Api } from "../src/api.js";
import { DEFAULT_FORM, toJobConfigBody, validateJobForm } from "../src/validation.js";
import { renderSearchResults, renderTableDetail } from "../src/views/browser.js";
import { renderProgressCard } from "../src/views/progress.js";
function findFixtureScript() {
    // works from both test/ and the compiled dist-test/test/
    let dir = path.dirname(fileURLToPath(import.meta.url));
    for (let i = 0; i < 6; i++) {
        const candidate = path.join(dir, "scripts", "run_ui_fixture.py");
        if (existsSync(candidate))
            return candidate;
        dir = path.dirname(dir);
    }
    throw new Error("run_ui_fixture.py not found above " + import.meta.url);
}
const FIXTURE_SCRIPT = findFixtureScript();
// fixture wiki plants 4 tables per 10 pages
const PAGES = 150;
const PLANTED_TABLES = (PAGES / 10) * 4;
const POLL_INTERVAL_MS = 1000;
let child;
let endpoints;
let api;
const sleep = (ms) => new Promise((resolve) => setTimeout(resolve, ms));
before(async () => {
    child = spawn("python3", [FIXTURE_SCRIPT, "--pages", String(PAGES), "--delay", "0.05"], { stdio: ["ignore", "pipe", "inherit"] });
    const lines = readline.createInterface({ input: child.stdout });
    const [line] = (await Promise.race([
        once(lines, "line"),
        sleep(30_000).then(() => {
            throw new Error("fixture service did not start");
        }),
    ]));
    endpoints = JSON.parse(line);
    api = new Api(endpoints.service);
});
after(() => {
    child.kill("SIGTERM");
});
test("full control-surface pass against the live service", async () => {
    const health = await api.health();
    assert.equal(health.status, "ok");
    // job setup exactly as the form submits it
    const form = {
        ...DEFAULT_FORM,
        corpus_root: endpoints.corpus_root,
        snapshot_date: "2021-09-13",
        api_base_url: endpoints.wiki_api,
        worker_count: 2,
    };
    assert.deepEqual(validateJobForm(form), {});
    const job = await api.createJob(toJobConfigBody(form));
    assert.ok(job.job_id);
    // the job appears in the list within one poll
    await sleep(POLL_INTERVAL_MS);
    const listed = await api.listJobs();
    assert.ok(listed.jobs.some((j) => j.job_id === job.job_id));
    // progress advances between polls and the bar renders
    const p1 = await api.progress(job.job_id);
    await sleep(600);
    const p2 = await api.progress(job.job_id);
    assert.ok(p2.pages_done > p1.pages_done || p2.phase === "finished", `progress did not advance: ${p1.pages_done} -> ${p2.pages_done}`);
    const card = renderProgressCard({ ...job, state: p2 });
    assert.match(card, /job-card/);
    if (p2.pages_total !== null) {
        assert.match(card, new RegExp(`${p2.pages_done} / ${p2.pages_total} pages`));
    }
    // pause is reflected within one poll interval
    assert.ok(p2.phase === "crawling" || p2.phase === "listing");
    await api.pause(job.job_id);
    await sleep(POLL_INTERVAL_MS);
    const pausedState = await api.progress(job.job_id);
    assert.equal(pausedState.phase, "paused");
    const pausedCard = renderProgressCard({ ...job, state: pausedState });
    assert.match(pausedCard, /badge-paused/);
    assert.match(pausedCard, /data-action="resume"(?![^>]*disabled)/);
    // paused means paused: progress freezes
    const frozen1 = await api.progress(job.job_id);
    await sleep(400);
    const frozen2 = await api.progress(job.job_id);
    assert.equal(frozen1.pages_done, frozen2.pages_done);
    // resume and run to completion
    await api.resume(job.job_id);
    const deadline = Date.now() + 60_000;
    let finished = await api.progress(job.job_id);
    while (finished.phase !== "finished") {
        assert.ok(Date.now() < deadline, `job stuck in ${finished.phase}`);
        await sleep(300);
        finished = await api.progress(job.job_id);
    }
    assert.equal(finished.pages_done, PAGES);
    // search renders the planted results
    const results = await api.search({
        root: endpoints.corpus_root,
        title_substring: "статья",
        limit: 10,
    });
    assert.equal(results.total_matches, PLANTED_TABLES);
    const resultsHtml = renderSearchResults(results);
    assert.match(resultsHtml, /Статья/);
    assert.match(resultsHtml, new RegExp(`${PLANTED_TABLES} match\\(es\\)`));
    // the grid view matches the API payload cell for cell
    const first = results.items[0];
    const payload = await api.table(first.page_id, first.offset, endpoints.corpus_root);
    assert.equal(payload.grid.length, payload.metadata.n_rows);
    const detailHtml = renderTableDetail(payload, api.tableCsvUrl(first.page_id, first.offset, endpoints.corpus_root));
    for (const row of payload.grid) {
        for (const cell of row) {
            if (cell)
                assert.ok(detailHtml.includes(cell), `cell ${cell} missing from view`);
        }
    }
    const headerCells = (detailHtml.match(/<th>/g) ?? []).length;
    assert.equal(headerCells, payload.metadata.header_rows * payload.metadata.n_cols);
    // csv endpoint serves the raw file
    const csvResp = await fetch(api.tableCsvUrl(first.page_id, first.offset, endpoints.corpus_root));
    assert.ok(csvResp.ok);
    const csvText = await csvResp.text();
    assert.equal(csvText.split("\r\n").filter(Boolean).length, payload.metadata.n_rows);
    // stats endpoint agrees with the plant
    const stats = await api.stats(endpoints.corpus_root);
    assert.equal(stats.tables_total, PLANTED_TABLES);
    assert.equal(stats.pages_total, PAGES);
});
