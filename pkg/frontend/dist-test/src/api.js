export class ApiError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
async function parseError(resp) {
    let code = "http_error";
    let message = `HTTP ${resp.status}`;
    try {
        const body = (await resp.json());
        if (body.code)
            code = body.code;
        if (body.message)
            message = body.message;
    }
    catch {
        // non-JSON error body; keep defaults
    }
    return new ApiError(resp.status, code, message);
}
/** Typed client for the corpus service; the UI calls nothing else. */
export class Api {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = fetch) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        const resp = await this.fetchFn(this.baseUrl + path, init);
        if (!resp.ok)
            throw await parseError(resp);
        return (await resp.json());
    }
    health() {
        return this.request("/health");
    }
    createJob(config) {
        return this.request("/jobs", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(config),
        });
    }
    listJobs() {
        return this.request("/jobs");
    }
    getJob(jobId) {
        return this.request(`/jobs/${jobId}`);
    }
    progress(jobId) {
        return this.request(`/jobs/${jobId}/progress`);
    }
    pause(jobId) {
        return this.request(`/jobs/${jobId}/pause`, { method: "POST" });
    }
    resume(jobId) {
        return this.request(`/jobs/${jobId}/resume`, { method: "POST" });
    }
    stats(root) {
        const q = root ? `?root=${encodeURIComponent(root)}` : "";
        return this.request(`/corpus/stats${q}`);
    }
    search(params) {
        const query = new URLSearchParams();
        for (const [key, value] of Object.entries(params)) {
            if (value !== undefined && value !== null && value !== "") {
                query.set(key, String(value));
            }
        }
        return this.request(`/corpus/search?${query.toString()}`);
    }
    table(pageId, offset, root) {
        const q = root ? `?root=${encodeURIComponent(root)}` : "";
        return this.request(`/corpus/tables/${pageId}/${offset}${q}`);
    }
    tableCsvUrl(pageId, offset, root) {
        const q = root ? `?root=${encodeURIComponent(root)}` : "";
        return `${this.baseUrl}/corpus/tables/${pageId}/${offset}/csv${q}`;
    }
}
