import assert from "node:assert/strict";
import { test } from "node:test";
import { DEFAULT_FORM, toJobConfigBody, validateJobForm } from "../src/validation.js";
const valid = {
    ...DEFAULT_FORM,
    corpus_root: "/tmp/corpus",
    api_base_url: "http://wiki/w/api.php",
};
test("valid form has no errors", () => {
    assert.deepEqual(validateJobForm(valid), {});
});
test("chunk_index must stay below chunk_count", () => {
    const errors = validateJobForm({ ...valid, chunk_count: 4, chunk_index: 4 });
    assert.ok(errors.chunk_index);
    assert.deepEqual(validateJobForm({ ...valid, chunk_count: 4, chunk_index: 3 }), {});
});
test("ratio outside [0,1] is rejected", () => {
    assert.ok(validateJobForm({ ...valid, min_cyrillic_ratio: 1.5 }).min_cyrillic_ratio);
    assert.ok(validateJobForm({ ...valid, min_cyrillic_ratio: -0.1 }).min_cyrillic_ratio);
    assert.deepEqual(validateJobForm({ ...valid, min_cyrillic_ratio: 1 }), {});
});
test("null_threshold must be in (0,1]", () => {
    assert.ok(validateJobForm({ ...valid, null_threshold: 0 }).null_threshold);
    assert.deepEqual(validateJobForm({ ...valid, null_threshold: 1 }), {});
});
test("source must match the selected kind", () => {
    assert.ok(validateJobForm({ ...valid, api_base_url: "" }).api_base_url);
    const dump = validateJobForm({ ...valid, source_kind: "dump" });
    assert.ok(dump.dump_path);
    assert.deepEqual(validateJobForm({ ...valid, source_kind: "dump", dump_path: "/d.tar" }), {});
});
test("missing corpus root is an error", () => {
    assert.ok(validateJobForm({ ...valid, corpus_root: "  " }).corpus_root);
});
test("worker and chunk counts must be positive integers", () => {
    assert.ok(validateJobForm({ ...valid, worker_count: 0 }).worker_count);
    assert.ok(validateJobForm({ ...valid, chunk_count: 1.5 }).chunk_count);
    assert.ok(validateJobForm({ ...valid, worker_count: NaN }).worker_count);
});
test("toJobConfigBody picks exactly one source", () => {
    const apiBody = toJobConfigBody(valid);
    assert.equal(apiBody.source.api_base_url, "http://wiki/w/api.php");
    assert.equal(apiBody.source.dump_path, undefined);
    const dumpBody = toJobConfigBody({
        ...valid, source_kind: "dump", dump_path: "/d.tar",
    });
    assert.equal(dumpBody.source.dump_path, "/d.tar");
    assert.equal(dumpBody.source.api_base_url, undefined);
});
test("toJobConfigBody carries every filter field", () => {
    const body = toJobConfigBody({
        ...valid, min_cyrillic_ratio: 0.5, drop_numeric_only_columns: true,
        null_threshold: 0.6, min_rows: 3, min_cols: 5,
    });
    assert.deepEqual(body.filters, {
        min_cyrillic_ratio: 0.5,
        drop_latin_only_columns: false,
        drop_numeric_only_columns: true,
        drop_mostly_null_rows: false,
        drop_mostly_null_columns: false,
        null_threshold: 0.6,
        min_rows: 3,
        min_cols: 5,
    });
});
