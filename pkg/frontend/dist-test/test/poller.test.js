import assert from "node:assert/strict";
import { test } from "node:test";
import { Poller } from "../src/poller.js";
function manualTimers() {
    const queue = [];
    const timers = {
        schedule: (fn, ms) => {
            const entry = { fn, ms };
            queue.push(entry);
            return entry;
        },
        cancel: (handle) => {
            const index = queue.indexOf(handle);
            if (index >= 0)
                queue.splice(index, 1);
        },
    };
    return { queue, timers };
}
const tickle = () => new Promise((resolve) => setTimeout(resolve, 0));
test("delivers data and reschedules at the base interval", async () => {
    const { queue, timers } = manualTimers();
    const seen = [];
    let value = 0;
    const poller = new Poller({
        fetch: async () => ++value,
        onData: (v) => seen.push(v),
        interval: () => 1000,
        timers,
    });
    poller.start();
    await tickle();
    assert.deepEqual(seen, [1]);
    assert.equal(queue.length, 1);
    assert.equal(queue[0].ms, 1000);
    queue.shift().fn();
    await tickle();
    assert.deepEqual(seen, [1, 2]);
});
test("failures back off exponentially and report staleness", async () => {
    const { queue, timers } = manualTimers();
    const staleness = [];
    let failing = true;
    const seen = [];
    const poller = new Poller({
        fetch: async () => {
            if (failing)
                throw new Error("boom");
            return "ok";
        },
        onData: (v) => seen.push(v),
        onStale: (_err, failures) => staleness.push(failures),
        interval: () => 1000,
        maxBackoffMs: 30_000,
        timers,
    });
    poller.start();
    await tickle();
    assert.deepEqual(staleness, [1]);
    assert.equal(queue[0].ms, 2000);
    queue.shift().fn();
    await tickle();
    assert.equal(queue[0].ms, 4000);
    queue.shift().fn();
    await tickle();
    assert.equal(queue[0].ms, 8000);
    // polling continues after recovery and interval resets
    failing = false;
    queue.shift().fn();
    await tickle();
    assert.deepEqual(seen, ["ok"]);
    assert.equal(queue[0].ms, 1000);
});
test("backoff is capped", async () => {
    const { timers, queue } = manualTimers();
    const poller = new Poller({
        fetch: async () => {
            throw new Error("down");
        },
        onData: () => { },
        interval: () => 10_000,
        maxBackoffMs: 30_000,
        timers,
    });
    poller.start();
    await tickle();
    queue.shift().fn();
    await tickle();
    assert.equal(queue[0].ms, 30_000);
});
test("dynamic interval is re-read every cycle", async () => {
    const { timers, queue } = manualTimers();
    let paused = false;
    const poller = new Poller({
        fetch: async () => "x",
        onData: () => { },
        interval: () => (paused ? 10_000 : 1000),
        timers,
    });
    poller.start();
    await tickle();
    assert.equal(queue[0].ms, 1000);
    paused = true;
    queue.shift().fn();
    await tickle();
    assert.equal(queue[0].ms, 10_000);
});
test("stop cancels the pending cycle", async () => {
    const { timers, queue } = manualTimers();
    const poller = new Poller({
        fetch: async () => "x",
        onData: () => { },
        interval: () => 1000,
        timers,
    });
    poller.start();
    await tickle();
    assert.equal(queue.length, 1);
    poller.stop();
    assert.equal(queue.length, 0);
});
