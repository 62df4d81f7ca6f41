const realTimers = {
    schedule: (fn, ms) => setTimeout(fn, ms),
    cancel: (handle) => clearTimeout(handle),
};
/** Single-flight polling loop with exponential backoff on failures. */
export class Poller {
    opts;
    timers;
    handle = null;
    running = false;
    inFlight = false;
    failures = 0;
    constructor(opts) {
        this.opts = opts;
        this.timers = opts.timers ?? realTimers;
    }
    nextDelay() {
        const base = this.opts.interval();
        if (this.failures === 0)
            return base;
        const backoff = base * 2 ** this.failures;
        return Math.min(backoff, this.opts.maxBackoffMs ?? 30_000);
    }
    /** One poll cycle; exposed for tests and for poke-after-action. */
    async tick() {
        if (this.inFlight)
            return;
        this.inFlight = true;
        try {
            const data = await this.opts.fetch();
            this.failures = 0;
            this.opts.onData(data);
        }
        catch (error) {
            this.failures += 1;
            this.opts.onStale?.(error, this.failures);
        }
        finally {
            this.inFlight = false;
        }
    }
    start() {
        if (this.running)
            return;
        this.running = true;
        const cycle = async () => {
            if (!this.running)
                return;
            await this.tick();
            if (!this.running)
                return;
            this.handle = this.timers.schedule(cycle, this.nextDelay());
        };
        void cycle();
    }
    stop() {
        this.running = false;
        if (this.handle !== null) {
            this.timers.cancel(this.handle);
            this.handle = null;
        }
    }
}
