export interface PollerTimers {
  schedule(fn: () => void, ms: number): unknown;
  cancel(handle: unknown): void;
}

const realTimers: PollerTimers = {
  schedule: (fn, ms) => setTimeout(fn, ms),
  cancel: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

export interface PollerOptions<T> {
  fetch: () => Promise<T>;
  onData: (data: T) => void;
  /** Called on every failed poll with the consecutive-failure count;
   * the view shows a stale-data banner and polling continues. */
  onStale?: (error: unknown, failures: number) => void;
  /** Base interval; re-evaluated every cycle (1s running, 10s paused). */
  interval: () => number;
  maxBackoffMs?: number;
  timers?: PollerTimers;
}

/** Single-flight polling loop with exponential backoff on failures. */
export class Poller<T> {
  private timers: PollerTimers;
  private handle: unknown = null;
  private running = false;
  private inFlight = false;
  failures = 0;

  constructor(private opts: PollerOptions<T>) {
    this.timers = opts.timers ?? realTimers;
  }

  nextDelay(): number {
    const base = this.opts.interval();
    if (this.failures === 0) return base;
    const backoff = base * 2 ** this.failures;
    return Math.min(backoff, this.opts.maxBackoffMs ?? 30_000);
  }

  /** One poll cycle; exposed for tests and for poke-after-action. */
  async tick(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      const data = await this.opts.fetch();
      this.failures = 0;
      this.opts.onData(data);
    } catch (error) {
      this.failures += 1;
      this.opts.onStale?.(error, this.failures);
    } finally {
      this.inFlight = false;
    }
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    const cycle = async () => {
      if (!this.running) return;
      await this.tick();
      if (!this.running) return;
      this.handle = this.timers.schedule(cycle, this.nextDelay());
    };
    void cycle();
  }

  stop(): void {
    this.running = false;
    if (this.handle !== null) {
      this.timers.cancel(this.handle);
      this.handle = null;
    }
  }
}
