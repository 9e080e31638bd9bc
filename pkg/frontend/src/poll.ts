import type { ApiClient } from './api';
import type { JobStatus } from './types';

export interface PollOptions {
  /** Starting interval; jobs run tens of seconds so 1s is plenty. */
  intervalMs?: number;
  /** Each poll multiplies the interval by this factor, capped below. */
  backoffFactor?: number;
  maxIntervalMs?: number;
  /** Give up after this many polls (0 = unbounded). */
  maxPolls?: number;
  /** Called after every poll, e.g. to update a progress bar. */
  onUpdate?: (status: JobStatus) => void;
}

export class JobFailedError extends Error {
  constructor(public readonly status: JobStatus) {
    super(status.error || 'job failed');
  }
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

/**
 * Poll a job until it reaches a terminal state. Resolves with the final
 * status on done, rejects with JobFailedError on failed.
 */
export async function pollJob(
  client: ApiClient,
  jobId: string,
  opts: PollOptions = {},
): Promise<JobStatus> {
  const {
    intervalMs = 1000,
    backoffFactor = 1.5,
    maxIntervalMs = 10000,
    maxPolls = 0,
    onUpdate,
  } = opts;
  let interval = intervalMs;
  let polls = 0;
  for (;;) {
    const status = await client.getJob(jobId);
    polls += 1;
    onUpdate?.(status);
    if (status.state === 'done') return status;
    if (status.state === 'failed') throw new JobFailedError(status);
    if (maxPolls > 0 && polls >= maxPolls) {
      throw new Error(`job ${jobId} still ${status.state} after ${polls} polls`);
    }
    await sleep(interval);
    interval = Math.min(interval * backoffFactor, maxIntervalMs);
  }
}
