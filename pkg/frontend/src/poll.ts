// Poll loop for one submitted job: steady interval while healthy,
// exponential backoff after failures, never tearing down what is
// already rendered.

import { fetchJob } from "./api.js";
import type { JobView } from "./api.js";

export interface PollOptions {
	intervalMs?: number;
	maxBackoffMs?: number;
	onError?: (error: unknown) => void;
	sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function pollJob(
	id: string,
	onUpdate: (job: JobView) => void,
	options: PollOptions = {},
): Promise<JobView> {
	const interval = options.intervalMs ?? 500;
	const maxBackoff = options.maxBackoffMs ?? 5000;
	const sleep = options.sleep ?? defaultSleep;
	let delay = interval;
	for (;;) {
		try {
			const job = await fetchJob(id);
			delay = interval;
			onUpdate(job);
			if (job.state === "DONE") return job;
		} catch (error) {
			options.onError?.(error);
			delay = Math.min(delay * 2, maxBackoff);
		}
		await sleep(delay);
	}
}
