// Poll loop for one submitted job: steady interval while healthy,
// exponential backoff after failures, never tearing down what is
// already rendered.
import { fetchJob } from "./api.js";
const defaultSleep = (ms) => new Promise((resolve) => setTimeout(resolve, ms));
export async function pollJob(id, onUpdate, options = {}) {
    const interval = options.intervalMs ?? 500;
    const maxBackoff = options.maxBackoffMs ?? 5000;
    const sleep = options.sleep ?? defaultSleep;
    let delay = interval;
    for (;;) {
        try {
            const job = await fetchJob(id);
            delay = interval;
            onUpdate(job);
            if (job.state === "DONE")
                return job;
        }
        catch (error) {
            options.onError?.(error);
            delay = Math.min(delay * 2, maxBackoff);
        }
        await sleep(delay);
    }
}
