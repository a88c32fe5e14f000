// Typed client for the portal API; the UI talks to nothing else.

export type Answer = "YES" | "NO" | "MAYBE" | "TIMEOUT" | "ERROR";
export type JobState = "QUEUED" | "RUNNING" | "DONE";

export interface ToolInfo {
	id: string;
	name: string;
}

export interface CategoryGroup {
	label: string;
	tools: ToolInfo[];
}

export interface YearEntry {
	year: string;
	groups: CategoryGroup[];
}

export interface RegistryTree {
	years: YearEntry[];
}

export type ProblemSource =
	| { kind: "inline"; text: string }
	| { kind: "upload"; filename: string; text: string }
	| { kind: "database"; number: number };

export interface TimeoutPolicy {
	soft_s: number;
	term_s: number;
	kill_s: number;
}

export interface SubmitResponse {
	id: string;
	category: string;
	warnings: string[];
}

export interface RunResultView {
	tool_id: string;
	answer: Answer;
	output: string;
	exit_code: number | null;
	elapsed_s: number;
	terminated_by: string;
}

export interface JobView {
	id: string;
	state: JobState;
	current_tool_index: number | null;
	category: string;
	warnings: string[];
	selected_tools: string[];
	results: RunResultView[];
	created_at: string;
}

async function expectOk(response: Response): Promise<Response> {
	if (!response.ok) {
		let detail = String(response.status);
		try {
			const body = await response.json();
			if (body && body.detail !== undefined) {
				detail = `${response.status}: ${JSON.stringify(body.detail)}`;
			}
		} catch {
			// keep the bare status
		}
		throw new Error(`request failed (${detail})`);
	}
	return response;
}

export async function fetchRegistry(): Promise<RegistryTree> {
	return (await expectOk(await fetch("/api/registry"))).json();
}

export async function submitJob(
	source: ProblemSource,
	toolIds: string[],
	policy?: TimeoutPolicy,
): Promise<SubmitResponse> {
	const payload: Record<string, unknown> = {
		problem_source: source,
		tool_ids: toolIds,
	};
	if (policy) payload.timeout_policy = policy;
	const response = await fetch("/api/jobs", {
		method: "POST",
		headers: { "Content-Type": "application/json" },
		body: JSON.stringify(payload),
	});
	return (await expectOk(response)).json();
}

export async function fetchJob(id: string): Promise<JobView> {
	return (await expectOk(await fetch(`/api/jobs/${id}`))).json();
}
