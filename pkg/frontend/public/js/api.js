// Typed client for the portal API; the UI talks to nothing else.
async function expectOk(response) {
    if (!response.ok) {
        let detail = String(response.status);
        try {
            const body = await response.json();
            if (body && body.detail !== undefined) {
                detail = `${response.status}: ${JSON.stringify(body.detail)}`;
            }
        }
        catch {
            // keep the bare status
        }
        throw new Error(`request failed (${detail})`);
    }
    return response;
}
export async function fetchRegistry() {
    return (await expectOk(await fetch("/api/registry"))).json();
}
export async function submitJob(source, toolIds, policy) {
    const payload = {
        problem_source: source,
        tool_ids: toolIds,
    };
    if (policy)
        payload.timeout_policy = policy;
    const response = await fetch("/api/jobs", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
    });
    return (await expectOk(response)).json();
}
export async function fetchJob(id) {
    return (await expectOk(await fetch(`/api/jobs/${id}`))).json();
}
