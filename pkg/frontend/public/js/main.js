import { fetchRegistry, submitJob } from "./api.js";
import { clearBanners, showErrorBanner, showWarningBanner } from "./banners.js";
import { InputPanel } from "./input.js";
import { pollJob } from "./poll.js";
import { ResultTabs } from "./tabs.js";
import { ToolTree } from "./tree.js";
function byId(id) {
    const element = document.getElementById(id);
    if (!element)
        throw new Error(`missing #${id}`);
    return element;
}
async function init() {
    const banners = byId("banners");
    const submitButton = byId("submit");
    let tree = null;
    const refreshSubmitState = () => {
        submitButton.disabled = !(tree && tree.selectedIds().length > 0 && panel.hasProblem());
    };
    const panel = new InputPanel(byId("input-pane"), refreshSubmitState);
    const loadRegistry = async () => {
        try {
            const registry = await fetchRegistry();
            tree = new ToolTree(byId("tool-tree"), registry, refreshSubmitState);
        }
        catch (error) {
            showErrorBanner(banners, `could not load the tool menu (${error})`, loadRegistry);
        }
        refreshSubmitState();
    };
    await loadRegistry();
    submitButton.addEventListener("click", async () => {
        if (!tree)
            return;
        const source = await panel.currentSource();
        const toolIds = tree.selectedIds();
        if (!source || toolIds.length === 0)
            return;
        clearBanners(banners);
        submitButton.disabled = true;
        try {
            const submitted = await submitJob(source, toolIds);
            for (const warning of submitted.warnings) {
                showWarningBanner(banners, warning);
            }
            const tabs = new ResultTabs(byId("tab-bar"), byId("tab-panel"));
            await pollJob(submitted.id, (job) => tabs.update(job), {
                onError: (error) => showErrorBanner(banners, `poll failed, retrying (${error})`),
            });
        }
        catch (error) {
            showErrorBanner(banners, `submission failed (${error})`);
        }
        finally {
            refreshSubmitState();
        }
    });
}
document.addEventListener("DOMContentLoaded", () => {
    void init();
});
