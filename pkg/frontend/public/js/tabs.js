// Color-coded result tabs: green means the tool answered yes, red no,
// blue a maybe answer or a timeout; errors get gray.  The active tab is
// drawn in a lighter shade of its verdict color and its output (which
// ends with the harness timing line) fills the panel.
export const ANSWER_COLOR = {
    YES: "green",
    NO: "red",
    MAYBE: "blue",
    TIMEOUT: "blue",
    ERROR: "gray",
};
export const TAB_PALETTE = {
    YES: { base: "#2e7d32", active: "#81c784" },
    NO: { base: "#c62828", active: "#ef9a9a" },
    MAYBE: { base: "#1565c0", active: "#90caf9" },
    TIMEOUT: { base: "#1565c0", active: "#90caf9" },
    ERROR: { base: "#616161", active: "#bdbdbd" },
};
export const PENDING_PALETTE = { base: "#9e9e9e", active: "#e0e0e0" };
/** WCAG-style relative luminance of a #rrggbb color, 0 (black) to 1. */
export function relativeLuminance(hex) {
    const value = hex.replace("#", "");
    const channel = (i) => {
        const c = parseInt(value.slice(i * 2, i * 2 + 2), 16) / 255;
        return c <= 0.03928 ? c / 12.92 : ((c + 0.055) / 1.055) ** 2.4;
    };
    return 0.2126 * channel(0) + 0.7152 * channel(1) + 0.0722 * channel(2);
}
export class ResultTabs {
    constructor(bar, panel) {
        this.tabs = new Map();
        this.order = [];
        this.activeId = null;
        this.bar = bar;
        this.panel = panel;
        bar.textContent = "";
        panel.textContent = "";
    }
    /** Apply a poll response; idempotent, so repeated views are harmless. */
    update(job) {
        job.selected_tools.forEach((toolId, index) => {
            let entry = this.tabs.get(toolId);
            if (!entry) {
                const button = document.createElement("button");
                button.type = "button";
                button.className = "tab";
                button.dataset.toolId = toolId;
                button.textContent = toolId.split("/").pop() ?? toolId;
                button.addEventListener("click", () => this.activate(toolId));
                this.bar.appendChild(button);
                entry = { button, result: null };
                this.tabs.set(toolId, entry);
                this.order.push(toolId);
            }
            entry.result = job.results[index] ?? null;
        });
        if (this.activeId === null && job.results.length > 0) {
            this.activeId = this.order[0];
        }
        this.repaint();
    }
    activate(toolId) {
        if (!this.tabs.has(toolId))
            return;
        this.activeId = toolId;
        this.repaint();
    }
    activeTool() {
        return this.activeId;
    }
    repaint() {
        for (const [toolId, entry] of this.tabs) {
            const isActive = toolId === this.activeId;
            const palette = entry.result ? TAB_PALETTE[entry.result.answer] : PENDING_PALETTE;
            entry.button.classList.toggle("active", isActive);
            entry.button.classList.toggle("pending", entry.result === null);
            entry.button.className = entry.button.className
                .split(" ")
                .filter((cls) => !cls.startsWith("answer-"))
                .join(" ");
            if (entry.result) {
                entry.button.classList.add(`answer-${entry.result.answer.toLowerCase()}`);
            }
            entry.button.style.backgroundColor = isActive ? palette.active : palette.base;
            entry.button.style.color = isActive ? "#1b1b1b" : "#ffffff";
        }
        this.renderPanel();
    }
    renderPanel() {
        this.panel.textContent = "";
        if (this.activeId === null)
            return;
        const entry = this.tabs.get(this.activeId);
        if (!entry)
            return;
        if (entry.result === null) {
            const note = document.createElement("p");
            note.className = "pending-note";
            note.textContent = "still running…";
            this.panel.appendChild(note);
            return;
        }
        const output = document.createElement("pre");
        output.className = "tool-output";
        output.textContent = entry.result.output;
        this.panel.appendChild(output);
    }
}
