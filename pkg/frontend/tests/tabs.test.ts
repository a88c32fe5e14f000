import { beforeEach, describe, expect, test } from "vitest";

import type { Answer, JobView, RunResultView } from "../src/api.js";
import {
	ANSWER_COLOR,
	PENDING_PALETTE,
	ResultTabs,
	TAB_PALETTE,
	relativeLuminance,
} from "../src/tabs.js";

function result(toolId: string, answer: Answer): RunResultView {
	return {
		tool_id: toolId,
		answer,
		output: `${answer}\n(mock details)\n\nTook 0.42 seconds\n`,
		exit_code: 0,
		elapsed_s: 0.42,
		terminated_by: answer === "TIMEOUT" ? "KILL_SIGNAL" : "EXIT",
	};
}

function jobView(tools: string[], results: RunResultView[], state: JobView["state"]): JobView {
	return {
		id: "job-1",
		state,
		current_tool_index: state === "RUNNING" ? results.length : null,
		category: "TRS",
		warnings: [],
		selected_tools: tools,
		results,
		created_at: "2026-01-01T00:00:00Z",
	};
}

const TOOLS = ["2024/trs/yes-tool", "2024/trs/no-tool", "2024/trs/slow-tool"];
const DONE_VIEW = jobView(
	TOOLS,
	[result(TOOLS[0], "YES"), result(TOOLS[1], "NO"), result(TOOLS[2], "TIMEOUT")],
	"DONE",
);

function hexToRgb(hex: string): string {
	const v = hex.replace("#", "");
	const n = (i: number) => parseInt(v.slice(i * 2, i * 2 + 2), 16);
	return `rgb(${n(0)}, ${n(1)}, ${n(2)})`;
}

let bar: HTMLElement;
let panel: HTMLElement;
let tabs: ResultTabs;

beforeEach(() => {
	document.body.innerHTML = "";
	bar = document.createElement("div");
	panel = document.createElement("div");
	document.body.append(bar, panel);
	tabs = new ResultTabs(bar, panel);
});

function buttons(): HTMLButtonElement[] {
	return Array.from(bar.querySelectorAll("button"));
}

describe("answer to color mapping", () => {
	test("matches the published semantics and is total", () => {
		expect(ANSWER_COLOR).toEqual({
			YES: "green",
			NO: "red",
			MAYBE: "blue",
			TIMEOUT: "blue",
			ERROR: "gray",
		});
		for (const answer of Object.keys(ANSWER_COLOR) as Answer[]) {
			expect(TAB_PALETTE[answer]).toBeDefined();
		}
	});

	test("every active shade is lighter than its base", () => {
		for (const { base, active } of [...Object.values(TAB_PALETTE), PENDING_PALETTE]) {
			expect(relativeLuminance(active)).toBeGreaterThan(relativeLuminance(base));
		}
	});
});

describe("result tabs", () => {
	test("renders one tab per tool, colored by verdict", () => {
		tabs.update(DONE_VIEW);
		const [yes, no, slow] = buttons();
		expect(buttons()).toHaveLength(3);
		expect(yes.classList.contains("answer-yes")).toBe(true);
		expect(no.classList.contains("answer-no")).toBe(true);
		expect(slow.classList.contains("answer-timeout")).toBe(true);
		// The first tab auto-activates, so it wears the lighter shade.
		expect(yes.style.backgroundColor).toBe(hexToRgb(TAB_PALETTE.YES.active));
		expect(no.style.backgroundColor).toBe(hexToRgb(TAB_PALETTE.NO.base));
		expect(slow.style.backgroundColor).toBe(hexToRgb(TAB_PALETTE.TIMEOUT.base));
	});

	test("exactly one tab is active once results exist", () => {
		tabs.update(DONE_VIEW);
		const active = buttons().filter((b) => b.classList.contains("active"));
		expect(active).toHaveLength(1);
		expect(active[0].dataset.toolId).toBe(TOOLS[0]);
	});

	test("clicking a tab activates it in a lighter shade and shows its output", () => {
		tabs.update(DONE_VIEW);
		const [yes, no] = buttons();
		no.click();
		expect(no.classList.contains("active")).toBe(true);
		expect(yes.classList.contains("active")).toBe(false);
		expect(no.style.backgroundColor).toBe(hexToRgb(TAB_PALETTE.NO.active));
		expect(relativeLuminance(TAB_PALETTE.NO.active)).toBeGreaterThan(
			relativeLuminance(TAB_PALETTE.NO.base),
		);
		const output = panel.querySelector("pre")?.textContent ?? "";
		expect(output.startsWith("NO")).toBe(true);
		expect(output).toMatch(/Took \d+\.\d\d seconds\n$/);
	});

	test("pending tools show a spinner tab until their result lands", () => {
		const running = jobView(TOOLS, [result(TOOLS[0], "YES")], "RUNNING");
		tabs.update(running);
		expect(buttons()).toHaveLength(3);
		expect(buttons()[1].classList.contains("pending")).toBe(true);
		expect(buttons()[2].style.backgroundColor).toBe(hexToRgb(PENDING_PALETTE.base));

		tabs.update(DONE_VIEW);
		expect(buttons()[1].classList.contains("pending")).toBe(false);
		expect(buttons()[1].classList.contains("answer-no")).toBe(true);
	});

	test("repeated updates are idempotent and keep the active tab", () => {
		tabs.update(DONE_VIEW);
		buttons()[2].click();
		tabs.update(DONE_VIEW);
		tabs.update(DONE_VIEW);
		expect(buttons()).toHaveLength(3);
		expect(tabs.activeTool()).toBe(TOOLS[2]);
		expect(buttons()[2].classList.contains("active")).toBe(true);
	});

	test("error answers get the gray extension color", () => {
		const view = jobView(
			[TOOLS[0], TOOLS[1]],
			[result(TOOLS[0], "YES"), result(TOOLS[1], "ERROR")],
			"DONE",
		);
		tabs.update(view);
		const errorTab = buttons()[1];
		expect(errorTab.classList.contains("answer-error")).toBe(true);
		expect(errorTab.style.backgroundColor).toBe(hexToRgb(TAB_PALETTE.ERROR.base));
		expect(ANSWER_COLOR.ERROR).toBe("gray");
	});
});
