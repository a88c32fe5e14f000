// Problem entry panel: a text box, a file upload, or a database number.
// Exactly one mode is active at a time; the payload is built on demand
// and the text is sent exactly as entered (no trimming or rewriting).

import type { ProblemSource } from "./api.js";

export type InputMode = "inline" | "upload" | "database";

function readFileText(file: File): Promise<string> {
	if (typeof file.text === "function") return file.text();
	// Older engines (and jsdom) lack Blob.text().
	return new Promise((resolve, reject) => {
		const reader = new FileReader();
		reader.onload = () => resolve(String(reader.result ?? ""));
		reader.onerror = () => reject(reader.error);
		reader.readAsText(file);
	});
}

export class InputPanel {
	private textArea: HTMLTextAreaElement;
	private fileInput: HTMLInputElement;
	private numberInput: HTMLInputElement;
	private panes: Record<InputMode, HTMLElement>;
	private mode: InputMode = "inline";

	constructor(root: HTMLElement, onChange: () => void = () => {}) {
		root.textContent = "";

		const modeRow = document.createElement("div");
		modeRow.className = "mode-row";
		const makeRadio = (mode: InputMode, text: string) => {
			const label = document.createElement("label");
			const radio = document.createElement("input");
			radio.type = "radio";
			radio.name = "problem-mode";
			radio.value = mode;
			radio.checked = mode === this.mode;
			radio.addEventListener("change", () => {
				this.setMode(mode);
				onChange();
			});
			label.appendChild(radio);
			label.appendChild(document.createTextNode(text));
			modeRow.appendChild(label);
		};
		makeRadio("inline", "text box");
		makeRadio("upload", "file upload");
		makeRadio("database", "database number");
		root.appendChild(modeRow);

		this.textArea = document.createElement("textarea");
		this.textArea.rows = 10;
		this.textArea.placeholder = "(VAR x)\n(RULES f(x) -> x)";
		this.textArea.addEventListener("input", onChange);

		this.fileInput = document.createElement("input");
		this.fileInput.type = "file";
		this.fileInput.addEventListener("change", onChange);

		this.numberInput = document.createElement("input");
		this.numberInput.type = "number";
		this.numberInput.min = "1";
		this.numberInput.placeholder = "500";
		this.numberInput.addEventListener("input", onChange);

		this.panes = {
			inline: this.pane("inline-pane", this.textArea),
			upload: this.pane("upload-pane", this.fileInput),
			database: this.pane("database-pane", this.numberInput),
		};
		for (const pane of Object.values(this.panes)) root.appendChild(pane);
		this.setMode("inline");
	}

	private pane(className: string, field: HTMLElement): HTMLElement {
		const pane = document.createElement("div");
		pane.className = `input-pane ${className}`;
		pane.appendChild(field);
		return pane;
	}

	private setMode(mode: InputMode): void {
		this.mode = mode;
		for (const [name, pane] of Object.entries(this.panes)) {
			pane.classList.toggle("hidden", name !== mode);
		}
	}

	currentMode(): InputMode {
		return this.mode;
	}

	/** Null when the active mode has no usable problem yet. */
	async currentSource(): Promise<ProblemSource | null> {
		if (this.mode === "inline") {
			if (this.textArea.value.trim() === "") return null;
			return { kind: "inline", text: this.textArea.value };
		}
		if (this.mode === "upload") {
			const file = this.fileInput.files?.[0];
			if (!file) return null;
			return { kind: "upload", filename: file.name, text: await readFileText(file) };
		}
		const number = Number(this.numberInput.value);
		if (!Number.isInteger(number) || number < 1) return null;
		return { kind: "database", number };
	}

	/** Quick synchronous check used to enable/disable the submit button. */
	hasProblem(): boolean {
		if (this.mode === "inline") return this.textArea.value.trim() !== "";
		if (this.mode === "upload") return (this.fileInput.files?.length ?? 0) > 0;
		const number = Number(this.numberInput.value);
		return Number.isInteger(number) && number >= 1;
	}
}
