// Foldable tool-selection tree with group checkboxes.  Checking a group
// (a year or a category) checks every tool below it; a group whose tools
// are only partly checked shows the indeterminate state.

import type { RegistryTree } from "./api.js";

export class ToolTree {
	private root: HTMLElement;
	private onChange: () => void;

	constructor(root: HTMLElement, tree: RegistryTree, onChange: () => void = () => {}) {
		this.root = root;
		this.onChange = onChange;
		this.render(tree);
	}

	/** Checked tool ids, in tree (document) order regardless of click order. */
	selectedIds(): string[] {
		return this.leafBoxes()
			.filter((box) => box.checked)
			.map((box) => box.dataset.toolId as string);
	}

	private leafBoxes(scope: ParentNode = this.root): HTMLInputElement[] {
		return Array.from(scope.querySelectorAll<HTMLInputElement>("input[data-tool-id]"));
	}

	private render(tree: RegistryTree): void {
		this.root.textContent = "";
		if (tree.years.length === 0) {
			const notice = document.createElement("p");
			notice.className = "empty-notice";
			notice.textContent = "no tools registered";
			this.root.appendChild(notice);
			return;
		}
		const list = document.createElement("ul");
		list.className = "tool-tree";
		for (const year of tree.years) {
			const groups = year.groups.map((group) => {
				const leaves = group.tools.map((tool) => {
					const item = document.createElement("li");
					item.className = "leaf";
					const label = document.createElement("label");
					const box = document.createElement("input");
					box.type = "checkbox";
					box.dataset.toolId = tool.id;
					box.addEventListener("change", () => this.refreshGroups());
					label.appendChild(box);
					label.appendChild(document.createTextNode(tool.name));
					item.appendChild(label);
					return item;
				});
				return this.groupNode(`${year.year}/${group.label}`, group.label, leaves);
			});
			list.appendChild(this.groupNode(year.year, year.year, groups));
		}
		this.root.appendChild(list);
	}

	private groupNode(key: string, labelText: string, children: HTMLLIElement[]): HTMLLIElement {
		const item = document.createElement("li");
		item.className = "group";
		const row = document.createElement("div");
		row.className = "group-row";

		const toggle = document.createElement("button");
		toggle.type = "button";
		toggle.className = "fold-toggle";
		toggle.textContent = "▾";

		const box = document.createElement("input");
		box.type = "checkbox";
		box.dataset.group = key;

		const label = document.createElement("span");
		label.className = "group-label";
		label.textContent = labelText;

		const childList = document.createElement("ul");
		for (const child of children) childList.appendChild(child);

		toggle.addEventListener("click", () => {
			const collapsed = childList.classList.toggle("collapsed");
			toggle.textContent = collapsed ? "▸" : "▾";
		});
		box.addEventListener("change", () => {
			for (const leaf of this.leafBoxes(item)) leaf.checked = box.checked;
			this.refreshGroups();
		});

		row.appendChild(toggle);
		row.appendChild(box);
		row.appendChild(label);
		item.appendChild(row);
		item.appendChild(childList);
		return item;
	}

	private refreshGroups(): void {
		for (const box of this.root.querySelectorAll<HTMLInputElement>("input[data-group]")) {
			const item = box.closest("li");
			if (!item) continue;
			const leaves = this.leafBoxes(item);
			const checked = leaves.filter((leaf) => leaf.checked).length;
			box.checked = leaves.length > 0 && checked === leaves.length;
			box.indeterminate = checked > 0 && checked < leaves.length;
		}
		this.onChange();
	}
}
