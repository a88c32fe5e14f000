// Dismissible banners: category warnings from a submission are advisory
// (they never block anything), and poll failures must not destroy
// results already on screen.

export function showWarningBanner(container: HTMLElement, message: string): HTMLElement {
	return addBanner(container, "warning", message);
}

export function showErrorBanner(
	container: HTMLElement,
	message: string,
	onRetry?: () => void,
): HTMLElement {
	const banner = addBanner(container, "error", message);
	if (onRetry) {
		const retry = document.createElement("button");
		retry.type = "button";
		retry.className = "retry";
		retry.textContent = "retry";
		retry.addEventListener("click", () => {
			banner.remove();
			onRetry();
		});
		banner.appendChild(retry);
	}
	return banner;
}

export function clearBanners(container: HTMLElement): void {
	container.textContent = "";
}

function addBanner(container: HTMLElement, kind: string, message: string): HTMLElement {
	const banner = document.createElement("div");
	banner.className = `banner ${kind}`;
	const text = document.createElement("span");
	text.textContent = message;
	const dismiss = document.createElement("button");
	dismiss.type = "button";
	dismiss.className = "dismiss";
	dismiss.textContent = "×";
	dismiss.addEventListener("click", () => banner.remove());
	banner.appendChild(text);
	banner.appendChild(dismiss);
	container.appendChild(banner);
	return banner;
}
