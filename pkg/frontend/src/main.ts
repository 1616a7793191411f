import { ApiClient } from "./api.js";
import { App } from "./app.js";

interface DashboardConfig {
	baseUrl: string;
	token: string;
	projectId: string;
	userId: string;
	pollIntervalMs?: number;
}

declare global {
	interface Window {
		TESTQUEST_CONFIG?: DashboardConfig;
	}
}

function bootstrap(): void {
	const host = document.getElementById("app");
	if (!host) {
		throw new Error("missing #app element");
	}
	const config = window.TESTQUEST_CONFIG;
	if (!config) {
		host.textContent =
			"Set window.TESTQUEST_CONFIG = { baseUrl, token, projectId, userId } before loading the dashboard.";
		return;
	}
	const client = new ApiClient({ baseUrl: config.baseUrl, token: config.token });
	const app = new App(host, client, {
		projectId: config.projectId,
		userId: config.userId,
		pollIntervalMs: config.pollIntervalMs,
	});
	void app.start();
}

if (document.readyState === "loading") {
	document.addEventListener("DOMContentLoaded", bootstrap);
} else {
	bootstrap();
}
