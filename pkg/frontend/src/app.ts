import { ApiError, type ApiClient } from "./api.js";
import type { Challenge, LeaderboardRow, Quest } from "./types.js";
import { el } from "./format.js";
import { renderChallengeHistory, renderChallengeList } from "./views/challenges.js";
import { renderQuestHistory, renderQuestList } from "./views/quests.js";
import { renderLeaderboard } from "./views/leaderboard.js";
import { renderAchievements } from "./views/achievements.js";
import { renderSettings } from "./views/settings.js";
import { openRejectDialog } from "./views/rejectDialog.js";

export type Tab = "challenges" | "quests" | "leaderboard" | "achievements" | "settings";

const TABS: { id: Tab; label: string }[] = [
	{ id: "challenges", label: "Challenges" },
	{ id: "quests", label: "Quests" },
	{ id: "leaderboard", label: "Leaderboard" },
	{ id: "achievements", label: "Achievements" },
	{ id: "settings", label: "Settings" },
];

export interface AppOptions {
	projectId: string;
	userId: string;
	pollIntervalMs?: number;
}

/**
 * Dashboard shell.  Owns the tab bar, refreshes the active tab from
 * the API on a timer, and routes reject clicks through the dialog.
 * All data access goes through the injected ApiClient; the shell never
 * talks to the network directly.
 */
export class App {
	private readonly client: ApiClient;
	private readonly projectId: string;
	private readonly userId: string;
	private readonly pollIntervalMs: number;
	private readonly content: HTMLElement;
	private readonly status: HTMLElement;
	private tab: Tab = "challenges";
	private timer: ReturnType<typeof setInterval> | null = null;
	private leaderboardMode: "user" | "team" | "group" = "user";
	// undefined until the project listing has been consulted once
	private groupId: string | null | undefined;

	constructor(
		private readonly root: HTMLElement,
		client: ApiClient,
		options: AppOptions,
	) {
		this.client = client;
		this.projectId = options.projectId;
		this.userId = options.userId;
		this.pollIntervalMs = options.pollIntervalMs ?? 10_000;

		root.replaceChildren();
		const nav = el("nav", "tab-bar");
		for (const { id, label } of TABS) {
			const button = el("button", "tab-button", label);
			button.type = "button";
			button.dataset.tab = id;
			button.addEventListener("click", () => {
				void this.setTab(id);
			});
			nav.append(button);
		}
		root.append(nav);
		this.status = el("p", "app-status");
		this.status.hidden = true;
		root.append(this.status);
		this.content = el("main", "tab-content");
		root.append(this.content);
	}

	async start(): Promise<void> {
		await this.refresh();
		this.timer = setInterval(() => {
			void this.refresh();
		}, this.pollIntervalMs);
	}

	stop(): void {
		if (this.timer !== null) {
			clearInterval(this.timer);
			this.timer = null;
		}
	}

	get activeTab(): Tab {
		return this.tab;
	}

	async setTab(tab: Tab): Promise<void> {
		this.tab = tab;
		await this.refresh();
	}

	async refresh(): Promise<void> {
		try {
			await this.renderActiveTab();
			this.status.hidden = true;
		} catch (failure) {
			// Keep the stale view on screen; a poll that failed once may
			// succeed on the next tick.
			this.status.textContent =
				failure instanceof Error ? failure.message : "The dashboard could not be refreshed.";
			this.status.hidden = false;
		}
	}

	private async renderActiveTab(): Promise<void> {
		for (const button of this.root.querySelectorAll<HTMLButtonElement>(".tab-button")) {
			button.classList.toggle("active", button.dataset.tab === this.tab);
		}
		switch (this.tab) {
			case "challenges": {
				const collection = await this.client.challenges(this.projectId, this.userId);
				this.content.replaceChildren();
				const openPane = el("section", "open-challenges");
				renderChallengeList(openPane, collection.open, {
					onReject: (challenge) => this.askRejectChallenge(challenge),
				});
				const historyPane = el("section", "challenge-history");
				renderChallengeHistory(historyPane, collection.history);
				this.content.append(openPane, historyPane);
				break;
			}
			case "quests": {
				const collection = await this.client.quests(this.projectId, this.userId);
				this.content.replaceChildren();
				const activePane = el("section", "active-quests");
				renderQuestList(activePane, collection.active, {
					onReject: (quest) => this.askRejectQuest(quest),
				});
				const historyPane = el("section", "quest-history");
				renderQuestHistory(historyPane, collection.history);
				this.content.append(activePane, historyPane);
				break;
			}
			case "leaderboard": {
				await this.ensureGroupKnown();
				let rows: LeaderboardRow[];
				try {
					rows = await this.fetchLeaderboard();
				} catch (failure) {
					if (failure instanceof ApiError && failure.status === 403) {
						this.content.replaceChildren(
							el("p", "empty-note", "The leaderboard is disabled for this project."),
						);
						break;
					}
					throw failure;
				}
				this.content.replaceChildren();
				this.content.append(this.leaderboardModeToggle());
				const table = el("div", "leaderboard-table");
				const linkFor =
					this.leaderboardMode === "team"
						? undefined
						: (subject: string) =>
								`#/projects/${this.projectId}/users/${subject}/achievements`;
				renderLeaderboard(table, rows, linkFor);
				this.content.append(table);
				break;
			}
			case "achievements": {
				const collection = await this.client.achievements(this.projectId, this.userId);
				this.content.replaceChildren();
				renderAchievements(this.content, collection);
				break;
			}
			case "settings": {
				// the API exposes users only as a listing
				const users = await this.client.listUsers(this.projectId);
				const user = users.find((u) => u.id === this.userId);
				if (!user) {
					throw new Error(`user ${this.userId} is not registered in ${this.projectId}`);
				}
				this.content.replaceChildren();
				renderSettings(this.content, user, {
					onAvatar: (avatarId) => {
						void this.client
							.setAvatar(this.projectId, this.userId, avatarId)
							.then(() => this.refresh());
					},
					onIdentities: (gitNames) => {
						void this.client
							.setIdentities(this.projectId, this.userId, gitNames)
							.then(() => this.refresh());
					},
					onNotifications: (enabled) => {
						void this.client.setNotifications(this.projectId, this.userId, enabled);
					},
				});
				break;
			}
		}
	}

	private fetchLeaderboard(): Promise<LeaderboardRow[]> {
		if (this.leaderboardMode === "group" && this.groupId) {
			return this.client.groupLeaderboard(this.groupId);
		}
		return this.client.leaderboard(
			this.projectId,
			this.leaderboardMode === "team" ? "team" : "user",
		);
	}

	private async ensureGroupKnown(): Promise<void> {
		if (this.groupId !== undefined) {
			return;
		}
		try {
			const projects = await this.client.listProjects();
			this.groupId = projects.find((p) => p.id === this.projectId)?.groupId ?? null;
		} catch {
			this.groupId = null;
		}
	}

	private leaderboardModeToggle(): HTMLElement {
		const bar = el("div", "leaderboard-modes");
		const modes: { id: "user" | "team" | "group"; label: string }[] = [
			{ id: "user", label: "Users" },
			{ id: "team", label: "Teams" },
		];
		if (this.groupId) {
			modes.push({ id: "group", label: "Group" });
		}
		for (const { id, label } of modes) {
			const button = el("button", "mode-button", label);
			button.type = "button";
			button.dataset.mode = id;
			button.classList.toggle("active", this.leaderboardMode === id);
			button.addEventListener("click", () => {
				this.leaderboardMode = id;
				void this.refresh();
			});
			bar.append(button);
		}
		return bar;
	}

	private askRejectChallenge(challenge: Challenge): void {
		openRejectDialog(this.root, `"${challenge.title}"`, async (reason) => {
			await this.client.rejectChallenge(this.projectId, challenge.id, reason);
			await this.refresh();
		});
	}

	private askRejectQuest(quest: Quest): void {
		openRejectDialog(this.root, "this quest", async (reason) => {
			await this.client.rejectQuest(this.projectId, quest.id, reason);
			await this.refresh();
		});
	}
}
