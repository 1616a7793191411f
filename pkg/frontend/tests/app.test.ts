import { afterEach, beforeEach, describe, expect, test, vi } from "vitest";
import { ApiError, type ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { makeChallenge, makeQuest, makeRow } from "./fixtures.js";

interface StubClient {
	listProjects: ReturnType<typeof vi.fn>;
	challenges: ReturnType<typeof vi.fn>;
	quests: ReturnType<typeof vi.fn>;
	leaderboard: ReturnType<typeof vi.fn>;
	groupLeaderboard: ReturnType<typeof vi.fn>;
	achievements: ReturnType<typeof vi.fn>;
	listUsers: ReturnType<typeof vi.fn>;
	rejectChallenge: ReturnType<typeof vi.fn>;
	rejectQuest: ReturnType<typeof vi.fn>;
	setAvatar: ReturnType<typeof vi.fn>;
	setIdentities: ReturnType<typeof vi.fn>;
	setNotifications: ReturnType<typeof vi.fn>;
}

function stubClient(): StubClient {
	return {
		listProjects: vi.fn().mockResolvedValue([
			{
				id: "demo",
				groupId: null,
				leaderboardEnabled: true,
				statisticsEnabled: true,
				buildCounter: 1,
			},
		]),
		challenges: vi.fn().mockResolvedValue({ open: [makeChallenge()], history: [] }),
		quests: vi.fn().mockResolvedValue({ active: [makeQuest()], history: [] }),
		leaderboard: vi.fn().mockResolvedValue([makeRow()]),
		groupLeaderboard: vi.fn().mockResolvedValue([makeRow()]),
		achievements: vi.fn().mockResolvedValue({ completed: [], unsolved: [], secretCount: 3 }),
		listUsers: vi.fn().mockResolvedValue([
			{
				id: "alice",
				displayName: "Alice",
				avatarId: 1,
				notificationsEnabled: true,
				score: 0,
				completedChallenges: 0,
				completedQuests: 0,
				completedAchievements: 0,
				team: null,
			},
		]),
		rejectChallenge: vi.fn().mockResolvedValue(makeChallenge({ state: "Rejected" })),
		rejectQuest: vi.fn().mockResolvedValue(makeQuest({ state: "Rejected" })),
		setAvatar: vi.fn().mockResolvedValue({}),
		setIdentities: vi.fn().mockResolvedValue({}),
		setNotifications: vi.fn().mockResolvedValue({}),
	};
}

let root: HTMLElement;
let stub: StubClient;
let app: App;

beforeEach(() => {
	document.body.innerHTML = "";
	root = document.createElement("div");
	document.body.append(root);
	stub = stubClient();
	app = new App(root, stub as unknown as ApiClient, {
		projectId: "demo",
		userId: "alice",
	});
});

afterEach(() => {
	app.stop();
	vi.useRealTimers();
});

describe("app shell", () => {
	test("start loads the challenge tab and then polls", async () => {
		vi.useFakeTimers();
		await app.start();
		expect(stub.challenges).toHaveBeenCalledTimes(1);
		expect(root.querySelector(".challenge-card")).not.toBeNull();

		await vi.advanceTimersByTimeAsync(10_000);
		expect(stub.challenges).toHaveBeenCalledTimes(2);

		app.stop();
		await vi.advanceTimersByTimeAsync(30_000);
		expect(stub.challenges).toHaveBeenCalledTimes(2);
	});

	test("switching tabs fetches that tab's data", async () => {
		await app.refresh();
		await app.setTab("leaderboard");

		expect(stub.leaderboard).toHaveBeenCalledWith("demo", "user");
		expect(root.querySelector(".leaderboard")).not.toBeNull();
		const active = root.querySelector(".tab-button.active") as HTMLElement;
		expect(active.dataset.tab).toBe("leaderboard");
	});

	test("the teams toggle refetches in team mode", async () => {
		await app.setTab("leaderboard");
		(root.querySelector('[data-mode="team"]') as HTMLButtonElement).click();

		await vi.waitFor(() => {
			expect(stub.leaderboard).toHaveBeenCalledWith("demo", "team");
		});
	});

	test("a group toggle appears only when the project belongs to a group", async () => {
		await app.setTab("leaderboard");
		expect(root.querySelector('[data-mode="group"]')).toBeNull();

		stub.listProjects.mockResolvedValue([
			{
				id: "demo",
				groupId: "g1",
				leaderboardEnabled: true,
				statisticsEnabled: true,
				buildCounter: 1,
			},
		]);
		const grouped = new App(root, stub as unknown as ApiClient, {
			projectId: "demo",
			userId: "alice",
		});
		await grouped.setTab("leaderboard");
		(root.querySelector('[data-mode="group"]') as HTMLButtonElement).click();

		await vi.waitFor(() => {
			expect(stub.groupLeaderboard).toHaveBeenCalledWith("g1");
		});
		grouped.stop();
	});

	test("a disabled leaderboard renders an explanation instead of a table", async () => {
		stub.leaderboard.mockRejectedValue(new ApiError(403, "leaderboard is disabled"));
		await app.setTab("leaderboard");

		expect(root.querySelector(".leaderboard")).toBeNull();
		expect(root.querySelector(".empty-note")!.textContent).toBe(
			"The leaderboard is disabled for this project.",
		);
	});

	test("a reject flows through the dialog to the API", async () => {
		await app.refresh();
		(root.querySelector(".challenge-header") as HTMLButtonElement).click();
		(root.querySelector(".reject-button") as HTMLButtonElement).click();

		const reason = root.querySelector(".reject-reason") as HTMLTextAreaElement;
		reason.value = "generated code";
		(root.querySelector(".dialog-confirm") as HTMLButtonElement).click();
		await vi.waitFor(() => {
			expect(stub.rejectChallenge).toHaveBeenCalledWith("demo", "c1", "generated code");
		});
	});

	test("a failed poll shows the error banner and keeps polling possible", async () => {
		stub.challenges.mockRejectedValueOnce(new Error("boom"));
		await app.refresh();

		const status = root.querySelector(".app-status") as HTMLElement;
		expect(status.hidden).toBe(false);
		expect(status.textContent).toBe("boom");

		await app.refresh();
		expect(status.hidden).toBe(true);
		expect(root.querySelector(".challenge-card")).not.toBeNull();
	});

	test("the settings tab saves an avatar pick", async () => {
		await app.setTab("settings");
		const option = root.querySelector('[data-avatar-id="7"]') as HTMLButtonElement;
		option.click();

		await vi.waitFor(() => {
			expect(stub.setAvatar).toHaveBeenCalledWith("demo", "alice", 7);
		});
	});
});
