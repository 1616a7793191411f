import type {
	AchievementCollection,
	Challenge,
	ChallengeCollection,
	FeedEvent,
	LeaderboardRow,
	ProjectSummary,
	Quest,
	QuestCollection,
	UserProfile,
} from "./types.js";

export interface ApiConfig {
	baseUrl: string;
	token: string;
}

export class ApiError extends Error {
	constructor(
		readonly status: number,
		message: string,
	) {
		super(message);
		this.name = "ApiError";
	}
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin typed wrapper around the dashboard endpoints.  Every request
 * carries the shared token in the X-Api-Token header; the server
 * rejects anything else with a 401.
 */
export class ApiClient {
	private readonly baseUrl: string;
	private readonly token: string;
	private readonly fetchImpl: FetchLike;

	constructor(config: ApiConfig, fetchImpl?: FetchLike) {
		this.baseUrl = config.baseUrl.replace(/\/+$/, "");
		this.token = config.token;
		this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
	}

	private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
		const headers: Record<string, string> = { "X-Api-Token": this.token };
		const init: RequestInit = { method, headers };
		if (body !== undefined) {
			headers["Content-Type"] = "application/json";
			init.body = JSON.stringify(body);
		}
		const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
		if (!response.ok) {
			throw new ApiError(response.status, await describeFailure(response));
		}
		return (await response.json()) as T;
	}

	listProjects(): Promise<ProjectSummary[]> {
		return this.request("GET", "/projects");
	}

	listUsers(projectId: string): Promise<UserProfile[]> {
		return this.request("GET", `/projects/${projectId}/users`);
	}

	leaderboard(projectId: string, mode: "user" | "team" = "user"): Promise<LeaderboardRow[]> {
		return this.request("GET", `/projects/${projectId}/leaderboard?mode=${mode}`);
	}

	groupLeaderboard(groupId: string): Promise<LeaderboardRow[]> {
		return this.request("GET", `/groups/${groupId}/leaderboard`);
	}

	challenges(projectId: string, userId: string): Promise<ChallengeCollection> {
		return this.request("GET", `/projects/${projectId}/users/${userId}/challenges`);
	}

	quests(projectId: string, userId: string): Promise<QuestCollection> {
		return this.request("GET", `/projects/${projectId}/users/${userId}/quests`);
	}

	achievements(projectId: string, userId: string): Promise<AchievementCollection> {
		return this.request("GET", `/projects/${projectId}/users/${userId}/achievements`);
	}

	events(projectId: string, since?: number): Promise<FeedEvent[]> {
		const query = since === undefined ? "" : `?since=${since}`;
		return this.request("GET", `/projects/${projectId}/events${query}`);
	}

	rejectChallenge(projectId: string, challengeId: string, reason: string): Promise<Challenge> {
		return this.request("POST", `/projects/${projectId}/challenges/${challengeId}/reject`, {
			reason,
		});
	}

	rejectQuest(projectId: string, questId: string, reason: string): Promise<Quest> {
		return this.request("POST", `/projects/${projectId}/quests/${questId}/reject`, { reason });
	}

	setAvatar(projectId: string, userId: string, avatarId: number): Promise<UserProfile> {
		return this.request("POST", `/projects/${projectId}/users/${userId}/avatar`, { avatarId });
	}

	setIdentities(projectId: string, userId: string, gitNames: string[]): Promise<UserProfile> {
		return this.request("POST", `/projects/${projectId}/users/${userId}/identities`, {
			gitNames,
		});
	}

	setNotifications(projectId: string, userId: string, enabled: boolean): Promise<UserProfile> {
		return this.request("POST", `/projects/${projectId}/users/${userId}/notifications`, {
			enabled,
		});
	}
}

async function describeFailure(response: Response): Promise<string> {
	try {
		const payload = (await response.json()) as { detail?: unknown };
		if (typeof payload.detail === "string" && payload.detail.length > 0) {
			return payload.detail;
		}
	} catch {
		// body was not JSON, fall through to the generic message
	}
	return `HTTP error! status: ${response.status}`;
}
