// Shapes of the JSON payloads served by the testquest HTTP API.
// Field names follow the wire format verbatim, so keep them camelCase.

export interface ProjectSummary {
	id: string;
	groupId: string | null;
	leaderboardEnabled: boolean;
	statisticsEnabled: boolean;
	buildCounter: number;
}

export type ChallengeKind =
	| "Build"
	| "Test"
	| "ClassCoverage"
	| "MethodCoverage"
	| "LineCoverage"
	| "Mutation"
	| "Smell";

export type ChallengeState = "Open" | "Solved" | "Rejected" | "Expired" | "Dormant";

export interface Challenge {
	id: string;
	kind: ChallengeKind;
	title: string;
	points: number;
	state: ChallengeState;
	targetClass: string | null;
	targetMethod: string | null;
	targetLine: number | null;
	targetMutantId: string | null;
	targetSmellId: string | null;
	snippet: string | null;
	mutatedSnippet: string | null;
	createdBuild: number;
	solvedBuild: number | null;
	rejectionReason: string | null;
}

export interface ChallengeCollection {
	open: Challenge[];
	history: Challenge[];
}

// A quest step is a challenge plus its position in the quest.  The API
// omits steps that are still sealed, so `steps` may be shorter than
// `totalSteps`.
export interface QuestStep extends Challenge {
	index: number;
}

export interface Quest {
	id: string;
	kind: string;
	state: string;
	currentIndex: number;
	totalSteps: number;
	points: number;
	steps: QuestStep[];
	rejectionReason: string | null;
}

export interface QuestCollection {
	active: Quest[];
	history: Quest[];
}

export interface Achievement {
	id: string;
	title: string;
	description: string;
	secret: boolean;
	scope: string;
	completedDate?: number;
}

// Unearned secret achievements never appear in either list; the server
// discloses nothing about them beyond how many are still hidden.
export interface AchievementCollection {
	completed: Achievement[];
	unsolved: Achievement[];
	secretCount: number;
}

export interface LeaderboardRow {
	subject: string;
	displayName: string;
	avatarId: number;
	score: number;
	completedChallenges: number;
	completedQuests: number;
	completedAchievements: number;
}

export interface UserProfile {
	id: string;
	displayName: string;
	avatarId: number;
	notificationsEnabled: boolean;
	score: number;
	completedChallenges: number;
	completedQuests: number;
	completedAchievements: number;
	team: string | null;
}

export interface FeedEvent {
	eventId: number;
	buildId: number;
	userId: string;
	type: string;
	payload: Record<string, unknown>;
	timestamp: number;
}
