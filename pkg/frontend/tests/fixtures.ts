import type { Challenge, LeaderboardRow, Quest, QuestStep } from "../src/types.js";

export function makeChallenge(overrides: Partial<Challenge> = {}): Challenge {
	return {
		id: "c1",
		kind: "LineCoverage",
		title: "Cover line 14 of com.ex.Alpha",
		points: 2,
		state: "Open",
		targetClass: "com.ex.Alpha",
		targetMethod: null,
		targetLine: 14,
		targetMutantId: null,
		targetSmellId: null,
		snippet: "int scaled = value * factor;",
		mutatedSnippet: null,
		createdBuild: 1,
		solvedBuild: null,
		rejectionReason: null,
		...overrides,
	};
}

export function makeMutationChallenge(overrides: Partial<Challenge> = {}): Challenge {
	return makeChallenge({
		id: "c2",
		kind: "Mutation",
		title: "Kill the mutant in com.ex.Alpha#add",
		points: 4,
		targetClass: null,
		targetLine: null,
		targetMutantId: "m1",
		snippet: "return a + b;",
		mutatedSnippet: "return a - b;",
		...overrides,
	});
}

export function makeStep(index: number, overrides: Partial<Challenge> = {}): QuestStep {
	return { ...makeChallenge({ id: `q1s${index}`, ...overrides }), index };
}

export function makeQuest(overrides: Partial<Quest> = {}): Quest {
	return {
		id: "q1",
		kind: "LineCoverage",
		state: "Active",
		currentIndex: 0,
		totalSteps: 3,
		points: 10,
		steps: [makeStep(0)],
		rejectionReason: null,
		...overrides,
	};
}

export function makeRow(overrides: Partial<LeaderboardRow> = {}): LeaderboardRow {
	return {
		subject: "alice",
		displayName: "Alice",
		avatarId: 1,
		score: 12,
		completedChallenges: 4,
		completedQuests: 1,
		completedAchievements: 2,
		...overrides,
	};
}
