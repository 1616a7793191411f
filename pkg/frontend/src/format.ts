import type { ChallengeKind } from "./types.js";

const KIND_LABELS: Record<ChallengeKind, string> = {
	Build: "Build",
	Test: "Test",
	ClassCoverage: "Class coverage",
	MethodCoverage: "Method coverage",
	LineCoverage: "Line coverage",
	Mutation: "Mutation",
	Smell: "Smell",
};

export function kindLabel(kind: string): string {
	return KIND_LABELS[kind as ChallengeKind] ?? kind;
}

export function pointsLabel(points: number): string {
	return points === 1 ? "1 point" : `${points} points`;
}

/** CSS modifier for a challenge or quest state chip. */
export function stateClass(state: string): string {
	return `state-${state.toLowerCase()}`;
}

export function formatTimestamp(epochSeconds: number): string {
	return new Date(epochSeconds * 1000).toISOString().replace("T", " ").slice(0, 16);
}

export function el<K extends keyof HTMLElementTagNameMap>(
	tag: K,
	className?: string,
	text?: string,
): HTMLElementTagNameMap[K] {
	const node = document.createElement(tag);
	if (className) {
		node.className = className;
	}
	if (text !== undefined) {
		node.textContent = text;
	}
	return node;
}
