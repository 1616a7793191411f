import type { Challenge } from "../types.js";
import { el, kindLabel, pointsLabel, stateClass } from "../format.js";

export interface ChallengeHandlers {
	onReject(challenge: Challenge): void;
}

/**
 * Renders the open challenge list as expandable cards.  A card starts
 * collapsed; clicking its header toggles a detail body that carries the
 * target description, the code snippet, and the reject control.
 */
export function renderChallengeList(
	root: HTMLElement,
	challenges: Challenge[],
	handlers: ChallengeHandlers,
): void {
	root.replaceChildren();
	if (challenges.length === 0) {
		root.append(
			el(
				"p",
				"empty-note",
				"No open challenges. If you expected some, check that your git names under Settings match your commits, then push a build.",
			),
		);
		return;
	}
	for (const challenge of challenges) {
		root.append(challengeCard(challenge, handlers));
	}
}

export function renderChallengeHistory(root: HTMLElement, history: Challenge[]): void {
	root.replaceChildren();
	for (const challenge of history) {
		const row = el("div", "history-row");
		row.append(
			el("span", `state-chip ${stateClass(challenge.state)}`, challenge.state),
			el("span", "history-title", challenge.title),
		);
		if (challenge.rejectionReason) {
			row.append(el("span", "history-reason", challenge.rejectionReason));
		}
		root.append(row);
	}
}

function challengeCard(challenge: Challenge, handlers: ChallengeHandlers): HTMLElement {
	const card = el("article", "challenge-card");
	card.dataset.challengeId = challenge.id;
	card.dataset.kind = challenge.kind;

	const header = el("button", "challenge-header");
	header.type = "button";
	header.setAttribute("aria-expanded", "false");
	header.append(
		el("span", "challenge-kind", kindLabel(challenge.kind)),
		el("span", "challenge-title", challenge.title),
		el("span", "challenge-points", pointsLabel(challenge.points)),
	);
	card.append(header);

	header.addEventListener("click", () => {
		const open = card.querySelector(".challenge-body");
		if (open) {
			open.remove();
			header.setAttribute("aria-expanded", "false");
		} else {
			card.append(challengeDetails(challenge, handlers));
			header.setAttribute("aria-expanded", "true");
		}
	});

	return card;
}

/**
 * Detail body shared by challenge cards and the active quest step.
 * Without handlers no reject control is offered; quest steps are never
 * rejected individually, only the quest as a whole.
 */
export function challengeDetails(challenge: Challenge, handlers?: ChallengeHandlers): HTMLElement {
	const body = el("div", "challenge-body");

	const facts = el("dl", "challenge-facts");
	addFact(facts, "Class", challenge.targetClass);
	addFact(facts, "Method", challenge.targetMethod);
	addFact(facts, "Line", challenge.targetLine === null ? null : String(challenge.targetLine));
	addFact(facts, "Smell", challenge.targetSmellId);
	addFact(facts, "Since build", String(challenge.createdBuild));
	body.append(facts);

	if (challenge.kind === "Mutation") {
		body.append(mutationPanes(challenge));
	} else if (challenge.snippet) {
		const pane = el("div", "snippet-pane");
		pane.append(el("h4", undefined, "Code under challenge"));
		pane.append(snippetBlock(challenge.snippet, "snippet"));
		body.append(pane);
	}

	if (handlers && challenge.state === "Open") {
		const reject = el("button", "reject-button", "Reject");
		reject.type = "button";
		reject.addEventListener("click", (event) => {
			event.stopPropagation();
			handlers.onReject(challenge);
		});
		body.append(reject);
	}

	return body;
}

// Mutation challenges show the original and the mutated code next to
// each other so the survivor is recognisable at a glance.
function mutationPanes(challenge: Challenge): HTMLElement {
	const panes = el("div", "mutation-panes");

	const original = el("div", "pane pane-original");
	original.append(el("h4", undefined, "Original"));
	original.append(snippetBlock(challenge.snippet ?? "", "snippet snippet-original"));

	const mutated = el("div", "pane pane-mutated");
	mutated.append(el("h4", undefined, "Mutant that survived"));
	mutated.append(snippetBlock(challenge.mutatedSnippet ?? "", "snippet snippet-mutated"));

	panes.append(original, mutated);
	return panes;
}

function snippetBlock(code: string, className: string): HTMLElement {
	const pre = el("pre", className);
	pre.append(el("code", undefined, code));
	return pre;
}

function addFact(list: HTMLElement, label: string, value: string | null): void {
	if (value === null || value === "") {
		return;
	}
	list.append(el("dt", undefined, label), el("dd", undefined, value));
}
