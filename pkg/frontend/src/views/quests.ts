import type { Quest, QuestStep } from "../types.js";
import { el, kindLabel, pointsLabel, stateClass } from "../format.js";
import { challengeDetails } from "./challenges.js";

export interface QuestHandlers {
	onReject(quest: Quest): void;
}

export function renderQuestList(
	root: HTMLElement,
	quests: Quest[],
	handlers: QuestHandlers,
): void {
	root.replaceChildren();
	if (quests.length === 0) {
		root.append(el("p", "empty-note", "No active quests."));
		return;
	}
	for (const quest of quests) {
		root.append(questCard(quest, handlers, true));
	}
}

export function renderQuestHistory(root: HTMLElement, quests: Quest[]): void {
	root.replaceChildren();
	for (const quest of quests) {
		root.append(questCard(quest, undefined, false));
	}
}

function questCard(quest: Quest, handlers: QuestHandlers | undefined, active: boolean): HTMLElement {
	const card = el("article", "quest-card");
	card.dataset.questId = quest.id;

	const header = el("div", "quest-header");
	header.append(
		el("span", "quest-kind", `${kindLabel(quest.kind)} quest`),
		el("span", `state-chip ${stateClass(quest.state)}`, quest.state),
		el("span", "quest-progress", progressLabel(quest)),
		el("span", "quest-points", pointsLabel(quest.points)),
	);
	card.append(header);

	const delivered = new Map<number, QuestStep>();
	for (const step of quest.steps) {
		delivered.set(step.index, step);
	}

	// One slot per step position.  The payload only carries the steps
	// the player may see; positions the server kept sealed become bare
	// locked slots so none of their content can exist in the document.
	const steps = el("ol", "quest-steps");
	for (let index = 0; index < quest.totalSteps; index += 1) {
		const step = delivered.get(index);
		steps.append(step ? questStepItem(step) : lockedSlot(index));
	}
	card.append(steps);

	if (quest.rejectionReason) {
		card.append(el("p", "quest-reason", quest.rejectionReason));
	}

	if (active && handlers && quest.state === "Active") {
		const reject = el("button", "reject-button", "Reject quest");
		reject.type = "button";
		reject.addEventListener("click", () => handlers.onReject(quest));
		card.append(reject);
	}

	return card;
}

function questStepItem(step: QuestStep): HTMLElement {
	const item = el("li", "quest-step");
	item.dataset.stepIndex = String(step.index);

	const mark = step.state === "Solved" ? "✓" : "";
	const label = el("span", "step-label", `${mark} Step ${step.index + 1}`.trim());
	const title = el("span", "step-title", step.title);
	const chip = el("span", `state-chip ${stateClass(step.state)}`, step.state);

	if (step.state === "Open") {
		// Only the step currently in play can be expanded.
		const toggle = el("button", "step-toggle");
		toggle.type = "button";
		toggle.setAttribute("aria-expanded", "false");
		toggle.append(label, title, chip);
		item.append(toggle);
		toggle.addEventListener("click", () => {
			const open = item.querySelector(".challenge-body");
			if (open) {
				open.remove();
				toggle.setAttribute("aria-expanded", "false");
			} else {
				item.append(challengeDetails(step));
				toggle.setAttribute("aria-expanded", "true");
			}
		});
	} else {
		item.append(label, title, chip);
	}
	return item;
}

function lockedSlot(index: number): HTMLElement {
	const item = el("li", "quest-slot-locked");
	item.dataset.stepIndex = String(index);
	item.setAttribute("aria-disabled", "true");
	item.append(
		el("span", "step-label", `Step ${index + 1}`),
		el("span", "step-locked", "Locked until the previous step is solved"),
	);
	return item;
}

function progressLabel(quest: Quest): string {
	const done = Math.min(quest.currentIndex, quest.totalSteps);
	return `${done} of ${quest.totalSteps} steps done`;
}
