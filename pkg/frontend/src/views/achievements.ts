import type { AchievementCollection } from "../types.js";
import { el, formatTimestamp } from "../format.js";

export function renderAchievements(root: HTMLElement, collection: AchievementCollection): void {
	root.replaceChildren();

	const done = el("section", "achievements-done");
	done.append(el("h3", undefined, `Completed (${collection.completed.length})`));
	for (const achievement of collection.completed) {
		const card = el("div", "achievement-card completed");
		card.append(
			el("span", "achievement-title", achievement.title),
			el("span", "achievement-description", achievement.description),
		);
		if (achievement.secret) {
			card.append(el("span", "achievement-secret", "Secret"));
		}
		if (achievement.completedDate !== undefined) {
			card.append(el("span", "achievement-date", formatTimestamp(achievement.completedDate)));
		}
		done.append(card);
	}
	root.append(done);

	// The API already strips secret achievements from this list, so
	// everything here is safe to show as a goal to chase.
	const open = el("section", "achievements-open");
	open.append(el("h3", undefined, `Still to earn (${collection.unsolved.length})`));
	for (const achievement of collection.unsolved) {
		const card = el("div", "achievement-card unsolved");
		card.append(
			el("span", "achievement-title", achievement.title),
			el("span", "achievement-description", achievement.description),
		);
		open.append(card);
	}
	root.append(open);

	// Unearned secrets stay nameless; all the server tells us is how
	// many are left to discover.
	const secret = el("section", "achievements-secret");
	secret.append(el("h3", undefined, "Secret"));
	const note =
		collection.secretCount === 0
			? "No secret achievements remain hidden."
			: collection.secretCount === 1
				? "1 secret achievement remains hidden."
				: `${collection.secretCount} secret achievements remain hidden.`;
	secret.append(el("p", "secret-count", note));
	root.append(secret);
}
