import type { LeaderboardRow } from "../types.js";
import { avatarFor } from "../avatars.js";
import { el } from "../format.js";

/**
 * Renders leaderboard rows as a table.  Ordering is decided server
 * side (score, then solved challenges, then display name); the rows
 * are rendered exactly in the order received and never re-sorted here.
 * When linkFor is given, each name links to that subject's
 * achievements page.
 */
export function renderLeaderboard(
	root: HTMLElement,
	rows: LeaderboardRow[],
	linkFor?: (subject: string) => string,
): void {
	root.replaceChildren();
	if (rows.length === 0) {
		root.append(el("p", "empty-note", "Nobody on the board yet."));
		return;
	}

	const table = el("table", "leaderboard");
	const head = el("thead");
	const headRow = el("tr");
	for (const caption of ["#", "", "Name", "Challenges", "Quests", "Achievements", "Score"]) {
		headRow.append(el("th", undefined, caption));
	}
	head.append(headRow);
	table.append(head);

	const body = el("tbody");
	rows.forEach((row, position) => {
		const tr = el("tr", "leaderboard-row");
		tr.dataset.subject = row.subject;
		const name = el("td", "name");
		if (linkFor) {
			const anchor = el("a", "name-link", row.displayName);
			anchor.href = linkFor(row.subject);
			name.append(anchor);
		} else {
			name.textContent = row.displayName;
		}
		tr.append(
			el("td", "rank", String(position + 1)),
			el("td", "avatar", avatarFor(row.avatarId)),
			name,
			el("td", "challenges", String(row.completedChallenges)),
			el("td", "quests", String(row.completedQuests)),
			el("td", "achievements", String(row.completedAchievements)),
			el("td", "score", String(row.score)),
		);
		body.append(tr);
	});
	table.append(body);
	root.append(table);
}
