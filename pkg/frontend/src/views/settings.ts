import type { UserProfile } from "../types.js";
import { allAvatarIds, avatarFor } from "../avatars.js";
import { el } from "../format.js";

export interface SettingsHandlers {
	onAvatar(avatarId: number): void;
	onIdentities(gitNames: string[]): void;
	onNotifications(enabled: boolean): void;
}

export function renderSettings(
	root: HTMLElement,
	user: UserProfile,
	handlers: SettingsHandlers,
): void {
	root.replaceChildren();

	const avatarSection = el("section", "settings-avatar");
	avatarSection.append(el("h3", undefined, "Avatar"));
	const grid = el("div", "avatar-grid");
	for (const id of allAvatarIds()) {
		const pick = el("button", "avatar-option", avatarFor(id));
		pick.type = "button";
		pick.dataset.avatarId = String(id);
		if (id === user.avatarId) {
			pick.classList.add("selected");
		}
		pick.addEventListener("click", () => handlers.onAvatar(id));
		grid.append(pick);
	}
	avatarSection.append(grid);
	root.append(avatarSection);

	const identitySection = el("section", "settings-identities");
	identitySection.append(el("h3", undefined, "Git identities"));
	identitySection.append(
		el(
			"p",
			"settings-hint",
			"Commits are matched to you through these names and email addresses, one per line.",
		),
	);
	const identities = el("textarea", "identities-input");
	identities.rows = 4;
	identities.value = "";
	identitySection.append(identities);
	const saveIdentities = el("button", "identities-save", "Save identities");
	saveIdentities.type = "button";
	saveIdentities.addEventListener("click", () => {
		const names = identities.value
			.split("\n")
			.map((line) => line.trim())
			.filter((line) => line !== "");
		handlers.onIdentities(names);
	});
	identitySection.append(saveIdentities);
	root.append(identitySection);

	const notifySection = el("section", "settings-notifications");
	notifySection.append(el("h3", undefined, "Notifications"));
	const label = el("label", "notify-toggle");
	const checkbox = el("input") as HTMLInputElement;
	checkbox.type = "checkbox";
	checkbox.checked = user.notificationsEnabled;
	checkbox.addEventListener("change", () => handlers.onNotifications(checkbox.checked));
	label.append(checkbox, el("span", undefined, "Send me a digest of new events"));
	notifySection.append(label);
	root.append(notifySection);
}
