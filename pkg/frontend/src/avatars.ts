// Avatar ids are 1-based and the server validates them against 1..50,
// so the catalogue length must stay exactly 50.
const CATALOGUE: readonly string[] = [
	"🦊", "🐼", "🦉", "🐙", "🦜",
	"🐢", "🦔", "🐸", "🦀", "🐝",
	"🦋", "🐬", "🦩", "🐨", "🦒",
	"🐘", "🦭", "🐧", "🦎", "🐊",
	"🦚", "🐺", "🦝", "🐗", "🦌",
	"🐿️", "🦅", "🐠", "🦑", "🐞",
	"🦂", "🐫", "🦘", "🐻", "🐇",
	"🦡", "🐓", "🦢", "🐟", "🦆",
	"🦤", "🐌", "🦗", "🐎", "🦛",
	"🐄", "🦈", "🐆", "🦓", "🐪",
];

export const AVATAR_COUNT = 50;

export function avatarFor(avatarId: number): string {
	if (!Number.isInteger(avatarId) || avatarId < 1 || avatarId > AVATAR_COUNT) {
		return CATALOGUE[0]!;
	}
	return CATALOGUE[avatarId - 1]!;
}

export function allAvatarIds(): number[] {
	return Array.from({ length: AVATAR_COUNT }, (_, i) => i + 1);
}
