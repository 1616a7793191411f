import { el } from "../format.js";

export interface RejectDialogHandle {
	element: HTMLElement;
	close(): void;
}

/**
 * Modal asking for a rejection reason.  The confirm button refuses to
 * submit while the reason is blank (empty or whitespace only), because
 * the server turns a blank reason into a validation error anyway and
 * the player should learn why the rejection did not happen.
 */
export function openRejectDialog(
	host: HTMLElement,
	subject: string,
	onSubmit: (reason: string) => void | Promise<void>,
): RejectDialogHandle {
	const overlay = el("div", "dialog-overlay");
	const dialog = el("div", "reject-dialog");
	dialog.setAttribute("role", "dialog");

	dialog.append(el("h3", undefined, `Reject ${subject}`));
	dialog.append(
		el(
			"p",
			"dialog-hint",
			"A rejected item never comes back, and its target is avoided in the future. Say why you are rejecting it.",
		),
	);

	const reasonInput = el("textarea", "reject-reason");
	reasonInput.rows = 3;
	dialog.append(reasonInput);

	const error = el("p", "dialog-error");
	error.hidden = true;
	dialog.append(error);

	const buttons = el("div", "dialog-buttons");
	const cancel = el("button", "dialog-cancel", "Cancel");
	cancel.type = "button";
	const confirm = el("button", "dialog-confirm", "Reject");
	confirm.type = "button";
	buttons.append(cancel, confirm);
	dialog.append(buttons);

	overlay.append(dialog);
	host.append(overlay);

	const close = () => overlay.remove();
	cancel.addEventListener("click", close);

	confirm.addEventListener("click", () => {
		const reason = reasonInput.value.trim();
		if (reason === "") {
			error.textContent = "A reason is required.";
			error.hidden = false;
			return;
		}
		error.hidden = true;
		const outcome = onSubmit(reason);
		if (outcome && typeof outcome.then === "function") {
			outcome.then(close, (failure: unknown) => {
				error.textContent = failure instanceof Error ? failure.message : String(failure);
				error.hidden = false;
			});
		} else {
			close();
		}
	});

	return { element: overlay, close };
}
