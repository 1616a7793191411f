"""Read-only git access: the commit window and identity resolution."""

from __future__ import annotations

import subprocess

from .facts import CommitRecord

DEFAULT_SOURCE_ROOTS = ("src/main/java", "src/main/kotlin")

_RECORD_SEP = "\x01"
_FIELD_SEP = "\x02"


class NotARepository(Exception):
    """The given path is not a version-control working copy."""


class VcsUnavailable(Exception):
    """The VCS executable could not be invoked."""


class AmbiguousIdentity(Exception):
    """Two users claim the same git identity string."""


def collect_commits(repo_path: str, count: int = 50) -> list[CommitRecord]:
    """Return the newest `count` commits with their changed-file lists.

    Sorted newest-first by timestamp, ties broken by log order. Returns
    fewer records when history is shorter; an empty repository yields [].
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    argv = [
        "git",
        "log",
        "--name-only",
        "-n",
        str(count),
        f"--pretty=format:{_RECORD_SEP}%H{_FIELD_SEP}%an{_FIELD_SEP}%ae{_FIELD_SEP}%at",
    ]
    try:
        proc = subprocess.run(
            argv,
            cwd=repo_path,
            capture_output=True,
            text=True,
            check=False,
        )
    except FileNotFoundError as exc:
        raise VcsUnavailable("git executable not found") from exc
    except NotADirectoryError as exc:
        raise NotARepository(f"{repo_path} is not a directory") from exc
    if proc.returncode != 0:
        stderr = proc.stderr.lower()
        if "not a git repository" in stderr:
            raise NotARepository(f"{repo_path} is not a git working copy")
        if "does not have any commits" in stderr or "bad default revision" in stderr:
            return []
        raise VcsUnavailable(f"git log failed: {proc.stderr.strip()}")

    records: list[CommitRecord] = []
    for chunk in proc.stdout.split(_RECORD_SEP):
        if not chunk.strip():
            continue
        lines = chunk.splitlines()
        head = lines[0].split(_FIELD_SEP)
        if len(head) != 4:
            raise VcsUnavailable(f"unexpected git log line: {lines[0]!r}")
        commit_hash, author_name, author_email, raw_timestamp = head
        changed = tuple(line.strip() for line in lines[1:] if line.strip())
        records.append(
            CommitRecord(
                hash=commit_hash,
                author_name=author_name,
                author_email=author_email,
                timestamp=int(raw_timestamp),
                changed_files=changed,
            )
        )
    # git emits log order; the contract is newest-first by timestamp
    records.sort(key=lambda r: -r.timestamp)
    return records


def resolve_user(
    commit: CommitRecord, registry: dict[str, set[str]]
) -> str | None:
    """Map a commit author to the unique registered user claiming it."""
    matches = sorted(
        user_id
        for user_id, identities in registry.items()
        if commit.author_name in identities or commit.author_email in identities
    )
    if len(matches) > 1:
        raise AmbiguousIdentity(
            f"commit {commit.hash[:12]} matches users: {', '.join(matches)}"
        )
    return matches[0] if matches else None


def path_to_class(
    path: str, source_roots: tuple[str, ...] = DEFAULT_SOURCE_ROOTS
) -> str | None:
    """Map a changed source path to a class fqn; None off the source roots."""
    normalized = path.replace("\\", "/").lstrip("/")
    best: str | None = None
    for root in source_roots:
        prefix = root.rstrip("/") + "/"
        if normalized.startswith(prefix) and (
            best is None or len(prefix) > len(best)
        ):
            best = prefix
    if best is None:
        return None
    remainder = normalized[len(best):]
    if "." in remainder.rsplit("/", 1)[-1]:
        remainder = remainder.rsplit(".", 1)[0]
    if not remainder:
        return None
    return remainder.replace("/", ".")
