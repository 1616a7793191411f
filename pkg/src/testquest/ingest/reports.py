"""Parsers for test-result, mutation, and smell reports."""

from __future__ import annotations

import fnmatch
import json
import xml.etree.ElementTree as ET

from .facts import (
    DuplicateMutantId,
    MalformedDocument,
    MutantRecord,
    MutantStatus,
    ParseProblem,
    SmellKind,
    SmellRecord,
    SmellSeverity,
    UnknownSeverity,
)

DEFAULT_TEST_GLOBS = ("test", "tests")


def parse_test_results(
    documents: list[str],
) -> tuple[int, int, list[ParseProblem]]:
    """Sum test and failure counts across test-result XML documents.

    Errors count as failures. A document that cannot be read contributes
    a ParseProblem instead of aborting the whole batch.
    """
    total = 0
    failed = 0
    problems: list[ParseProblem] = []
    for position, document in enumerate(documents, start=1):
        location = f"document {position}"
        try:
            root = ET.fromstring(document)
        except ET.ParseError as exc:
            problems.append(ParseProblem(location=location, reason=str(exc)))
            continue
        if root.tag == "testsuite":
            suites = [root]
        elif root.tag == "testsuites":
            suites = list(root.iter("testsuite"))
        else:
            problems.append(
                ParseProblem(
                    location=location,
                    reason=f"expected testsuite or testsuites root, got '{root.tag}'",
                )
            )
            continue
        try:
            for suite in suites:
                total += int(suite.get("tests", "0"))
                failed += int(suite.get("failures", "0"))
                failed += int(suite.get("errors", "0"))
        except ValueError as exc:
            problems.append(ParseProblem(location=location, reason=str(exc)))
    return total, failed, problems


def parse_mutation_report(document: str) -> list[MutantRecord]:
    """Parse the mutation report; SURVIVED and NO_COVERAGE are both live."""
    try:
        payload = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or not isinstance(payload.get("mutants"), list):
        raise MalformedDocument("expected an object with a 'mutants' list")

    records: list[MutantRecord] = []
    seen: set[str] = set()
    for position, entry in enumerate(payload["mutants"], start=1):
        if not isinstance(entry, dict):
            raise MalformedDocument(f"mutant {position} is not an object")
        try:
            mutant_id = str(entry["id"])
            status = MutantStatus(entry["status"])
            record = MutantRecord(
                mutant_id=mutant_id,
                class_fqn=str(entry["class"]),
                method_signature=str(entry["method"]),
                line_number=int(entry["line"]),
                operator=str(entry["operator"]),
                status=status,
                original_snippet=str(entry.get("original", "")),
                mutated_snippet=str(entry.get("mutated", "")),
            )
        except KeyError as exc:
            raise MalformedDocument(f"mutant {position}: missing field {exc}") from exc
        except ValueError as exc:
            raise MalformedDocument(f"mutant {position}: {exc}") from exc
        if mutant_id in seen:
            raise DuplicateMutantId(f"duplicate mutant id {mutant_id!r}")
        seen.add(mutant_id)
        records.append(record)
    return records


def is_test_path(path: str, test_globs: tuple[str, ...] = DEFAULT_TEST_GLOBS) -> bool:
    """True when any path segment matches a test glob."""
    segments = path.replace("\\", "/").split("/")
    return any(
        fnmatch.fnmatch(segment, glob) for segment in segments for glob in test_globs
    )


def smell_id(rule_id: str, file: str, start_line: int) -> str:
    # "|" because rule ids themselves contain ":"
    return f"{rule_id}|{file}|{start_line}"


def parse_smell_report(
    document: str, test_globs: tuple[str, ...] = DEFAULT_TEST_GLOBS
) -> list[SmellRecord]:
    """Parse the smell report; kind TEST when the file sits on a test path."""
    try:
        payload = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or not isinstance(payload.get("smells"), list):
        raise MalformedDocument("expected an object with a 'smells' list")

    records: list[SmellRecord] = []
    for position, entry in enumerate(payload["smells"], start=1):
        if not isinstance(entry, dict):
            raise MalformedDocument(f"smell {position} is not an object")
        try:
            raw_severity = str(entry["severity"])
            try:
                severity = SmellSeverity(raw_severity)
            except ValueError:
                raise UnknownSeverity(
                    f"smell {position}: unknown severity {raw_severity!r}"
                ) from None
            rule = str(entry["rule"])
            file = str(entry["file"])
            start_line = int(entry["startLine"])
            end_line = int(entry["endLine"])
        except KeyError as exc:
            raise MalformedDocument(f"smell {position}: missing field {exc}") from exc
        except UnknownSeverity:
            raise
        except ValueError as exc:
            raise MalformedDocument(f"smell {position}: {exc}") from exc
        if start_line > end_line:
            raise MalformedDocument(
                f"smell {position}: startLine {start_line} after endLine {end_line}"
            )
        records.append(
            SmellRecord(
                smell_id=smell_id(rule, file, start_line),
                rule_id=rule,
                file=file,
                start_line=start_line,
                end_line=end_line,
                severity=severity,
                message=str(entry.get("message", "")),
                kind=SmellKind.TEST if is_test_path(file, test_globs) else SmellKind.CODE,
            )
        )
    return records
