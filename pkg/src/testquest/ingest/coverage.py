"""Parsers for the class-level CSV and per-line XML coverage reports."""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET

from .facts import (
    ClassCoverageRow,
    LineCoverageDetail,
    MalformedDocument,
    MissingHeader,
    ParseProblem,
)

# columns a class-coverage header must expose; order is discovered, not assumed
REQUIRED_CSV_COLUMNS = (
    "GROUP",
    "PACKAGE",
    "CLASS",
    "BRANCH_MISSED",
    "BRANCH_COVERED",
    "LINE_MISSED",
    "LINE_COVERED",
    "METHOD_MISSED",
    "METHOD_COVERED",
)


def parse_class_coverage(
    document: str,
) -> tuple[list[ClassCoverageRow], list[ParseProblem]]:
    """Parse the class-level coverage table.

    Returns the parsed rows plus one ParseProblem per data row whose
    counters could not be read; such rows are skipped, never guessed at.
    Raises MissingHeader when the first row does not name every required
    column.
    """
    reader = csv.reader(io.StringIO(document))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingHeader("document is empty") from None
    header = [cell.strip() for cell in header]
    missing = [col for col in REQUIRED_CSV_COLUMNS if col not in header]
    if missing:
        raise MissingHeader(f"header lacks columns: {', '.join(missing)}")
    index = {name: header.index(name) for name in header}

    rows: list[ClassCoverageRow] = []
    problems: list[ParseProblem] = []
    for row_number, cells in enumerate(reader, start=2):
        if not cells or all(not cell.strip() for cell in cells):
            continue
        if len(cells) < len(header):
            problems.append(
                ParseProblem(
                    location=f"row {row_number}",
                    reason=f"expected {len(header)} cells, found {len(cells)}",
                )
            )
            continue

        def cell(name: str) -> str:
            return cells[index[name]].strip()

        try:
            rows.append(
                ClassCoverageRow(
                    package_name=cell("PACKAGE"),
                    class_name=cell("CLASS"),
                    lines_covered=int(cell("LINE_COVERED")),
                    lines_missed=int(cell("LINE_MISSED")),
                    branches_covered=int(cell("BRANCH_COVERED")),
                    branches_missed=int(cell("BRANCH_MISSED")),
                    methods_covered=int(cell("METHOD_COVERED")),
                    methods_missed=int(cell("METHOD_MISSED")),
                )
            )
        except ValueError as exc:
            problems.append(
                ParseProblem(location=f"row {row_number}", reason=str(exc))
            )
    return rows, problems


def _dotted(name: str) -> str:
    return name.replace("/", ".")


def _int_attr(element: ET.Element, name: str, default: int = 0) -> int:
    raw = element.get(name)
    if raw is None:
        return default
    return int(raw)


def parse_line_coverage(document: str) -> list[LineCoverageDetail]:
    """Parse the detailed per-line XML coverage report.

    Line elements live under package/sourcefile; ownership (class fqn and
    owning_method) is recovered from the package's class/method elements
    by matching source file names and method start lines. Unknown
    attributes are ignored.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise MalformedDocument(f"not well-formed XML: {exc}") from exc
    if root.tag != "report":
        raise MalformedDocument(f"expected root element 'report', got '{root.tag}'")

    details: list[LineCoverageDetail] = []
    for package in root.iter("package"):
        package_name = _dotted(package.get("name", ""))

        # method start lines per source file, for attributing lines
        owners_by_file: dict[str, list[tuple[int, str, str]]] = {}
        classes_by_file: dict[str, list[str]] = {}
        for cls in package.findall("class"):
            raw_name = cls.get("name")
            if raw_name is None:
                raise MalformedDocument("class element without name attribute")
            fqn = _dotted(raw_name)
            source_name = cls.get("sourcefilename")
            if source_name is None:
                simple = fqn.rsplit(".", 1)[-1].split("$", 1)[0]
                source_name = f"{simple}.java"
            classes_by_file.setdefault(source_name, []).append(fqn)
            for method in cls.findall("method"):
                method_name = method.get("name")
                if method_name is None:
                    raise MalformedDocument("method element without name attribute")
                signature = method_name + method.get("desc", "")
                start = method.get("line")
                if start is None:
                    continue
                try:
                    owners_by_file.setdefault(source_name, []).append(
                        (int(start), fqn, signature)
                    )
                except ValueError as exc:
                    raise MalformedDocument(
                        f"method {signature}: bad line attribute {start!r}"
                    ) from exc
        for owners in owners_by_file.values():
            owners.sort()

        for sourcefile in package.findall("sourcefile"):
            file_name = sourcefile.get("name")
            if file_name is None:
                raise MalformedDocument("sourcefile element without name attribute")
            rel_path = f"{package.get('name', '')}/{file_name}".lstrip("/")
            owners = owners_by_file.get(file_name, [])
            candidates = classes_by_file.get(file_name, [])
            stem = file_name.rsplit(".", 1)[0]
            fallback_fqn = (
                candidates[0]
                if candidates
                else (f"{package_name}.{stem}" if package_name else stem)
            )
            for line in sourcefile.findall("line"):
                raw_nr = line.get("nr")
                if raw_nr is None:
                    raise MalformedDocument(f"{rel_path}: line element without nr")
                try:
                    nr = int(raw_nr)
                except ValueError as exc:
                    raise MalformedDocument(
                        f"{rel_path}: bad nr attribute {raw_nr!r}"
                    ) from exc
                owner_fqn = fallback_fqn
                owner_method = ""
                for start, fqn, signature in owners:
                    if start <= nr:
                        owner_fqn = fqn
                        owner_method = signature
                    else:
                        break
                try:
                    details.append(
                        LineCoverageDetail(
                            class_fqn=owner_fqn,
                            source_file=rel_path,
                            line_number=nr,
                            covered_instructions=_int_attr(line, "ci"),
                            missed_instructions=_int_attr(line, "mi"),
                            covered_branches=_int_attr(line, "cb"),
                            missed_branches=_int_attr(line, "mb"),
                            owning_method=owner_method,
                        )
                    )
                except ValueError as exc:
                    raise MalformedDocument(f"{rel_path} line {nr}: {exc}") from exc
    return details
