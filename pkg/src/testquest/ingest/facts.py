"""Normalized facts extracted from build reports and the repository log.

Everything downstream (challenge generation, solve checks, achievements)
works on these types, never on raw report documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class MalformedDocument(ValueError):
    """A report document does not match its expected shape."""


class MissingHeader(MalformedDocument):
    """The class-coverage table has no recognizable header row."""


class DuplicateMutantId(MalformedDocument):
    """Two mutants in one report share an id."""


class UnknownSeverity(MalformedDocument):
    """A smell finding carries a severity outside the known set."""


@dataclass(frozen=True)
class ParseProblem:
    """A non-fatal defect found while parsing: where it was and why."""

    location: str
    reason: str


class MutantStatus(str, Enum):
    KILLED = "KILLED"
    SURVIVED = "SURVIVED"
    NO_COVERAGE = "NO_COVERAGE"

    @property
    def live(self) -> bool:
        return self is not MutantStatus.KILLED


class SmellSeverity(str, Enum):
    LOW = "LOW"
    MEDIUM = "MEDIUM"
    HIGH = "HIGH"
    CRITICAL = "CRITICAL"


class SmellKind(str, Enum):
    CODE = "CODE"
    TEST = "TEST"


@dataclass(frozen=True)
class ClassCoverageRow:
    """Per-class line/branch/method counters from the class-level report."""

    package_name: str
    class_name: str
    lines_covered: int
    lines_missed: int
    branches_covered: int = 0
    branches_missed: int = 0
    methods_covered: int = 0
    methods_missed: int = 0

    @property
    def fqn(self) -> str:
        if not self.package_name:
            return self.class_name
        return f"{self.package_name}.{self.class_name}"

    @property
    def coverage_ratio(self) -> float:
        total = self.lines_covered + self.lines_missed
        if total == 0:
            # empty classes count as fully covered
            return 1.0
        return self.lines_covered / total


@dataclass(frozen=True)
class LineCoverageDetail:
    """One source line's instruction/branch counters.

    source_file is the package-relative path (e.g. "com/ex/Foo.java");
    prefix it with a configured source root to reach the working copy.
    """

    class_fqn: str
    source_file: str
    line_number: int
    covered_instructions: int
    missed_instructions: int
    covered_branches: int
    missed_branches: int
    owning_method: str = ""

    @property
    def fully_covered(self) -> bool:
        return self.missed_instructions == 0 and self.missed_branches == 0


@dataclass
class CoverageSnapshot:
    """One build's normalized coverage and test facts."""

    build_id: int
    class_rows: list[ClassCoverageRow] = field(default_factory=list)
    line_details: list[LineCoverageDetail] = field(default_factory=list)
    total_test_count: int = 0
    failed_test_count: int = 0
    build_succeeded: bool = True

    def __post_init__(self) -> None:
        if self.failed_test_count > self.total_test_count:
            raise ValueError(
                f"failed_test_count {self.failed_test_count} exceeds "
                f"total_test_count {self.total_test_count}"
            )
        known = {row.fqn for row in self.class_rows}
        if len(known) != len(self.class_rows):
            raise ValueError("duplicate class fqn in snapshot")
        seen: set[tuple[str, int]] = set()
        for detail in self.line_details:
            key = (detail.class_fqn, detail.line_number)
            if key in seen:
                raise ValueError(f"duplicate line detail {key}")
            seen.add(key)

    def row_for(self, class_fqn: str) -> ClassCoverageRow | None:
        for row in self.class_rows:
            if row.fqn == class_fqn:
                return row
        return None

    def lines_for(self, class_fqn: str) -> list[LineCoverageDetail]:
        out = [d for d in self.line_details if d.class_fqn == class_fqn]
        out.sort(key=lambda d: d.line_number)
        return out

    def line_at(self, class_fqn: str, line_number: int) -> LineCoverageDetail | None:
        for detail in self.line_details:
            if detail.class_fqn == class_fqn and detail.line_number == line_number:
                return detail
        return None


@dataclass(frozen=True)
class MutantRecord:
    """One mutant from the mutation report; live unless KILLED."""

    mutant_id: str
    class_fqn: str
    method_signature: str
    line_number: int
    operator: str
    status: MutantStatus
    original_snippet: str = ""
    mutated_snippet: str = ""


@dataclass(frozen=True)
class SmellRecord:
    """One static-analysis finding from the smell report."""

    smell_id: str
    rule_id: str
    file: str
    start_line: int
    end_line: int
    severity: SmellSeverity
    message: str
    kind: SmellKind


@dataclass(frozen=True)
class CommitRecord:
    """One commit from the search window, newest-first within the window."""

    hash: str
    author_name: str
    author_email: str
    timestamp: int
    changed_files: tuple[str, ...]
