"""Report and repository ingestion: raw documents in, domain facts out."""

from .coverage import parse_class_coverage, parse_line_coverage
from .facts import (
    ClassCoverageRow,
    CommitRecord,
    CoverageSnapshot,
    DuplicateMutantId,
    LineCoverageDetail,
    MalformedDocument,
    MissingHeader,
    MutantRecord,
    MutantStatus,
    ParseProblem,
    SmellKind,
    SmellRecord,
    SmellSeverity,
    UnknownSeverity,
)
from .reports import (
    DEFAULT_TEST_GLOBS,
    is_test_path,
    parse_mutation_report,
    parse_smell_report,
    parse_test_results,
    smell_id,
)
from .vcs import (
    DEFAULT_SOURCE_ROOTS,
    AmbiguousIdentity,
    NotARepository,
    VcsUnavailable,
    collect_commits,
    path_to_class,
    resolve_user,
)

__all__ = [
    "AmbiguousIdentity",
    "ClassCoverageRow",
    "CommitRecord",
    "CoverageSnapshot",
    "DEFAULT_SOURCE_ROOTS",
    "DEFAULT_TEST_GLOBS",
    "DuplicateMutantId",
    "LineCoverageDetail",
    "MalformedDocument",
    "MissingHeader",
    "MutantRecord",
    "MutantStatus",
    "NotARepository",
    "ParseProblem",
    "SmellKind",
    "SmellRecord",
    "SmellSeverity",
    "UnknownSeverity",
    "VcsUnavailable",
    "collect_commits",
    "is_test_path",
    "parse_class_coverage",
    "parse_line_coverage",
    "parse_mutation_report",
    "parse_smell_report",
    "parse_test_results",
    "path_to_class",
    "resolve_user",
    "smell_id",
]
