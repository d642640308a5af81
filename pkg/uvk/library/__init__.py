from uvk.library.loadpath import LoadPath, ModuleSource, read_module, resolve_module
from uvk.library.manifest import (
    Manifest,
    ManifestEntry,
    check_manifest,
    load_manifest,
    parse_manifest,
)
from uvk.library.report import CheckReport, FileReport, Outcome, ReportEntry, Status
from uvk.library.session import EvalResult, Session

__all__ = [
    "CheckReport",
    "EvalResult",
    "FileReport",
    "LoadPath",
    "Manifest",
    "ManifestEntry",
    "ModuleSource",
    "Outcome",
    "ReportEntry",
    "Session",
    "Status",
    "check_manifest",
    "load_manifest",
    "parse_manifest",
    "read_module",
    "resolve_module",
]
