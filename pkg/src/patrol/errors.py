"""Exception types shared across the package."""

from __future__ import annotations


class PatrolError(Exception):
    """Base class for all package errors."""


class InstanceError(PatrolError):
    """Malformed or invalid problem instance (parse or invariant failure)."""


class ScheduleFormatError(PatrolError):
    """Malformed schedule document or structurally invalid track."""


class UnvisitedSiteError(PatrolError):
    """A site is never visited, so its latency is infinite."""

    def __init__(self, site: int, name: str | None = None):
        self.site = site
        label = f"site {site}" if name is None else f"site {site} ({name})"
        super().__init__(f"{label} is never visited; latency is infinite")


class PeriodOverflowError(PatrolError):
    """Per-robot periods have no workable common period under the cap."""


class ResourceLimitError(PatrolError):
    """A configured state/time budget was exceeded."""


class IncompatibleAlgorithmError(PatrolError):
    """The selected algorithm cannot run on the given instance."""
