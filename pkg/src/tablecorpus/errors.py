"""Exception hierarchy shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all operational errors raised by this package."""


class ConfigError(ToolkitError):
    """Invalid or inconsistent configuration."""


class ValidationError(ToolkitError):
    """A query or request failed validation.

    ``fields`` names the offending fields so callers (CLI, HTTP API) can
    produce anchored error messages.
    """

    def __init__(self, message: str, fields: list[str] | None = None):
        super().__init__(message)
        self.fields = fields or []


class ApiResponseError(ToolkitError):
    """The wiki API returned a payload we cannot interpret (fatal)."""


class ListingInterrupted(ToolkitError):
    """Title listing failed after retries; carries the last continuation
    token so the listing can be resumed."""

    def __init__(self, message: str, continue_token: str | None):
        super().__init__(message)
        self.continue_token = continue_token


class FetchFailed(ToolkitError):
    """A page fetch failed persistently (after retries)."""


class PageMissing(ToolkitError):
    """Page was deleted between listing and fetch; skip with a record."""

    def __init__(self, page_id: int, title: str = ""):
        super().__init__(f"page {page_id} ({title!r}) is missing")
        self.page_id = page_id
        self.title = title


class DumpError(ToolkitError):
    """Dump is unreadable or corrupt; ``offset`` is the byte position at
    which reading failed, when known."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class DumpTruncated(DumpError):
    """Dump ended mid-page; complete pages before the cut were yielded."""


class PageParseError(ToolkitError):
    """The lenient HTML parser rejected a whole page."""


class CorpusError(ToolkitError):
    """Corpus on disk is missing, corrupt, or inconsistent."""


class DuplicateTableError(CorpusError):
    """Attempt to write a table id that already exists in the corpus."""


class CheckpointCorrupt(CorpusError):
    """Checkpoint log damaged beyond the tolerated torn tail."""


class SnapshotMismatch(CorpusError):
    """Checkpoint/manifest belongs to a different job configuration."""
