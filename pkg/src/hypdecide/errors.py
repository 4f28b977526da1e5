class DomainError(ValueError):
    """Input outside the domain of an operation."""


class ResourceLimitError(RuntimeError):
    """A configured step or size budget ran out before an answer was found."""

    def __init__(self, what: str, limit=None):
        self.what = what
        self.limit = limit
        super().__init__(f"resource limit reached: {what}" + (f" (limit {limit})" if limit is not None else ""))
