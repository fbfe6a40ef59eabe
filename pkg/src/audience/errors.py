"""Exception hierarchy shared by every analysis module."""


class AudienceError(Exception):
    """Base class for data errors; the CLI maps these to exit code 1."""


class SchemaError(AudienceError):
    """An input table lacks a required column."""


class IngestError(AudienceError):
    """Strict-mode ingestion aborted because of row diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics[:5])
        more = len(self.diagnostics) - 5
        if more > 0:
            lines += f"; ... and {more} more"
        super().__init__(f"{len(self.diagnostics)} diagnostic(s): {lines}")


class ConsistencyError(AudienceError):
    """Transactions and catalog disagree (e.g. unknown performance id)."""


class EmptyDatasetError(AudienceError):
    pass


class EmptyDocumentError(AudienceError):
    pass


class InsufficientDataError(AudienceError):
    pass


class UndefinedCorrelationError(AudienceError):
    pass


class SingularFitError(AudienceError):
    pass


class DegenerateEntityError(AudienceError):
    """A customer or performance has no observed cells to regress on."""

    def __init__(self, kind, entity_id):
        self.kind = kind
        self.entity_id = entity_id
        super().__init__(f"{kind} {entity_id!r} has no observed cells")


class UndefinedDirectionError(AudienceError):
    pass


class ForecastError(AudienceError):
    pass


class ConfigError(AudienceError):
    pass


class ContractError(AudienceError, ValueError):
    """Arguments violate an operation's preconditions (shapes, ranks, ranges)."""


class UnknownEntityError(AudienceError, KeyError):
    def __init__(self, kind, entity_id):
        self.kind = kind
        self.entity_id = entity_id
        super().__init__(f"unknown {kind} {entity_id!r}")

    def __str__(self):
        return self.args[0]
