"""Domain error hierarchy.

Every error carries a stable ``code`` string so the HTTP layer and the CLI
can map errors without string-matching messages. ``http_status`` is the
status the hub service answers with.
"""

from __future__ import annotations


class PaperstackError(Exception):
    """Base class for all domain errors."""

    code = "error"
    http_status = 400

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        body = {"error": self.code, "message": self.message}
        if self.details:
            body["details"] = self.details
        return body


class ValidationError(PaperstackError):
    """Malformed input: missing required fields, bad field values."""

    code = "validation"


class NotThreeDigits(ValidationError):
    code = "not_three_digits"


class NonDecimal(ValidationError):
    code = "non_decimal"


class MalformedCode(ValidationError):
    code = "malformed_code"


class DuplicateNameInSubtree(PaperstackError):
    code = "duplicate_name_in_subtree"
    http_status = 409


class Unauthorized(PaperstackError):
    code = "unauthorized"
    http_status = 403


class EmptyContent(ValidationError):
    code = "empty_content"


class UnknownDocument(PaperstackError):
    code = "unknown_document"
    http_status = 404


class UnknownVersion(PaperstackError):
    code = "unknown_version"
    http_status = 404


class UnknownShipType(PaperstackError):
    code = "unknown_ship_type"
    http_status = 404


class UnknownShip(PaperstackError):
    code = "unknown_ship"
    http_status = 404


class UnknownDraft(PaperstackError):
    code = "unknown_draft"
    http_status = 404


class UnknownDesign(PaperstackError):
    code = "unknown_design"
    http_status = 404


class UnknownPlan(PaperstackError):
    code = "unknown_plan"
    http_status = 404


class UnknownSubject(PaperstackError):
    code = "unknown_subject"
    http_status = 404


class UnknownThread(PaperstackError):
    code = "unknown_thread"
    http_status = 404


class DuplicateName(PaperstackError):
    code = "duplicate_name"
    http_status = 409


class AttributeAlreadySet(PaperstackError):
    code = "attribute_already_set"
    http_status = 409


class NotParticipant(PaperstackError):
    code = "not_participant"
    http_status = 403


class HashMismatch(PaperstackError):
    code = "hash_mismatch"
    http_status = 502


class ClockError(PaperstackError):
    code = "clock_error"
    http_status = 409


class JournalCorrupt(PaperstackError):
    code = "journal_corrupt"
    http_status = 500
