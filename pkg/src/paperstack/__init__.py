"""Paperstack: a pull-based documentation sharing hub for ship construction.

A single shared hub holds the project's classified document tree; yards,
suppliers, and owners keep local replicas convergent by pulling, request
documents exactly when the project plan needs them, and talk per document.
"""

__version__ = "0.1.0"

from .access import AccessGrant, GrantSet, Level
from .docstore import BlobStore, DocStore, DocumentId, DocumentVersion
from .sfi import (
    CodeKind,
    FullCode,
    PartIdentity,
    SfiCode,
    SfiTree,
    match_identity,
    parse_full_code,
    parse_sfi_code,
)

__all__ = [
    "AccessGrant",
    "BlobStore",
    "CodeKind",
    "DocStore",
    "DocumentId",
    "DocumentVersion",
    "FullCode",
    "GrantSet",
    "Level",
    "PartIdentity",
    "SfiCode",
    "SfiTree",
    "match_identity",
    "parse_full_code",
    "parse_sfi_code",
]
