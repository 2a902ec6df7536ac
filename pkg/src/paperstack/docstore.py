"""Versioned, content-addressed document storage.

Each document belongs to one part and is named uniquely within that part.
Revisions are immutable and numbered 1..N with no gaps; content is stored
once per distinct byte string under its SHA-256 digest. Superseded
revisions are deprecated, never deleted: certificates need their audit
trail, and hiding is enough to stop deprecated material from circulating.

The store itself is plain in-memory state. Durability comes from the
journal: every accepted upload/deprecate yields a record, and
``DocStore.replay`` rebuilds an identical store from those records (blobs
are re-read from the blob store by hash).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from .errors import EmptyContent, Unauthorized, UnknownDocument, UnknownVersion
from .sfi import PartIdentity


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class DocumentId:
    """A document is identified by its part plus a per-part unique name."""

    part: PartIdentity
    doc_name: str

    @property
    def path(self) -> str:
        return self.part.path

    def sort_key(self) -> tuple:
        return (*self.part.sort_key(), self.doc_name)

    def to_dict(self) -> dict:
        return {**self.part.to_dict(), "doc_name": self.doc_name}

    @classmethod
    def from_dict(cls, data: dict) -> "DocumentId":
        return cls(part=PartIdentity.from_dict(data), doc_name=data["doc_name"])


@dataclass(frozen=True)
class DocumentVersion:
    version: int
    content_hash: str
    format_tag: str
    author_org: str
    created_at: str  # UTC ISO-8601
    deprecated: bool = False

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "content_hash": self.content_hash,
            "format_tag": self.format_tag,
            "author_org": self.author_org,
            "created_at": self.created_at,
            "deprecated": self.deprecated,
        }


class BlobStore:
    """Content-addressed byte storage, optionally mirrored to ``blobs/``."""

    def __init__(self, directory: Path | None = None):
        self._blobs: dict[str, bytes] = {}
        self.directory = directory
        if directory is not None:
            directory.mkdir(parents=True, exist_ok=True)
            for entry in directory.iterdir():
                if entry.is_file():
                    self._blobs[entry.name] = entry.read_bytes()

    def put(self, data: bytes) -> str:
        digest = content_hash(data)
        if digest not in self._blobs:
            self._blobs[digest] = data
            if self.directory is not None:
                (self.directory / digest).write_bytes(data)
        return digest

    def get(self, digest: str) -> bytes | None:
        return self._blobs.get(digest)

    def __contains__(self, digest: str) -> bool:
        return digest in self._blobs

    def __len__(self) -> int:
        return len(self._blobs)


@dataclass
class DocumentRecord:
    doc: DocumentId
    versions: list[DocumentVersion] = field(default_factory=list)

    def latest(self) -> DocumentVersion:
        """Highest non-deprecated version; highest overall if all are."""
        live = [v for v in self.versions if not v.deprecated]
        return max(live or self.versions, key=lambda v: v.version)


# Access hook: (actor_org, location_path, level_name) -> bool. The store
# has no grant table of its own; the hub wires this to access control.
AccessCheck = Callable[[str, str, str], bool]


def _deny_all(actor: str, path: str, level: str) -> bool:
    return False


class DocStore:
    """Per-document serialized writes over a shared blob store."""

    def __init__(self, blobs: BlobStore | None = None, access_check: AccessCheck = _deny_all):
        self.blobs = blobs if blobs is not None else BlobStore()
        self.access_check = access_check
        self._records: dict[DocumentId, DocumentRecord] = {}

    # -- queries ----------------------------------------------------------

    def known(self, doc: DocumentId) -> bool:
        return doc in self._records

    def record(self, doc: DocumentId) -> DocumentRecord:
        rec = self._records.get(doc)
        if rec is None:
            raise UnknownDocument(f"no versions for {doc.to_dict()}")
        return rec

    def latest(self, doc: DocumentId) -> DocumentVersion:
        return self.record(doc).latest()

    def versions(self, doc: DocumentId) -> list[DocumentVersion]:
        return list(self.record(doc).versions)

    def documents(self) -> list[DocumentId]:
        return sorted(self._records, key=DocumentId.sort_key)

    def documents_for_part(self, part: PartIdentity) -> list[DocumentId]:
        return [d for d in self.documents() if d.part == part]

    def content(self, digest: str) -> bytes | None:
        return self.blobs.get(digest)

    def locations_of_hash(self, digest: str) -> set[str]:
        """Tree paths under which some version carries this content."""
        return {
            doc.path
            for doc, rec in self._records.items()
            if any(v.content_hash == digest for v in rec.versions)
        }

    # -- commands ---------------------------------------------------------

    def _authorize_upload(self, doc: DocumentId, author_org: str) -> None:
        if author_org == doc.part.supplier_id:
            return
        if self.access_check(author_org, doc.path, "upload"):
            return
        raise Unauthorized(
            f"{author_org} may not upload to {doc.to_dict()}", actor=author_org
        )

    def upload(
        self, doc: DocumentId, data: bytes, format_tag: str, author_org: str, created_at: str
    ) -> DocumentVersion:
        """Store a revision; identical bytes as the current latest dedup to a no-op.

        The author must be the part's supplier or hold an upload grant at
        the document's location.
        """
        self._authorize_upload(doc, author_org)
        if not data:
            raise EmptyContent(f"refusing empty upload for {doc.to_dict()}")
        digest = content_hash(data)
        rec = self._records.get(doc)
        if rec is not None and rec.versions:
            current = max(rec.versions, key=lambda v: v.version)
            if current.content_hash == digest:
                return current
        self.blobs.put(data)
        if rec is None:
            rec = DocumentRecord(doc=doc)
            self._records[doc] = rec
        version = DocumentVersion(
            version=len(rec.versions) + 1,
            content_hash=digest,
            format_tag=format_tag,
            author_org=author_org,
            created_at=created_at,
        )
        rec.versions.append(version)
        return version

    def deprecate(self, doc: DocumentId, version: int, actor_org: str) -> DocumentVersion:
        """Flag a revision deprecated (idempotent). Author or admin only."""
        rec = self.record(doc)
        if not 1 <= version <= len(rec.versions):
            raise UnknownVersion(f"{doc.to_dict()} has no version {version}")
        target = rec.versions[version - 1]
        if actor_org != target.author_org and not self.access_check(actor_org, doc.path, "admin"):
            raise Unauthorized(
                f"{actor_org} may not deprecate {doc.to_dict()} v{version}", actor=actor_org
            )
        if not target.deprecated:
            rec.versions[version - 1] = replace(target, deprecated=True)
        return rec.versions[version - 1]

    # -- journal replay ---------------------------------------------------

    def apply_upload_record(self, doc: DocumentId, version: DocumentVersion) -> None:
        """Re-attach a journaled version; content must already be in blobs."""
        rec = self._records.setdefault(doc, DocumentRecord(doc=doc))
        if version.version != len(rec.versions) + 1:
            raise UnknownVersion(
                f"journal replays version {version.version} onto {len(rec.versions)} existing"
            )
        rec.versions.append(version)

    def apply_deprecate_record(self, doc: DocumentId, version: int) -> None:
        rec = self.record(doc)
        target = rec.versions[version - 1]
        rec.versions[version - 1] = replace(target, deprecated=True)

    def to_dict(self) -> dict:
        return {
            "documents": [
                {"doc": doc.to_dict(), "versions": [v.to_dict() for v in rec.versions]}
                for doc, rec in sorted(self._records.items(), key=lambda kv: kv[0].sort_key())
            ]
        }
