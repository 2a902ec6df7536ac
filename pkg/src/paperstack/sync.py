"""Pull-based synchronization between a party's replica and the hub.

Every participant keeps a local classified tree; documents flow from the
hub into a replica only for parts whose three identity attributes match a
hub part, and only at locations the replica's owner can read. Locations
without read access are silently absent from changesets: a replica cannot
even learn that confidential documents exist.

A diff is a pure function of two snapshots. Applying it is per-entry
atomic: one corrupted transfer aborts that entry alone, and the next diff
simply offers the missing version again. Replicas never exceed the hub,
so diff-then-apply converges and a second diff is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .access import GrantSet, Level
from .docstore import BlobStore, DocStore, DocumentId, DocumentVersion, content_hash
from .errors import HashMismatch
from .sfi import PartIdentity, SfiTree


class ChangeAction(str, Enum):
    FETCH = "fetch"
    DEPRECATE_NOTICE = "deprecate_notice"


@dataclass(frozen=True)
class ChangeEntry:
    doc: DocumentId
    version: int
    content_hash: str
    action: ChangeAction
    deprecated: bool = False

    def sort_key(self) -> tuple:
        return (self.doc.path, self.doc.doc_name, self.version, *self.doc.part.sort_key())

    def to_dict(self) -> dict:
        return {
            "doc": self.doc.to_dict(),
            "version": self.version,
            "content_hash": self.content_hash,
            "action": self.action.value,
            "deprecated": self.deprecated,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChangeEntry":
        return cls(
            doc=DocumentId.from_dict(data["doc"]),
            version=data["version"],
            content_hash=data["content_hash"],
            action=ChangeAction(data["action"]),
            deprecated=data["deprecated"],
        )


@dataclass
class ChangeSet:
    entries: list[ChangeEntry] = field(default_factory=list)

    def __post_init__(self):
        self.entries.sort(key=ChangeEntry.sort_key)
        seen = set()
        for e in self.entries:
            key = (e.doc, e.version)
            if key in seen:
                raise ValueError(f"duplicate changeset entry for {e.doc.to_dict()} v{e.version}")
            seen.add(key)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, data: dict) -> "ChangeSet":
        return cls(entries=[ChangeEntry.from_dict(e) for e in data["entries"]])


@dataclass(frozen=True)
class ReplicaVersion:
    content_hash: str
    deprecated: bool = False


class Replica:
    """A party's local tree plus its locally-held document versions."""

    def __init__(self, owner: str, blobs: BlobStore | None = None):
        self.owner = owner
        self.tree = SfiTree()
        self.blobs = blobs if blobs is not None else BlobStore()
        self.versions: dict[DocumentId, dict[int, ReplicaVersion]] = {}

    def register_part(self, part: PartIdentity) -> None:
        """Explicitly adopt a part; sync never does this on its own."""
        self.tree.register_part(part)

    def parts(self) -> list[PartIdentity]:
        return list(self.tree.parts())

    @property
    def doc_state(self) -> dict[DocumentId, int]:
        """Highest locally-held version per document."""
        return {doc: max(held) for doc, held in self.versions.items() if held}

    def held(self, doc: DocumentId) -> dict[int, ReplicaVersion]:
        return dict(self.versions.get(doc, {}))

    def store(self, doc: DocumentId, version: int, data: bytes, deprecated: bool) -> None:
        digest = self.blobs.put(data)
        self.versions.setdefault(doc, {})[version] = ReplicaVersion(digest, deprecated)
        self.tree.add_doc(doc)

    def mark_deprecated(self, doc: DocumentId, version: int) -> None:
        held = self.versions.get(doc, {})
        if version in held:
            held[version] = ReplicaVersion(held[version].content_hash, True)

    def summary(self) -> dict:
        """Wire form of the replica state the hub needs to compute a diff."""
        return {
            "owner": self.owner,
            "parts": [p.to_dict() for p in self.parts()],
            "docs": [
                {
                    "doc": doc.to_dict(),
                    "versions": [
                        {"version": v, "deprecated": rv.deprecated}
                        for v, rv in sorted(held.items())
                    ],
                }
                for doc, held in sorted(self.versions.items(), key=lambda kv: kv[0].sort_key())
            ],
        }


def diff_from_summary(
    summary: dict, hub_tree: SfiTree, hub_docs: DocStore, grants: GrantSet, principal: str
) -> ChangeSet:
    """Hub-side diff: what the summarized replica is missing.

    Covers documents of replica parts that identity-match a hub part and
    sit at a location the principal can read. Offers every hub version the
    replica does not hold (re-offering versions lost to aborted entries)
    and a deprecation notice for held versions deprecated hub-side.
    """
    held_by_doc: dict[DocumentId, dict[int, bool]] = {}
    for item in summary.get("docs", []):
        doc = DocumentId.from_dict(item["doc"])
        held_by_doc[doc] = {v["version"]: v["deprecated"] for v in item["versions"]}

    entries: list[ChangeEntry] = []
    for part_data in summary.get("parts", []):
        part = PartIdentity.from_dict(part_data)
        if hub_tree.find_part(part) is None:
            continue
        if not grants.check(principal, part.path, Level.READ):
            continue
        for doc in hub_docs.documents_for_part(part):
            held = held_by_doc.get(doc, {})
            for hub_version in hub_docs.versions(doc):
                if hub_version.version not in held:
                    entries.append(
                        ChangeEntry(
                            doc=doc,
                            version=hub_version.version,
                            content_hash=hub_version.content_hash,
                            action=ChangeAction.FETCH,
                            deprecated=hub_version.deprecated,
                        )
                    )
                elif hub_version.deprecated and not held[hub_version.version]:
                    entries.append(
                        ChangeEntry(
                            doc=doc,
                            version=hub_version.version,
                            content_hash=hub_version.content_hash,
                            action=ChangeAction.DEPRECATE_NOTICE,
                            deprecated=True,
                        )
                    )
    return ChangeSet(entries=entries)


def diff(
    replica: Replica, hub_tree: SfiTree, hub_docs: DocStore, grants: GrantSet
) -> ChangeSet:
    """Client-side spelling: diff this replica against a hub snapshot."""
    return diff_from_summary(replica.summary(), hub_tree, hub_docs, grants, replica.owner)


@dataclass
class ApplyResult:
    applied: list[ChangeEntry] = field(default_factory=list)
    failed: list[tuple[ChangeEntry, HashMismatch]] = field(default_factory=list)


def apply(
    replica: Replica, changeset: ChangeSet, fetch_content: Callable[[str], bytes]
) -> ApplyResult:
    """Apply a changeset to the replica, fetching content by hash.

    A transfer whose bytes do not hash to the advertised digest aborts
    that entry only; every other entry still lands.
    """
    result = ApplyResult()
    for entry in changeset.entries:
        if entry.action is ChangeAction.DEPRECATE_NOTICE:
            replica.mark_deprecated(entry.doc, entry.version)
            result.applied.append(entry)
            continue
        data = fetch_content(entry.content_hash)
        if content_hash(data) != entry.content_hash:
            result.failed.append(
                (
                    entry,
                    HashMismatch(
                        f"blob {entry.content_hash[:12]} arrived corrupted",
                        doc=entry.doc.to_dict(),
                        version=entry.version,
                    ),
                )
            )
            continue
        replica.store(entry.doc, entry.version, data, entry.deprecated)
        result.applied.append(entry)
    return result


def push(
    replica: Replica,
    hub_docs: DocStore,
    doc: DocumentId,
    data: bytes,
    format_tag: str,
    created_at: str,
) -> DocumentVersion:
    """Upload through the replica owner's identity; hub rules decide."""
    return hub_docs.upload(doc, data, format_tag, replica.owner, created_at)
