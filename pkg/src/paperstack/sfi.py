"""SFI classification codes, the classification tree, and part identity.

The SFI group system is a function-oriented breakdown of a ship: a 3-digit
decimal code where the first digit selects one of 10 main groups (1-8 in
use, 0 and 9 reserved for uncovered components), the second digit one of 10
groups within it, and the third one of 10 sub-groups. Components are
addressed by a further 3-digit suffix appended after a dot: suffixes
000-099 are detail codes (components purchased directly to the ship),
100-999 are material codes (stock material). Example: 362.003 is the
cooling compressor inside "Freezing and refrigerating systems for dry
cargo".

A part is globally identified by three attributes: its SFI code, its name,
and the id of the supplier producing it. Replicas on different machines
agree that they are talking about the same part exactly when all three
attributes are equal.

Trees are single-owner mutable: the hub owns the global tree, each replica
owns its local one. ``copy()`` produces an isolated deep copy for
templates. Never share one tree between writers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterator, Union

from .errors import DuplicateNameInSubtree, MalformedCode, NonDecimal, NotThreeDigits

if TYPE_CHECKING:
    from .docstore import DocumentId

# Only the catalog labels the built-in table knows; the full SFI catalog is
# licensed content and deliberately not shipped. Unknown codes render
# label-less.
LABELS: dict[str, str] = {
    "3": "Equipment for cargo",
    "36": "Freezing, refrigerating, and heating systems for cargo",
    "362": "Freezing and refrigerating systems for dry cargo",
    "362.003": "cooling compressor",
}

RESERVED_MAIN_GROUPS = ("0", "9")


class CodeKind(str, Enum):
    """What a 3-digit suffix addresses: a component or stock material."""

    DETAIL = "detail"  # 000-099, purchased directly to ship
    MATERIAL = "material"  # 100-999, purchased to stock


@dataclass(frozen=True)
class SfiCode:
    """A 3-digit group code: main group / group / sub-group.

    ``labels`` carries the known human-readable name of each level (or
    ``None``); it never participates in equality, which is digits-only.
    """

    digits: str
    labels: tuple[str | None, str | None, str | None] = field(
        default=(None, None, None), compare=False, repr=False
    )

    @property
    def main_group(self) -> str:
        return self.digits[0]

    @property
    def group(self) -> str:
        return self.digits[:2]

    @property
    def sub_group(self) -> str:
        return self.digits

    @property
    def uncovered(self) -> bool:
        """True for codes in the reserved main groups 0 and 9."""
        return self.main_group in RESERVED_MAIN_GROUPS

    @property
    def path(self) -> str:
        """Digit-path of the tree node this code addresses."""
        return self.digits

    def render(self) -> str:
        return self.digits

    def is_ancestor_of(self, other: SfiCode | str) -> bool:
        """Strict digit-prefix relation between group codes/paths."""
        other_digits = other.digits if isinstance(other, SfiCode) else other
        return other_digits.startswith(self.digits) and other_digits != self.digits

    def __str__(self) -> str:
        return self.digits


@dataclass(frozen=True)
class FullCode:
    """A 6-digit code: group code plus detail/material suffix."""

    group: SfiCode
    suffix: str

    @property
    def kind(self) -> CodeKind:
        return CodeKind.DETAIL if self.suffix <= "099" else CodeKind.MATERIAL

    @property
    def label(self) -> str | None:
        return LABELS.get(self.render())

    @property
    def path(self) -> str:
        """Parts with a full code live at their group's node."""
        return self.group.digits

    def render(self) -> str:
        return f"{self.group.digits}.{self.suffix}"

    def __str__(self) -> str:
        return self.render()


def parse_sfi_code(text: str) -> SfiCode:
    """Parse a 3-digit group code, attaching any known level labels.

    Raises NotThreeDigits / NonDecimal for malformed input. Codes in main
    groups 0 and 9 parse fine; they merely report ``uncovered``.
    """
    if len(text) != 3:
        raise NotThreeDigits(f"SFI group code must be exactly 3 digits, got {text!r}")
    if not text.isascii() or not text.isdigit():
        raise NonDecimal(f"SFI group code must be decimal digits, got {text!r}")
    labels = (LABELS.get(text[0]), LABELS.get(text[:2]), LABELS.get(text))
    return SfiCode(digits=text, labels=labels)


def parse_full_code(text: str) -> FullCode:
    """Parse a ``GGG.SSS`` group + detail/material code."""
    head, dot, tail = text.partition(".")
    if not dot or len(head) != 3 or len(tail) != 3:
        raise MalformedCode(f"expected GGG.SSS, got {text!r}")
    if not (head + tail).isascii() or not (head + tail).isdigit():
        raise MalformedCode(f"expected decimal digits, got {text!r}")
    return FullCode(group=parse_sfi_code(head), suffix=tail)


def parse_code(text: str) -> SfiCode | FullCode:
    """Parse either canonical form (``GGG`` or ``GGG.SSS``)."""
    if "." in text:
        return parse_full_code(text)
    return parse_sfi_code(text)


@dataclass(frozen=True)
class PartIdentity:
    """The (SFI code, part name, supplier id) triple identifying a part.

    Equality is all-three-attributes, name compared byte-exact. Any caller
    normalization happens before construction.
    """

    sfi: Union[SfiCode, FullCode]
    name: str
    supplier_id: str

    def __post_init__(self):
        if not self.name:
            raise MalformedCode("part name must be non-empty")
        if not self.supplier_id:
            raise MalformedCode("supplier id must be non-empty")

    @property
    def path(self) -> str:
        return self.sfi.path

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.path, self.sfi.render(), self.name, self.supplier_id)

    def to_dict(self) -> dict:
        return {"sfi": self.sfi.render(), "name": self.name, "supplier": self.supplier_id}

    @classmethod
    def from_dict(cls, data: dict) -> PartIdentity:
        return cls(sfi=parse_code(data["sfi"]), name=data["name"], supplier_id=data["supplier"])


def match_identity(a: PartIdentity, b: PartIdentity) -> bool:
    """True iff all three identity attributes are equal.

    This is the synchronization rule: documents move between trees only
    for parts whose identities match exactly.
    """
    return (
        a.sfi.render() == b.sfi.render()
        and a.name == b.name
        and a.supplier_id == b.supplier_id
    )


def is_ancestor_or_equal(scope: str, location: str) -> bool:
    """Digit-path prefix test, used by grants and name-scope checks."""
    return location.startswith(scope)


def is_ancestor(a: str, b: str) -> bool:
    """Strict form: ``a`` is a proper digit-prefix of ``b``."""
    return b.startswith(a) and a != b


@dataclass
class TreeNode:
    """One folder of the classification tree.

    ``path`` is the digit string from the root (root is ``""``). Folders go
    at most three digits deep; detail/material suffixes are part metadata,
    not folders. Parts and document references may attach at any level.
    """

    path: str
    children: dict[str, "TreeNode"] = field(default_factory=dict)
    parts: set[PartIdentity] = field(default_factory=set)
    docs: set["DocumentId"] = field(default_factory=set)

    @property
    def label(self) -> str | None:
        return LABELS.get(self.path)


class SfiTree:
    """The classification folder tree with registered parts and doc refs."""

    def __init__(self):
        self.root = TreeNode(path="")
        self._by_path: dict[str, TreeNode] = {"": self.root}

    def node(self, path: str) -> TreeNode | None:
        return self._by_path.get(path)

    def ensure_node(self, path: str) -> TreeNode:
        """Materialize the chain of folders down to ``path``."""
        if len(path) > 3 or not (path == "" or (path.isascii() and path.isdigit())):
            raise MalformedCode(f"invalid tree path {path!r}")
        node = self.root
        for depth in range(1, len(path) + 1):
            prefix = path[:depth]
            child = node.children.get(prefix[-1])
            if child is None:
                child = TreeNode(path=prefix)
                node.children[prefix[-1]] = child
                self._by_path[prefix] = child
            node = child
        return node

    def nodes(self) -> Iterator[TreeNode]:
        for path in sorted(self._by_path):
            yield self._by_path[path]

    def parts(self) -> Iterator[PartIdentity]:
        for node in self.nodes():
            yield from sorted(node.parts, key=PartIdentity.sort_key)

    def find_part(self, part: PartIdentity) -> PartIdentity | None:
        node = self.node(part.path)
        if node and part in node.parts:
            return part
        return None

    def _name_conflict(self, part: PartIdentity) -> PartIdentity | None:
        """Find a distinct part with the same name in a comparable scope.

        Names must be unique on the sub-tree a part is registered under, so
        two parts may share a name only when neither node is an ancestor of
        the other.
        """
        path = part.path
        for node in self._by_path.values():
            if not (is_ancestor_or_equal(node.path, path) or is_ancestor_or_equal(path, node.path)):
                continue
            for existing in node.parts:
                if existing.name == part.name and existing != part:
                    return existing
        return None

    def register_part(self, part: PartIdentity) -> "SfiTree":
        """Register a part at the node its code addresses.

        Re-registering the identical identity is a no-op. A distinct part
        with the same name anywhere in the registration scope raises
        DuplicateNameInSubtree.
        """
        if self.find_part(part) is not None:
            return self
        conflict = self._name_conflict(part)
        if conflict is not None:
            raise DuplicateNameInSubtree(
                f"part name {part.name!r} already registered at {conflict.sfi.render()} "
                f"by {conflict.supplier_id}",
                name=part.name,
                existing_sfi=conflict.sfi.render(),
                existing_supplier=conflict.supplier_id,
            )
        self.ensure_node(part.path).parts.add(part)
        return self

    def add_doc(self, doc: "DocumentId") -> "SfiTree":
        self.ensure_node(doc.part.path).docs.add(doc)
        return self

    def copy(self) -> "SfiTree":
        """Deep copy; mutating the copy never touches the original."""
        clone = SfiTree()
        for node in self.nodes():
            new = clone.ensure_node(node.path)
            new.parts = set(node.parts)
            new.docs = set(node.docs)
        return clone

    def serialize(self) -> str:
        """Sorted line-oriented form (``path<TAB>kind<TAB>payload``)."""
        lines: list[str] = []
        for node in self.nodes():
            lines.append(f"{node.path}\tnode\t{node.label or ''}")
            for part in sorted(node.parts, key=PartIdentity.sort_key):
                lines.append(f"{node.path}\tpart\t{json.dumps(part.to_dict(), sort_keys=True)}")
            for doc in sorted(node.docs, key=lambda d: d.sort_key()):
                lines.append(f"{node.path}\tdoc\t{json.dumps(doc.to_dict(), sort_keys=True)}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        """JSON-friendly snapshot, keyed by node path."""
        out: dict[str, dict] = {}
        for node in self.nodes():
            out[node.path] = {
                "label": node.label,
                "parts": [p.to_dict() for p in sorted(node.parts, key=PartIdentity.sort_key)],
                "docs": [d.to_dict() for d in sorted(node.docs, key=lambda d: d.sort_key())],
            }
        return out


def register_part(tree: SfiTree, part: PartIdentity) -> SfiTree:
    """Module-level spelling of ``SfiTree.register_part``."""
    return tree.register_part(part)
