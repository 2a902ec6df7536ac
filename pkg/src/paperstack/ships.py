"""Ship types and documentation inheritance into new ships.

A ship type is a template: a classified tree of parts and document
references. Creating a ship from a type deep-copies the template tree and
pins every template document to the hub's current latest non-deprecated
version. Pinning is a snapshot: later uploads never silently move a ship's
references; updates flow through the explicit sync path instead. A
fully-deprecated template document still resolves (to its highest
version) but the reference carries a warning flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .docstore import DocStore, DocumentId
from .errors import DuplicateName, UnknownShipType
from .sfi import SfiTree


@dataclass(frozen=True)
class PinnedDoc:
    doc: DocumentId
    version: int
    deprecated_warning: bool = False

    def to_dict(self) -> dict:
        return {
            "doc": self.doc.to_dict(),
            "version": self.version,
            "deprecated_warning": self.deprecated_warning,
        }


@dataclass
class ShipType:
    id: str
    name: str
    template: SfiTree

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "template": self.template.to_dict()}


@dataclass
class Ship:
    id: str
    name: str
    tree: SfiTree
    created_at: str
    ship_type_id: str | None = None
    pinned: dict[DocumentId, PinnedDoc] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "ship_type_id": self.ship_type_id,
            "created_at": self.created_at,
            "tree": self.tree.to_dict(),
            "pinned": [p.to_dict() for p in sorted(self.pinned.values(), key=lambda p: p.doc.sort_key())],
        }


class ShipRegistry:
    """Ship types and ships, keyed by assigned ids."""

    def __init__(self):
        self.ship_types: dict[str, ShipType] = {}
        self.ships: dict[str, Ship] = {}

    def register_ship_type(self, type_id: str, name: str, template: SfiTree) -> ShipType:
        if any(t.name == name for t in self.ship_types.values()):
            raise DuplicateName(f"ship type named {name!r} already exists", name=name)
        ship_type = ShipType(id=type_id, name=name, template=template)
        self.ship_types[type_id] = ship_type
        return ship_type

    def create_ship(
        self,
        ship_id: str,
        name: str,
        ship_type_id: str | None,
        hub_docs: DocStore,
        created_at: str,
    ) -> Ship:
        """New ship; with a type, inherit its tree and pin doc versions."""
        if ship_type_id is None:
            ship = Ship(id=ship_id, name=name, tree=SfiTree(), created_at=created_at)
            self.ships[ship_id] = ship
            return ship
        ship_type = self.ship_types.get(ship_type_id)
        if ship_type is None:
            raise UnknownShipType(f"no ship type {ship_type_id!r}", ship_type_id=ship_type_id)
        tree = ship_type.template.copy()
        pinned: dict[DocumentId, PinnedDoc] = {}
        for node in tree.nodes():
            for doc in sorted(node.docs, key=DocumentId.sort_key):
                latest = hub_docs.latest(doc)
                pinned[doc] = PinnedDoc(
                    doc=doc, version=latest.version, deprecated_warning=latest.deprecated
                )
        ship = Ship(
            id=ship_id,
            name=name,
            tree=tree,
            created_at=created_at,
            ship_type_id=ship_type_id,
            pinned=pinned,
        )
        self.ships[ship_id] = ship
        return ship

    def ship(self, ship_id: str) -> Ship:
        from .errors import UnknownShip

        ship = self.ships.get(ship_id)
        if ship is None:
            raise UnknownShip(f"no ship {ship_id!r}", ship_id=ship_id)
        return ship
