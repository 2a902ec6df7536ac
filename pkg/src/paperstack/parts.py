"""Part drafts, designs, and the parts list.

During engineering, yards sketch parts into designs and concretize them
attribute by attribute. A draft becomes identifiable exactly when its SFI
code, name, and supplier are all known; at that moment it is registered
into the classification trees automatically. Attributes are write-once:
corrections supersede the whole draft with a fresh one, so an identity
that replicas may already have matched on never mutates underneath them.

The parts list answers "what must be documented": every distinct live
draft reachable from the ship's designs, with its missing attributes
spelled out.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (
    AttributeAlreadySet,
    DuplicateNameInSubtree,
    UnknownDesign,
    UnknownDraft,
    ValidationError,
)
from .sfi import FullCode, PartIdentity, SfiCode, SfiTree, parse_code

IDENTITY_ATTRIBUTES = ("sfi", "name", "supplier_id")

# Project-level default for which document kinds a part must deliver;
# overridable per draft and per project config.
DEFAULT_DOC_KINDS = ("user manual", "test certificate")


@dataclass
class PartDraft:
    id: str
    ship_id: str
    sfi: SfiCode | FullCode | None = None
    name: str | None = None
    supplier_id: str | None = None
    required_doc_kinds: tuple[str, ...] = DEFAULT_DOC_KINDS
    superseded_by: str | None = None
    registered: bool = False
    registration_error: str | None = None

    @property
    def identifiable(self) -> bool:
        return self.sfi is not None and self.name is not None and self.supplier_id is not None

    def missing(self) -> list[str]:
        return [a for a in IDENTITY_ATTRIBUTES if getattr(self, a) is None]

    def identity(self) -> PartIdentity | None:
        if not self.identifiable:
            return None
        return PartIdentity(sfi=self.sfi, name=self.name, supplier_id=self.supplier_id)

    def sort_key(self) -> tuple:
        return (
            self.sfi.path if self.sfi is not None else "",
            self.name or "",
            self.id,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "ship_id": self.ship_id,
            "sfi": self.sfi.render() if self.sfi is not None else None,
            "name": self.name,
            "supplier": self.supplier_id,
            "required_doc_kinds": list(self.required_doc_kinds),
            "identifiable": self.identifiable,
            "missing": self.missing(),
            "registered": self.registered,
            "registration_error": self.registration_error,
            "superseded_by": self.superseded_by,
        }


@dataclass
class Design:
    id: str
    ship_id: str
    title: str
    draft_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "ship_id": self.ship_id,
            "title": self.title,
            "draft_ids": list(self.draft_ids),
        }


@dataclass
class ConcretizeResult:
    draft: PartDraft
    newly_identifiable: bool
    registered: bool
    alert: str | None = None  # set when registration failed


class PartsBoard:
    """All drafts and designs of a project; hub-owned, hub-serialized."""

    def __init__(self):
        self.drafts: dict[str, PartDraft] = {}
        self.designs: dict[str, Design] = {}

    def draft(self, draft_id: str) -> PartDraft:
        d = self.drafts.get(draft_id)
        if d is None:
            raise UnknownDraft(f"no draft {draft_id!r}", draft_id=draft_id)
        return d

    def design(self, design_id: str) -> Design:
        d = self.designs.get(design_id)
        if d is None:
            raise UnknownDesign(f"no design {design_id!r}", design_id=design_id)
        return d

    def create_draft(
        self,
        draft_id: str,
        ship_id: str,
        required_doc_kinds: tuple[str, ...] = DEFAULT_DOC_KINDS,
        sfi: str | None = None,
        name: str | None = None,
        supplier_id: str | None = None,
        register_into: tuple[SfiTree, ...] = (),
    ) -> ConcretizeResult:
        draft = PartDraft(
            id=draft_id,
            ship_id=ship_id,
            sfi=parse_code(sfi) if sfi else None,
            name=name or None,
            supplier_id=supplier_id or None,
            required_doc_kinds=tuple(required_doc_kinds),
        )
        self.drafts[draft_id] = draft
        return self._maybe_register(draft, register_into, was_identifiable=False)

    def create_design(self, design_id: str, ship_id: str, title: str, draft_ids=()) -> Design:
        design = Design(id=design_id, ship_id=ship_id, title=title)
        self.designs[design_id] = design
        for draft_id in draft_ids:
            self.attach(design_id, draft_id)
        return design

    def attach(self, design_id: str, draft_id: str) -> Design:
        design = self.design(design_id)
        draft = self.draft(draft_id)
        if draft.ship_id != design.ship_id:
            raise ValidationError(
                f"draft {draft_id!r} belongs to ship {draft.ship_id!r}, "
                f"design to {design.ship_id!r}"
            )
        if draft_id not in design.draft_ids:
            design.draft_ids.append(draft_id)
        return design

    def concretize(
        self,
        draft_id: str,
        attribute: str,
        value: str,
        register_into: tuple[SfiTree, ...] = (),
    ) -> ConcretizeResult:
        """Set one identity attribute (write-once); register when complete."""
        if attribute not in IDENTITY_ATTRIBUTES:
            raise ValidationError(
                f"attribute must be one of {IDENTITY_ATTRIBUTES}, got {attribute!r}"
            )
        if not value:
            raise ValidationError(f"empty value for {attribute!r}")
        draft = self.draft(draft_id)
        if getattr(draft, attribute) is not None:
            raise AttributeAlreadySet(
                f"{attribute} of draft {draft_id!r} is write-once; supersede instead",
                draft_id=draft_id,
                attribute=attribute,
            )
        was_identifiable = draft.identifiable
        setattr(draft, attribute, parse_code(value) if attribute == "sfi" else value)
        return self._maybe_register(draft, register_into, was_identifiable)

    def _maybe_register(
        self, draft: PartDraft, trees: tuple[SfiTree, ...], was_identifiable: bool
    ) -> ConcretizeResult:
        result = ConcretizeResult(
            draft=draft,
            newly_identifiable=draft.identifiable and not was_identifiable,
            registered=draft.registered,
        )
        if not draft.identifiable or draft.registered:
            return result
        identity = draft.identity()
        try:
            for tree in trees:
                tree.register_part(identity)
            draft.registered = bool(trees)
            draft.registration_error = None
            result.registered = draft.registered
        except DuplicateNameInSubtree as exc:
            draft.registration_error = exc.message
            result.alert = (
                f"draft {draft.id} is identifiable but could not be registered: {exc.message}"
            )
        return result

    def supersede(self, draft_id: str, new_draft_id: str, **corrections) -> PartDraft:
        """Replace a draft wholesale; the successor inherits attachments."""
        old = self.draft(draft_id)
        if old.superseded_by is not None:
            raise ValidationError(f"draft {draft_id!r} already superseded by {old.superseded_by!r}")
        unknown = set(corrections) - set(IDENTITY_ATTRIBUTES) - {"required_doc_kinds"}
        if unknown:
            raise ValidationError(f"unknown draft attributes {sorted(unknown)}")
        sfi = corrections.get("sfi")
        new = replace(
            old,
            id=new_draft_id,
            sfi=parse_code(sfi) if isinstance(sfi, str) else old.sfi,
            name=corrections.get("name", old.name),
            supplier_id=corrections.get("supplier_id", old.supplier_id),
            required_doc_kinds=tuple(corrections.get("required_doc_kinds", old.required_doc_kinds)),
            registered=False,
            registration_error=None,
            superseded_by=None,
        )
        self.drafts[new_draft_id] = new
        old.superseded_by = new_draft_id
        for design in self.designs.values():
            if draft_id in design.draft_ids:
                design.draft_ids.append(new_draft_id)
        return new

    def live_draft(self, draft_id: str) -> PartDraft:
        """Follow supersede pointers to the current draft."""
        draft = self.draft(draft_id)
        while draft.superseded_by is not None:
            draft = self.draft(draft.superseded_by)
        return draft

    def parts_list(self, ship_id: str) -> list[PartDraft]:
        """Distinct live drafts reachable from the ship's designs, in
        deterministic (SFI path, name, draft id) order."""
        seen: dict[str, PartDraft] = {}
        for design in self.designs.values():
            if design.ship_id != ship_id:
                continue
            for draft_id in design.draft_ids:
                live = self.live_draft(draft_id)
                seen[live.id] = live
        return sorted(seen.values(), key=PartDraft.sort_key)

    def to_dict(self) -> dict:
        return {
            "drafts": [self.drafts[k].to_dict() for k in sorted(self.drafts)],
            "designs": [self.designs[k].to_dict() for k in sorted(self.designs)],
        }
