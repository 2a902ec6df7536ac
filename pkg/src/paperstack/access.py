"""Grants at tree locations, inherited downwards.

Sharing happens at the level of a classified location and everything below
it: a grant at scope "36" covers "362", "363", ... all the way down. Levels
are ordered (admin > upload > read), there are no deny rules, and a
decision is simply "does any grant at an ancestor-or-equal scope carry a
sufficient level". Removing a grant leaves no residue.

Only admins may hand out grants. The project owner is bootstrapped with
admin at the root scope when the project is created; everything else flows
from there.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import Unauthorized
from .sfi import is_ancestor_or_equal

ROOT_SCOPE = ""


class Level(int, Enum):
    READ = 1
    UPLOAD = 2
    ADMIN = 3

    @classmethod
    def parse(cls, name: "str | Level") -> "Level":
        if isinstance(name, Level):
            return name
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown access level {name!r}") from None

    def __str__(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class AccessGrant:
    principal: str
    scope: str  # digit-path; "" is the root
    level: Level
    granted_by: str

    def covers(self, location: str, level: Level) -> bool:
        return is_ancestor_or_equal(self.scope, location) and self.level >= level

    def to_dict(self) -> dict:
        return {
            "principal": self.principal,
            "scope": self.scope,
            "level": str(self.level),
            "granted_by": self.granted_by,
        }


class GrantSet:
    """The project's grant table. Writes serialized by the owner (the hub)."""

    def __init__(self):
        self._grants: set[AccessGrant] = set()
        self._by_principal: dict[str, list[AccessGrant]] = {}

    def bootstrap(self, owner: str) -> AccessGrant:
        """Root admin for the organization creating the project."""
        grant = AccessGrant(principal=owner, scope=ROOT_SCOPE, level=Level.ADMIN, granted_by=owner)
        self._add(grant)
        return grant

    def _add(self, grant: AccessGrant) -> None:
        if grant not in self._grants:
            self._grants.add(grant)
            self._by_principal.setdefault(grant.principal, []).append(grant)

    def grant(self, principal: str, scope: str, level: Level | str, granted_by: str) -> AccessGrant:
        """Record a grant; duplicates are idempotent.

        ``granted_by`` must hold admin at the scope being shared.
        """
        level = Level.parse(level)
        if not self.check(granted_by, scope, Level.ADMIN):
            raise Unauthorized(
                f"{granted_by} lacks admin at scope {scope!r}", actor=granted_by, scope=scope
            )
        grant = AccessGrant(principal=principal, scope=scope, level=level, granted_by=granted_by)
        self._add(grant)
        return grant

    def revoke(self, principal: str, scope: str, level: Level | str, revoked_by: str) -> bool:
        """Remove matching grants (any granter). Restores the pre-grant decisions."""
        level = Level.parse(level)
        if not self.check(revoked_by, scope, Level.ADMIN):
            raise Unauthorized(
                f"{revoked_by} lacks admin at scope {scope!r}", actor=revoked_by, scope=scope
            )
        matches = [
            g
            for g in self._by_principal.get(principal, [])
            if g.scope == scope and g.level == level
        ]
        for g in matches:
            self._grants.discard(g)
            self._by_principal[principal].remove(g)
        return bool(matches)

    def check(self, principal: str, location: str, level: Level | str) -> bool:
        """True iff a grant at an ancestor-or-equal scope meets the level."""
        level = Level.parse(level)
        return any(g.covers(location, level) for g in self._by_principal.get(principal, ()))

    def grants(self) -> list[AccessGrant]:
        return sorted(
            self._grants, key=lambda g: (g.principal, g.scope, g.level.value, g.granted_by)
        )

    def grants_at(self, scope: str) -> list[AccessGrant]:
        return [g for g in self.grants() if g.scope == scope]

    def principals(self) -> set[str]:
        return set(self._by_principal) - {p for p, gs in self._by_principal.items() if not gs}

    def readers_at(self, location: str, candidates: "set[str] | None" = None) -> set[str]:
        """Organizations holding read (or better) at a location."""
        pool = candidates if candidates is not None else self.principals()
        return {org for org in pool if self.check(org, location, Level.READ)}

    def to_dict(self) -> dict:
        return {"grants": [g.to_dict() for g in self.grants()]}
