"""Sync engine tests: diff/apply fixtures plus randomized convergence."""

import random

import pytest

from paperstack.access import GrantSet, Level
from paperstack.docstore import DocStore, DocumentId, content_hash
from paperstack.errors import Unauthorized
from paperstack.sfi import PartIdentity, SfiTree, parse_code
from paperstack.sync import ChangeAction, Replica, apply, diff, push

OWNER = "YARD-1"
NOW = "2026-03-01T00:00:00Z"


def part(code, name, supplier) -> PartIdentity:
    return PartIdentity(sfi=parse_code(code), name=name, supplier_id=supplier)


class Hub:
    """Minimal hub-side state for sync tests."""

    def __init__(self):
        self.tree = SfiTree()
        self.docs = DocStore()
        self.grants = GrantSet()
        self.grants.bootstrap(OWNER)

    def fetcher(self):
        return lambda digest: self.docs.content(digest)


@pytest.fixture
def fixture():
    """Three documents across two parts, replica holding v1 of the first."""
    hub = Hub()
    p1 = part("362.003", "COOL-X", "SUP-A")
    p2 = part("433.001", "PANEL-1", "SUP-B")
    hub.tree.register_part(p1)
    hub.tree.register_part(p2)
    d1 = DocumentId(part=p1, doc_name="user manual")
    d2 = DocumentId(part=p1, doc_name="test certificate")
    d3 = DocumentId(part=p2, doc_name="user manual")
    hub.docs.upload(d1, b"manual rev 1", "PDF", "SUP-A", NOW)
    hub.docs.upload(d1, b"manual rev 2", "PDF", "SUP-A", NOW)
    hub.docs.upload(d2, b"cert rev 1", "PDF", "SUP-A", NOW)
    hub.docs.upload(d3, b"panel manual", "PDF", "SUP-B", NOW)
    hub.grants.grant("YARD-2", "", Level.READ, OWNER)

    replica = Replica(owner="YARD-2")
    replica.register_part(p1)
    replica.store(d1, 1, b"manual rev 1", deprecated=False)
    return hub, replica, (d1, d2, d3)


def accessible_projection(hub: Hub, replica_parts, principal):
    """Oracle: full hub state restricted to matched, readable parts."""
    out = {}
    for p in replica_parts:
        if hub.tree.find_part(p) is None:
            continue
        if not hub.grants.check(principal, p.path, Level.READ):
            continue
        for d in hub.docs.documents_for_part(p):
            out[d] = {
                v.version: (v.content_hash, v.deprecated) for v in hub.docs.versions(d)
            }
    return out


def replica_projection(replica: Replica, docs):
    return {
        d: {v: (rv.content_hash, rv.deprecated) for v, rv in replica.held(d).items()}
        for d in docs
        if replica.held(d)
    }


class TestDiff:
    def test_empty_everything_is_empty(self):
        hub = Hub()
        replica = Replica(owner="YARD-2")
        assert len(diff(replica, hub.tree, hub.docs, hub.grants)) == 0

    def test_missing_versions_offered(self, fixture):
        hub, replica, (d1, d2, d3) = fixture
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        offered = {(e.doc, e.version) for e in cs.entries}
        # d1 v2 plus d2 v1; d3's part is not in the replica
        assert offered == {(d1, 2), (d2, 1)}
        assert all(e.action is ChangeAction.FETCH for e in cs.entries)

    def test_without_read_grant_silently_empty(self, fixture):
        hub, replica, _ = fixture
        stranger = Replica(owner="SUP-C")
        stranger.register_part(part("362.003", "COOL-X", "SUP-A"))
        assert len(diff(stranger, hub.tree, hub.docs, hub.grants)) == 0

    def test_unmatched_identity_excluded(self, fixture):
        hub, _, _ = fixture
        replica = Replica(owner="YARD-2")
        replica.register_part(part("362.003", "COOL-X", "SUP-OTHER"))
        assert len(diff(replica, hub.tree, hub.docs, hub.grants)) == 0

    def test_deprecate_notice_for_held_versions(self, fixture):
        hub, replica, (d1, _, _) = fixture
        hub.docs.deprecate(d1, 1, "SUP-A")
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        notices = [e for e in cs.entries if e.action is ChangeAction.DEPRECATE_NOTICE]
        assert [(e.doc, e.version) for e in notices] == [(d1, 1)]

    def test_entries_sorted_and_unique(self, fixture):
        hub, replica, _ = fixture
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        keys = [e.sort_key() for e in cs.entries]
        assert keys == sorted(keys)
        assert len({(e.doc, e.version) for e in cs.entries}) == len(cs.entries)

    def test_wire_round_trip(self, fixture):
        hub, replica, _ = fixture
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        from paperstack.sync import ChangeSet

        assert ChangeSet.from_dict(cs.to_dict()).to_dict() == cs.to_dict()


class TestApply:
    def test_apply_reaches_hub_state(self, fixture):
        hub, replica, (d1, d2, _) = fixture
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        result = apply(replica, cs, hub.fetcher())
        assert not result.failed
        assert replica.doc_state[d1] == 2
        assert replica.doc_state[d2] == 1
        assert replica.blobs.get(content_hash(b"manual rev 2")) == b"manual rev 2"

    def test_second_apply_is_noop(self, fixture):
        hub, replica, _ = fixture
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        apply(replica, cs, hub.fetcher())
        again = diff(replica, hub.tree, hub.docs, hub.grants)
        assert len(again) == 0
        result = apply(replica, again, hub.fetcher())
        assert not result.applied and not result.failed

    def test_corrupted_blob_isolated(self, fixture):
        hub, replica, (d1, d2, _) = fixture
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        bad = content_hash(b"manual rev 2")

        def corrupting(digest):
            data = hub.docs.content(digest)
            return b"garbage" if digest == bad else data

        result = apply(replica, cs, corrupting)
        assert [(e.doc, e.version) for e, _ in result.failed] == [(d1, 2)]
        assert replica.doc_state[d2] == 1
        # the next diff offers the aborted entry again
        retry = diff(replica, hub.tree, hub.docs, hub.grants)
        assert [(e.doc, e.version) for e in retry.entries] == [(d1, 2)]
        apply(replica, retry, hub.fetcher())
        assert replica.doc_state[d1] == 2

    def test_deprecation_mirrored(self, fixture):
        hub, replica, (d1, _, _) = fixture
        hub.docs.deprecate(d1, 1, "SUP-A")
        cs = diff(replica, hub.tree, hub.docs, hub.grants)
        apply(replica, cs, hub.fetcher())
        assert replica.held(d1)[1].deprecated


class TestPush:
    def test_supplier_push_bumps_hub(self, fixture):
        hub, _, (d1, _, _) = fixture
        supplier = Replica(owner="SUP-A")
        ack = push(supplier, hub.docs, d1, b"manual rev 3", "PDF", NOW)
        assert ack.version == 3

    def test_read_only_push_rejected(self, fixture):
        hub, replica, (d1, _, _) = fixture
        with pytest.raises(Unauthorized):
            push(replica, hub.docs, d1, b"yard edit", "PDF", NOW)

    def test_identical_push_acks_unchanged_version(self, fixture):
        hub, _, (d1, _, _) = fixture
        supplier = Replica(owner="SUP-A")
        ack = push(supplier, hub.docs, d1, b"manual rev 2", "PDF", NOW)
        assert ack.version == 2
        assert len(hub.docs.versions(d1)) == 2


PART_POOL = [
    ("362.003", "COOL-X", "SUP-A"),
    ("362.004", "COOL-Y", "SUP-A"),
    ("363.001", "FREEZE-1", "SUP-B"),
    ("433.001", "PANEL-1", "SUP-B"),
    ("433.100", "CABLE-DRUM", "SUP-C"),
    ("551.002", "CRANE-ARM", "SUP-C"),
    ("801.001", "BALLAST-PUMP", "SUP-D"),
]
DOC_NAMES = ["user manual", "test certificate", "drawing"]
SCOPES = ["", "3", "36", "362", "363", "4", "43", "433", "5", "8"]


def random_hub(rng: random.Random) -> Hub:
    hub = Hub()
    for code, name, sup in PART_POOL:
        hub.tree.register_part(part(code, name, sup))
    doc_count = 0
    for code, name, sup in PART_POOL:
        p = part(code, name, sup)
        for doc_name in rng.sample(DOC_NAMES, rng.randint(0, len(DOC_NAMES))):
            if doc_count >= 12:
                break
            d = DocumentId(part=p, doc_name=doc_name)
            for rev in range(rng.randint(1, 4)):
                hub.docs.upload(d, f"{code}/{doc_name}/rev{rev}".encode(), "PDF", sup, NOW)
            if rng.random() < 0.4:
                victim = rng.randint(1, len(hub.docs.versions(d)))
                hub.docs.deprecate(d, victim, sup)
            doc_count += 1
    for _ in range(rng.randint(0, 5)):
        hub.grants.grant("YARD-2", rng.choice(SCOPES), rng.choice(list(Level)), OWNER)
    return hub


def test_randomized_convergence_and_confidentiality():
    rng = random.Random(2026)
    for _ in range(60):
        hub = random_hub(rng)
        replica = Replica(owner="YARD-2")
        adopted = [
            part(*spec) for spec in rng.sample(PART_POOL, rng.randint(0, len(PART_POOL)))
        ]
        for p in adopted:
            replica.register_part(p)

        # first pass with a lossy transport to create holes
        first = diff(replica, hub.tree, hub.docs, hub.grants)
        flaky = lambda digest: (
            b"corrupt" if rng.random() < 0.3 else hub.docs.content(digest)
        )
        apply(replica, first, flaky)

        second = diff(replica, hub.tree, hub.docs, hub.grants)
        apply(replica, second, hub.fetcher())

        for cs in (first, second):
            for entry in cs.entries:
                assert hub.grants.check("YARD-2", entry.doc.path, Level.READ), "leak"

        expected = accessible_projection(hub, adopted, "YARD-2")
        assert replica_projection(replica, expected) == expected
        assert len(diff(replica, hub.tree, hub.docs, hub.grants)) == 0
