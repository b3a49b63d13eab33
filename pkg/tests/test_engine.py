import json

import pytest

from primegraph.engine import (
    AXIOMS,
    Certificate,
    KmaxCapError,
    ReplayError,
    Replayer,
    build_ref,
    certificate_problems,
    emit,
    implication_edges,
    layered_oracle,
    replay_base,
    replay_chain,
    replay_theorem,
    validate_certificate,
)
from primegraph.families import SigmaR, SigmaRStar, generate
from primegraph.kb import SPANNING, VERTEX_SWEEP, Status, seeded_kb, spec_key, sweep_key
from primegraph.rules import DiameterBoundParams


@pytest.fixture(scope="module")
def theorem3():
    kb = seeded_kb()
    replayer = Replayer(kb)
    cert = replayer.theorem(3)
    return cert, kb, replayer


def test_base_case_validates_and_installs():
    kb = seeded_kb()
    cert = replay_base(3, kb)
    assert validate_certificate(cert, kb)
    assert SPANNING in kb.get(spec_key(SigmaR(3, 1))).closure
    assert SPANNING in kb.get(spec_key(SigmaRStar(3, 1, 2))).closure
    assert VERTEX_SWEEP in kb.get(sweep_key(SigmaRStar(3, 1, 2), "c1")).closure


def test_base_case_cites_published_four_vertex_witness(theorem3):
    cert, _, _ = theorem3
    leaf = cert.find("sigmaRstar:3,1,2/final/witness")
    assert leaf.payload["data"] == {"a": "a1", "b": "a2", "c": "b1", "d": "c1"}


def test_base_case_two_component_leaf(theorem3):
    cert, _, _ = theorem3
    leaf = cert.find("sigmaRstar:3,1,2/fitting/split")
    w = leaf.payload["verdict"]["witness"]
    assert leaf.status == "NonOccurring" and leaf.role == "obligation"
    assert w["sizes"] == [3, 6] and w["bound"] == 7


def test_sigma_r_3_3_records_equality(theorem3):
    cert, _, _ = theorem3
    leaf = cert.find("sigmaR:3,3/split")
    w = leaf.payload["verdict"]["witness"]
    assert leaf.role == "remark" and leaf.status == "Unknown"
    assert w["sizes"] == [3, 7] and w["equality"] is True and "7 = 2^3 - 1" in leaf.claim


def test_chain_shapes(theorem3):
    cert, _, _ = theorem3
    for t in (1, 2):
        chain = cert.find(f"chain:3,{t}")
        assert len(chain.children) == t
        assert chain.payload["chain"] == [SigmaRStar(3, i, t + 2 - i).to_string() for i in range(1, t + 1)]


def test_chain_audits_cite_previous_elements(theorem3):
    _, _, replayer = theorem3
    for spec_id, cited in (("sigmaRstar:3,1,3", "spec:sigmaRstar:3,1,2"), ("sigmaRstar:3,2,2", "spec:sigmaR:3,2")):
        node = replayer.nodes[spec_id]
        audit = node.find(f"{spec_id}/audits/c1")
        entries = {leaf.payload["verdict"]["witness"].get("entry") for leaf in audit.children}
        assert cited in entries


def test_hypothesis_axiom_lists_dependencies(theorem3):
    cert, kb, _ = theorem3
    hyp = cert.find("sigmaR:3,3/hyp")
    assert hyp.payload["axiom"] == "normal-sylow-hypothesis"
    kids = {c.node_id for c in hyp.children}
    assert kids == {"sigmaR:3,3/hyp/gamma", "sigmaR:3,3/hyp/sigmaRstar:3,2,2", "sigmaR:3,3/hyp/sigmaRstar:3,1,3"}
    assert cert.find("sigmaR:3,3/hyp/gamma").payload["verdict"]["witness"]["host"] == "gamma:6,3"


def test_theorem_validates_and_is_deterministic(theorem3):
    cert, kb, _ = theorem3
    assert certificate_problems(cert, kb) == []
    kb2 = seeded_kb()
    assert emit(replay_theorem(3, kb2)) == emit(cert)
    assert kb2.dumps() == kb.dumps()


def test_every_non_occurring_subtree_is_free_of_unknown_obligations(theorem3):
    cert, _, _ = theorem3
    for node in cert.walk():
        if node.status == "NonOccurring" and node.kind == "claim":
            for sub in node.walk():
                assert not (sub.role == "obligation" and sub.status == "Unknown" and sub.kind != "claim")


def test_axiom_leaves_come_from_the_registry(theorem3):
    cert, _, _ = theorem3
    used = {n.payload["axiom"] for n in cert.walk() if n.kind == "axiom"}
    assert used <= set(AXIOMS)
    assert {"gallagher", "complement-exists", "fitting-splits", "frattini-trivial"} <= used


def test_tampered_leaf_is_pinpointed(theorem3):
    cert, kb, _ = theorem3
    data = json.loads(emit(cert))
    copy = Certificate.from_dict(data)
    leaf = copy.find("sigmaR:3,1/audits/b1/0")
    leaf.payload["verdict"]["witness"]["host"] = "gamma:5,1"
    problems = certificate_problems(copy, kb, deep=False)
    assert any(p.startswith("sigmaR:3,1/audits/b1/0:") for p in problems)
    assert not validate_certificate(copy, kb, deep=False)


def test_altered_axiom_and_dangling_ref_fail(theorem3):
    cert, kb, _ = theorem3
    copy = Certificate.from_dict(json.loads(emit(cert)))
    copy.find("sigmaR:3,3/fitting").payload["statement"] = "anything goes"
    ref = next(n for n in copy.walk() if n.kind == "ref")
    ref.payload["ref"] = "sigmaR:9,9"
    problems = certificate_problems(copy, kb, deep=False)
    assert any(p.startswith("sigmaR:3,3/fitting:") for p in problems)
    assert any(p.startswith(ref.node_id + ":") for p in problems)


def test_missing_kb_entry_fails(theorem3):
    cert, _, _ = theorem3
    assert not validate_certificate(cert, seeded_kb(), deep=False)


def test_dot_contains_chain(theorem3):
    cert, _, _ = theorem3
    dot = emit(cert, "dot").decode()
    assert dot.startswith("digraph")
    edges = set(implication_edges(cert))
    for a, b in [("sigmaRstar:3,1,2", "sigmaRstar:3,1,3"), ("sigmaRstar:3,1,3", "sigmaRstar:3,2,2"),
                 ("sigmaRstar:3,2,2", "sigmaR:3,3"), ("gamma:6,3", "sigmaR:3,3"), ("sigmaR:3,1", "sigmaRstar:3,1,2")]:
        assert (a, b) in edges
        assert f'"{a}" -> "{b}";' in dot


def test_text_rendering(theorem3):
    cert, _, _ = theorem3
    text = emit(cert, "text").decode()
    assert text.splitlines()[0] == "classification of Σ^R_{k,n} for k ≤ 3: NonOccurring"
    assert "[normal-sylow-hypothesis]" in text
    with pytest.raises(ValueError):
        emit(cert, "yaml")


def test_small_kmax_records_literature_statuses():
    kb = seeded_kb()
    cert = replay_theorem(2, kb)
    statuses = {c.payload["spec"]: c.status for c in cert.children}
    assert statuses == {"sigmaR:1,1": "Occurring", "sigmaR:2,1": "Unknown", "sigmaR:2,2": "Unknown"}
    assert not any(n.status == "NonOccurring" for n in cert.walk() if n.kind == "claim")
    splits = [n.payload["verdict"]["witness"]["sizes"] for n in cert.walk() if n.node_id.endswith("/split")]
    assert splits == [[2, 4], [2, 5]]


def test_chain_needs_its_prerequisite():
    with pytest.raises(ReplayError, match="established first"):
        replay_chain(3, 2, seeded_kb())


def test_unknown_obligation_aborts_with_subgraph():
    with pytest.raises(ReplayError, match=r"Σ\^R_\{3,1\}\[b2\]"):
        replay_base(3, seeded_kb(), diameter=DiameterBoundParams("off"))


def test_kmax_cap():
    with pytest.raises(KmaxCapError):
        Replayer(seeded_kb()).theorem(7)


def test_graph_refs_rebuild_subgraphs():
    g = build_ref({"base": "sigmaRstar:3,1,2", "delete": ["b1", "a1-b4"]})
    assert "b1" not in {str(v) for v in g.labels}
    assert not g.has_edge("a1", "b4")
    assert g.edge_count == generate(SigmaRStar(3, 1, 2)).edge_count - 7


def test_layered_oracle_k3():
    kb = seeded_kb()
    reports = layered_oracle(3, kb)
    assert [r.ok for r in reports] == [True] * 4
    assert all(r.reconciles() for r in reports)
    assert kb.status_of(SigmaR(3, 1)) is Status.NON_OCCURRING
