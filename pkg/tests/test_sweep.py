from itertools import combinations

import pytest

from oracles import connected_spanning_subgraphs, edge_set, names, palfy_by_triples
from primegraph.families import C_FIXED, Gamma, SigmaR, SigmaRStar, generate
from primegraph.graph import V, induced_on
from primegraph.kb import KnowledgeBase, seeded_kb, sweep_key
from primegraph.rules import PALFY, Prover
from primegraph.sweep import SweepCapError, spanning_sweep, vertex_set_sweep


def oracle_counts(g, proper):
    vs, es = names(g), edge_set(g)
    conn = palfy_ok = 0
    for chosen in connected_spanning_subgraphs(vs, es, proper):
        conn += 1
        palfy_ok += palfy_by_triples(vs, chosen)
    return conn, palfy_ok


def vertex_sets(spec, p):
    g = generate(spec)
    pi = g.neighbors(p)
    rho = [x for x in g.labels if x not in pi and x != p]
    for r in range(1, len(pi) + 1):
        for chosen in combinations(pi, r):
            yield induced_on(g, [p, *chosen, *rho]), r == len(pi)


@pytest.mark.parametrize("spec,p", [(SigmaR(2, 1), C_FIXED), (SigmaR(2, 2), C_FIXED), (SigmaRStar(2, 1, 2), V("c1"))])
@pytest.mark.parametrize("mode", ["exhaustive", "pruned"])
def test_counts_match_brute_force(spec, p, mode):
    rep = vertex_set_sweep(spec, p, Prover(seeded_kb()), install=False, mode=mode)
    assert rep.reconciles()
    residue = 0
    for row, (sub, whole) in zip(rep.rows, vertex_sets(spec, p)):
        conn, survivors = oracle_counts(sub, proper=whole)
        residue += survivors
        assert row.residue == survivors
        if mode == "exhaustive":
            assert row.connected == conn and row.palfy == conn - survivors
    assert rep.enumerated - rep.certified.get(PALFY, 0) == residue


def test_gamma_spanning_sweep_matches_brute_force():
    rep = spanning_sweep(Gamma(5, 3), Prover(seeded_kb()))
    conn, survivors = oracle_counts(generate(Gamma(5, 3)), proper=True)
    assert rep.enumerated == conn == 29835
    assert rep.certified[PALFY] == conn - survivors
    assert rep.ok and rep.reconciles()


def test_exhaustive_and_pruned_leave_the_same_residue():
    kb = seeded_kb()
    reps = {m: vertex_set_sweep(SigmaR(3, 1), C_FIXED, Prover(kb), install=False, mode=m)
            for m in ("exhaustive", "pruned")}
    ex, pr = reps["exhaustive"], reps["pruned"]
    assert [r.residue for r in ex.rows] == [r.residue for r in pr.rows]
    assert ex.ok and pr.ok


def test_residue_listing_without_the_base_entry():
    rep = vertex_set_sweep(SigmaRStar(3, 1, 2), V("c1"), Prover(seeded_kb()), install=False)
    assert len(rep.uncertified) == 1 and not rep.ok
    assert rep.uncertified[0].startswith("on {a1,a2,a3,b1,b2,b3,b4,c1}")


def test_sweep_installs_closure_entry():
    kb = seeded_kb()
    rep = vertex_set_sweep(SigmaR(3, 1), C_FIXED, Prover(kb), kb)
    assert rep.ok and kb.get(sweep_key(SigmaR(3, 1), "c")) is not None


def test_parallel_jobs_give_identical_reports():
    one = vertex_set_sweep(SigmaR(3, 1), C_FIXED, Prover(seeded_kb()), install=False, jobs=1)
    two = vertex_set_sweep(SigmaR(3, 1), C_FIXED, Prover(seeded_kb()), install=False, jobs=2)
    assert one.to_dict() == two.to_dict()


def test_edge_cap():
    with pytest.raises(SweepCapError):
        vertex_set_sweep(SigmaR(3, 1), C_FIXED, Prover(KnowledgeBase()), edge_cap=10, mode="exhaustive")
    rep = vertex_set_sweep(SigmaR(3, 1), C_FIXED, Prover(seeded_kb()), edge_cap=10, install=False)
    assert rep.mode == "pruned"


def test_unknown_mode():
    with pytest.raises(ValueError):
        vertex_set_sweep(SigmaR(3, 1), C_FIXED, Prover(KnowledgeBase()), mode="gray")
