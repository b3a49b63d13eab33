"""Sound non-occurrence criteria and the prover that chains them.

Every rule returns a :class:`Verdict`.  A ``NonOccurring`` verdict always
carries a witness that :func:`revalidate` can re-check from the graph alone
(plus the knowledge base for the ``kb-*`` rules).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable

from .families import FamilySpec, generate, parse_spec, recognize, edge_count
from .graph import (
    LabeledGraph,
    _bits,
    bfs_layers,
    canonical_form,
    component_masks,
    complement_triangle,
    find_spanning_embedding,
    induced_subgraph,
    is_connected,
    is_isomorphic,
    parse_label,
)
from .kb import SPANNING, VERTEX_SWEEP, KnowledgeBase, Status, form_key, spec_key

PALFY = "palfy"
TWO_COMPONENT = "two-component"
DIAMETER = "diameter-bound"
GAMMA = "gamma-theorem"
KB_DIRECT = "kb-direct"
KB_CLOSURE = "kb-closure"

DEFAULT_ORDER = (PALFY, TWO_COMPONENT, DIAMETER, GAMMA, KB_DIRECT, KB_CLOSURE)
MONOTONE_RULES = frozenset({PALFY})


@dataclass(frozen=True)
class Verdict:
    status: Status
    rule: str | None = None
    witness: dict = field(default_factory=dict)

    @property
    def non_occurring(self) -> bool:
        return self.status is Status.NON_OCCURRING

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def to_dict(self) -> dict:
        return {"status": self.status.value, "rule": self.rule, "witness": self.witness}

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(Status(d["status"]), d.get("rule"), d.get("witness") or {})

    def summary(self) -> str:
        if self.rule is None:
            return self.status.value
        return f"{self.status.value} ({self.rule})"


UNKNOWN = Verdict(Status.UNKNOWN)


def _labels(g: LabeledGraph, mask: int) -> list[str]:
    return [str(x) for x in sorted(g.labels[i] for i in _bits(mask))]


# --- Palfy's three-vertex condition -------------------------------------------

def check_palfy(g: LabeledGraph) -> Verdict:
    t = complement_triangle(g)
    if t is None:
        return UNKNOWN
    return Verdict(Status.NON_OCCURRING, PALFY, {"triple": [str(x) for x in t]})


# --- Palfy's inequality for two components ----------------------------------------

def check_two_component_inequality(g: LabeledGraph) -> Verdict:
    comps = component_masks(g)
    if len(comps) < 2:
        return UNKNOWN
    if len(comps) >= 3:
        return check_palfy(g)
    a, b = sorted(c.bit_count() for c in comps)
    bound = 2 ** a - 1
    witness = {
        "sizes": [a, b],
        "bound": bound,
        "equality": b == bound,
        "components": sorted((_labels(g, c) for c in comps), key=len),
    }
    if b < bound:
        return Verdict(Status.NON_OCCURRING, TWO_COMPONENT, witness)
    return Verdict(Status.UNKNOWN, None, witness)


# --- diameter-three bound -------------------------------------------------------------

@dataclass(frozen=True)
class DiameterBoundParams:
    """Which vertices must violate ``|D2 ∪ D3| >= 2^(|D1| + shift) + offset``.

    ``selector="exists"`` fires when one vertex with a non-empty third
    distance layer violates the bound; ``"all"`` requires every such vertex
    to; ``"off"`` disables the rule.
    """

    selector: str = "all"
    shift: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.selector not in ("exists", "all", "off"):
            raise ValueError(f"unknown diameter-bound selector {self.selector!r}")

    def bound(self, d1: int) -> int:
        return 2 ** (d1 + self.shift) + self.offset

    def describe(self) -> str:
        exp = "|D1|" if not self.shift else f"|D1|{self.shift:+d}"
        off = f"{self.offset:+d}" if self.offset else ""
        return f"{self.selector}: |D2∪D3| < 2^({exp}){off}"

    def to_dict(self) -> dict:
        return {"selector": self.selector, "shift": self.shift, "offset": self.offset}

    @classmethod
    def parse(cls, text: str) -> "DiameterBoundParams":
        """``all``, ``all:1``, ``exists:0:-1`` (selector[:shift[:offset]]); omitted
        numbers fall back to the defaults."""
        parts = text.split(":")
        try:
            vals = [int(x) for x in parts[1:]]
        except ValueError:
            raise ValueError(f"bad diameter-bound parameters {text!r}") from None
        if len(vals) > 2:
            raise ValueError(f"bad diameter-bound parameters {text!r}")
        defaults = [cls.shift, cls.offset]
        vals += defaults[len(vals):]
        return cls(parts[0], vals[0], vals[1])


def distance_layers(g: LabeledGraph, v: int) -> tuple[int, int, int]:
    layers = bfs_layers(g, v) + [0, 0, 0]
    return layers[1], layers[2], layers[3]


def check_diameter_bound(g: LabeledGraph, params: DiameterBoundParams | None = None) -> Verdict:
    params = params or DiameterBoundParams()
    if params.selector == "off" or g.n == 0 or not is_connected(g):
        return UNKNOWN
    firing = []
    holding = 0
    for v in range(g.n):
        d1, d2, d3 = distance_layers(g, v)
        if not d3:
            continue
        far = (d2 | d3).bit_count()
        if far < params.bound(d1.bit_count()):
            firing.append((v, d1, d2, d3))
            if params.selector == "exists":
                break
        else:
            holding += 1
    if not firing or (params.selector == "all" and holding):
        return UNKNOWN
    v, d1, d2, d3 = max(firing, key=lambda f: f[1].bit_count())
    return Verdict(Status.NON_OCCURRING, DIAMETER, {
        "p": str(g.labels[v]),
        "D1": _labels(g, d1),
        "D2": _labels(g, d2),
        "D3": _labels(g, d3),
        "bound": params.bound(d1.bit_count()),
        "params": params.to_dict(),
    })


# --- Gamma_{k,t} theorem ----------------------------------------------------------------

def gamma_occurs(k: int, t: int) -> bool:
    return t == 1 or k == t == 2


def matching_bipartitions(g: LabeledGraph):
    """Yield side masks ``S`` (vertex 0 in the complement side) such that the
    edges between ``S`` and its complement form a matching."""
    n = g.n
    side = [0] * n
    cross = [0] * n

    def rec(v):
        if v == n:
            yield sum(1 << i for i in range(n) if side[i])
            return
        for s in ((0,) if v == 0 else (0, 1)):
            bumped = []
            ok = True
            for u in _bits(g.rows[v] & ((1 << v) - 1)):
                if side[u] != s:
                    if cross[u] >= 1:
                        ok = False
                        break
                    bumped.append(u)
            if ok and len(bumped) <= 1:
                side[v] = s
                for u in bumped:
                    cross[u] += 1
                cross[v] = len(bumped)
                yield from rec(v + 1)
                for u in bumped:
                    cross[u] -= 1
                cross[v] = 0
                side[v] = 0

    yield from rec(0)


def gamma_host(g: LabeledGraph) -> tuple[int, int, int] | None:
    """``(k, t, small_side_mask)`` with ``g`` a connected proper spanning
    subgraph of a non-occurring Gamma_{k,t}, k >= t >= 2; else ``None``."""
    if g.n < 4 or not is_connected(g):
        return None
    full = g.full_mask
    for s in matching_bipartitions(g):
        a, b = (full & ~s).bit_count(), s.bit_count()
        small = s if b <= a else full & ~s
        k, t = max(a, b), min(a, b)
        if t < 2 or gamma_occurs(k, t):
            continue
        if g.edge_count < edge_count(_gamma(k, t)):
            return k, t, small
    return None


def _gamma(k, t):
    return FamilySpec("GammaKT", k, t=t)


def check_gamma_theorem(g: LabeledGraph) -> Verdict:
    spec = recognize(g)
    if spec is not None and spec.family == "GammaKT":
        st = Status.OCCURRING if gamma_occurs(spec.k, spec.t) else Status.NON_OCCURRING
        return Verdict(st, GAMMA, {"kind": "isomorphic", "host": spec.to_string()})
    found = gamma_host(g)
    if found is None:
        return UNKNOWN
    k, t, small = found
    return Verdict(Status.NON_OCCURRING, GAMMA, {
        "kind": "spanning-subgraph",
        "host": _gamma(k, t).to_string(),
        "small_side": _labels(g, small),
    })


# --- knowledge base rules -------------------------------------------------------------

def kb_lookup(g: LabeledGraph, kb: KnowledgeBase) -> Verdict:
    spec = recognize(g)
    keys = []
    if spec is not None:
        keys.append(spec_key(spec))
    keys.append(form_key(canonical_form(g)))
    for key in keys:
        e = kb.get(key)
        if e is not None:
            rule = KB_DIRECT if e.status is not Status.UNKNOWN else None
            return Verdict(e.status, rule, {"entry": key})
    return UNKNOWN


def sweep_members(host: LabeledGraph, p) -> tuple[int, int, int]:
    """``(p bit, pi mask, rho mask)`` for the vertex-set family of ``p``."""
    pi_ = host.index(p)
    return 1 << pi_, host.rows[pi_], host.full_mask & ~host.rows[pi_] & ~(1 << pi_)


def match_sweep_family(g: LabeledGraph, host: LabeledGraph, p) -> dict | None:
    """Locate ``g`` as a connected proper spanning subgraph on some vertex set
    ``{p} ∪ π* ∪ ρ`` of ``host``; returns the chosen vertex set and map."""
    if not is_connected(g):
        return None
    pbit, pi, rho = sweep_members(host, p)
    size = g.n - 1 - rho.bit_count()
    if size < 1 or size > pi.bit_count():
        return None
    pis = list(_bits(pi))
    for chosen in combinations(pis, size):
        mask = pbit | rho | sum(1 << i for i in chosen)
        sub = induced_subgraph(host, mask)
        if mask == host.full_mask and g.edge_count >= sub.edge_count:
            continue
        emb = find_spanning_embedding(g, sub)
        if emb is not None:
            return {"vertex_set": _labels(host, mask), "map": {str(a): str(b) for a, b in sorted(emb.items())}}
    return None


def kb_closure_lookup(g: LabeledGraph, kb: KnowledgeBase) -> Verdict:
    if not is_connected(g):
        return UNKNOWN
    for key, e in kb.entries.items():
        if e.status is not Status.NON_OCCURRING or not e.closure:
            continue
        spec = e.spec
        if spec is None or spec.family == "GammaKT":
            continue
        host = generate(spec)
        if SPANNING in e.closure and e.kind == "spec" and host.n == g.n and g.edge_count < host.edge_count:
            emb = find_spanning_embedding(g, host)
            if emb is not None:
                return Verdict(Status.NON_OCCURRING, KB_CLOSURE, {
                    "entry": key, "kind": "spanning",
                    "map": {str(a): str(b) for a, b in sorted(emb.items())},
                })
        if VERTEX_SWEEP in e.closure and e.kind == "sweep":
            hit = match_sweep_family(g, host, e.sweep_vertex)
            if hit is not None:
                return Verdict(Status.NON_OCCURRING, KB_CLOSURE, {"entry": key, "kind": "vertex-set-sweep", **hit})
    return UNKNOWN


# --- prover ------------------------------------------------------------------------------

class Prover:
    """Runs the rule battery in a fixed order; the first decisive verdict wins.

    Verdicts are memoised per labelled graph, so a prover must not outlive a
    change to its knowledge base that could flip a verdict (adding entries only
    turns ``Unknown`` into decisive answers, which is safe to recompute).
    """

    def __init__(self, kb: KnowledgeBase | None = None, rule_order: Iterable[str] = DEFAULT_ORDER,
                 diameter: DiameterBoundParams | None = None):
        self.kb = kb if kb is not None else KnowledgeBase()
        self.rule_order = tuple(rule_order)
        if sorted(self.rule_order) != sorted(DEFAULT_ORDER):
            raise ValueError(f"rule order must be a permutation of {', '.join(DEFAULT_ORDER)}")
        self.diameter = diameter or DiameterBoundParams()
        self._cache: dict[tuple, Verdict] = {}
        self._kb_size = len(self.kb)

    def run_rule(self, rule: str, g: LabeledGraph) -> Verdict:
        if rule == PALFY:
            return check_palfy(g)
        if rule == TWO_COMPONENT:
            return check_two_component_inequality(g)
        if rule == DIAMETER:
            return check_diameter_bound(g, self.diameter)
        if rule == GAMMA:
            return check_gamma_theorem(g)
        if rule == KB_DIRECT:
            return kb_lookup(g, self.kb)
        if rule == KB_CLOSURE:
            return kb_closure_lookup(g, self.kb)
        raise ValueError(f"unknown rule {rule!r}")

    def certify(self, g: LabeledGraph) -> Verdict:
        if len(self.kb) != self._kb_size:
            self._cache = {k: v for k, v in self._cache.items() if not v.unknown}
            self._kb_size = len(self.kb)
        key = (g.labels, g.rows)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        verdict = UNKNOWN
        for rule in self.rule_order:
            v = self.run_rule(rule, g)
            if v.rule is not None and not v.unknown:
                verdict = v
                break
        self._cache[key] = verdict
        return verdict


def certify_nonoccurrence(g: LabeledGraph, kb: KnowledgeBase | None = None,
                          rule_order: Iterable[str] = DEFAULT_ORDER,
                          diameter: DiameterBoundParams | None = None) -> Verdict:
    return Prover(kb, rule_order, diameter).certify(g)


# --- witness re-validation ----------------------------------------------------------------

def revalidate(g: LabeledGraph, verdict: Verdict, kb: KnowledgeBase | None = None) -> bool:
    """Independently re-check the witness behind a decisive verdict."""
    w: dict[str, Any] = verdict.witness
    rule = verdict.rule
    if verdict.unknown:
        return True
    try:
        if rule == PALFY:
            a, b, c = (parse_label(x) for x in w["triple"])
            return len({a, b, c}) == 3 and not (g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c))
        if rule == TWO_COMPONENT:
            comps = component_masks(g)
            sizes = sorted(c.bit_count() for c in comps)
            return len(comps) == 2 and sizes == w["sizes"] and sizes[1] < 2 ** sizes[0] - 1
        if rule == DIAMETER:
            params = DiameterBoundParams(**w["params"])
            v = g.index(w["p"])
            d1, d2, d3 = distance_layers(g, v)
            ok = (_labels(g, d1) == w["D1"] and _labels(g, d2) == w["D2"] and _labels(g, d3) == w["D3"])
            fires = bool(d3) and (d2 | d3).bit_count() < params.bound(d1.bit_count())
            if params.selector == "all":
                for u in range(g.n):
                    e1, e2, e3 = distance_layers(g, u)
                    if e3 and (e2 | e3).bit_count() >= params.bound(e1.bit_count()):
                        return False
            return ok and fires and is_connected(g)
        if rule == GAMMA:
            host = parse_spec(w["host"])
            if w["kind"] == "isomorphic":
                expect = Status.OCCURRING if gamma_occurs(host.k, host.t) else Status.NON_OCCURRING
                return is_isomorphic(g, generate(host)) and verdict.status is expect
            small = 0
            for x in w["small_side"]:
                small |= 1 << g.index(x)
            big = g.full_mask & ~small
            for i in range(g.n):
                other = big if small >> i & 1 else small
                if (g.rows[i] & other).bit_count() > 1:
                    return False
            k, t = big.bit_count(), small.bit_count()
            return ((k, t) == (host.k, host.t) and t >= 2 and not gamma_occurs(k, t)
                    and is_connected(g) and g.edge_count < edge_count(host))
        if rule in (KB_DIRECT, KB_CLOSURE):
            if kb is None:
                return False
            e = kb.get(w["entry"])
            if e is None or e.status is not verdict.status or not e.provenance:
                return False
            if rule == KB_DIRECT:
                return kb_lookup(g, kb).status is verdict.status
            host = generate(e.spec)
            mapping = {parse_label(a): parse_label(b) for a, b in w["map"].items()}
            if w["kind"] == "vertex-set-sweep":
                host = induced_subgraph(host, sum(1 << host.index(x) for x in w["vertex_set"]))
            if sorted(mapping) != sorted(g.labels) or sorted(mapping.values()) != sorted(host.labels):
                return False
            proper = g.edge_count < host.edge_count or host.n < generate(e.spec).n
            return (is_connected(g) and proper
                    and all(host.has_edge(mapping[a], mapping[b]) for a, b in g.edges()))
    except (KeyError, ValueError, TypeError):
        return False
    return False
