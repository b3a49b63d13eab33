"""Role-labelled simple graphs on bitset adjacency, plus the primitives the
classification machinery is built from: deletion, complement, distances,
cliques and a canonical form for isomorphism testing.

Vertices carry labels like ``a3``, ``b5``, ``c`` or ``c2``.  Adjacency is one
Python int per vertex, bit ``j`` of row ``i`` set iff ``i ~ j``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 64
INF = math.inf

ROLE_ORDER = {"A": 0, "B": 1, "Cfixed": 2, "C": 3}
_LABEL_RE = re.compile(r"^([abc])(\d*)$")


class GraphError(ValueError):
    """Malformed graph construction or an operation on an absent element."""


class SizeCapError(GraphError):
    pass


@dataclass(frozen=True)
class VertexLabel:
    role: str
    index: int = 1

    def __post_init__(self):
        if self.role not in ROLE_ORDER:
            raise GraphError(f"unknown vertex role {self.role!r}")
        if self.index < 1:
            raise GraphError(f"vertex index must be >= 1, got {self.index}")

    @property
    def sort_key(self) -> tuple[int, int]:
        return ROLE_ORDER[self.role], self.index

    def __lt__(self, other: "VertexLabel") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if self.role == "Cfixed":
            return "c"
        return f"{self.role.lower()}{self.index}"

    def __repr__(self) -> str:
        return f"V({self})"


def parse_label(text: str | VertexLabel) -> VertexLabel:
    if isinstance(text, VertexLabel):
        return text
    m = _LABEL_RE.match(text.strip())
    if not m:
        raise GraphError(f"bad vertex label {text!r}")
    letter, digits = m.groups()
    if letter == "c" and not digits:
        return VertexLabel("Cfixed", 1)
    if not digits:
        raise GraphError(f"vertex label {text!r} needs an index")
    return VertexLabel(letter.upper(), int(digits))


def V(text: str) -> VertexLabel:
    """Shorthand used across tests and the CLI: ``V("b3")``."""
    return parse_label(text)


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class LabeledGraph:
    labels: tuple[VertexLabel, ...]
    rows: tuple[int, ...]
    _pos: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self._pos is None:
            object.__setattr__(self, "_pos", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label) -> int:
        lab = parse_label(label)
        try:
            return self._pos[lab]
        except KeyError:
            raise GraphError(f"vertex {lab} not in graph") from None

    def __contains__(self, label) -> bool:
        return parse_label(label) in self._pos

    def has_edge(self, u, v) -> bool:
        return bool(self.rows[self.index(u)] >> self.index(v) & 1)

    def degree(self, v) -> int:
        return self.rows[self.index(v)].bit_count()

    def neighbors(self, v) -> list[VertexLabel]:
        return [self.labels[j] for j in _bits(self.rows[self.index(v)])]

    def edge_indices(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.rows[i] >> (i + 1) << (i + 1))]

    def edges(self) -> list[tuple[VertexLabel, VertexLabel]]:
        """Edges as label pairs, each pair sorted, the list sorted."""
        out = []
        for i, j in self.edge_indices():
            a, b = sorted((self.labels[i], self.labels[j]))
            out.append((a, b))
        return sorted(out, key=lambda e: (e[0].sort_key, e[1].sort_key))

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted((r.bit_count() for r in self.rows), reverse=True))

    def same_labelled(self, other: "LabeledGraph") -> bool:
        """Equality as labelled graphs, ignoring vertex order."""
        return set(self.labels) == set(other.labels) and set(self.edges()) == set(other.edges())

    def __str__(self) -> str:
        es = " ".join(f"{a}{b}" for a, b in self.edges())
        return f"Graph[{' '.join(map(str, self.labels))} | {es}]"


def _from_rows(labels: Sequence[VertexLabel], rows: Sequence[int]) -> LabeledGraph:
    return LabeledGraph(tuple(labels), tuple(rows))


def build_graph(labels: Iterable, edges: Iterable = ()) -> LabeledGraph:
    labs = [parse_label(x) for x in labels]
    if len(set(labs)) != len(labs):
        dup = sorted({x for x in labs if labs.count(x) > 1})
        raise GraphError(f"duplicate vertex label(s): {', '.join(map(str, dup))}")
    if len(labs) > MAX_VERTICES:
        raise SizeCapError(f"{len(labs)} vertices exceeds cap {MAX_VERTICES}")
    pos = {lab: i for i, lab in enumerate(labs)}
    rows = [0] * len(labs)
    for e in edges:
        u, v = (parse_label(x) for x in e)
        if u not in pos or v not in pos:
            missing = u if u not in pos else v
            raise GraphError(f"edge endpoint {missing} not among the vertices")
        if u == v:
            raise GraphError(f"loop at {u}")
        i, j = pos[u], pos[v]
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return _from_rows(labs, rows)


def induced_subgraph(g: LabeledGraph, keep_mask: int) -> LabeledGraph:
    """Subgraph induced on the vertices whose bits are set in ``keep_mask``."""
    idx = list(_bits(keep_mask & g.full_mask))
    remap = {old: new for new, old in enumerate(idx)}
    rows = []
    for old in idx:
        r = 0
        for j in _bits(g.rows[old] & keep_mask):
            r |= 1 << remap[j]
        rows.append(r)
    return _from_rows([g.labels[i] for i in idx], rows)


def induced_on(g: LabeledGraph, labels: Iterable) -> LabeledGraph:
    mask = 0
    for lab in labels:
        mask |= 1 << g.index(lab)
    return induced_subgraph(g, mask)


def delete_vertex(g: LabeledGraph, v) -> LabeledGraph:
    i = g.index(v)
    return induced_subgraph(g, g.full_mask & ~(1 << i))


def delete_vertices(g: LabeledGraph, vs: Iterable) -> LabeledGraph:
    mask = g.full_mask
    for v in vs:
        mask &= ~(1 << g.index(v))
    return induced_subgraph(g, mask)


def delete_edges(g: LabeledGraph, pairs: Iterable) -> LabeledGraph:
    rows = list(g.rows)
    for u, v in pairs:
        i, j = g.index(u), g.index(v)
        if not rows[i] >> j & 1:
            raise GraphError(f"{parse_label(u)}{parse_label(v)} is not an edge")
        rows[i] &= ~(1 << j)
        rows[j] &= ~(1 << i)
    return _from_rows(g.labels, rows)


def delete_edge_indices(g: LabeledGraph, pairs: Iterable[tuple[int, int]]) -> LabeledGraph:
    rows = list(g.rows)
    for i, j in pairs:
        rows[i] &= ~(1 << j)
        rows[j] &= ~(1 << i)
    return _from_rows(g.labels, rows)


def complement(g: LabeledGraph) -> LabeledGraph:
    full = g.full_mask
    return _from_rows(g.labels, [full & ~r & ~(1 << i) for i, r in enumerate(g.rows)])


def relabel(g: LabeledGraph, mapping: dict) -> LabeledGraph:
    """Rename vertices; ``mapping`` must be injective on the vertex set."""
    m = {parse_label(k): parse_label(v) for k, v in mapping.items()}
    labs = [m.get(x, x) for x in g.labels]
    if len(set(labs)) != len(labs):
        raise GraphError("relabelling is not injective")
    return _from_rows(labs, g.rows)


def permute(g: LabeledGraph, order: Sequence[int]) -> LabeledGraph:
    """Reorder vertices: new vertex ``k`` is old vertex ``order[k]``."""
    inv = {old: new for new, old in enumerate(order)}
    rows = []
    for old in order:
        r = 0
        for j in _bits(g.rows[old]):
            r |= 1 << inv[j]
        rows.append(r)
    return _from_rows([g.labels[i] for i in order], rows)


# --- connectivity and distances -------------------------------------------

def reach_mask(rows: Sequence[int], start: int, within: int) -> int:
    seen = frontier = 1 << start
    while frontier:
        nxt = 0
        for i in _bits(frontier):
            nxt |= rows[i]
        frontier = nxt & within & ~seen
        seen |= frontier
    return seen


def component_masks(g: LabeledGraph) -> list[int]:
    left = g.full_mask
    out = []
    while left:
        s = (left & -left).bit_length() - 1
        comp = reach_mask(g.rows, s, g.full_mask)
        out.append(comp)
        left &= ~comp
    return out


def connected_components(g: LabeledGraph) -> list[list[VertexLabel]]:
    comps = [[g.labels[i] for i in _bits(m)] for m in component_masks(g)]
    comps = [sorted(c) for c in comps]
    return sorted(comps, key=lambda c: [x.sort_key for x in c])


def is_connected(g: LabeledGraph) -> bool:
    return g.n == 0 or reach_mask(g.rows, 0, g.full_mask) == g.full_mask


def bfs_layers(g: LabeledGraph, src: int) -> list[int]:
    """Distance layers from ``src`` as bitmasks; layer 0 is ``{src}``."""
    layers = [1 << src]
    seen = 1 << src
    while True:
        nxt = 0
        for i in _bits(layers[-1]):
            nxt |= g.rows[i]
        nxt &= ~seen
        if not nxt:
            return layers
        seen |= nxt
        layers.append(nxt)


def distances(g: LabeledGraph) -> list[list[float]]:
    out = []
    for s in range(g.n):
        row = [INF] * g.n
        for d, layer in enumerate(bfs_layers(g, s)):
            for i in _bits(layer):
                row[i] = d
        out.append(row)
    return out


def distance(g: LabeledGraph, u, v) -> float:
    return distances(g)[g.index(u)][g.index(v)]


def eccentricity(g: LabeledGraph, v) -> int:
    return len(bfs_layers(g, g.index(v))) - 1


def component_diameters(g: LabeledGraph) -> list[int]:
    """Diameter of each component, in the order of ``connected_components``."""
    out = []
    for comp in connected_components(g):
        out.append(max(eccentricity(g, v) for v in comp))
    return out


def diameter(g: LabeledGraph) -> int:
    """Largest finite distance in ``g`` (0 for an empty or edgeless graph)."""
    return max((len(bfs_layers(g, s)) - 1 for s in range(g.n)), default=0)


# --- Palfy witness ---------------------------------------------------------

def complement_triangle_indices(g: LabeledGraph) -> tuple[int, int, int] | None:
    full = g.full_mask
    for i in range(g.n):
        non_i = full & ~g.rows[i] & ~((2 << i) - 1)
        for j in _bits(non_i):
            common = non_i & ~g.rows[j] & ~((2 << j) - 1)
            if common:
                return i, j, (common & -common).bit_length() - 1
    return None


def complement_triangle(g: LabeledGraph) -> tuple[VertexLabel, VertexLabel, VertexLabel] | None:
    """Three pairwise non-adjacent vertices, or ``None`` if every triple spans an edge."""
    t = complement_triangle_indices(g)
    if t is None:
        return None
    return tuple(sorted(g.labels[i] for i in t))


# --- cliques ---------------------------------------------------------------

def _bron_kerbosch(rows, r, p, x, out):
    if not p and not x:
        out.append(r)
        return
    pivot_pool = p | x
    pivot = max(_bits(pivot_pool), key=lambda u: (rows[u] & p).bit_count())
    for v in _bits(p & ~rows[pivot]):
        _bron_kerbosch(rows, r | 1 << v, p & rows[v], x & rows[v], out)
        p &= ~(1 << v)
        x |= 1 << v


def maximal_clique_masks(g: LabeledGraph) -> list[int]:
    out: list[int] = []
    if g.n:
        _bron_kerbosch(g.rows, 0, g.full_mask, 0, out)
    return out


def maximal_cliques(g: LabeledGraph) -> list[frozenset[VertexLabel]]:
    cliques = [sorted(g.labels[i] for i in _bits(m)) for m in maximal_clique_masks(g)]
    cliques.sort(key=lambda c: [x.sort_key for x in c])
    return [frozenset(c) for c in cliques]


def is_clique(g: LabeledGraph, labels: Iterable) -> bool:
    idx = [g.index(x) for x in labels]
    return all(g.rows[i] >> j & 1 for a, i in enumerate(idx) for j in idx[a + 1:])


# --- canonical form --------------------------------------------------------

@dataclass(frozen=True)
class CanonicalForm:
    certificate: bytes
    orbits: tuple[tuple[VertexLabel, ...], ...] | None = None

    def hex(self) -> str:
        return self.certificate.hex()

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.certificate == other.certificate

    def __hash__(self):
        return hash(self.certificate)


def _refine(rows: Sequence[int], cells: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition given as cell bitmasks.

    Splitting is driven only by neighbour counts into earlier-ordered cells,
    so the result is invariant under vertex renaming.
    """
    cells = list(cells)
    changed = True
    while changed:
        changed = False
        new_cells = []
        for cell in cells:
            if cell & (cell - 1) == 0:
                new_cells.append(cell)
                continue
            groups: dict[tuple[int, ...], int] = {}
            for v in _bits(cell):
                sig = tuple((rows[v] & c).bit_count() for c in cells)
                groups[sig] = groups.get(sig, 0) | 1 << v
            if len(groups) > 1:
                changed = True
                new_cells.extend(groups[s] for s in sorted(groups))
            else:
                new_cells.append(cell)
        cells = new_cells
    return cells


def _certificate(rows: Sequence[int], order: Sequence[int]) -> bytes:
    n = len(order)
    bits = 0
    nbit = 0
    for a in range(n):
        ra = rows[order[a]]
        for b in range(a + 1, n):
            bits = bits << 1 | (ra >> order[b] & 1)
            nbit += 1
    nbytes = (nbit + 7) // 8
    return bytes([n]) + bits.to_bytes(nbytes, "big") if nbytes else bytes([n])


def _twin_reps(rows: Sequence[int], cell: int) -> list[int]:
    reps: list[int] = []
    for v in _bits(cell):
        for u in reps:
            if rows[u] & ~(1 << v) == rows[v] & ~(1 << u):
                break
        else:
            reps.append(v)
    return reps


class _Search:
    def __init__(self, rows):
        self.rows = rows
        self.n = len(rows)
        self.best: bytes | None = None
        self.best_order: list[int] | None = None
        self.autos: list[list[int]] = []

    def leaf(self, order):
        cert = _certificate(self.rows, order)
        if self.best is None or cert > self.best:
            self.best, self.best_order = cert, list(order)
        elif cert == self.best:
            g = [0] * self.n
            for a, b in zip(self.best_order, order):
                g[b] = a
            self.autos.append(g)

    def orbit_find(self, path):
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.autos:
            if all(g[p] == p for p in path):
                for v in range(self.n):
                    a, b = find(v), find(g[v])
                    if a != b:
                        parent[a] = b
        return find

    def run(self, cells, path):
        cells = _refine(self.rows, cells)
        target = next((k for k, c in enumerate(cells) if c & (c - 1)), None)
        if target is None:
            self.leaf([c.bit_length() - 1 for c in cells])
            return
        cell = cells[target]
        explored: list[int] = []
        for v in _twin_reps(self.rows, cell):
            if explored:
                find = self.orbit_find(path)
                if find(v) in {find(x) for x in explored}:
                    continue
            child = cells[:target] + [1 << v, cell & ~(1 << v)] + cells[target + 1:]
            self.run(child, path + [v])
            explored.append(v)


def canonical_order(g: LabeledGraph) -> list[int]:
    if g.n > MAX_VERTICES:
        raise SizeCapError(f"{g.n} vertices exceeds cap {MAX_VERTICES}")
    if g.n == 0:
        return []
    s = _Search(g.rows)
    s.run([g.full_mask], [])
    return s.best_order


def canonical_form(g: LabeledGraph) -> CanonicalForm:
    """Certificate equal for two graphs iff they are isomorphic (labels ignored)."""
    if g.n > MAX_VERTICES:
        raise SizeCapError(f"{g.n} vertices exceeds cap {MAX_VERTICES}")
    if g.n == 0:
        return CanonicalForm(bytes([0]), ())
    s = _Search(g.rows)
    s.run([g.full_mask], [])
    find = s.orbit_find([])
    groups: dict[int, list[VertexLabel]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(g.labels[v])
    orbits = sorted((tuple(sorted(o)) for o in groups.values()), key=lambda o: [x.sort_key for x in o])
    return CanonicalForm(s.best, tuple(orbits))


def is_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    if g.n != h.n or g.edge_count != h.edge_count or g.degree_sequence() != h.degree_sequence():
        return False
    return canonical_form(g).certificate == canonical_form(h).certificate


def find_isomorphism(g: LabeledGraph, h: LabeledGraph) -> dict[VertexLabel, VertexLabel] | None:
    """Vertex bijection g -> h preserving adjacency, if one exists."""
    if not is_isomorphic(g, h):
        return None
    og, oh = canonical_order(g), canonical_order(h)
    return {g.labels[a]: h.labels[b] for a, b in zip(og, oh)}


# --- export ------------------------------------------------------------------

def to_dot(g: LabeledGraph, name: str = "G") -> str:
    lines = [f"graph \"{name}\" {{"]
    for lab in sorted(g.labels):
        lines.append(f"  {lab};")
    for a, b in g.edges():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- spanning embeddings -------------------------------------------------------

def twin_classes(g: LabeledGraph) -> list[int]:
    """Per-vertex bitmask of its twin class (same neighbourhood up to each other)."""
    cls = [0] * g.n
    for v in range(g.n):
        for u in range(g.n):
            if g.rows[u] & ~(1 << v) == g.rows[v] & ~(1 << u):
                cls[v] |= 1 << u
    return cls


def find_spanning_embedding(g: LabeledGraph, host: LabeledGraph) -> dict[VertexLabel, VertexLabel] | None:
    """Bijection from ``g`` onto ``host``'s vertices mapping every edge of ``g``
    to an edge of ``host``; ``None`` if ``g`` is not a spanning subgraph of
    ``host`` up to isomorphism.
    """
    n = g.n
    if n != host.n or g.edge_count > host.edge_count:
        return None
    gd = sorted((r.bit_count() for r in g.rows), reverse=True)
    hd = sorted((r.bit_count() for r in host.rows), reverse=True)
    if any(a > b for a, b in zip(gd, hd)):
        return None
    if n == 0:
        return {}
    hdeg = [r.bit_count() for r in host.rows]
    twins = twin_classes(host)
    # vertex order: repeatedly take the unplaced vertex with most placed
    # neighbours, ties by degree
    order: list[int] = []
    placed = 0
    while len(order) < n:
        best = max(
            (v for v in range(n) if not placed >> v & 1),
            key=lambda v: ((g.rows[v] & placed).bit_count(), g.rows[v].bit_count(), -v),
        )
        order.append(best)
        placed |= 1 << best
    domains = []
    for v in order:
        d = g.rows[v].bit_count()
        dom = 0
        for w in range(n):
            if hdeg[w] >= d:
                dom |= 1 << w
        domains.append(dom)
    image = [-1] * n

    def rec(depth: int, used: int) -> bool:
        if depth == n:
            return True
        v = order[depth]
        cand = domains[depth] & ~used
        for u in _bits(g.rows[v]):
            if image[u] >= 0:
                cand &= host.rows[image[u]]
        tried = 0
        for w in _bits(cand):
            if tried >> w & 1:
                continue
            tried |= twins[w] & ~used
            image[v] = w
            if rec(depth + 1, used | 1 << w):
                return True
            image[v] = -1
        return False

    if not rec(0, 0):
        return None
    return {g.labels[v]: host.labels[image[v]] for v in range(n)}
