"""Star graph of a relative presentation.

Each relator, read cyclically with indeterminate powers expanded to single
letters, decomposes into corners (x^e, g, y^d): an incoming indeterminate
letter, the coefficient word g between it and the next indeterminate letter,
and that outgoing letter.  The corner contributes one edge from vertex x^e
to vertex y^-d labelled g.  Vertices are the signed indeterminate letters.

Edge ids are "<relator-index>.<corner-index>" with corner 0 the corner
following the first indeterminate letter of the stored relator rotation.
An alias "label:<compact-label>#<k>" (or without "#<k>" when unambiguous)
addresses edges by label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .scenario import INDETERMINATE, RelativePresentation
from .words import Word

Vertex = tuple[str, int]  # (indeterminate name, +1 or -1)


def vertex_name(v: Vertex) -> str:
    return v[0] if v[1] > 0 else f"{v[0]}^-1"


@dataclass(frozen=True)
class Edge:
    edge_id: str
    relator: int
    corner: int
    src: Vertex
    dst: Vertex
    label: Word
    factor: str  # factor name, or "identity-any" for unresolvable identity labels

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst

    def label_str(self) -> str:
        return self.label.compact()


class Traversal(NamedTuple):
    edge: Edge
    direction: int  # +1 src->dst reading label, -1 dst->src reading label^-1

    @property
    def start(self) -> Vertex:
        return self.edge.src if self.direction > 0 else self.edge.dst

    @property
    def end(self) -> Vertex:
        return self.edge.dst if self.direction > 0 else self.edge.src

    @property
    def label(self) -> Word:
        return self.edge.label if self.direction > 0 else self.edge.label.inverse()

    def atom(self) -> tuple[str, int]:
        return (self.edge.label_str(), self.direction)

    def reverse(self) -> "Traversal":
        return Traversal(self.edge, -self.direction)


class GraphError(ValueError):
    pass


class StarGraph:
    def __init__(self, presentation: RelativePresentation, edges: list[Edge]):
        self.presentation = presentation
        self.edges = edges
        self.by_id = {e.edge_id: e for e in edges}
        self.vertices = sorted(
            {v for e in edges for v in (e.src, e.dst)}, key=lambda v: (v[0], -v[1])
        )
        self._alias: dict[str, list[str]] = {}
        for e in edges:
            self._alias.setdefault(e.label_str(), []).append(e.edge_id)

    def incident(self, v: Vertex) -> list[Traversal]:
        """Outgoing traversals at v, in deterministic edge order."""
        out = []
        for e in self.edges:
            if e.src == v:
                out.append(Traversal(e, +1))
            if e.dst == v:
                out.append(Traversal(e, -1))
        return out

    def degree(self, v: Vertex) -> int:
        return sum((e.src == v) + (e.dst == v) for e in self.edges)

    def resolve(self, key: str) -> Edge:
        """Resolve an edge id or label alias to an edge."""
        if key in self.by_id:
            return self.by_id[key]
        name = key[len("label:") :] if key.startswith("label:") else key
        label, _, idx = name.partition("#")
        ids = self._alias.get(label, [])
        if idx:
            try:
                return self.by_id[ids[int(idx)]]
            except (IndexError, ValueError):
                raise GraphError(f"no edge {key!r}")
        if len(ids) == 1:
            return self.by_id[ids[0]]
        if not ids:
            raise GraphError(f"no edge {key!r}")
        raise GraphError(f"ambiguous edge alias {key!r}: candidates {ids}")

    def signature(self) -> tuple:
        """Label-multiset signature, invariant under relator rotation."""
        return tuple(
            sorted(
                (vertex_name(e.src), vertex_name(e.dst), e.label_str(), e.factor)
                for e in self.edges
            )
        )


def build_star_graph(p: RelativePresentation) -> StarGraph:
    """Construct the star graph; relators must contain indeterminate letters."""
    edges: list[Edge] = []
    for ri, rel in enumerate(p.relators):
        expanded = rel.expand()
        positions = [i for i, (n, _) in enumerate(expanded) if p.factor_of[n] == INDETERMINATE]
        if not positions:
            raise GraphError(f"relator {ri} has no corners (no indeterminate letters)")
        corners = []
        for ci in range(len(positions)):
            i = positions[ci]
            j = positions[(ci + 1) % len(positions)]
            if j > i:
                coeff = expanded[i + 1 : j]
            else:
                coeff = expanded[i + 1 :] + expanded[:j]
            corners.append((expanded[i], Word(coeff), expanded[j]))
        labels = [c[1] for c in corners]
        for ci, (inc, coeff, out) in enumerate(corners):
            src: Vertex = inc
            dst: Vertex = (out[0], -out[1])
            factor = _coefficient_factor(p, coeff)
            if factor is None:
                factor = _adjacent_factor(p, labels, ci)
            edges.append(Edge(f"{ri}.{ci}", ri, ci, src, dst, coeff, factor))
    return StarGraph(p, edges)


def _coefficient_factor(p: RelativePresentation, w: Word) -> str | None:
    fs = {p.factor_of[n] for n in w.names()}
    if not fs:
        return None
    if len(fs) == 1:
        return next(iter(fs))
    return "mixed"


def _adjacent_factor(p: RelativePresentation, labels: list[Word], ci: int) -> str:
    """Factor of an identity label: the factor of the nearest nonempty
    labels on both sides when they agree, else identity-any."""
    n = len(labels)
    found = set()
    for step in (1, -1):
        for d in range(1, n):
            lab = labels[(ci + step * d) % n]
            f = _coefficient_factor(p, lab)
            if f is not None:
                found.add(f)
                break
    if len(found) == 1 and "mixed" not in found:
        return next(iter(found))
    return "identity-any"


def path_label(traversals: Iterable[Traversal]) -> Word:
    w = Word()
    for t in traversals:
        w = w * t.label
    return w


def path_atoms(traversals: Iterable[Traversal]) -> tuple[tuple[str, int], ...]:
    return tuple(t.atom() for t in traversals)


def is_reduced(traversals: list[Traversal], cyclic: bool = False) -> bool:
    """No immediate backtracking (same edge, opposite direction, adjacent)."""
    n = len(traversals)
    pairs = range(n - 1) if not cyclic else range(n)
    for i in pairs:
        a, b = traversals[i], traversals[(i + 1) % n]
        if a.edge is b.edge and a.direction == -b.direction:
            return False
    return True


def is_closed(traversals: list[Traversal]) -> bool:
    if not traversals:
        return False
    for a, b in zip(traversals, traversals[1:]):
        if a.end != b.start:
            return False
    return traversals[-1].end == traversals[0].start


def canonical_atom_cycle(traversals: list[Traversal]) -> tuple:
    """Canonical form of the atom sequence under rotation and inversion;
    positive orientations sort before inverted ones."""
    atoms = list(path_atoms(traversals))
    inv = [(s, -d) for s, d in reversed(atoms)]
    candidates = []
    for seq in (atoms, inv):
        for i in range(len(seq)):
            candidates.append(tuple(seq[i:] + seq[:i]))
    return min(candidates, key=lambda c: [(s, 0 if d > 0 else 1) for s, d in c])


def export_dot(g: StarGraph) -> str:
    """DOT digraph with stable ordering; labels and edge ids as attributes."""
    lines = ["digraph stargraph {"]
    for v in g.vertices:
        lines.append(f'  "{vertex_name(v)}";')
    for e in g.edges:
        lines.append(
            f'  "{vertex_name(e.src)}" -> "{vertex_name(e.dst)}"'
            f' [label="{e.label_str()}", id="{e.edge_id}", factor="{e.factor}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
