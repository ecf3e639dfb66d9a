"""Weight functions on star graphs and the weight test.

A weight function assigns an exact rational in [0, 1] to every edge.  It
passes the weight test when every relator's corners c1..cn satisfy
sum(1 - w(ci)) >= 2 and every admissible closed path (nonempty, cyclically
reduced, label trivial in a factor) has weight >= 2.

``enumerate_light_cycles`` lists all closed paths of weight below the
threshold as finitely many *cycle families*: a base path plus pumpable
zero-weight cycles, each pump with an independent multiplicity m >= 0
(pure zero-cycle power families are displayed with m >= 1).  The
decomposition is exact as long as every zero-weight component contains at
most one independent cycle; richer zero subgraphs raise an error rather
than risk an incomplete list.

``verify_weight_test`` refutes every family's full expansion set through
the fact base and reports the survivors; the verdict is Aspherical exactly
when the relator condition holds and nothing survives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .facts import FactBase, Verdict, UNKNOWN
from .scenario import Scenario
from .stargraph import (
    Edge,
    StarGraph,
    Traversal,
    Vertex,
    build_star_graph,
    canonical_atom_cycle,
    is_reduced,
    path_label,
    vertex_name,
)
from .words import Word, canonical_cyclic_class


class WeightError(ValueError):
    pass


class DegenerateZeroCycleError(ValueError):
    """A zero-weight cycle with an empty label: families collapse."""


class EntangledZeroSubgraphError(ValueError):
    """A zero-weight component with two or more independent cycles."""


class WeightFunction:
    """Total map edge-id -> Fraction in [0, 1]."""

    def __init__(self, values: dict[str, Fraction]):
        self.values = dict(values)
        for k, v in self.values.items():
            if not 0 <= v <= 1:
                raise WeightError(f"weight {v} for edge {k} outside [0, 1]")

    @classmethod
    def from_scenario(cls, s: Scenario, g: StarGraph) -> "WeightFunction":
        values: dict[str, Fraction] = {}
        for key, val in s.weights:
            e = g.resolve(key)
            if e.edge_id in values:
                raise WeightError(f"duplicate weight for edge {e.edge_id}")
            values[e.edge_id] = Fraction(val)
        return cls(values)

    def require_total(self, g: StarGraph):
        for e in g.edges:
            if e.edge_id not in self.values:
                raise WeightError(f"missing weight for edge {e.edge_id} ({e.label_str()})")

    def __getitem__(self, edge_id: str) -> Fraction:
        try:
            return self.values[edge_id]
        except KeyError:
            raise WeightError(f"missing weight for edge {edge_id}")

    def weight_of(self, traversals) -> Fraction:
        return sum((self[t.edge.edge_id] for t in traversals), Fraction(0))


@dataclass(frozen=True)
class RelatorCheck:
    relator: int
    corners: int
    total: Fraction  # sum of (1 - w) over corners
    passed: bool


def check_relator_condition(g: StarGraph, wf: WeightFunction) -> list[RelatorCheck]:
    wf.require_total(g)
    out = []
    for ri in range(len(g.presentation.relators)):
        corners = [e for e in g.edges if e.relator == ri]
        total = sum((1 - wf[e.edge_id] for e in corners), Fraction(0))
        out.append(RelatorCheck(ri, len(corners), total, total >= 2))
    return out


# -- zero subgraph -----------------------------------------------------


@dataclass(frozen=True)
class Pump:
    insert_after: int  # splice after base[insert_after]
    prefix: tuple[Traversal, ...]  # zero path from the base vertex to the cycle
    cycle: tuple[Traversal, ...]  # component cycle based at the prefix end
    mandatory: bool = False  # base backtracks here; m >= 1 required

    @property
    def m_min(self) -> int:
        return 1 if self.mandatory else 0

    def instance(self, m: int) -> tuple[Traversal, ...]:
        back = tuple(t.reverse() for t in reversed(self.prefix))
        return self.prefix + self.cycle * m + back

    def label(self) -> Word:
        return path_label(self.instance(1))

    def display(self) -> str:
        cyc = " ".join(_atom_str(t) for t in self.cycle)
        bound = "m >= 1" if self.mandatory else "m >= 0"
        if self.prefix:
            pre = " ".join(_atom_str(t) for t in self.prefix)
            return f"{pre} ({cyc})^m {pre}^-1, {bound}"
        return f"({cyc})^m, {bound}"


def _atom_str(t: Traversal) -> str:
    s = t.edge.label_str()
    return s if t.direction > 0 else f"{s}^-1"


class _ZeroSubgraph:
    def __init__(self, g: StarGraph, zero_edges: list[Edge]):
        self.g = g
        self.edges = zero_edges
        self.adj: dict[Vertex, list[Traversal]] = {}
        for e in zero_edges:
            self.adj.setdefault(e.src, []).append(Traversal(e, +1))
            self.adj.setdefault(e.dst, []).append(Traversal(e, -1))
        self.component: dict[Vertex, int] = {}
        comps: list[set[Vertex]] = []
        for v in sorted(self.adj, key=lambda v: (v[0], -v[1])):
            if v in self.component:
                continue
            comp = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                self.component[u] = len(comps)
                for t in self.adj.get(u, []):
                    if t.end not in comp:
                        comp.add(t.end)
                        stack.append(t.end)
            comps.append(comp)
        self.cycles: dict[int, tuple[Traversal, ...]] = {}
        for ci, comp in enumerate(comps):
            ces = [e for e in zero_edges if e.src in comp]
            rank = len(ces) - len(comp) + 1
            if rank >= 2:
                raise EntangledZeroSubgraphError(
                    "zero-weight component at "
                    + ", ".join(sorted(vertex_name(v) for v in comp))
                    + " has multiple independent cycles"
                )
            if rank == 1:
                self.cycles[ci] = self._find_cycle(ces)

    @staticmethod
    def _find_cycle(edges: list[Edge]) -> tuple[Traversal, ...]:
        # strip leaves until only the cycle remains
        remaining = list(edges)
        while True:
            degree: dict[Vertex, int] = {}
            for e in remaining:
                degree[e.src] = degree.get(e.src, 0) + 1
                degree[e.dst] = degree.get(e.dst, 0) + 1
            leaves = {v for v, d in degree.items() if d == 1}
            if not leaves:
                break
            remaining = [e for e in remaining if e.src not in leaves and e.dst not in leaves]
        start = min({e.src for e in remaining} | {e.dst for e in remaining},
                    key=lambda v: (v[0], -v[1]))
        walk: list[Traversal] = []
        used: set[str] = set()
        cur = start
        while True:
            options = []
            for e in remaining:
                if e.edge_id in used:
                    continue
                if e.src == cur:
                    options.append(Traversal(e, +1))
                if e.dst == cur and not e.is_loop:
                    options.append(Traversal(e, -1))
            if not options:
                break
            t = options[0]
            walk.append(t)
            used.add(t.edge.edge_id)
            cur = t.end
        assert cur == start and len(walk) == len(remaining)
        return tuple(walk)

    def simple_paths(self, src: Vertex, dst: Vertex) -> list[tuple[Traversal, ...]]:
        """Vertex-simple zero paths src -> dst (empty path when src == dst)."""
        out: list[tuple[Traversal, ...]] = []
        if src == dst:
            out.append(())
        stack: list[tuple[Vertex, tuple[Traversal, ...], frozenset]] = [
            (src, (), frozenset([src]))
        ]
        while stack:
            v, path, seen = stack.pop()
            for t in self.adj.get(v, []):
                if t.end in seen:
                    continue
                np = path + (t,)
                if t.end == dst:
                    out.append(np)
                else:
                    stack.append((t.end, np, seen | {t.end}))
        return out

    def pumps_at(self, v: Vertex) -> list[tuple[tuple[Traversal, ...], tuple[Traversal, ...]]]:
        """(prefix, cycle) pairs anchorable at v, both cycle directions."""
        ci = self.component.get(v)
        if ci is None or ci not in self.cycles:
            return []
        cycle = self.cycles[ci]
        cycle_vertices = {t.start for t in cycle}
        out = []
        if v in cycle_vertices:
            prefixes: list[tuple[Traversal, ...]] = [()]
            anchors = [v]
        else:
            # tree paths from v whose interior stays off the cycle
            prefixes, anchors = [], []
            for w in sorted(cycle_vertices, key=lambda x: (x[0], -x[1])):
                for p in self.simple_paths(v, w):
                    if all(t.start not in cycle_vertices for t in p):
                        prefixes.append(p)
                        anchors.append(w)
        for prefix, w in zip(prefixes, anchors):
            i = next(k for k, t in enumerate(cycle) if t.start == w)
            based = cycle[i:] + cycle[:i]
            reversed_based = tuple(t.reverse() for t in reversed(based))
            out.append((prefix, based))
            out.append((prefix, reversed_based))
        return out


# -- cycle families ----------------------------------------------------


@dataclass
class CycleFamily:
    base: tuple[Traversal, ...]
    pumps: tuple[Pump, ...]
    weight: Fraction
    kind: str  # "cycle" (pump multiplicities m >= 0) | "power" (base^m, m >= 1)

    def base_label(self) -> Word:
        return path_label(self.base)

    def display(self) -> str:
        base = " ".join(_atom_str(t) for t in self.base)
        if self.kind == "power":
            return f"({base})^m, m >= 1"
        if not self.pumps:
            return base
        parts = [base]
        for p in self.pumps:
            parts.append(f"with {p.display()} after position {p.insert_after}")
        return "; ".join(parts)

    def mandatory_points(self) -> set[int]:
        return {p.insert_after for p in self.pumps if p.mandatory}

    def expansion(self, ms: dict[int, int]) -> tuple[Traversal, ...]:
        """Base with pump i repeated ms[i] times (default 0)."""
        out: list[Traversal] = []
        for i, t in enumerate(self.base):
            out.append(t)
            for pi, p in enumerate(self.pumps):
                if p.insert_after == i and ms.get(pi, 0) > 0:
                    out.extend(p.instance(ms[pi]))
        return tuple(out)

    def expansions_upto(self, mmax: int) -> list[tuple[Traversal, ...]]:
        if self.kind == "power":
            return [self.base * m for m in range(1, mmax + 1)]
        out = []
        mandatory = self.mandatory_points()
        choices: list[list[tuple[int, int]]] = []  # per point: (pump idx, m)
        points = sorted({p.insert_after for p in self.pumps})
        for q in points:
            opts: list[tuple[int, int] | None] = []
            if q not in mandatory:
                opts.append(None)
            for pi, p in enumerate(self.pumps):
                if p.insert_after == q:
                    opts.extend((pi, m) for m in range(max(1, p.m_min), mmax + 1))
            choices.append(opts)
        for combo in itertools.product(*choices) if choices else [()]:
            ms = {pi: m for c in combo if c for pi, m in [c]}
            out.append(self.expansion(ms))
        return out

    def dedup_key(self) -> tuple:
        keys = {canonical_atom_cycle(list(w)) for w in self.expansions_upto(2)}
        return tuple(sorted(keys))

    def templates(self) -> list[tuple[list[Word], list[Word]]]:
        """(segments, pumps) pairs whose refutation covers every expansion."""
        if self.kind == "power":
            return [([Word()], [self.base_label()])]
        mandatory = self.mandatory_points()
        out: list[tuple[list[Word], list[Word]]] = []
        if not mandatory:
            out.append(([self.base_label()], []))
        points = sorted({p.insert_after for p in self.pumps})
        by_point = {q: [p for p in self.pumps if p.insert_after == q] for q in points}
        for r in range(1, len(points) + 1):
            for combo in itertools.combinations(points, r):
                if not mandatory <= set(combo):
                    continue
                for choice in itertools.product(*(by_point[q] for q in combo)):
                    segments = []
                    pump_words = []
                    qs = list(combo)
                    for j, q in enumerate(qs):
                        prev = qs[j - 1]
                        if j == 0:
                            chunk = self.base[qs[-1] + 1 :] + self.base[: q + 1]
                        else:
                            chunk = self.base[prev + 1 : q + 1]
                        segments.append(path_label(chunk))
                        pump_words.append(choice[j].label())
                    out.append((segments, pump_words))
        return out


def zero_cycle_families(g: StarGraph, wf: WeightFunction) -> tuple[_ZeroSubgraph, list[CycleFamily]]:
    zero_edges = [e for e in g.edges if wf[e.edge_id] == 0]
    zsub = _ZeroSubgraph(g, zero_edges)
    families = []
    for ci in sorted(zsub.cycles):
        cycle = zsub.cycles[ci]
        label = path_label(cycle)
        if not canonical_cyclic_class(label):
            raise DegenerateZeroCycleError(
                "degenerate zero cycle: zero-weight cycle "
                + " ".join(_atom_str(t) for t in cycle)
                + " has empty label"
            )
        families.append(CycleFamily(cycle, (), Fraction(0), "power"))
    return zsub, families


def _skeletons(
    g: StarGraph,
    wf: WeightFunction,
    threshold: Fraction,
    zsub: "_ZeroSubgraph",
    budget: int = 2_000_000,
    max_marked: int = 4,
    max_len: int = 40,
) -> list[tuple[tuple[Traversal, ...], frozenset]]:
    """Closed paths with >= 1 positive edge, positive weight < threshold and
    vertex-simple zero runs.  A traversal may immediately backtrack when a
    zero-weight pump exists at the turning vertex; such junctions are marked
    and a pump insertion there is mandatory (the bare base is not reduced).
    Returns (path, marked junction indices)."""
    positive = [
        t
        for e in g.edges
        if wf[e.edge_id] > 0
        for t in (Traversal(e, +1), Traversal(e, -1))
    ]
    results: list[tuple[tuple[Traversal, ...], frozenset]] = []
    steps = 0
    for t0 in positive:
        if wf[t0.edge.edge_id] >= threshold:
            continue
        stack = [((t0,), wf[t0.edge.edge_id], frozenset([t0.end]), frozenset())]
        while stack:
            path, pos_used, run_seen, marked = stack.pop()
            steps += 1
            if steps > budget:
                raise WeightError("light-cycle enumeration budget exceeded")
            cur = path[-1].end
            if cur == t0.start:
                # internal junctions are reduced-or-marked by construction
                seam_backtrack = (
                    path[-1].edge is t0.edge
                    and path[-1].direction == -t0.direction
                    and len(path) > 1
                )
                if not seam_backtrack:
                    results.append((path, marked))
                elif len(marked) < max_marked and zsub.pumps_at(cur):
                    results.append((path, marked | {len(path) - 1}))
            if len(path) >= max_len:
                continue
            for t in _moves(g, cur):
                backtrack = t.edge is path[-1].edge and t.direction == -path[-1].direction
                new_marked = marked
                if backtrack:
                    if len(marked) >= max_marked or not zsub.pumps_at(cur):
                        continue
                    new_marked = marked | {len(path) - 1}
                w = wf[t.edge.edge_id]
                if w > 0:
                    if pos_used + w >= threshold:
                        continue
                    stack.append((path + (t,), pos_used + w, frozenset([t.end]), new_marked))
                elif backtrack:
                    stack.append((path + (t,), pos_used, frozenset([t.end]), new_marked))
                else:
                    if t.end in run_seen:
                        continue  # zero runs are vertex-simple; revisits belong to pumps
                    stack.append((path + (t,), pos_used, run_seen | {t.end}, new_marked))
    return results


def _moves(g: StarGraph, v: Vertex) -> list[Traversal]:
    return g.incident(v)


def enumerate_light_cycles(
    g: StarGraph, wf: WeightFunction, threshold: Fraction = Fraction(2)
) -> list[CycleFamily]:
    """Complete family list of reduced closed paths of weight < threshold.

    Raises DegenerateZeroCycleError for an empty-label zero cycle and
    EntangledZeroSubgraphError when a zero component has cycle rank >= 2
    (the family decomposition would not be exhaustive there).
    """
    if threshold <= 0:
        raise WeightError("threshold must be positive")
    wf.require_total(g)
    zsub, families = zero_cycle_families(g, wf)
    seen: dict[tuple, CycleFamily] = {}
    for fam in families:
        seen[fam.dedup_key()] = fam
    for base, marked in _skeletons(g, wf, threshold, zsub):
        n = len(base)
        optional: list[Pump] = []
        mandatory_opts: dict[int, list[Pump]] = {q: [] for q in marked}
        for i, t in enumerate(base):
            for prefix, cycle in zsub.pumps_at(t.end):
                p = Pump(i, prefix, cycle, mandatory=(i in marked))
                local = [base[i]] + list(p.instance(1)) + [base[(i + 1) % n]]
                if not is_reduced(local, cyclic=False):
                    continue
                if p.mandatory:
                    mandatory_opts[i].append(p)
                else:
                    optional.append(p)
        if any(not opts for opts in mandatory_opts.values()):
            continue  # a marked junction with no mendable pump: no instances
        mand_points = sorted(mandatory_opts)
        for chosen in itertools.product(*(mandatory_opts[q] for q in mand_points)):
            pumps = tuple(sorted(optional + list(chosen), key=lambda p: p.insert_after))
            fam = CycleFamily(base, pumps, wf.weight_of(base), "cycle")
            key = fam.dedup_key()
            if key not in seen:
                seen[key] = fam
    ordered = sorted(seen.values(), key=lambda f: (f.weight, f.display()))
    return ordered


# -- brute-force oracle ------------------------------------------------


def reduced_closed_walks(
    g: StarGraph,
    max_len: int,
    wf: WeightFunction | None = None,
    threshold: Fraction | None = None,
    budget: int = 5_000_000,
) -> list[tuple[Traversal, ...]]:
    """All cyclically reduced closed walks up to max_len, one per canonical
    (rotation/inversion) class; optionally only those of weight < threshold."""
    out: dict[tuple, tuple[Traversal, ...]] = {}
    steps = 0
    starts = [t for e in g.edges for t in (Traversal(e, +1), Traversal(e, -1))]
    for t0 in starts:
        if wf is not None and threshold is not None and wf[t0.edge.edge_id] >= threshold:
            continue
        stack = [((t0,), wf[t0.edge.edge_id] if wf else Fraction(0))]
        while stack:
            path, used = stack.pop()
            steps += 1
            if steps > budget:
                raise WeightError("walk enumeration budget exceeded")
            if path[-1].end == t0.start and is_reduced(list(path), cyclic=True):
                out.setdefault(canonical_atom_edge_cycle(path), path)
            if len(path) == max_len:
                continue
            for t in g.incident(path[-1].end):
                if t.edge is path[-1].edge and t.direction == -path[-1].direction:
                    continue
                w = wf[t.edge.edge_id] if wf else Fraction(0)
                if threshold is not None and wf is not None and used + w >= threshold:
                    continue
                stack.append((path + (t,), used + w))
    return [out[k] for k in sorted(out)]


def canonical_atom_edge_cycle(path: tuple[Traversal, ...]) -> tuple:
    seq = [(t.edge.edge_id, t.direction) for t in path]
    inv = [(e, -d) for e, d in reversed(seq)]
    cands = []
    for s in (seq, inv):
        for i in range(len(s)):
            cands.append(tuple(s[i:] + s[:i]))
    return min(cands)


# -- trivial-label cycles ----------------------------------------------


@dataclass(frozen=True)
class TrivialCycle:
    atoms: tuple[tuple[str, int], ...]
    label: Word

    def display(self) -> str:
        return " ".join(s if d > 0 else f"{s}^-1" for s, d in self.atoms)


def enumerate_trivial_cycles(g: StarGraph, length: int, fb: FactBase) -> list[TrivialCycle]:
    """Candidate vertex labels: closed paths of exactly ``length`` edges whose
    triviality the fact base cannot refute."""
    if length < 1:
        raise WeightError("length must be >= 1")
    out: dict[tuple, TrivialCycle] = {}
    for walk in reduced_closed_walks(g, length):
        if len(walk) != length:
            continue
        label = path_label(walk)
        if fb.refute_trivial(label):
            continue
        key = canonical_atom_cycle(list(walk))
        out.setdefault(key, TrivialCycle(key, canonical_cyclic_class(label, fb.order)))
    return [out[k] for k in sorted(out)]


# -- the weight test -----------------------------------------------------


@dataclass
class FamilyVerdict:
    family: CycleFamily
    verdict: Verdict
    witness: str = ""  # unrefuted template description

    @property
    def refuted(self) -> bool:
        return self.verdict.refuted


@dataclass
class WeightTestReport:
    scenario_name: str
    graph: StarGraph
    weight_function: WeightFunction
    relator_checks: list[RelatorCheck]
    families: list[FamilyVerdict]
    notes: list[str] = field(default_factory=list)

    @property
    def violations(self) -> list[FamilyVerdict]:
        return [f for f in self.families if not f.refuted]

    @property
    def aspherical(self) -> bool:
        return (
            all(rc.passed for rc in self.relator_checks)
            and not self.violations
            and not self.notes
        )

    @property
    def verdict(self) -> str:
        return "Aspherical" if self.aspherical else "PotentialViolations"


def _refute_family_all(fb: FactBase, fam: CycleFamily) -> tuple[Verdict, str]:
    last = None
    for segments, pumps in fam.templates():
        v = fb.refute_template(segments, pumps)
        if not v.refuted:
            if pumps:
                desc = " ".join(
                    f"{s} ({p})^m" for s, p in zip(segments, pumps)
                )
            else:
                desc = str(segments[0])
            return UNKNOWN, desc
        last = v
    return (last if last is not None else UNKNOWN), ""


def verify_weight_test(
    s: Scenario,
    threshold: Fraction = Fraction(2),
    guard_len: int = 6,
) -> WeightTestReport:
    """Run the full weight test for a scenario carrying weights."""
    g = build_star_graph(s.presentation)
    fb = FactBase(s.presentation, s.fact_decls)
    wf = WeightFunction.from_scenario(s, g)
    wf.require_total(g)
    relator_checks = check_relator_condition(g, wf)
    notes: list[str] = []
    try:
        families = enumerate_light_cycles(g, wf, threshold)
    except EntangledZeroSubgraphError as e:
        return WeightTestReport(s.name, g, wf, relator_checks, [], notes=[str(e)])
    verdicts = []
    for fam in families:
        v, witness = _refute_family_all(fb, fam)
        verdicts.append(FamilyVerdict(fam, v, witness))

    # belt-and-suspenders guard: short walks must be refuted or reported
    covered = {
        canonical_cyclic_class(path_label(w), fb.order)
        for fv in verdicts
        if not fv.refuted
        for w in fv.family.expansions_upto(max(guard_len, 3))
    }
    try:
        walks = reduced_closed_walks(g, guard_len, wf, threshold, budget=400_000)
    except WeightError:
        walks = []
        notes.append(f"guard enumeration over length <= {guard_len} skipped (budget)")
    for w in walks:
        label = path_label(w)
        if fb.refute_trivial(label):
            continue
        if canonical_cyclic_class(label, fb.order) in covered:
            continue
        fam = CycleFamily(w, (), wf.weight_of(w), "cycle")
        verdicts.append(FamilyVerdict(fam, UNKNOWN, witness="guard walk not covered"))
    return WeightTestReport(s.name, g, wf, relator_checks, verdicts, notes)


def render_report(report: WeightTestReport) -> str:
    lines = []
    if report.scenario_name:
        lines.append(f"scenario: {report.scenario_name}")
    for rc in report.relator_checks:
        status = "pass" if rc.passed else "FAIL"
        lines.append(
            f"relator {rc.relator}: corners {rc.corners} sum(1-w) = {rc.total} {status}"
        )
    lines.append(f"light cycle families: {len(report.families)}")
    for fv in report.families:
        head = "refuted" if fv.refuted else "SURVIVES"
        rule = f" [{fv.verdict.rule}]" if fv.verdict.rule else ""
        lines.append(f"  {head}{rule} weight {fv.family.weight}: {fv.family.display()}")
        if not fv.refuted and fv.witness:
            lines.append(f"    unrefuted instance: {fv.witness}")
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines) + "\n"
