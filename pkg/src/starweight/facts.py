"""Sound, deliberately incomplete refutation engine for label triviality.

A FactBase holds declared hypotheses about the coefficient factors:

* ``eq u v``           -- u = v in their factor (drives a rewrite system)
* ``neq u v``          -- u != v
* ``notincyclic v g``  -- v is not a power of the generator g
* factor flags         -- noncyclic / nontrivial (metadata only)

Every factor is torsion-free, which gives the root rule u^m = 1 => u = 1.

``refute_trivial(w)`` answers "is w = 1 impossible under the facts?" with
Refuted (plus a replayable rule chain) or Unknown.  The rule set is frozen:

  R1  rewrite to normal form (Eq facts oriented longer->shorter, lex ties)
  R2  normal form is u^m with u != 1 derivable from a Neq fact
  R3  triviality would force v into <g> against a NotInCyclic fact
  R4  special case of R2: normal form g^m for a generator with neq g 1
  FP  a cyclic word alternating over both factors, all of whose syllables
      are refuted-nontrivial, is nontrivial in the free product

Unknown is always safe; the verifier then reports a potential violation
instead of claiming asphericity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .scenario import INDETERMINATE, FactDecl, RelativePresentation
from .words import (
    Word,
    canonical_cyclic_class,
    cyclically_reduce,
    max_root,
    strip_conjugation,
)

_REWRITE_CAP = 10_000


class FactError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    refuted: bool
    rule: str = ""
    trace: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.refuted


def _refuted(rule: str, *trace: str) -> Verdict:
    return Verdict(True, rule, trace)


UNKNOWN = Verdict(False)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class FactBase:
    """Immutable after construction; all queries are pure."""

    def __init__(self, presentation: RelativePresentation, decls: Iterable[FactDecl]):
        self.presentation = presentation
        self.factor_of = presentation.factor_of
        self.order = presentation.symbol_order
        self.decls = list(decls)
        self.rules: list[tuple[tuple, Word]] = []  # inverse-closed (pattern, replacement)
        self._build_rules()
        self.neq1: set[Word] = set()
        self.notincyclic: list[tuple[Word, str]] = []  # (g-stripped core, g)
        self._power_cache: dict[tuple[str, str], int | None] = {}
        self._build_queries()

    # -- construction ------------------------------------------------

    def _word_factor(self, w: Word) -> str | None:
        """Factor name, '' for the empty word, None when w spans factors."""
        fs = set()
        for n in w.names():
            f = self.factor_of.get(n)
            if f is None:
                raise FactError(f"undeclared symbol {n!r}")
            if f == INDETERMINATE:
                raise FactError(f"indeterminate letter {n!r} in coefficient word")
            fs.add(f)
        if len(fs) > 1:
            return None
        return next(iter(fs)) if fs else ""

    def _lex(self, w: Word):
        index = {name: i for i, name in enumerate(self.order)}
        return [(index.get(n, len(index)), n, 0 if e > 0 else 1) for n, e in w.expand()]

    def _build_rules(self):
        for fd in self.decls:
            if fd.kind != "eq":
                continue
            u, v = fd.lhs, fd.rhs
            fu, fv = self._word_factor(u), self._word_factor(v)
            if fu is None or fv is None or (fu and fv and fu != fv):
                raise FactError(f"eq fact spans factors: {u} = {v}")
            if u == v:
                continue
            big, small = (u, v) if (len(u), self._lex(u)) > (len(v), self._lex(v)) else (v, u)
            self.rules.append((big.expand(), small))
            self.rules.append((big.inverse().expand(), small.inverse()))

    def _build_queries(self):
        for fd in self.decls:
            if fd.kind == "neq":
                w = self.normalize_any(fd.lhs * fd.rhs.inverse())
                cls = canonical_cyclic_class(self._cyclic_normalize(w), self.order)
                if not cls:
                    raise FactError(f"inconsistent facts: {fd.lhs} = {fd.rhs} follows from eq facts")
                self.neq1.add(cls)
            elif fd.kind == "notincyclic":
                g = fd.rhs
                if len(g.letters) != 1 or g.letters[0][1] != 1:
                    raise FactError(f"notincyclic needs a single generator, got {g}")
                gname = g.letters[0][0]
                if self.as_power_of(fd.lhs, gname) is not None:
                    raise FactError(f"inconsistent fact: {fd.lhs} lies in <{gname}>")
                core = _strip_g(self.normalize_any(fd.lhs), gname)
                self.notincyclic.append((core, gname))

    # -- normalization (R1) -------------------------------------------

    def _rewrite_once(self, expanded: tuple) -> tuple | None:
        n = len(expanded)
        for pat, rep in self.rules:
            k = len(pat)
            if k == 0 or k > n:
                continue
            for i in range(n - k + 1):
                if expanded[i : i + k] == pat:
                    return expanded[:i] + rep.expand() + expanded[i + k :]
        return None

    def _normalize_raw(self, w: Word) -> Word:
        cur = w
        for _ in range(_REWRITE_CAP):
            nxt = self._rewrite_once(cur.expand())
            if nxt is None:
                return cur
            cur = Word(nxt)
        raise FactError("rewrite system did not terminate")

    def normalize(self, w: Word) -> Word:
        """Fixed point of the Eq-derived rewrites plus free reduction.

        The word must lie in a single factor.
        """
        if self._word_factor(w) is None:
            raise FactError(f"word spans factors: {w}")
        return self._normalize_raw(w)

    def normalize_any(self, w: Word) -> Word:
        """Normalize a possibly mixed word; cross-factor cancellations cascade
        through free reduction automatically."""
        self._word_factor_or_mixed(w)  # validates symbols
        return self._normalize_raw(w)

    def _word_factor_or_mixed(self, w: Word) -> str:
        f = self._word_factor(w)
        return "mixed" if f is None else f

    def as_power_of(self, w: Word, g: str, limit: int = 8) -> int | None:
        """Exponent k with w = g^k provable from the Eq facts, if any.

        Bounded search; a hit is a theorem, a miss proves nothing.
        """
        gw = Word([(g, 1)])
        for k in range(-limit, limit + 1):
            if not self.normalize_any(w * gw ** (-k)):
                return k
        return None

    def _letter_power_of(self, name: str, g: str) -> int | None:
        key = (name, g)
        if key not in self._power_cache:
            self._power_cache[key] = self.as_power_of(Word([(name, 1)]), g)
        return self._power_cache[key]

    def _g_substitute(self, w: Word, g: str) -> Word | None:
        """Rewrite each letter provably lying in <g> as the g-power; None
        when no letter changes."""
        out = []
        changed = False
        for n, e in w.letters:
            if n == g:
                out.append((n, e))
                continue
            k = self._letter_power_of(n, g)
            if k is None:
                out.append((n, e))
            else:
                changed = True
                if k:
                    out.append((g, k * e))
        return Word(out) if changed else None

    def _cyclic_normalize(self, w: Word) -> Word:
        """Normalize a conjugacy-class representative, allowing rewrites
        across the rotation seam whenever they shorten the word."""
        cur = cyclically_reduce(self.normalize_any(w), self.order)
        changed = True
        while changed:
            changed = False
            expanded = cur.expand()
            for i in range(len(expanded)):
                rot = Word(expanded[i:] + expanded[:i])
                n = cyclically_reduce(self.normalize_any(rot), self.order)
                if len(n) < len(cur):
                    cur = n
                    changed = True
                    break
        return cur

    # -- syllables -----------------------------------------------------

    def syllables(self, w: Word) -> list[tuple[str, Word]]:
        """Maximal single-factor runs of w as (factor, subword) pairs."""
        out: list[tuple[str, Word]] = []
        for n, e in w.letters:
            f = self.factor_of[n]
            if out and out[-1][0] == f:
                out[-1] = (f, out[-1][1] * Word([(n, e)]))
            else:
                out.append((f, Word([(n, e)])))
        return out

    # -- refutation -----------------------------------------------------

    def _neq1_match(self, u: Word) -> bool:
        cls = canonical_cyclic_class(self._cyclic_normalize(u), self.order)
        return cls in self.neq1

    def _refute_power(self, w: Word) -> Verdict:
        """R2/R4: w (cyclic, nonempty) is u^d with u != 1 derivable."""
        root, d = max_root(w)
        for e in _divisors(d):
            u = Word(root.expand() * e)
            if self._neq1_match(u):
                rule = "R4" if len(u.letters) == 1 and abs(u.letters[0][1]) == 1 else "R2"
                power = d // e
                note = f"{w} = ({u})^{power}" if power > 1 else f"{u} != 1 declared"
                return _refuted(rule, f"{note}; torsion-free root rule")
        return UNKNOWN

    def _refute_notincyclic(self, w: Word) -> Verdict:
        """R3: some rotation/inversion of w, with letters provably in <g>
        rewritten as g-powers, reads g^s x g^t with x the forbidden core of
        a NotInCyclic fact (or collapses to a nonzero g-power)."""
        for core, g in self.notincyclic:
            variants = [w]
            sub = self._g_substitute(w, g)
            if sub is not None:
                sub = cyclically_reduce(sub, self.order)
                variants.append(sub)
                if sub and all(n == g for n, _ in sub.letters):
                    # w = g^k with k != 0: torsion-free power of g
                    if self._neq1_match(Word([(g, 1)])):
                        return _refuted(
                            "R2", f"{w} = {sub} is a nonzero power of {g} and {g} != 1"
                        )
            for base in variants:
                for cand in (base, base.inverse()):
                    expanded = cand.expand()
                    for i in range(max(len(expanded), 1)):
                        rot = expanded[i:] + expanded[:i]
                        x = _strip_g(Word(rot), g)
                        if x and (x == core or x == core.inverse()):
                            return _refuted(
                                "R3",
                                f"{w} = 1 forces {core} into <{g}>, contradicting notincyclic",
                            )
        return UNKNOWN

    def refute_trivial(self, w: Word) -> Verdict:
        """Refuted only if w = 1 contradicts the facts; Unknown otherwise.

        The word is read as a cyclic word (labels of closed paths are only
        defined up to conjugacy, and w = 1 is conjugation-invariant).
        """
        n = self._cyclic_normalize(w)
        if not n:
            return UNKNOWN
        sylls = self.syllables(n)
        if len(sylls) > 1 and sylls[0][0] == sylls[-1][0]:
            f0, w0 = sylls.pop(0)
            sylls[-1] = (f0, self._normalize_raw(sylls[-1][1] * w0))
            if not sylls[-1][1]:
                sylls.pop()
            if len({f for f, _ in sylls}) <= 1:
                return self.refute_trivial(Word(sum((s.letters for _, s in sylls), ())))
        if len({f for f, _ in sylls}) > 1:
            sub = [self.refute_trivial(s) for _, s in sylls]
            if all(sub):
                return _refuted(
                    "FP", f"{n} alternates over both factors with nontrivial syllables"
                )
            return UNKNOWN
        v = self._refute_power(n)
        if v:
            return v
        return self._refute_notincyclic(n)

    def refute_family(self, base: Word, pump: Word) -> Verdict:
        """Refute base * pump^m = 1 uniformly for all integers m >= 1.

        ``base`` must already be rotated so the pump is appended at its end.
        """
        return self.refute_template([base], [pump])

    def refute_template(self, segments: Sequence[Word], pumps: Sequence[Word]) -> Verdict:
        """Refute the cyclic template w0 p0^m0 w1 p1^m1 ... for all mi >= 1.

        ``segments`` and ``pumps`` alternate cyclically, so they must have
        equal length; no pumps at all delegates to refute_trivial.
        """
        if not pumps:
            return self.refute_trivial(segments[0] if segments else Word())
        if len(segments) != len(pumps):
            raise ValueError("segments and pumps must alternate")

        k = len(pumps)
        segs = [self.normalize_any(s) for s in segments]
        cores: list[Word] = []
        for i, p in enumerate(pumps):
            h, c = strip_conjugation(self.normalize_any(p))
            # absorb the conjugator into the neighbouring segments
            segs[i] = self.normalize_any(segs[i] * h)
            segs[(i + 1) % k] = self.normalize_any(h.inverse() * segs[(i + 1) % k])
            cores.append(c)
        if any(not c for c in cores):
            # pumps that rewrite to the identity drop out of the family
            if not any(cores):
                return self.refute_trivial(Word(sum((s.letters for s in segs), ())))
            new_segs: list[Word] = []
            new_cores: list[Word] = []
            carry = Word()
            for i in range(k):
                seg = self.normalize_any(carry * segs[i])
                carry = Word()
                if cores[i]:
                    new_segs.append(seg)
                    new_cores.append(cores[i])
                else:
                    carry = seg
            if carry:
                new_segs[0] = self.normalize_any(carry * new_segs[0])
            segs, cores = new_segs, new_cores

        factors = {self._word_factor_or_mixed(w) for w in segs if w}
        factors |= {self._word_factor_or_mixed(c) for c in cores}
        if "mixed" not in factors and len(factors) == 1:
            return self._refute_template_single(segs, cores)
        return self._refute_template_alternating(segs, cores)

    def _refute_template_single(self, segs: list[Word], cores: list[Word]) -> Verdict:
        """All template material lies in one factor."""
        if all(not s for s in segs) and len(cores) == 1:
            # pure pump power c^m: by torsion-freeness it suffices that the
            # root of the pump label is nontrivial
            v = self._refute_power(self._cyclic_normalize(cores[0]))
            if v:
                return _refuted(
                    "R2", f"({cores[0]})^m = 1 forces a torsion-free root to vanish", *v.trace
                )
            return UNKNOWN
        candidates: list[tuple[str, list[int]]] = []
        roots = [max_root(c) for c in cores]
        if all(len(r.letters) == 1 for r, _ in roots):
            gnames = {r.letters[0][0] for r, _ in roots}
            if len(gnames) == 1:
                g = next(iter(gnames))
                candidates.append((g, [r.letters[0][1] * d for r, d in roots]))
        for _, g in self.notincyclic:
            if any(g == c[0] for c in candidates):
                continue
            exps = [self.as_power_of(c, g) for c in cores]
            if all(e is not None and e != 0 for e in exps):
                candidates.append((g, exps))  # every pump lies in <g>

        for g, exps in candidates:
            seg_pows = [self.as_power_of(s, g) if s else 0 for s in segs]
            nonpow = [i for i, p in enumerate(seg_pows) if p is None]
            if not nonpow:
                # the whole label is g^(const + sum exps[i]*mi)
                const = sum(p for p in seg_pows if p is not None)
                if not _affine_solvable(const, exps) and self._neq1_match(Word([(g, 1)])):
                    return _refuted(
                        "R2",
                        f"{g}-exponent {const} + sum(m_i * {exps}) never vanishes and {g} != 1",
                    )
                continue
            if len(nonpow) == 1:
                seg = self.normalize_any(segs[nonpow[0]])
                options = [_strip_g(seg, g)]
                sub = self._g_substitute(seg, g)
                if sub is not None:
                    options.append(_strip_g(sub, g))
                for core, gf in self.notincyclic:
                    for x in options:
                        if gf == g and x and (x == core or x == core.inverse()):
                            return _refuted(
                                "R3",
                                f"triviality forces {x} into <{g}> for every pump power,"
                                " contradicting notincyclic",
                            )
        return UNKNOWN

    def _refute_template_alternating(self, segs: list[Word], cores: list[Word]) -> Verdict:
        """Mixed template: refute via free-product alternation when forced."""
        if not all(self._refute_power(self._cyclic_normalize(c)) for c in cores):
            return UNKNOWN  # a pump instance could vanish
        items: list[tuple[str, Word | None]] = []  # (factor, word or None for a pump)
        for s, c in zip(segs, cores):
            if s:
                items.extend(self.syllables(s))
            items.append((self._word_factor_or_mixed(c), None))
        merged: list[tuple[str, Word | None]] = []
        for f, wrd in items:
            if wrd is not None and merged and merged[-1][1] is not None and merged[-1][0] == f:
                combined = self._normalize_raw(merged[-1][1] * wrd)
                merged.pop()
                if combined:
                    merged.append((f, combined))
            else:
                merged.append((f, wrd))
        while (
            len(merged) > 1
            and merged[0][1] is not None
            and merged[-1][1] is not None
            and merged[0][0] == merged[-1][0]
        ):
            f0, w0 = merged.pop(0)
            combined = self._normalize_raw(merged[-1][1] * w0)
            merged.pop()
            if combined:
                merged.append((f0, combined))
        if len(merged) < 2:
            return UNKNOWN
        n = len(merged)
        for i in range(n):
            f, wrd = merged[i]
            fn, wn = merged[(i + 1) % n]
            if f == fn and not (wrd is not None and wn is not None):
                # a pump bordering same-factor material could be absorbed
                return UNKNOWN
        for f, wrd in merged:
            if wrd is not None and not self.refute_trivial(wrd):
                return UNKNOWN
        return _refuted(
            "FP", "every instance alternates over both factors with nontrivial syllables"
        )

    # -- isolation ------------------------------------------------------

    def is_isolated(self, g: str, peers: Sequence[str]) -> str:
        """'yes' | 'no' | 'unknown': does no peer lie in <g>?"""
        results = []
        for p in peers:
            if p == g:
                continue
            pw = Word([(p, 1)])
            if self.as_power_of(pw, g) is not None:
                return "no"
            core = _strip_g(self.normalize_any(pw), g)
            results.append(
                any(gf == g and (core == c or core == c.inverse()) for c, gf in self.notincyclic)
            )
        return "yes" if all(results) else "unknown"

    # -- confluence check ------------------------------------------------

    def check_confluence(self) -> bool:
        """Join all critical pairs of the (inverse-closed) rule set."""
        for l1, r1 in self.rules:
            n1 = len(l1)
            for l2, r2 in self.rules:
                n2 = len(l2)
                for k in range(1, min(n1, n2)):
                    if l1[n1 - k :] == l2[:k]:
                        a = self._normalize_raw(Word(l1[: n1 - k] + r2.expand()))
                        b = self._normalize_raw(Word(r1.expand() + l2[k:]))
                        if a != b:
                            return False
                if n2 <= n1:
                    for i in range(n1 - n2 + 1):
                        if l1[i : i + n2] == l2:
                            a = self._normalize_raw(Word(l1[:i] + r2.expand() + l1[i + n2 :]))
                            if a != self._normalize_raw(r1):
                                return False
        return True


def _strip_g(w: Word, g: str) -> Word:
    letters = list(w.expand())
    while letters and letters[0][0] == g:
        letters.pop(0)
    while letters and letters[-1][0] == g:
        letters.pop()
    return Word(letters)


def exponent_of(w: Word, g: str) -> int:
    return sum(e for n, e in w.letters if n == g)


def _affine_solvable(const: int, exps: list[int]) -> bool:
    """Is const + sum exps[i]*mi = 0 solvable with every mi >= 1?"""
    base = const + sum(exps)  # value at mi = 1; shift to ki = mi - 1 >= 0
    if base == 0:
        return True
    if all(e > 0 for e in exps):
        return _nonneg_reachable(-base, [e for e in exps])
    if all(e < 0 for e in exps):
        return _nonneg_reachable(base, [-e for e in exps])
    g = 0
    for e in exps:
        g = math.gcd(g, e)
    return base % g == 0


def _nonneg_reachable(target: int, vals: list[int]) -> bool:
    """Can sum vals[i]*ki = target with ki >= 0 (vals positive)?"""
    if target < 0:
        return False
    reach = [False] * (target + 1)
    reach[0] = True
    for t in range(1, target + 1):
        reach[t] = any(t >= v and reach[t - v] for v in vals)
    return reach[target]
