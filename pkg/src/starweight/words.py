"""Words over free products with indeterminates.

A word is a sequence of letters ``(name, exponent)`` with nonzero integer
exponents and no two adjacent letters sharing a name (freely reduced form).
The empty word is the identity.  Words carry no factor information of their
own; scenarios supply a symbol table when factor membership matters.

Cyclic words (conjugacy classes) are represented by a deterministic
canonical rotation: lexicographically least under the declared symbol
order, with inverse letters ordered after positive ones.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Letter = tuple[str, int]


def _merge(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == name:
            merged = out[-1][1] + exp
            out.pop()
            if merged != 0:
                out.append((name, merged))
        else:
            out.append((name, exp))
    return tuple(out)


class Word:
    """Freely reduced word; immutable and hashable."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _merge(letters))

    def __setattr__(self, *a):
        raise AttributeError("Word is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __len__(self) -> int:
        """Letter count with exponents expanded."""
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word((n, -e) for n, e in reversed(self.letters))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        w = Word()
        for _ in range(k):
            w = w * self
        return w

    def expand(self) -> tuple[Letter, ...]:
        """Single-exponent letters, e.g. t^2 -> (t,1),(t,1)."""
        out: list[Letter] = []
        for n, e in self.letters:
            s = 1 if e > 0 else -1
            out.extend((n, s) for _ in range(abs(e)))
        return tuple(out)

    def names(self) -> set[str]:
        return {n for n, _ in self.letters}

    def tokens(self) -> list[str]:
        return [letter_token(n, e) for n, e in self.letters]

    def __str__(self) -> str:
        return " ".join(self.tokens()) if self.letters else "1"

    def compact(self) -> str:
        """No-space rendering used in edge labels and aliases."""
        return "".join(self.tokens()) if self.letters else "1"

    def __repr__(self) -> str:
        return f"Word({self})"


def letter_token(name: str, exp: int) -> str:
    return name if exp == 1 else f"{name}^{exp}"


def parse_letter(token: str) -> Letter | None:
    """Parse one token; '1' denotes the identity (returns None)."""
    if token == "1":
        return None
    if "^" in token:
        name, _, exp_s = token.partition("^")
        try:
            exp = int(exp_s)
        except ValueError:
            raise ValueError(f"bad exponent in token {token!r}")
        if exp == 0:
            raise ValueError(f"zero exponent in token {token!r}")
    else:
        name, exp = token, 1
    if not name or not all(c.isalnum() or c == "_" for c in name):
        raise ValueError(f"bad letter token {token!r}")
    return name, exp


def word_from_tokens(tokens: Sequence[str]) -> Word:
    letters = []
    for tok in tokens:
        lt = parse_letter(tok)
        if lt is not None:
            letters.append(lt)
    return Word(letters)


def free_reduce(w: Word | Iterable[Letter]) -> Word:
    """Freely reduce; idempotent (Word construction already reduces)."""
    if isinstance(w, Word):
        return Word(w.letters)
    return Word(w)


def _letter_key(order: Sequence[str] | None):
    if order is None:
        return lambda lt: (lt[0], 0 if lt[1] > 0 else 1)
    index = {name: i for i, name in enumerate(order)}

    def key(lt: Letter):
        n, e = lt
        return (index.get(n, len(index)), n, 0 if e > 0 else 1)

    return key


def _rotations(expanded: tuple[Letter, ...]):
    for i in range(len(expanded)):
        yield expanded[i:] + expanded[:i]


def strip_conjugation(w: Word) -> tuple[Word, Word]:
    """Write w = h * core * h^-1 with core cyclically reduced."""
    letters = list(w.expand())
    head: list[Letter] = []
    while len(letters) >= 2 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
        head.append(letters[0])
        letters = letters[1:-1]
    return Word(head), Word(letters)


def cyclically_reduce(w: Word, order: Sequence[str] | None = None) -> Word:
    """Cyclically reduced conjugate of w in canonical rotation.

    Canonical rotation = lexicographically least expanded rotation under
    the declared symbol order; deterministic across runs.
    """
    _, core = strip_conjugation(w)
    if not core:
        return core
    key = _letter_key(order)
    best = min(_rotations(core.expand()), key=lambda rot: [key(lt) for lt in rot])
    return Word(best)


def is_cyclically_reduced(w: Word) -> bool:
    letters = w.letters
    if len(letters) <= 1:
        return True
    return letters[0][0] != letters[-1][0]


def canonical_cyclic_class(w: Word, order: Sequence[str] | None = None) -> Word:
    """Canonical representative of {rotations of w} u {rotations of w^-1}.

    Constant on each rotation/inversion orbit, injective across orbits.
    """
    _, core = strip_conjugation(w)
    if not core:
        return core
    key = _letter_key(order)
    candidates = list(_rotations(core.expand()))
    candidates += list(_rotations(core.inverse().expand()))
    best = min(candidates, key=lambda rot: [key(lt) for lt in rot])
    return Word(best)


def syllable_length(w: Word, split: tuple[set[str], set[str]]) -> int:
    """2k for a cyclically reduced word alternating between two symbol sets."""
    first, second = split
    runs: list[int] = []  # 0 = first set, 1 = second set
    for n, _ in w.expand():
        side = 0 if n in first else 1 if n in second else None
        if side is None:
            raise ValueError(f"symbol {n!r} in neither side of the split")
        if not runs or runs[-1] != side:
            runs.append(side)
        # same side continuing a syllable is fine
    if not runs:
        return 0
    if len(runs) % 2 != 0 or runs[0] == runs[-1]:
        raise ValueError("not in alternating form")
    return len(runs)


def exponent_sum(w: Word, name: str) -> int:
    return sum(e for n, e in w.letters if n == name)


def max_root(w: Word) -> tuple[Word, int]:
    """Maximal d with w = r^d as a linear word; returns (r, d)."""
    expanded = w.expand()
    n = len(expanded)
    if n == 0:
        return Word(), 1
    for period in range(1, n + 1):
        if n % period:
            continue
        root = expanded[:period]
        if root * (n // period) == expanded:
            return Word(root), n // period
    return Word(expanded), 1
