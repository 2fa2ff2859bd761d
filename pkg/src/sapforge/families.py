"""Generators for the pattern families used as fixtures.

Recursively built families come with their seed, the extension script that
rebuilds them, and a known nilpotent witness for the seed where one is
rational.  Orders are capped (default 64) to keep cycle enumeration bounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import ArgumentError
from .extensions import AMBSTAR, TRIANGLE, ExtensionSpec, extend_pattern
from .pattern import ExactMatrix, Pattern, permute

MAX_ORDER = 64


@dataclass(frozen=True)
class Family:
    """A generated pattern plus the data needed to rebuild and certify it."""

    name: str
    params: dict
    pattern: Pattern
    seed: Pattern | None = None
    script: tuple[ExtensionSpec, ...] = ()
    witness: ExactMatrix | None = None  # nilpotent realization of the seed (or pattern)
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.pattern.order

    @property
    def base(self) -> Pattern:
        return self.seed if self.seed is not None else self.pattern


def _check_order(n: int, max_order: int):
    if n > max_order:
        raise ArgumentError(f"order {n} exceeds the cap of {max_order}")


def _fold(seed: Pattern, script) -> Pattern:
    P = seed
    for spec in script:
        P = extend_pattern(P, spec)
    return P


def tridiagonal_T(n: int, label: str = "*") -> Pattern:
    """Path 1-2-...-n with loops at the two ends only."""
    if n < 2:
        raise ArgumentError("T_n needs n >= 2")
    rows = [["0"] * n for _ in range(n)]
    rows[0][0] = rows[n - 1][n - 1] = label
    for i in range(n - 1):
        rows[i][i + 1] = rows[i + 1][i] = label
    return Pattern.from_rows(rows)


def signed_T(n: int) -> Pattern:
    """A sign assignment of T_n: loops + at 1 and - at n, path arcs + forward, - backward."""
    P = tridiagonal_T(n)
    changes = {(1, 1): "+", (n, n): "-"}
    for i in range(1, n):
        changes[(i, i + 1)] = "+"
        changes[(i + 1, i)] = "-"
    return P.replace(changes)


def beam_script(n: int, m: int) -> tuple[ExtensionSpec, ...]:
    """Triangle steps growing a beam off the end arc of T_n.

    With ``w_0 = n-1`` and ``w_s = n+s``: the first step works on (n, n-1);
    step s even extends (w_{s-1}, w_{s-2}) with the loop at its tail, step s
    odd extends (w_{s-2}, w_{s-1}) with the loop at its head.  The loop thus
    walks along the new vertices and every step triangulates the last one.
    """
    w = lambda s: n - 1 if s == 0 else n + s
    steps = []
    for s in range(1, m + 1):
        if s == 1:
            steps.append(ExtensionSpec(TRIANGLE, n, n - 1))
        elif s % 2 == 0:
            steps.append(ExtensionSpec(TRIANGLE, w(s - 1), w(s - 2)))
        else:
            steps.append(ExtensionSpec(TRIANGLE, w(s - 2), w(s - 1), loop="head"))
    return tuple(steps)


T2_WITNESS = ExactMatrix.from_rows([[1, 1], [-1, -1]])
T3_WITNESS = ExactMatrix.from_rows([[1, 1, 0], [Fraction(-1, 2), 0, 1], [0, Fraction(-1, 2), -1]])
C2_WITNESS = ExactMatrix.from_rows([[0, 1], [0, 0]])
V3_WITNESS = ExactMatrix.from_rows([[-1, 0, 1], [1, 1, 0], [-1, -1, 0]])

# Digraph of V_3 (arcs as (tail, head)); loops at 1 and 2.
V3_ARCS = ((1, 1), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2))
V_PRIME_STEP = ExtensionSpec(TRIANGLE, 1, 3)                 # loop at 1 moves onto w
V_DOUBLE_PRIME_STEP = ExtensionSpec(TRIANGLE, 3, 1, loop="head")  # loop at 1 moves onto w


def _witness_for(n: int) -> ExactMatrix | None:
    return {2: T2_WITNESS, 3: T3_WITNESS}.get(n)


def _from_arcs(n: int, arcs, label: str = "*") -> Pattern:
    rows = [["0"] * n for _ in range(n)]
    for i, j in arcs:
        rows[i - 1][j - 1] = label
    return Pattern.from_rows(rows)


def family_T(n: int = 3, *, max_order: int = MAX_ORDER, signed: bool = False, **_) -> Family:
    _check_order(n, max_order)
    P = signed_T(n) if signed else tridiagonal_T(n)
    witness = _witness_for(n) if not signed else None
    if signed and n == 2:
        witness = T2_WITNESS
    return Family("T", {"n": n}, P, witness=witness)


def family_Tbeam(n: int = 3, m: int = 1, *, max_order: int = MAX_ORDER, **_) -> Family:
    if n < 2 or m < 0:
        raise ArgumentError("T_{n,m} needs n >= 2 and m >= 0")
    _check_order(n + m, max_order)
    seed = tridiagonal_T(n)
    script = beam_script(n, m)
    meta = {}
    if n == 2:
        tops = [2] + [2 + s for s in range(1, m + 1, 2)]
        bottoms = [1] + [2 + s for s in range(2, m + 1, 2)]
        meta = {"tops": tops, "bottoms": bottoms}
    return Family("Tbeam", {"n": n, "m": m}, _fold(seed, script), seed, script,
                  _witness_for(n), meta)


def family_T2beam(k: int = 1, *, max_order: int = MAX_ORDER, **_) -> Family:
    fam = family_Tbeam(2, k, max_order=max_order)
    return Family("T2beam", {"k": k}, fam.pattern, fam.seed, fam.script, fam.witness, fam.meta)


def family_C2(*, max_order: int = MAX_ORDER, **_) -> Family:
    return Family("C2", {}, Pattern.from_text("@ *\n@ 0"), witness=C2_WITNESS)


def c2_chain_script(order: int) -> tuple[ExtensionSpec, ...]:
    """⊛ steps (k, 1) for k = 2..order-1: a new '*' arc k->w and '@' arc w->1."""
    return tuple(ExtensionSpec(AMBSTAR, k, 1, labels=("*", "@")) for k in range(2, order))


def family_C2chain(n: int = 3, *, max_order: int = MAX_ORDER, **_) -> Family:
    if n < 2:
        raise ArgumentError("the C2 chain needs order n >= 2")
    _check_order(n, max_order)
    seed = Pattern.from_text("@ *\n@ 0")
    script = c2_chain_script(n)
    return Family("C2chain", {"n": n}, _fold(seed, script), seed, script, C2_WITNESS)


def v3_pattern() -> Pattern:
    return _from_arcs(3, V3_ARCS)


def family_V3(**_) -> Family:
    return Family("V3", {}, v3_pattern(), witness=V3_WITNESS)


def family_Vprime(**_) -> Family:
    seed = v3_pattern()
    return Family("Vprime", {}, _fold(seed, [V_PRIME_STEP]), seed, (V_PRIME_STEP,), V3_WITNESS)


def family_Vdoubleprime(**_) -> Family:
    seed = v3_pattern()
    return Family("Vdoubleprime", {}, _fold(seed, [V_DOUBLE_PRIME_STEP]), seed,
                  (V_DOUBLE_PRIME_STEP,), V3_WITNESS)


T3_AMBSTAR_STEP = ExtensionSpec(AMBSTAR, 3, 1, labels=("@", "@"))


def family_T3ambstar(**_) -> Family:
    seed = tridiagonal_T(3, "@")
    return Family("T3ambstar", {}, _fold(seed, [T3_AMBSTAR_STEP]), seed,
                  (T3_AMBSTAR_STEP,), T3_WITNESS)


FAMILIES: dict[str, Callable[..., Family]] = {
    "T": family_T,
    "Tbeam": family_Tbeam,
    "T2beam": family_T2beam,
    "C2": family_C2,
    "C2chain": family_C2chain,
    "V3": family_V3,
    "Vprime": family_Vprime,
    "Vdoubleprime": family_Vdoubleprime,
    "T3ambstar": family_T3ambstar,
}

_ALIASES = {"t_n": "T", "tn": "T", "t2k": "T2beam", "t2beam": "T2beam", "tnm": "Tbeam",
            "tbeam": "Tbeam", "c2": "C2", "c2chain": "C2chain", "c2_chain": "C2chain",
            "v3": "V3", "vprime": "Vprime", "vdoubleprime": "Vdoubleprime",
            "t3ambstar": "T3ambstar", "t3_ambstar": "T3ambstar"}


def family(name: str, **params) -> Family:
    """Generate a named family; unknown names and bad parameters raise ArgumentError."""
    key = name if name in FAMILIES else _ALIASES.get(name.lower())
    if key is None:
        raise ArgumentError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
    params = {k: v for k, v in params.items() if v is not None}
    for k in ("n", "k", "m"):
        if k in params and int(params[k]) < 0:
            raise ArgumentError(f"parameter {k} must be nonnegative")
    return FAMILIES[key](**params)


def bandwidth(P: Pattern) -> int:
    return max((abs(i - j) for i, j in P.nonzero_positions()), default=0)


def pentadiagonal_relabel(P) -> Pattern:
    """Relabel a T_{2,k} beam so that it becomes pentadiagonal.

    Top vertices (the first loop vertex and the odd-step new vertices) get
    odd labels and bottom vertices even labels, each in order along the beam.
    Accepts a :class:`Family` from the beam generator or a bare pattern equal
    to one; anything else raises ArgumentError.
    """
    if isinstance(P, Family):
        fam = P
        if fam.name not in ("T2beam", "Tbeam") or "tops" not in fam.meta:
            raise ArgumentError("pentadiagonal_relabel needs a T_{2,k} beam")
    else:
        k = P.order - 2
        if k < 0:
            raise ArgumentError("pattern is too small to be a T_{2,k} beam")
        fam = family_T2beam(k, max_order=max(MAX_ORDER, P.order))
        if fam.pattern != P:
            raise ArgumentError("pattern is not a T_{2,k} beam from the generator")
    tops, bottoms = fam.meta["tops"], fam.meta["bottoms"]
    sigma = [0] * fam.order
    for t, v in enumerate(tops):
        sigma[v - 1] = 2 * t + 1
    for t, v in enumerate(bottoms):
        sigma[v - 1] = 2 * t + 2
    Q = permute(fam.pattern, sigma)
    if bandwidth(Q) > 2:  # pragma: no cover - structural guarantee
        raise AssertionError("relabeled beam is not pentadiagonal")
    return Q


__all__ = [
    "FAMILIES", "Family", "MAX_ORDER", "bandwidth", "beam_script", "c2_chain_script",
    "family", "pentadiagonal_relabel", "signed_T", "tridiagonal_T", "v3_pattern",
]
