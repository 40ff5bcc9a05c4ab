"""Open-map checking and fixed-point decision of (hp-)bisimilarity.

Two HDA are bisimilar exactly when some face-closed relation R on
equal-dimension cube pairs contains the pair of initial cubes and has the
zig-zag property on reachable pairs: whenever (x1, y1) is related and x1 is
the k-th lower face of some x2, then y1 is the k-th lower face of some y2
with (x2, y2) related, and symmetrically.  The decision procedure deletes
violating pairs from the full equal-dimension relation until nothing changes;
the surviving relation is the greatest witness.

History-preserving bisimilarity (runs related up to homotopy and extension)
coincides with this relation-based notion, which is what the `hp_*` entry
points implement; `hp_oracle` cross-checks them on truncated unfoldings,
where the zig-zag condition on homotopy classes is the run-based definition
made one-step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import (HDA, Labeling, ModelError, PrecubicalMorphism,
                   PrecubicalSet, reachable)
from .paths import DEFAULT_CAP
from .unfold import Unfolding, unfold

Pair = tuple[str, str]


@dataclass
class OpenMapResult:
    ok: bool
    counterexample: tuple[str, str, int] | None = None  # (x1, y2, k)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        ce = None
        if self.counterexample:
            x1, y2, k = self.counterexample
            ce = {"x1": x1, "y2": y2, "k": k}
        return {"result": self.ok, "counterexample": ce}


def open_map_check(f: PrecubicalMorphism, x_hda: HDA, y_hda: HDA) -> OpenMapResult:
    """Zig-zag lifting check: for every reachable x1 and every y2 starting a
    new event above f(x1), some x2 above x1 maps onto y2.

    Frontier cubes of a truncated source carry no obligations (their
    neighborhood is unknown).
    """
    xs, ys = f.source, f.target
    for x1 in sorted(reachable(x_hda), key=lambda c: (xs.dim(c), c)):
        if x1 in xs.frontier:
            continue
        fx1 = f.mapping[x1]
        for k, y2 in ys.cofaces_lower(fx1):
            if not any(f.mapping[x2] == y2
                       for x2 in xs.cofaces_lower_at(x1, k)):
                return OpenMapResult(False, (x1, y2, k))
    return OpenMapResult(True)


@dataclass
class BisimDecision:
    result: bool | str  # True | False | "inconclusive"
    witness: list[Pair] | None
    justification: str
    counterexample: dict | None = None
    iterations: int = 0
    definite: bool = True
    notes: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.result is True

    def to_json(self) -> dict:
        out = {
            "result": self.result,
            "witness": [list(p) for p in self.witness] if self.witness else None,
            "justification": self.justification,
            "counterexample": self.counterexample,
        }
        out.update(self.notes)
        return out


def _greatest_relation(xs: PrecubicalSet, ys: PrecubicalSet,
                       universe: list[Pair],
                       zig_obliged) -> tuple[set[Pair], int]:
    """Delete pairs violating face-closure or zig-zag until stable.

    `zig_obliged(x, y)` says whether the pair carries zig-zag obligations;
    face equations touching an omitted (truncated) face are skipped.  The
    greatest fixed point is unique, so the deterministic schedule below is
    just for reproducibility of iteration counts.
    """
    alive: set[Pair] = set(universe)

    def face_violation(x: str, y: str) -> bool:
        for nu in (0, 1):
            for k in range(1, xs.dim(x) + 1):
                fx, fy = xs.face(x, k, nu), ys.face(y, k, nu)
                if fx is None or fy is None:
                    continue  # truncated side: unknown, no constraint
                if (fx, fy) not in alive:
                    return True
        return False

    def zig_violation(x: str, y: str) -> bool:
        if not zig_obliged(x, y):
            return False
        for k, x2 in xs.cofaces_lower(x):
            if not any((x2, y2) in alive
                       for y2 in ys.cofaces_lower_at(y, k)):
                return True
        for k, y2 in ys.cofaces_lower(y):
            if not any((x2, y2) in alive
                       for x2 in xs.cofaces_lower_at(x, k)):
                return True
        return False

    queue: deque[Pair] = deque(universe)
    queued: set[Pair] = set(universe)
    deletions = 0
    while queue:
        pair = queue.popleft()
        queued.discard(pair)
        if pair not in alive:
            continue
        x, y = pair
        if not (face_violation(x, y) or zig_violation(x, y)):
            continue
        alive.discard(pair)
        deletions += 1
        affected: list[Pair] = []
        for nu in (0, 1):
            cof_x = xs.cofaces_lower(x) if nu == 0 else xs.cofaces_upper(x)
            cof_y_at = (ys.cofaces_lower_at if nu == 0 else
                        lambda c, k: tuple(p for (j, p) in ys.cofaces_upper(c)
                                           if j == k))
            for k, x2 in cof_x:
                for y2 in cof_y_at(y, k):
                    affected.append((x2, y2))
        for k in range(1, xs.dim(x) + 1):
            fx, fy = xs.lower(x, k), ys.lower(y, k)
            if fx is not None and fy is not None:
                affected.append((fx, fy))
        for cand in affected:
            if cand in alive and cand not in queued:
                queue.append(cand)
                queued.add(cand)
    return alive, deletions


def _universe(xs: PrecubicalSet, ys: PrecubicalSet,
              lx: Labeling | None = None,
              ly: Labeling | None = None) -> list[Pair]:
    pairs: list[Pair] = []
    for n in range(min(xs.max_dim(), ys.max_dim()) + 1):
        for x in xs.by_dim(n):
            for y in ys.by_dim(n):
                if lx is not None and lx.assign.get(x) != ly.assign.get(y):
                    continue
                pairs.append((x, y))
    return pairs


def _decide(x_hda: HDA, y_hda: HDA,
            lx: Labeling | None, ly: Labeling | None,
            justification: str) -> BisimDecision:
    xs, ys = x_hda.space, y_hda.space
    if (lx is None) != (ly is None):
        raise ModelError("either both or neither model must be labeled")
    if lx is not None and lx.events != ly.events:
        raise ModelError("mismatched event alphabets; align event order first")
    universe = _universe(xs, ys, lx, ly)
    reach_x, reach_y = reachable(x_hda), reachable(y_hda)

    def zig_obliged(x: str, y: str) -> bool:
        return x in reach_x and y in reach_y

    alive, deletions = _greatest_relation(xs, ys, universe, zig_obliged)
    root = (x_hda.initial, y_hda.initial)
    ok = root in alive
    witness = sorted(alive) if ok else None
    if ok:
        # Independent audit of the returned witness; failure here would be
        # an engine bug, not a property of the inputs.
        problems = verify_bisim_relation(x_hda, y_hda, witness, lx, ly)
        if problems:
            raise RuntimeError("fixed-point witness failed its audit: "
                               + "; ".join(problems[:3]))
    counterexample = None if ok else {
        "pair": list(root),
        "detail": "the initial pair cannot survive the fixed point",
    }
    return BisimDecision(ok, witness, justification,
                         counterexample=counterexample, iterations=deletions)


def bisimilar(x_hda: HDA, y_hda: HDA) -> BisimDecision:
    """Decide bisimilarity of finite HDA; on success the witness is the
    greatest face-closed zig-zag relation."""
    return _decide(x_hda, y_hda, None, None, "one-step-fixed-point")


def labeled_bisimilar(x_hda: HDA, lx: Labeling,
                      y_hda: HDA, ly: Labeling) -> BisimDecision:
    """As `bisimilar`, with the pair universe restricted to cubes carrying
    identical label tuples over a shared alphabet."""
    return _decide(x_hda, y_hda, lx, ly, "labeled-one-step-fixed-point")


def hp_bisimilar(x_hda: HDA, y_hda: HDA,
                 lx: Labeling | None = None,
                 ly: Labeling | None = None) -> BisimDecision:
    """History-preserving bisimilarity.

    Hp-bisimilarity, homotopy bisimilarity, and span-of-open-maps
    bisimilarity all coincide for (labeled) HDA, so the decision reduces to
    the same one-step fixed point.
    """
    if lx is not None or ly is not None:
        decision = labeled_bisimilar(x_hda, lx, y_hda, ly)
    else:
        decision = bisimilar(x_hda, y_hda)
    decision.justification = (
        "hp-bisimilarity = homotopy bisimilarity = one-step bisimilarity; "
        "decided by " + decision.justification)
    return decision


def verify_bisim_relation(x_hda: HDA, y_hda: HDA, pairs: list[Pair],
                          lx: Labeling | None = None,
                          ly: Labeling | None = None) -> list[str]:
    """Independent witness audit: re-checks membership of the initial pair,
    dimension (and label) agreement, face-closure of every pair, and both
    zig-zag conditions on reachable pairs.  Returns human-readable problems.
    """
    xs, ys = x_hda.space, y_hda.space
    rel = set(pairs)
    problems: list[str] = []
    if (x_hda.initial, y_hda.initial) not in rel:
        problems.append("initial pair missing")
    reach_x, reach_y = reachable(x_hda), reachable(y_hda)
    for x, y in sorted(rel):
        if xs.dim(x) != ys.dim(y):
            problems.append(f"dimension mismatch in pair ({x}, {y})")
            continue
        if lx is not None and lx.assign.get(x) != ly.assign.get(y):
            problems.append(f"label mismatch in pair ({x}, {y})")
        for nu in (0, 1):
            for k in range(1, xs.dim(x) + 1):
                fx, fy = xs.face(x, k, nu), ys.face(y, k, nu)
                if fx is None or fy is None:
                    continue
                if (fx, fy) not in rel:
                    problems.append(
                        f"pair ({x}, {y}) not face-closed at k={k} nu={nu}")
        if x in reach_x and y in reach_y:
            for k, x2 in xs.cofaces_lower(x):
                if not any((x2, y2) in rel for y2 in ys.cofaces_lower_at(y, k)):
                    problems.append(
                        f"pair ({x}, {y}) has no match for {x2} at k={k}")
            for k, y2 in ys.cofaces_lower(y):
                if not any((x2, y2) in rel for x2 in xs.cofaces_lower_at(x, k)):
                    problems.append(
                        f"pair ({x}, {y}) has no match for {y2} at k={k}")
    return problems


def hp_oracle(x_hda: HDA, y_hda: HDA, depth: int,
              lx: Labeling | None = None, ly: Labeling | None = None,
              cap: int = DEFAULT_CAP) -> BisimDecision:
    """Run-based cross-check on truncated unfoldings.

    Builds both unfoldings to `depth`, then computes the greatest
    face-closed zig-zag relation on tree-node pairs, with pairs touching
    the truncation frontier exempted from zig-zag obligations
    (optimistically).  When nothing was truncated the unfoldings are exact
    and the answer is definite; a violation found within the bound is
    definite as well, because the frontier was treated optimistically.
    Otherwise the verdict is `inconclusive` at the given bound.
    """
    if (lx is None) != (ly is None):
        raise ModelError("either both or neither model must be labeled")
    if lx is not None and lx.events != ly.events:
        raise ModelError("mismatched event alphabets; align event order first")
    ux: Unfolding = unfold(x_hda, depth, cap)
    uy: Unfolding = unfold(y_hda, depth, cap)
    xs, ys = ux.tree.space, uy.tree.space

    def label_of(u: Unfolding, labeling: Labeling | None, node: str):
        return None if labeling is None else labeling.assign.get(u.project(node))

    pairs: list[Pair] = []
    for n in range(min(xs.max_dim(), ys.max_dim()) + 1):
        for x in xs.by_dim(n):
            for y in ys.by_dim(n):
                if lx is not None and label_of(ux, lx, x) != label_of(uy, ly, y):
                    continue
                pairs.append((x, y))

    def zig_obliged(x: str, y: str) -> bool:
        return x not in ux.frontier and y not in uy.frontier

    alive, deletions = _greatest_relation(xs, ys, pairs, zig_obliged)
    root = (ux.tree.initial, uy.tree.initial)
    exact = ux.complete and uy.complete
    notes = {"depth": depth, "exact": exact}
    if root not in alive:
        # Optimistic frontier handling makes any found violation real.
        return BisimDecision(
            False, None, "unfolding-zig-zag", iterations=deletions,
            counterexample={"pair": list(root),
                            "detail": "initial node pair deleted within the bound"},
            definite=True, notes=notes)
    if exact:
        return BisimDecision(True, sorted(alive), "unfolding-zig-zag",
                             iterations=deletions, definite=True, notes=notes)
    return BisimDecision("inconclusive", sorted(alive), "unfolding-zig-zag",
                         iterations=deletions, definite=False, notes=notes)
