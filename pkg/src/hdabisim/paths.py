"""Cube paths, adjacency, homotopy, and the fan-shaping normal form.

A cube path is a sequence (x_1, ..., x_m) of cubes in which every step
either starts a new part of the computation (x_j = delta_k^0 x_{j+1}) or
ends one (x_{j+1} = delta_k^1 x_j).  Two paths of equal length with equal
endpoints are *adjacent* when they differ in exactly one position and the
difference is one of four local exchanges of independent steps:

  1. two starts swap order,
  2. two ends swap order,
  3. a start and an end of independent events swap, seen from the path that
     climbs through the higher cube (the other path dips two dimensions),
  4. the mirror-image of 3 with the end taken first.

Homotopy is the reflexive-transitive closure of adjacency; homotopic paths
describe the same computation up to independence of events.

The T-measure of a path is the sum of its cube dimensions.  Every pointed
path is homotopic to a *fan-shaped* one, which alternates 0- and 1-cubes
until it has to climb to the dimension of its end cube; fan shapes realize
the minimum T = (n_m^2 + m - 1)/2 and `fan_shape` reaches one by rewrite
iterations that each drop T by exactly 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Literal

from .core import HDA, CapExceeded, ModelError, PrecubicalSet

DEFAULT_CAP = 100_000

#: Returned by `are_homotopic` when the closure hit the cap before deciding.
EXHAUSTED: Literal["exhausted"] = "exhausted"


class CubePath:
    """A cube path as a value object: its space and its id sequence."""

    __slots__ = ("space", "seq")

    def __init__(self, space: PrecubicalSet, seq: tuple[str, ...] | list[str]):
        if not seq:
            raise ModelError("a cube path has at least one cube")
        self.space = space
        self.seq = tuple(seq)

    def __len__(self) -> int:
        return len(self.seq)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubePath):
            return NotImplemented
        return self.space is other.space and self.seq == other.seq

    def __hash__(self) -> int:
        return hash((id(self.space), self.seq))

    def __repr__(self) -> str:
        return f"CubePath({', '.join(self.seq)})"

    @property
    def start(self) -> str:
        return self.seq[0]

    @property
    def end(self) -> str:
        return self.seq[-1]

    def dims(self) -> tuple[int, ...]:
        return tuple(self.space.dim(c) for c in self.seq)

    def to_json(self) -> list[str]:
        return list(self.seq)


@dataclass(frozen=True)
class StepDiag:
    """Which step clause fired between two consecutive cubes."""

    position: int  # 1-based index of the left cube
    kind: str      # "lower-face-of-next" or "upper-face-of-previous"
    k: int

    def to_json(self) -> dict:
        return {"position": self.position, "kind": self.kind, "k": self.k}


@dataclass
class PathCheck:
    ok: bool
    steps: list[StepDiag]
    failure: int | None = None  # 1-based position of the first broken step

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "result": self.ok,
            "steps": [s.to_json() for s in self.steps],
            "failure": self.failure,
        }


def _step(space: PrecubicalSet, a: str, b: str) -> StepDiag | None:
    for k in range(1, space.dim(b) + 1):
        if space.lower(b, k) == a:
            return StepDiag(0, "lower-face-of-next", k)
    for k in range(1, space.dim(a) + 1):
        if space.upper(a, k) == b:
            return StepDiag(0, "upper-face-of-previous", k)
    return None


def is_cube_path(space: PrecubicalSet, seq: tuple[str, ...] | list[str]) -> PathCheck:
    """Check the step relation for every consecutive pair, with diagnosis."""
    seq = tuple(seq)
    if not seq:
        raise ModelError("empty sequence is not a cube path")
    for c in seq:
        space.cube(c)  # raises on unresolved ids
    steps: list[StepDiag] = []
    for j in range(len(seq) - 1):
        diag = _step(space, seq[j], seq[j + 1])
        if diag is None:
            return PathCheck(False, steps, failure=j + 1)
        steps.append(StepDiag(j + 1, diag.kind, diag.k))
    return PathCheck(True, steps)


def concat(rho: CubePath, sigma: CubePath) -> CubePath:
    """Concatenate two paths whose junction satisfies the step relation."""
    if rho.space is not sigma.space:
        raise ModelError("concatenation requires paths in the same space")
    if _step(rho.space, rho.end, sigma.start) is None:
        raise ModelError(
            f"incompatible junction: no step from {rho.end!r} to {sigma.start!r}")
    return CubePath(rho.space, rho.seq + sigma.seq)


def is_prefix(rho: CubePath, chi: CubePath) -> bool:
    """True iff chi extends rho (equality included)."""
    if rho.space is not chi.space:
        raise ModelError("prefix requires paths in the same space")
    return len(rho) <= len(chi) and chi.seq[:len(rho)] == rho.seq


@dataclass(frozen=True)
class AdjacencyInfo:
    clause: int    # 1..4
    position: int  # 1-based index of the differing cube
    k: int
    ell: int
    swapped: bool  # True when the second path played the leading role

    def to_json(self) -> dict:
        return {"clause": self.clause, "position": self.position,
                "k": self.k, "ell": self.ell, "swapped": self.swapped}


def _clause1(sp: PrecubicalSet, xs, ys, p: int) -> tuple[int, int] | None:
    # Two consecutive starts swap: x takes direction k then ell (k < ell),
    # y takes ell (renumbered ell-1 after the climb) then k.
    xm1, xp, xp1 = xs[p - 2], xs[p - 1], xs[p]
    ym1, yp, yp1 = ys[p - 2], ys[p - 1], ys[p]
    for k in range(1, sp.dim(xp) + 1):
        if sp.lower(xp, k) != xm1:
            continue
        for ell in range(k + 1, sp.dim(xp1) + 1):
            if sp.lower(xp1, ell) != xp:
                continue
            if sp.lower(yp, ell - 1) == ym1 and sp.lower(yp1, k) == yp:
                return k, ell
    return None


def _clause2(sp: PrecubicalSet, xs, ys, p: int) -> tuple[int, int] | None:
    # Two consecutive ends swap: x ends direction k then ell (renumbered
    # ell-1), y ends ell then k, for k < ell in the top cube's indexing.
    xm1, xp, xp1 = xs[p - 2], xs[p - 1], xs[p]
    yp, yp1 = ys[p - 1], ys[p]
    for k in range(1, sp.dim(xm1) + 1):
        if sp.upper(xm1, k) != xp:
            continue
        for ell in range(k + 1, sp.dim(xm1) + 1):
            if sp.upper(xm1, ell) != yp:
                continue
            if sp.upper(xp, ell - 1) == xp1 and sp.upper(yp, k) == yp1:
                return k, ell
    return None


def _clause3(sp: PrecubicalSet, xs, ys, p: int) -> tuple[int, int] | None:
    # y climbs through the big cube (start k, then end ell); x dips two
    # dimensions below by doing the end first.
    xp = xs[p - 1]
    ym1, yp, yp1 = ys[p - 2], ys[p - 1], ys[p]
    for k in range(1, sp.dim(yp) + 1):
        if sp.lower(yp, k) != ym1:
            continue
        for ell in range(k + 1, sp.dim(yp) + 1):
            if sp.upper(yp, ell) != yp1:
                continue
            if sp.lower(yp1, k) == xp:
                return k, ell
    return None


def _clause4(sp: PrecubicalSet, xs, ys, p: int) -> tuple[int, int] | None:
    # Mirror of clause 3: y does end k after not yet starting ell; x takes
    # the end first and stays two dimensions below.
    xp = xs[p - 1]
    ym1, yp, yp1 = ys[p - 2], ys[p - 1], ys[p]
    for k in range(1, sp.dim(yp) + 1):
        if sp.upper(yp, k) != yp1:
            continue
        for ell in range(k + 1, sp.dim(yp) + 1):
            if sp.lower(yp, ell) != ym1:
                continue
            if sp.upper(ym1, k) == xp:
                return k, ell
    return None


_CLAUSES = ((1, _clause1), (2, _clause2), (3, _clause3), (4, _clause4))


def _adjacency_at(space: PrecubicalSet, xs: tuple[str, ...],
                  ys: tuple[str, ...], p: int) -> AdjacencyInfo | None:
    for swapped, (a, b) in ((False, (xs, ys)), (True, (ys, xs))):
        for num, fn in _CLAUSES:
            hit = fn(space, a, b, p)
            if hit is not None:
                return AdjacencyInfo(num, p, hit[0], hit[1], swapped)
    return None


def adjacency(rho: CubePath, sigma: CubePath) -> AdjacencyInfo | None:
    """The fired clause and position when the two paths are adjacent."""
    if rho.space is not sigma.space:
        raise ModelError("adjacency requires paths in the same space")
    xs, ys = rho.seq, sigma.seq
    if len(xs) != len(ys) or xs[0] != ys[0] or xs[-1] != ys[-1]:
        return None
    diff = [j for j in range(len(xs)) if xs[j] != ys[j]]
    if len(diff) != 1:
        return None
    return _adjacency_at(rho.space, xs, ys, diff[0] + 1)


def is_adjacent(rho: CubePath, sigma: CubePath) -> bool:
    return adjacency(rho, sigma) is not None


def _between_candidates(space: PrecubicalSet, a: str, b: str) -> set[str]:
    # Cubes c with valid steps a -> c -> b.
    after_a = {x for (_k, x) in space.cofaces_lower(a)}
    after_a.update(f for f in space.cube(a).upper if f is not None)
    before_b = {f for f in space.cube(b).lower if f is not None}
    before_b.update(x for (_k, x) in space.cofaces_upper(b))
    return after_a & before_b


def _adjacent_seqs(space: PrecubicalSet, seq: tuple[str, ...]) -> list[tuple[str, ...]]:
    out = []
    for p in range(1, len(seq) - 1):
        for cand in sorted(_between_candidates(space, seq[p - 1], seq[p + 1])):
            if cand == seq[p]:
                continue
            other = seq[:p] + (cand,) + seq[p + 1:]
            if _adjacency_at(space, seq, other, p + 1) is not None:
                out.append(other)
    return out


def _closure(space: PrecubicalSet, seq: tuple[str, ...], cap: int,
             stop_at: tuple[str, ...] | None = None):
    """BFS over adjacency.  Returns (found_stop, seen, capped)."""
    seen = {seq}
    queue = [seq]
    capped = False
    while queue:
        cur = queue.pop(0)
        for nxt in _adjacent_seqs(space, cur):
            if nxt in seen:
                continue
            if stop_at is not None and nxt == stop_at:
                seen.add(nxt)
                return True, seen, capped
            if len(seen) >= cap:
                capped = True
                return False, seen, capped
            seen.add(nxt)
            queue.append(nxt)
    return stop_at in seen if stop_at is not None else False, seen, capped


def are_homotopic(rho: CubePath, sigma: CubePath,
                  cap: int = DEFAULT_CAP) -> bool | Literal["exhausted"]:
    """Decide homotopy by closing rho under adjacency until sigma appears,
    the closure is complete, or `cap` distinct paths were enumerated."""
    if rho.space is not sigma.space:
        raise ModelError("homotopy requires paths in the same space")
    if rho.seq == sigma.seq:
        return True
    if (len(rho) != len(sigma) or rho.start != sigma.start
            or rho.end != sigma.end):
        return False
    found, _seen, capped = _closure(rho.space, rho.seq, cap, stop_at=sigma.seq)
    if found:
        return True
    return EXHAUSTED if capped else False


def homotopy_class(rho: CubePath, cap: int = DEFAULT_CAP) -> list[CubePath]:
    """The full adjacency closure of rho, sorted; raises CapExceeded."""
    _found, seen, capped = _closure(rho.space, rho.seq, cap)
    if capped:
        raise CapExceeded(
            f"homotopy class of {rho!r} exceeds the cap of {cap} paths")
    return [CubePath(rho.space, s) for s in sorted(seen)]


def canonical_rep(rho: CubePath, cap: int = DEFAULT_CAP) -> CubePath:
    """The lexicographically least member of rho's homotopy class."""
    _found, seen, capped = _closure(rho.space, rho.seq, cap)
    if capped:
        raise CapExceeded(
            f"homotopy class of {rho!r} exceeds the cap of {cap} paths")
    return CubePath(rho.space, min(seen))


def t_measure(rho: CubePath) -> int:
    """Sum of the cube dimensions along the path."""
    return sum(rho.dims())


def fan_t_bound(rho: CubePath) -> int:
    """The fan-shape floor (n_m^2 + m - 1)/2; an integer for pointed paths."""
    n = rho.space.dim(rho.end)
    return (n * n + len(rho) - 1) // 2


def is_fan_shaped(rho: CubePath) -> bool:
    """Dimensions alternate 0,1,0,1,... and then climb 2,3,...,n_m."""
    dims = rho.dims()
    m, n = len(dims), dims[-1]
    for j in range(1, m + 1):
        if j <= m - n:
            want = 0 if j % 2 == 1 else 1
        else:
            want = n + j - m
        if dims[j - 1] != want:
            return False
    return True


def _least_flanked(space: PrecubicalSet, seq: tuple[str, ...]) -> tuple[int, int, int]:
    """The least 1-based position ell with dim >= 2 entered by a start and
    left by an end, together with the entering index k2 and leaving index k3."""
    for ell in range(3, len(seq)):
        mid = seq[ell - 1]
        if space.dim(mid) < 2:
            continue
        k2 = next((k for k in range(1, space.dim(mid) + 1)
                   if space.lower(mid, k) == seq[ell - 2]), None)
        if k2 is None:
            continue
        k3 = next((k for k in range(1, space.dim(mid) + 1)
                   if space.upper(mid, k) == seq[ell]), None)
        if k3 is None:
            continue
        return ell, k2, k3
    raise AssertionError("no reducible position in a non-fan-shaped pointed path")


def _fan_once(space: PrecubicalSet, seq: tuple[str, ...]) -> list[tuple[str, ...]]:
    """One T-reducing rewrite iteration; returns the 1-2 adjacent steps."""
    ell, k2, k3 = _least_flanked(space, seq)
    i = ell - 1  # 0-based index of the cube being lowered

    def replaced(s, idx, value):
        return s[:idx] + (value,) + s[idx + 1:]

    if k2 < k3:
        return [replaced(seq, i, space.lower(seq[i + 1], k2))]
    if k2 > k3:
        return [replaced(seq, i, space.upper(seq[i - 1], k3))]
    # k2 == k3: first move the preceding cube so the two start indices
    # separate, then reduce.
    k1 = next((k for k in range(1, space.dim(seq[i - 1]) + 1)
               if space.lower(seq[i - 1], k) == seq[i - 2]), None)
    if k1 is None:
        # Ruled out for pointed paths by the choice of the least position.
        raise AssertionError("reducible position lacks a preceding start step")
    if k1 < k2:
        mid = replaced(seq, i - 1, space.lower(seq[i], k1))
        low = replaced(mid, i, space.lower(mid[i + 1], k1))
    else:
        mid = replaced(seq, i - 1, space.lower(seq[i], k1 + 1))
        low = replaced(mid, i, space.upper(mid[i - 1], k3))
    if mid == seq:
        # Self-linked cubes can make the transposition a no-op; the
        # reduction is then directly adjacent to the input.
        return [low]
    return [mid, low]


def fan_shape_trace(rho: CubePath) -> list[list[CubePath]]:
    """All rewrite iterations from rho to its fan shape.

    Each iteration is the list of one or two paths it stepped through; every
    consecutive pair across the whole trace is adjacent and each iteration
    lowers the T-measure by exactly 2.
    """
    if rho.space.dim(rho.start) != 0:
        raise ModelError("fan shaping requires a path starting at a 0-cube")
    space = rho.space
    seq = rho.seq
    iterations: list[list[CubePath]] = []
    budget = t_measure(rho) // 2 + 1
    while not is_fan_shaped(CubePath(space, seq)):
        if budget <= 0:
            raise AssertionError("fan shaping failed to terminate")
        budget -= 1
        chain = _fan_once(space, seq)
        iterations.append([CubePath(space, s) for s in chain])
        seq = chain[-1]
    return iterations


def fan_shape(rho: CubePath) -> CubePath:
    """A fan-shaped path homotopic to rho, with equal length and endpoints."""
    trace = fan_shape_trace(rho)
    return trace[-1][-1] if trace else rho


@dataclass
class PathObjectResult:
    ok: bool
    rep: tuple[str, ...] | None
    reason: str | None

    def __bool__(self) -> bool:
        return self.ok


def _face_reprs(space: PrecubicalSet, top: str) -> dict[str, list[tuple]]:
    """All iterated faces of `top`, keyed by cube, with their normalized
    (strictly increasing k-sequence, orientation-sequence) descriptions."""
    out: dict[str, list[tuple]] = {top: [((), ())]}
    dim = space.dim(top)
    for p in range(1, dim + 1):
        for ks in itertools.combinations(range(1, dim + 1), p):
            for nus in itertools.product((0, 1), repeat=p):
                cur: str | None = top
                for k, nu in zip(reversed(ks), reversed(nus)):
                    # The innermost (largest) index applies first.
                    cur = space.face(cur, k, nu) if cur is not None else None
                    if cur is None:
                        break
                if cur is not None:
                    out.setdefault(cur, []).append((ks, nus))
    return out


def is_path_object(space: PrecubicalSet,
                   cap: int = 50_000) -> PathObjectResult:
    """Search for a representing sequence exhibiting the set as the track of
    a single pointed cube path.

    A candidate sequence must have pairwise distinct entries starting at a
    0-cube, consecutive entries in the step relation, every cube of the set
    an iterated face of some entry, and each cube obtainable from any given
    entry in at most one normalized way (so the track has no accidental
    self-identifications).  Candidates are tried in (length, lexicographic)
    order and the first hit is returned.
    """
    all_ids = set(space.ids())
    reprs = {top: _face_reprs(space, top) for top in all_ids}

    def candidate_failure(seq: tuple[str, ...]) -> str | None:
        covered: set[str] = set()
        for entry in seq:
            for cube, ways in reprs[entry].items():
                if len(ways) > 1:
                    return (f"cube {cube!r} has {len(ways)} face "
                            f"representations from entry {entry!r}")
                covered.add(cube)
        missing = all_ids - covered
        if missing:
            return f"cube {sorted(missing)[0]!r} is not a face of any entry"
        return None

    zero_cubes = [c for c in space.ids() if space.dim(c) == 0]
    layer: list[tuple[str, ...]] = [(c,) for c in sorted(zero_cubes)]
    tried = 0
    first_failure: str | None = None
    while layer:
        for seq in layer:
            tried += 1
            if tried > cap:
                raise CapExceeded(f"path-object search exceeded {cap} candidates")
            failure = candidate_failure(seq)
            if failure is None:
                return PathObjectResult(True, seq, None)
            if first_failure is None:
                first_failure = failure
        nxt: list[tuple[str, ...]] = []
        for seq in layer:
            for y in space.successors(seq[-1]):
                if y not in seq:
                    nxt.append(seq + (y,))
        nxt.sort()
        layer = nxt
    if first_failure is None:
        first_failure = "the set has no 0-cube to start a pointed sequence at"
    return PathObjectResult(
        False, None,
        f"no representing sequence among {tried} candidates; first failure: "
        + first_failure)


def enumerate_pointed_paths(hda: HDA, max_len: int) -> Iterator[CubePath]:
    """All pointed cube paths of length (cube count) <= max_len, emitted in
    (length, lexicographic-by-id) order."""
    if max_len < 1:
        return
    space = hda.space
    if hda.initial not in space:
        raise ModelError(f"initial cube {hda.initial!r} does not exist")
    layer = [(hda.initial,)]
    yield CubePath(space, layer[0])
    for length in range(2, max_len + 1):
        nxt = []
        for seq in layer:
            for y in space.successors(seq[-1]):
                # Position minus dimension stays odd along pointed paths.
                assert (length - space.dim(y)) % 2 == 1
                nxt.append(seq + (y,))
        nxt.sort()
        for seq in nxt:
            yield CubePath(space, seq)
        layer = nxt
