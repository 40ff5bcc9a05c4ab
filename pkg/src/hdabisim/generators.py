"""Seeded random HDA and random pointed paths for property checks.

Random models are face-closed sub-structures of well-formed ambient
complexes: rectangular grids (acyclic) or event tori (cyclic, every edge is
a loop on the unique vertex).  Sub-structures of valid complexes are valid,
so the generator cannot produce broken face data by construction.
"""

from __future__ import annotations

import itertools
from random import Random

from .core import HDA, Cube, EventSet, Labeling, PrecubicalSet, torus_hda
from .paths import CubePath

# One grid cell per axis: either the point at `pos` or the unit segment
# from `pos` to `pos + 1`.
_Cell = tuple[tuple[int, bool], ...]


def _grid_cell_id(cell: _Cell) -> str:
    return "g" + "_".join(f"{p}s" if ext else f"{p}" for p, ext in cell)


def _grid_faces(cell: _Cell) -> tuple[tuple[str, ...], tuple[str, ...]]:
    lower, upper = [], []
    for axis, (pos, ext) in enumerate(cell):
        if not ext:
            continue
        collapse = lambda at: cell[:axis] + ((at, False),) + cell[axis + 1:]
        lower.append(_grid_cell_id(collapse(pos)))
        upper.append(_grid_cell_id(collapse(pos + 1)))
    return tuple(lower), tuple(upper)


def _grid_cells(sizes: list[int] | tuple[int, ...]) -> int:
    total = 1
    for size in sizes:
        total *= 2 * size + 1
    return total


def grid_hda(sizes: tuple[int, ...]) -> HDA:
    """The full rectangular grid complex with the given number of unit
    segments per axis, pointed at the origin."""
    axes = []
    for size in sizes:
        cells = [(p, False) for p in range(size + 1)]
        cells += [(p, True) for p in range(size)]
        axes.append(cells)
    cubes = []
    for cell in itertools.product(*axes):
        lower, upper = _grid_faces(cell)
        dim = sum(1 for _p, ext in cell if ext)
        cubes.append(Cube(_grid_cell_id(cell), dim, lower, upper))
    origin = _grid_cell_id(tuple((0, False) for _ in sizes))
    return HDA(PrecubicalSet(cubes), origin)


def _face_closure(space: PrecubicalSet, seed_ids: set[str]) -> set[str]:
    todo = list(seed_ids)
    out = set(seed_ids)
    while todo:
        x = todo.pop()
        for f in space.cube(x).lower + space.cube(x).upper:
            if f is not None and f not in out:
                out.add(f)
                todo.append(f)
    return out


def sub_hda(ambient: HDA, keep: set[str]) -> HDA:
    """The face-closed sub-HDA of `ambient` spanned by `keep` plus the
    initial cube."""
    space = ambient.space
    chosen = _face_closure(space, set(keep) | {ambient.initial})
    cubes = [space.cube(c) for c in sorted(chosen, key=lambda c: (space.dim(c), c))]
    return HDA(PrecubicalSet(cubes), ambient.initial)


def random_hda(rng: Random, max_cubes: int = 30, max_dim: int = 3,
               cyclic: bool = False, stray: bool = False,
               min_cubes: int | None = None) -> HDA:
    """A random face-closed sub-HDA of a grid (acyclic) or a torus (cyclic).

    Cubes are collected along random walks from the initial cube, so most of
    the result is reachable; with `stray` a few disconnected cubes are mixed
    in to exercise unreachable-part handling.
    """
    dim = rng.randint(1, max_dim)
    if cyclic:
        names = tuple("ab"[:rng.randint(1, 2)])
        ambient, _labeling = torus_hda(EventSet(names), dim)
    else:
        sizes = [rng.randint(1, 3) for _ in range(dim)]
        while _grid_cells(sizes) < 2 * max_cubes:
            sizes[rng.randrange(dim)] += 1
        ambient = grid_hda(tuple(sizes))
    space = ambient.space
    keep: set[str] = {ambient.initial}
    closed = _face_closure(space, keep)
    floor = min_cubes if min_cubes is not None else max(4, max_cubes // 3)
    budget = rng.randint(min(floor, max_cubes), max_cubes)
    cur = ambient.initial
    for _step in range(40 * max_cubes):  # the ambient may be smaller than budget
        if len(closed) >= budget:
            break
        succs = space.successors(cur)
        if not succs or rng.random() < 0.15:
            cur = rng.choice(sorted(keep))
            continue
        cur = rng.choice(succs)
        if cur not in closed:
            grown = closed | _face_closure(space, {cur})
            if len(grown) > budget:
                continue
            keep.add(cur)
            closed = grown
    if stray:
        extras = [c for c in space.ids() if c not in keep]
        for c in rng.sample(extras, k=min(2, len(extras))):
            keep.add(c)
    return sub_hda(ambient, keep)


def grid_labeling(hda: HDA, events: EventSet) -> Labeling:
    """Label a grid (sub-)HDA by its axes: axis i carries the i-th event, so
    every tuple is sorted and the k-th face deletes the k-th entry."""
    assign: dict[str, tuple[int, ...]] = {}
    for cid in hda.space.ids():
        if not cid.startswith("g"):
            raise ValueError(f"{cid!r} is not a grid cell id")
        tokens = cid[1:].split("_")
        if len(tokens) > len(events):
            raise ValueError("not enough events for the grid's axes")
        assign[cid] = tuple(i + 1 for i, tok in enumerate(tokens)
                            if tok.endswith("s"))
    return Labeling(events, assign)


def random_pointed_path(rng: Random, hda: HDA, max_len: int) -> CubePath:
    """A random walk along the step relation, starting at the initial cube."""
    space = hda.space
    seq = [hda.initial]
    target = rng.randint(1, max_len)
    while len(seq) < target:
        succs = space.successors(seq[-1])
        if not succs:
            break
        seq.append(rng.choice(succs))
    return CubePath(space, tuple(seq))
