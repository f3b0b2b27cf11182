"""Independent oracles.  Nothing here imports the semantics under test;
everything is recomputed from coordinates, explicit sets and truth tables."""

from __future__ import annotations

import itertools

MOVES = {"north": (0, 1), "east": (1, 0), "south": (0, -1), "west": (-1, 0)}


# -- geometry ---------------------------------------------------------------


def sphere(cell):
    x, y = cell
    return {(x + i, y + j) for i in (-1, 0, 1) for j in (-1, 0, 1)}


def overlap_by_sets(p, q) -> int:
    return len(sphere(p) & sphere(q))


def overlap_by_formula(p, q) -> int:
    dx, dy = abs(p[0] - q[0]), abs(p[1] - q[1])
    return max(0, 3 - dx) * max(0, 3 - dy)


def placements(width, height, n=2):
    cells = [(x, y) for y in range(height) for x in range(width)]
    return itertools.permutations(cells, n)


def feasible_moves(pos: dict, mover, width, height):
    x, y = pos[mover]
    taken = set(pos.values())
    out = []
    for name, (dx, dy) in MOVES.items():
        t = (x + dx, y + dy)
        if 0 <= t[0] < width and 0 <= t[1] < height and t not in taken:
            out.append(name)
    return out


# -- position types ------------------------------------------------------------


def consistent_patterns():
    """Sign patterns (MayDo q, MayPass q, MayDo not-q) that leave some behaviour open.

    Behaviours: doing q, passively leaving q as is, doing not-q.  Each sign
    permits (+) or forbids (-) its behaviour; the pattern is consistent iff at
    least one behaviour remains permitted.
    """
    return [p for p in itertools.product((True, False), repeat=3) if any(p)]


def sigma_by_reversal(patterns_in_order):
    """Negating the base swaps doing q and doing not-q; passing is unchanged."""
    index = {p: i + 1 for i, p in enumerate(patterns_in_order)}
    return {index[p]: index[(p[2], p[1], p[0])] for p in patterns_in_order}


# -- elementary prohibitions for the grid norms -------------------------------

# (norm id, ground(overlap now, same agent?), prohibits(overlap now, overlap after))
GRID_NORMS = {
    "7": (lambda ov, same: ov not in (4, 6, 9), lambda b, a: a == 6),
    "8": (lambda ov, same: ov == 4, lambda b, a: a == 3),
    "9": (lambda ov, same: ov == 6, lambda b, a: a not in (4, 6, 9)),
    "10": (lambda ov, same: not same, lambda b, a: a == 9),
}


def prohibited_oracle(pos: dict, mover, width, height, norm_ids=("7", "8", "9", "10")):
    """{action: {(norm id, (x, y))}} by direct enumeration of (norm, tuple, action)."""
    agents = list(pos)
    out: dict = {}
    for action in feasible_moves(pos, mover, width, height):
        dx, dy = MOVES[action]
        x, y = pos[mover]
        after = dict(pos)
        after[mover] = (x + dx, y + dy)
        for nid in norm_ids:
            ground, fires = GRID_NORMS[nid]
            for a, b in itertools.product(agents, repeat=2):
                before_ov = overlap_by_formula(pos[a], pos[b])
                after_ov = overlap_by_formula(after[a], after[b])
                if ground(before_ov, a == b) and fires(before_ov, after_ov):
                    out.setdefault(action, set()).add((nid, (a, b)))
    return out


# -- norm ordering ----------------------------------------------------------------

SIGMA = {1: 1, 2: 4, 3: 3, 4: 2, 5: 7, 6: 6, 7: 5}
TOP_ONLY = {2, 5, 6}
BOTTOM_ONLY = {4, 6, 7}


def extent(pred, width, height):
    """Frozenset of (a, b, placement) where pred(overlap, same) holds; agents 0 and 1."""
    out = set()
    for pl in placements(width, height):
        for a, b in itertools.product((0, 1), repeat=2):
            if pred(overlap_by_formula(pl[a], pl[b]), a == b):
                out.add((a, b, pl))
    return frozenset(out)


class BoxOrder:
    """Consequence order for conjunctions of per-base type disjunctions.

    Such a consequence is a box: for each class of bases (equal up to
    negation) a set of admitted types.  Box inclusion is coordinate-wise.
    """

    def __init__(self, universe_points: frozenset):
        self.full = universe_points
        self.classes: list = []

    def cls(self, ext: frozenset):
        comp = self.full - ext
        for k, rep in enumerate(self.classes):
            if rep == ext:
                return k, False
            if rep == comp:
                return k, True
        self.classes.append(ext)
        return len(self.classes) - 1, False

    def domain(self, k):
        rep = self.classes[k]
        if not rep:
            return BOTTOM_ONLY
        if rep == self.full:
            return TOP_ONLY
        return set(range(1, 8))

    def box(self, conjuncts):
        """conjuncts: list of (types, extent).  Returns {class: set} or None if empty."""
        out: dict = {}
        for types, ext in conjuncts:
            k, neg = self.cls(ext)
            ts = {SIGMA[t] if neg else t for t in types}
            out[k] = out.get(k, self.domain(k)) & ts
        for k in out:
            out[k] &= self.domain(k)
            if not out[k]:
                return None
        return out

    def leq(self, a, b) -> bool:
        if a is None:
            return True
        if b is None:
            return False
        return all(a.get(k, self.domain(k)) <= v for k, v in b.items())


def minimal_by_pairs(items, ground_leq, cons_leq):
    """O(n^2) minimal elements under the strict subinterval order."""

    def strict(r, x, y):
        return r(x, y) and not r(y, x)

    out = []
    for n in items:
        below = False
        for m in items:
            g_n, c_n = n[1], n[2]
            g_m, c_m = m[1], m[2]
            if (strict(ground_leq, g_n, g_m) and cons_leq(c_m, c_n)) or (
                ground_leq(g_n, g_m) and strict(cons_leq, c_m, c_n)
            ):
                below = True
                break
        if not below:
            out.append(n[0])
    return out
