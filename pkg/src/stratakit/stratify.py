"""Whitney stratification of affine varieties and minimization of the flag.

The driver maintains a flag of equidimensional pieces per dimension.  For
every pair (Z, Y) of pieces with V(Y) inside V(Z), a polynomial h over a
maximal independent subset of Y's variables bounds the locus of Y where
regularity of the pair can fail; Y cut by h is pushed to lower levels, as
is every singular locus.  A work queue processes each pair once (keyed by
canonical reduced bases), so the result is deterministic.

Minimization organizes the pieces into a containment tree and deletes a
node exactly when, at its generic points, the polar-multiplicity sequences
of every ancestor agree with those at generic points of the node's
immediate parents, which by local constancy of those sequences certifies
that the regularity conditions survive the deletion.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .geometry import GenericityError, conormal_cached, singular_locus
from .groebner import (
    buchberger,
    leading_coefficient_over,
    minimalize_over_fraction_field,
)
from .idealops import (
    DomainError,
    EquidimPiece,
    Ideal,
    VariableSubset,
    cleanup_piece_ideal,
    dimension,
    equidim_decompose,
    fraction_field_unit_multiple,
    intersect,
    max_independent_subset,
    radical_member,
    saturate,
    saturate_ideal,
    variety_contained,
    variety_equal,
)
from .multiplicity import MultiplicitySequence, mult_sequence
from .polyring import (
    PolyError,
    PolyRing,
    Polynomial,
    block_order,
    gcd_free_basis,
    lcm_set,
    squarefree_part,
)

WORK_LIMIT = 20000


@dataclass
class Flag:
    """Pieces per dimension level; the flag value at i is the union of all
    pieces at levels <= i."""

    ring: PolyRing
    levels: list  # list[list[EquidimPiece]], index = dimension

    @property
    def dim(self) -> int:
        return len(self.levels) - 1

    def pieces(self):
        for level in self.levels:
            yield from level

    def level_pieces(self, i: int):
        return list(self.levels[i])

    def is_empty(self) -> bool:
        return all(not lvl for lvl in self.levels)


def condition_b_factors(Z: EquidimPiece, Y: EquidimPiece) -> list:
    """Pairwise-coprime factors bounding where regularity of (Z, Y) fails.

    Built from a basis of (conormal ideal of Z) + (ideal of Y) for a block
    order eliminating everything but a maximal independent subset u of Y,
    minimalized over the fraction field Q(u).  The product of the factors
    is the lcm h of the leading coefficients: regularity can only fail
    inside V(h) or Sing(Y), and h never vanishes on all of a
    top-dimensional part of Y dominating u.  The gcd-free splitting lets
    the driver cut Y factor by factor, keeping flag pieces small.
    """
    ring = Z.ideal.ring
    if Y.ideal.is_unit():
        raise DomainError("empty lower variety")
    con = conormal_cached(Z)
    big = con.ring
    n = ring.arity
    lift = list(range(n))
    y_lifted = [g.map_ring(big, lift) for g in Y.ideal.generators]
    u = max_independent_subset(Y.ideal)
    u_big = frozenset(u.members)
    front = [i for i in range(big.arity) if i not in u_big]
    order = block_order(big, front)
    J = list(con.ideal.generators) + y_lifted
    G = buchberger(J, order, ring=big)
    if G.is_unit():
        return []
    H = minimalize_over_fraction_field(G, u_big)
    lcs = [leading_coefficient_over(g, u_big, order) for g in H]
    for lc in lcs:
        if not _fits(lc, n):
            raise PolyError("fraction-field leading coefficient left the base ring")
    factors = gcd_free_basis([lc.map_ring(ring, lift) for lc in lcs])
    return sorted(factors, key=lambda f: (f.total_degree(), len(f.terms), f.terms))


def bound_condition_b_failures(Z: EquidimPiece, Y: EquidimPiece) -> Polynomial:
    """Squarefree polynomial h over an independent subset of Y's variables
    such that regularity of the pair (Z, Y) can only fail inside V(h) or
    Sing(Y); constant when no such locus is needed."""
    ring = Z.ideal.ring
    factors = condition_b_factors(Z, Y)
    h = ring.one()
    for f in factors:
        h = h * f
    return h.normalized()


def _fits(f: Polynomial, n: int) -> bool:
    return all(all(e == 0 for e in m[n:]) for m, _ in f.terms)


def split_dominating_parts(piece: EquidimPiece) -> list:
    """Refine an equidimensional piece into parts separated by which
    variable subsets their components dominate.

    For each cardinality-dim subset u the part of the piece dominating u
    is the saturation by the fraction-field unit multiple over u; an
    inclusion-minimal such part splits off and the rest recurses.  This
    recovers component-level granularity whenever components project
    dominantly onto different coordinate subspaces, without any
    irreducible factorization.
    """
    out: list[EquidimPiece] = []
    current = piece
    guard = 0
    while True:
        guard += 1
        if guard > 40:
            out.append(current)
            break
        I = current.ideal
        ring = I.ring
        d = current.dimension
        if I.is_unit():
            break
        if d == 0 or I.is_zero_ideal():
            out.append(current)
            break
        parts: list[Ideal] = []
        for combo in combinations(range(ring.arity), d):
            try:
                h = fraction_field_unit_multiple(
                    I, VariableSubset(ring, frozenset(combo)))
            except PolyError:
                continue
            if h.is_constant():
                continue  # every component dominates this subset: no split
            part = saturate(I, h)
            if part.is_unit():
                continue
            parts.append(part)
        chosen = None
        for p in parts:
            dominated = any(
                q is not p and variety_contained(q, p)
                and not variety_contained(p, q) for q in parts)
            if dominated:
                continue
            if not variety_equal(p, I):
                chosen = p
                break
        if chosen is None:
            out.append(current)
            break
        out.append(EquidimPiece(chosen, d))
        rest = saturate_ideal(I, chosen)
        if rest.is_unit():
            break
        current = EquidimPiece(rest, d)
    return out


def components_of(I: Ideal) -> list:
    """Equidimensional pieces of V(I), refined into dominating parts."""
    out = []
    for piece in equidim_decompose(I):
        out.extend(split_dominating_parts(piece))
    return out


def whitney(X: Ideal) -> Flag:
    """A Whitney stratification flag of V(X).

    Non-equidimensional input is decomposed first; every piece is seeded at
    its dimension and pairwise piece intersections join the flag.  The
    returned levels list pieces of each exact dimension; empty input (unit
    ideal) yields an empty flag.
    """
    ring = X.ring
    if X.is_unit():
        return Flag(ring, [])
    gens = list(X.generators)
    if len(gens) == 1:
        X = Ideal(ring, [squarefree_part(gens[0])])
    pieces = components_of(X)
    d = max(p.dimension for p in pieces)
    flag = Flag(ring, [[] for _ in range(d + 1)])
    processed_pairs: set = set()
    sing_done: set = set()
    work: deque = deque()
    contains_cache: dict = {}

    def contained(inner: Ideal, outer: Ideal) -> bool:
        key = (inner.key(), outer.key())
        hit = contains_cache.get(key)
        if hit is None:
            hit = variety_contained(inner, outer)
            contains_cache[key] = hit
        return hit

    def add_piece(piece: EquidimPiece):
        if piece.ideal.is_unit():
            return
        piece = EquidimPiece(
            cleanup_piece_ideal(piece.ideal, piece.dimension), piece.dimension)
        j = piece.dimension
        level = flag.levels[j]
        for existing in level:
            if contained(piece.ideal, existing.ideal):
                return
        level[:] = [e for e in level if not contained(e.ideal, piece.ideal)]
        level.append(piece)
        work.append(("sing", piece))
        for jj in range(d, j, -1):
            for Z in flag.levels[jj]:
                work.append(("pair", Z, piece))
        for jj in range(j - 1, -1, -1):
            for Y in flag.levels[jj]:
                work.append(("pair", piece, Y))

    def handle_sing(piece: EquidimPiece):
        key = piece.key()
        if key in sing_done:
            return
        sing_done.add(key)
        S = singular_locus(piece)
        if S.is_unit():
            return
        if variety_equal(S, piece.ideal):
            # Jacobian criterion degenerated (non-reduced generators);
            # retry with squarefree generators before giving up.
            slim = Ideal(ring, [squarefree_part(g)
                                for g in piece.ideal.generators])
            S = singular_locus(EquidimPiece(slim, piece.dimension))
            if S.is_unit() or variety_equal(S, piece.ideal):
                return
        for sub in components_of(S):
            if sub.dimension < piece.dimension:
                add_piece(sub)

    def handle_pair(Z: EquidimPiece, Y: EquidimPiece):
        if Z.dimension <= Y.dimension:
            return
        key = ("pair", Z.key(), Y.key())
        if key in processed_pairs:
            return
        processed_pairs.add(key)
        if Y not in flag.levels[Y.dimension] or Z not in flag.levels[Z.dimension]:
            return
        if not contained(Y.ideal, Z.ideal):
            return
        factors = condition_b_factors(Z, Y)
        split_parts: list[EquidimPiece] = []
        lower: list[EquidimPiece] = []
        for h in factors:
            if h.is_constant():
                continue
            if radical_member(h, Y.ideal):
                raise PolyError("failure bound vanished on the whole variety")
            cut = Ideal(ring, list(Y.ideal.generators) + [h])
            for s in components_of(cut):
                if s.dimension == Y.dimension:
                    split_parts.append(s)
                else:
                    lower.append(s)
        if split_parts:
            # some factor wipes out a top-dimensional part of Y: split the
            # node and re-run on the halves (each has fewer components).
            h_all = ring.one()
            for h in factors:
                h_all = h_all * h
            rest = saturate(Y.ideal, h_all)
            level = flag.levels[Y.dimension]
            level[:] = [e for e in level if e is not Y]
            if not rest.is_unit():
                for piece in split_dominating_parts(
                        EquidimPiece(rest, Y.dimension)):
                    add_piece(piece)
            for s in split_parts:
                add_piece(s)
        for s in lower:
            add_piece(s)

    for p in pieces:
        add_piece(p)
    if len(pieces) > 1:
        for i, a in enumerate(pieces):
            for b in pieces[i + 1:]:
                meet = Ideal(ring, list(a.ideal.generators) + list(b.ideal.generators))
                if not meet.is_unit():
                    for sub in components_of(meet):
                        add_piece(sub)

    steps = 0
    while work:
        steps += 1
        if steps > WORK_LIMIT:
            raise PolyError("stratification work queue did not stabilize")
        task = work.popleft()
        if task[0] == "sing":
            handle_sing(task[1])
        else:
            handle_pair(task[1], task[2])
    return flag


# ---------------------------------------------------------------------------
# Containment tree and minimization


@dataclass
class TreeNode:
    piece: EquidimPiece
    index: int
    parents: list = field(default_factory=list)    # indices, minimal containers
    children: list = field(default_factory=list)
    deletable: bool = True

    @property
    def dimension(self):
        return self.piece.dimension


@dataclass
class StratumTree:
    """Containment tree over the flag's pieces; the root is the whole
    variety and node children are the maximal strictly-contained pieces."""

    ring: PolyRing
    nodes: list
    root: int
    contains: dict  # (i, j) -> bool, V(node_i) inside V(node_j)

    def node_contained(self, i: int, j: int) -> bool:
        return self.contains[(i, j)]

    def ancestors(self, i: int, alive: set) -> list:
        return [j for j in alive
                if j != i and self.contains[(i, j)]]


def build_tree(flag: Flag) -> StratumTree:
    """Containment tree of the flag's pieces, top dimension at the root.

    Pieces defining equal varieties are merged; parent links go to the
    minimal strictly-containing pieces.
    """
    pieces = [
        EquidimPiece(cleanup_piece_ideal(p.ideal, p.dimension), p.dimension)
        for p in flag.pieces()
    ]
    if not pieces:
        raise DomainError("cannot build a tree over an empty flag")
    pieces.sort(key=lambda p: (-p.dimension, p.key()))
    kept: list[EquidimPiece] = []
    for p in pieces:
        if not any(p.dimension == q.dimension and variety_equal(p.ideal, q.ideal)
                   for q in kept):
            kept.append(p)
    nodes = [TreeNode(p, i) for i, p in enumerate(kept)]
    contains: dict = {}
    for a in nodes:
        for b in nodes:
            if a.index == b.index:
                contains[(a.index, b.index)] = True
            else:
                contains[(a.index, b.index)] = variety_contained(
                    a.piece.ideal, b.piece.ideal)
    for node in nodes:
        ups = [m.index for m in nodes
               if m.index != node.index and contains[(node.index, m.index)]
               and not contains[(m.index, node.index)]]
        minimal = [u for u in ups
                   if not any(v != u and contains[(nodes[v].index, u)]
                              and not contains[(u, nodes[v].index)]
                              for v in ups)]
        node.parents = sorted(minimal)
        for u in node.parents:
            nodes[u].children.append(node.index)
    top_dim = max(n.dimension for n in nodes)
    for node in nodes:
        if not node.parents:
            node.deletable = False  # maximal pieces cover the variety itself
    roots = [n.index for n in nodes if not n.parents]
    root = roots[0]
    return StratumTree(flag.ring, nodes, root, contains)


def _as_piece(node: TreeNode) -> EquidimPiece:
    return node.piece


class _MultCache:
    def __init__(self, seed: int):
        self.seed = seed
        self.store: dict = {}

    def get(self, upper: EquidimPiece, lower: Ideal) -> MultiplicitySequence:
        key = (upper.key(), lower.key())
        hit = self.store.get(key)
        if hit is None:
            hit = mult_sequence(upper, lower, self.seed)
            self.store[key] = hit
        return hit


def _localize_along(parent: EquidimPiece, probe: Ideal) -> Ideal:
    """Union of parent's top-dimensional parts passing through V(probe).

    Scans the saturations by fraction-field unit multiples over all
    candidate independent subsets and keeps the inclusion-minimal ones
    whose variety still contains V(probe); falls back to the whole parent
    when nothing smaller qualifies.
    """
    I = parent.ideal
    ring = I.ring
    d = parent.dimension
    qualifying: list[Ideal] = []
    for combo in combinations(range(ring.arity), d):
        u = frozenset(combo)
        try:
            h = fraction_field_unit_multiple(I, VariableSubset(ring, u))
        except PolyError:
            continue
        if h.is_constant():
            part = I
        else:
            part = saturate(I, h)
        if part.is_unit():
            continue
        if dimension(part) != d:
            continue
        if variety_contained(probe, part):
            qualifying.append(part)
    if not qualifying:
        return I
    minimal: list[Ideal] = []
    for part in qualifying:
        dominated = False
        for other in qualifying:
            if other is part:
                continue
            if variety_contained(other, part) and not variety_contained(part, other):
                dominated = True
                break
        if not dominated:
            minimal.append(part)
    out = minimal[0]
    for part in minimal[1:]:
        if not variety_equal(out, part):
            out = intersect(out, part)
    return out


def whitney_minimize(tree: StratumTree, rng_seed: int) -> Flag:
    """Coarsen the stratification to the minimal one.

    Nodes are visited top-down; a node W is deleted when it has exactly one
    immediate parent P (several incomparable parents mean W carries a
    crossing locus the flag cannot lose) and, for P (restricted to its
    components through W) and every surviving ancestor A of P (including P
    itself), the multiplicity sequences of A at generic points of W and of
    P agree.  By local constancy of those sequences this certifies that
    the regularity conditions survive the deletion.  Maximal nodes are
    never deleted.
    """
    nodes = tree.nodes
    alive = set(n.index for n in nodes)
    cache = _MultCache(rng_seed)
    order = sorted((n for n in nodes if n.deletable),
                   key=lambda n: (-n.dimension, n.piece.key()))
    for node in order:
        W = node.piece
        parent_idxs = _minimal_containers(tree, node.index, alive)
        if len(parent_idxs) != 1:
            continue
        p_idx = parent_idxs[0]
        P = nodes[p_idx].piece
        localized = _localize_along(P, W.ideal)
        P_loc = EquidimPiece(localized, P.dimension)
        ancestors = [a for a in tree.ancestors(p_idx, alive)] + [p_idx]
        removable = True
        for a_idx in sorted(set(ancestors)):
            A = nodes[a_idx].piece
            try:
                seq_w = cache.get(A, W.ideal)
                seq_p = cache.get(A, P_loc.ideal)
            except GenericityError:
                removable = False
                break
            if seq_w.values != seq_p.values:
                removable = False
                break
        if removable:
            alive.discard(node.index)
    top = max(nodes[i].dimension for i in alive)
    levels = [[] for _ in range(top + 1)]
    for i in sorted(alive):
        piece = nodes[i].piece
        levels[piece.dimension].append(piece)
    return Flag(tree.ring, levels)


def _minimal_containers(tree: StratumTree, idx: int, alive: set) -> list:
    ups = [j for j in alive
           if j != idx and tree.contains[(idx, j)]
           and not tree.contains[(j, idx)]]
    return [u for u in ups
            if not any(v != u and tree.contains[(v, u)]
                       and not tree.contains[(u, v)]
                       for v in ups)]
