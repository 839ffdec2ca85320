"""Pachner moves on ideal triangulations and path verification.

2-3/3-2 moves exchange a two-tetrahedron bipyramid with three tetrahedra
around a degree-3 edge; 0-2/2-0 moves insert or flatten a two-tetrahedron
pillow along a pair of faces sharing an edge.  Move targets use the face and
edge indices of the canonically labelled triangulation decoded from an
isomorphism signature, with path-table entries f >= 0 meaning a 2-3 move on
face f and negative entries -e-1 meaning a 3-2 move on edge e.
"""

from __future__ import annotations

from dataclasses import dataclass

from .series import HalfInt
from .surfaces import VERDICT_VIOLATOR, triangulation_efficiency
from .tri import (IDENTITY4, Triangulation, decode_isosig, encode_isosig,
                  perm_compose, perm_inverse)


class IllegalMove(Exception):
    """The requested move is not available at the given target."""


class StepMismatch(Exception):
    """A path step produced a different signature than the table claims."""

    def __init__(self, step, got, expected):
        super().__init__("step %d produced %r, expected %r" % (step, got, expected))
        self.step = step
        self.got = got
        self.expected = expected


@dataclass
class MoveSpec:
    kind: str                     # "2-3" | "3-2" | "0-2" | "2-0"
    target: int                   # face index (2-3), edge index (3-2, 0-2, 2-0)
    positions: tuple = (0, 1)     # for 0-2: positions of the two faces around the edge


def _glue_by_tags(tags1, tags2):
    """Gluing data for two labelled tetrahedra sharing exactly 3 vertex tags.

    Returns (facet1, facet2, perm) where perm maps tet-1 labels to tet-2
    labels, matching shared tags and sending the off-face vertices to each
    other.
    """
    shared = set(tags1) & set(tags2)
    off1 = next(i for i in range(4) if tags1[i] not in shared)
    off2 = next(i for i in range(4) if tags2[i] not in shared)
    perm = [None] * 4
    perm[off1] = off2
    for i in range(4):
        if i != off1:
            perm[i] = tags2.index(tags1[i])
    return off1, off2, tuple(perm)


def _rebuild(t: Triangulation, removed, new_count, internal, claims):
    """Replace the ``removed`` tetrahedra by ``new_count`` fresh ones.

    ``internal`` lists gluings among the new tetrahedra as
    (i, fi, j, fj, perm_i_to_j); ``claims`` maps a boundary slot
    (old_tet, old_facet) of the removed region to (new_tet, new_facet, pmap)
    where pmap carries new-tet labels to old-tet labels, letting the new
    facet take over the slot's outside gluing.
    """
    removed_set = set(removed)
    old_to_new = {}
    k = 0
    for i in range(t.n):
        if i not in removed_set:
            old_to_new[i] = k
            k += 1
    base = k
    G = [[None] * 4 for _ in range(k + new_count)]
    for i in range(t.n):
        if i in removed_set:
            continue
        for f in range(4):
            adj, p = t.gluings[i][f]
            if adj not in removed_set:
                G[old_to_new[i]][f] = (old_to_new[adj], p)
    for (i, fi, j, fj, perm) in internal:
        G[base + i][fi] = (base + j, perm)
        G[base + j][fj] = (base + i, perm_inverse(perm))
    for (T0, f0), (ni, nf, pmap) in claims.items():
        X, h = t.gluings[T0][f0]
        hp = perm_compose(h, pmap)  # new labels -> X labels
        if X not in removed_set:
            G[base + ni][nf] = (old_to_new[X], hp)
            G[old_to_new[X]][hp[nf]] = (base + ni, perm_inverse(hp))
        else:
            nj, nf2, pmap2 = claims[(X, hp[nf])]
            G[base + ni][nf] = (base + nj, perm_compose(perm_inverse(pmap2), hp))
    return Triangulation(G)


def move_23(t: Triangulation, face: int) -> Triangulation:
    """Replace the bipyramid over a face joining two distinct tetrahedra by
    three tetrahedra around a new degree-3 edge."""
    faces = t.face_list()
    if not (0 <= face < len(faces)):
        raise IllegalMove("no face with index %d" % face)
    (A, fa), (B, fb) = faces[face]
    if A == B:
        raise IllegalMove("2-3 move needs a face joining two distinct tetrahedra")
    g = t.gluings[A][fa][1]
    p = sorted(set(range(4)) - {fa})
    pairs = [tuple(sorted(set(p) - {p[i]})) for i in range(3)]
    tags = [ (("f", pairs[i][0]), ("f", pairs[i][1]), "A", "B") for i in range(3) ]
    internal = []
    for i in range(3):
        for j in range(i + 1, 3):
            fi, fj, perm = _glue_by_tags(tags[i], tags[j])
            internal.append((i, fi, j, fj, perm))
    claims = {}
    for i in range(3):
        pj, pk = pairs[i]
        claims[(A, p[i])] = (i, 3, (pj, pk, fa, p[i]))
        claims[(B, g[p[i]])] = (i, 2, (g[pj], g[pk], g[p[i]], fb))
    return _rebuild(t, [A, B], 3, internal, claims)


def move_32(t: Triangulation, edge: int) -> Triangulation:
    """Inverse of the 2-3 move: collapse a degree-3 edge with three distinct
    tetrahedra around it back to two."""
    cycles = t.edge_cycles()
    if not (0 <= edge < len(cycles)):
        raise IllegalMove("no edge with index %d" % edge)
    cycle = cycles[edge]
    if len(cycle) != 3:
        raise IllegalMove("3-2 move needs a degree-3 edge (degree is %d)" % len(cycle))
    tets = [c[0] for c in cycle]
    if len(set(tets)) != 3:
        raise IllegalMove("3-2 move needs three distinct tetrahedra around the edge")
    internal = [(0, 3, 1, 3, IDENTITY4)]
    claims = {}
    for i, (ti, a, b, c, d) in enumerate(cycle):
        top = [None] * 4
        top[(i - 1) % 3], top[i % 3], top[(i + 1) % 3], top[3] = c, d, b, a
        bot = [None] * 4
        bot[(i - 1) % 3], bot[i % 3], bot[(i + 1) % 3], bot[3] = c, d, a, b
        claims[(ti, b)] = (0, (i + 1) % 3, tuple(top))
        claims[(ti, a)] = (1, (i + 1) % 3, tuple(bot))
    return _rebuild(t, tets, 2, internal, claims)


def move_02(t: Triangulation, edge: int, positions=(0, 1)) -> Triangulation:
    """Insert a two-tetrahedron pillow along two distinct faces around an
    edge, creating a new degree-2 edge between their opposite vertices.

    ``positions`` picks the two faces by their position in the corner cycle
    around the edge (face i is crossed between corners i and i+1).
    """
    cycles = t.edge_cycles()
    if not (0 <= edge < len(cycles)):
        raise IllegalMove("no edge with index %d" % edge)
    cycle = cycles[edge]
    d = len(cycle)
    p, q = positions
    if not (0 <= p < q < d):
        raise IllegalMove("0-2 positions must be distinct positions around the edge")
    cp, cq = cycle[p], cycle[q]
    cp1, cq1 = cycle[(p + 1) % d], cycle[(q + 1) % d]
    # The four face-sides being re-routed must be distinct slots: positions
    # picking the two sides of one self-identified face do not cut a disk.
    slots = {(cp1[0], cp1[4]), (cq[0], cq[3]), (cp[0], cp[3]), (cq1[0], cq1[4])}
    if len(slots) != 4:
        raise IllegalMove("0-2 positions select two sides of the same face")

    n = t.n
    G = [list(row) for row in t.gluings] + [[None] * 4, [None] * 4]
    S, T = n, n + 1

    def set_glue(t1, f1, t2, f2, perm):
        G[t1][f1] = (t2, perm)
        G[t2][f2] = (t1, perm_inverse(perm))

    set_glue(S, 0, T, 0, IDENTITY4)
    set_glue(S, 1, T, 1, IDENTITY4)
    # S faces the arc between the two cuts; T faces the complementary arc.
    # Perms map S/T labels (u, v, w, x) onto the corner labels (a, b, c, d);
    # the target facet is the perm image of the source facet.
    perm = (cp1[1], cp1[2], cp1[3], cp1[4])
    set_glue(S, 3, cp1[0], perm[3], perm)
    perm = (cq[1], cq[2], cq[3], cq[4])
    set_glue(S, 2, cq[0], perm[2], perm)
    perm = (cp[1], cp[2], cp[4], cp[3])
    set_glue(T, 3, cp[0], perm[3], perm)
    perm = (cq1[1], cq1[2], cq1[4], cq1[3])
    set_glue(T, 2, cq1[0], perm[2], perm)
    return Triangulation(G)


def move_20(t: Triangulation, edge: int) -> Triangulation:
    """Flatten the pillow around a degree-2 edge with two distinct,
    compatibly glued tetrahedra."""
    cycles = t.edge_cycles()
    if not (0 <= edge < len(cycles)):
        raise IllegalMove("no edge with index %d" % edge)
    cycle = cycles[edge]
    if len(cycle) != 2:
        raise IllegalMove("2-0 move needs a degree-2 edge (degree is %d)" % len(cycle))
    (S, a0, b0, c0, d0), (T, a1, b1, c1, d1) = cycle
    if S == T:
        raise IllegalMove("2-0 move needs two distinct tetrahedra")
    phi = [None] * 4
    phi[a0], phi[b0], phi[c0], phi[d0] = a1, b1, d1, c1
    phi = tuple(phi)
    phi_inv = perm_inverse(phi)
    ext = {(S, a0): ((T, a1), phi), (T, a1): ((S, a0), phi_inv),
           (S, b0): ((T, b1), phi), (T, b1): ((S, b0), phi_inv)}

    def resolve(slot):
        """Follow the flattening to the surviving partner of a pillow face.

        Returns (tet, perm) with perm carrying slot-tet labels outward.
        """
        tet0, f0 = slot
        X, acc = t.gluings[tet0][f0]
        hops = 0
        while (X, acc[f0]) in ext:
            (slot2, psi) = ext[(X, acc[f0])]
            X2, h2 = t.gluings[slot2[0]][slot2[1]]
            acc = perm_compose(h2, perm_compose(psi, acc))
            X = X2
            hops += 1
            if hops > 4:
                raise IllegalMove("pillow boundary closes onto itself")
        return X, acc

    pairs = []
    for (v0, v1) in ((a0, a1), (b0, b1)):
        X, hA = resolve((S, v0))
        Y, hB = resolve((T, v1))
        perm = perm_compose(hB, perm_compose(phi, perm_inverse(hA)))
        xf, yf = hA[v0], hB[v1]
        if X in (S, T) or Y in (S, T):
            raise IllegalMove("pillow boundary closes onto itself")
        if (X, xf) == (Y, yf):
            raise IllegalMove("2-0 move would glue a face to itself")
        pairs.append(((X, xf), (Y, yf), perm))

    removed = {S, T}
    old_to_new = {}
    k = 0
    for i in range(t.n):
        if i not in removed:
            old_to_new[i] = k
            k += 1
    G = [[None] * 4 for _ in range(k)]
    for i in range(t.n):
        if i in removed:
            continue
        for f in range(4):
            adj, pg = t.gluings[i][f]
            if adj not in removed:
                G[old_to_new[i]][f] = (old_to_new[adj], pg)
    for (X, xf), (Y, yf), perm in pairs:
        G[old_to_new[X]][xf] = (old_to_new[Y], perm)
        G[old_to_new[Y]][yf] = (old_to_new[X], perm_inverse(perm))
    try:
        return Triangulation(G)
    except Exception as e:
        raise IllegalMove("2-0 move yields invalid gluings: %s" % e) from e


def apply_move(t: Triangulation, spec: MoveSpec) -> Triangulation:
    if spec.kind == "2-3":
        return move_23(t, spec.target)
    if spec.kind == "3-2":
        return move_32(t, spec.target)
    if spec.kind == "0-2":
        return move_02(t, spec.target, spec.positions)
    if spec.kind == "2-0":
        return move_20(t, spec.target)
    raise IllegalMove("unknown move kind %r" % spec.kind)


def move_from_table_entry(entry: int) -> MoveSpec:
    """Path-table convention: f >= 0 is a 2-3 move on face f; a negative
    entry -e-1 is a 3-2 move on edge e."""
    if entry >= 0:
        return MoveSpec(kind="2-3", target=entry)
    return MoveSpec(kind="3-2", target=-entry - 1)


# ---------------------------------------------------------------------------
# Path verification
# ---------------------------------------------------------------------------

@dataclass
class PathStep:
    signature: str
    move: object            # int table entry or "end"
    one_efficient: bool
    verdict: str


@dataclass
class PathReport:
    steps: list
    ok: bool

    @property
    def n_moves(self):
        return sum(1 for s in self.steps if s.move != "end")


def parse_path_file(text):
    """Path files: lines ``isoSig move`` with the final move ``end``."""
    steps = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sig, mv = line.split()
        steps.append((sig, mv if mv == "end" else int(mv)))
    if not steps or steps[-1][1] != "end":
        raise ValueError("path file must finish with an 'end' sentinel")
    return steps


def verify_path(steps, check_efficiency=True) -> PathReport:
    """Apply each move and check the resulting canonical signature against
    the table, recording per-step 1-efficiency verdicts."""
    out = []
    for i, (sig, mv) in enumerate(steps):
        tri = decode_isosig(sig)
        if check_efficiency:
            rep = triangulation_efficiency(tri)
            eff, verdict = rep.one_efficient_at_vertex_resolution, rep.verdict_closed
        else:
            eff, verdict = True, "not-checked"
        out.append(PathStep(signature=sig, move=mv, one_efficient=eff, verdict=verdict))
        if mv == "end":
            break
        got = encode_isosig(apply_move(tri, move_from_table_entry(mv)))
        expected = steps[i + 1][0]
        if got != expected:
            raise StepMismatch(i, got, expected)
    return PathReport(steps=out, ok=True)


# ---------------------------------------------------------------------------
# Index invariance
# ---------------------------------------------------------------------------

@dataclass
class InvarianceReport:
    status: str              # "equal" | "unequal" | "precondition-failed"
    series_before: object
    series_after: object
    detail: str = ""


def invariance_check(t: Triangulation, spec: MoveSpec, order) -> InvarianceReport:
    """Compare the closed index sum before and after a move.

    Both triangulations must be 1-efficient at vertex resolution (the
    invariance theorems assume it); otherwise the precondition failure is
    reported rather than an equality verdict.
    """
    from .engine import IndexRequest, index
    from .tri import gluing_data_from_triangulation

    order = order if isinstance(order, HalfInt) else HalfInt.whole(order)
    t2 = apply_move(t, spec)
    rep1 = triangulation_efficiency(t)
    rep2 = triangulation_efficiency(t2)
    if rep1.verdict_closed == VERDICT_VIOLATOR or rep2.verdict_closed == VERDICT_VIOLATOR:
        which = []
        if rep1.verdict_closed == VERDICT_VIOLATOR:
            which.append("before")
        if rep2.verdict_closed == VERDICT_VIOLATOR:
            which.append("after")
        return InvarianceReport(status="precondition-failed", series_before=None,
                                series_after=None,
                                detail="not 1-efficient: %s" % ", ".join(which))
    s1 = index(IndexRequest(gluing=gluing_data_from_triangulation(t), order=order)).series
    s2 = index(IndexRequest(gluing=gluing_data_from_triangulation(t2), order=order)).series
    return InvarianceReport(status="equal" if s1 == s2 else "unequal",
                            series_before=s1, series_after=s2)
