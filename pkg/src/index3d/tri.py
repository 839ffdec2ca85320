"""Ideal triangulations: data model, isomorphism-signature codec, edge and
vertex classes, gluing-equation matrices, and gluing-data fixture files.

A triangulation is n tetrahedra with every facet glued in pairs (a closed
pseudo-manifold).  Facet i of a tetrahedron is the face opposite vertex i;
a gluing permutation maps the vertex labels of the source tetrahedron to
those of its neighbour, and facet f glues to facet perm[f].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class MalformedSignature(Exception):
    """An isomorphism signature that cannot be decoded."""


class InvalidTriangulation(Exception):
    """Gluing data violating the triangulation invariants."""


class ParseError(Exception):
    """Bad token in a gluing fixture file (carries line and column)."""

    def __init__(self, message, line, column):
        super().__init__("%s (line %d, column %d)" % (message, line, column))
        self.line = line
        self.column = column


class ShapeError(Exception):
    """Gluing fixture rows of inconsistent length."""


# ---------------------------------------------------------------------------
# Permutations of {0,1,2,3}
# ---------------------------------------------------------------------------

PERMS4 = tuple(itertools.permutations(range(4)))
_PERM_INDEX = {p: i for i, p in enumerate(PERMS4)}
IDENTITY4 = (0, 1, 2, 3)


def perm_compose(p, q):
    """(p o q)(x) = p(q(x))."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def perm_inverse(p):
    out = [0] * 4
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_sign(p):
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_lex_index(p):
    """Rank of p among all 24 permutations in lexicographic order."""
    return _PERM_INDEX[tuple(p)]


def perm_from_lex_index(i):
    return PERMS4[i]


# Local edges of a tetrahedron, and the quad slot each edge pair belongs to:
# slot 0 faces edges 01/23, slot 1 faces 02/13, slot 2 faces 03/12.
EDGE_VERTS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {frozenset(e): i for i, e in enumerate(EDGE_VERTS)}
QUAD_SLOT_OF_EDGE = {frozenset((0, 1)): 0, frozenset((2, 3)): 0,
                     frozenset((0, 2)): 1, frozenset((1, 3)): 1,
                     frozenset((0, 3)): 2, frozenset((1, 2)): 2}


# ---------------------------------------------------------------------------
# Triangulation
# ---------------------------------------------------------------------------

class Triangulation:
    """n tetrahedra with all 4n facets glued in pairs."""

    def __init__(self, gluings, validate=True):
        self.n = len(gluings)
        self.gluings = [[(int(t), tuple(p)) for t, p in tet] for tet in gluings]
        if validate:
            self.validate()

    def validate(self):
        """Check the structural invariants; raise InvalidTriangulation."""
        n = self.n
        if n == 0:
            raise InvalidTriangulation("empty triangulation")
        for t in range(n):
            if len(self.gluings[t]) != 4:
                raise InvalidTriangulation("tetrahedron %d has %d facets" % (t, len(self.gluings[t])))
            for f in range(4):
                adj, p = self.gluings[t][f]
                if not (0 <= adj < n) or sorted(p) != [0, 1, 2, 3]:
                    raise InvalidTriangulation("bad gluing at (%d, %d)" % (t, f))
                if adj == t and p[f] == f:
                    raise InvalidTriangulation("facet (%d, %d) glued to itself" % (t, f))
                back, q = self.gluings[adj][p[f]]
                if back != t or perm_compose(q, p) != IDENTITY4:
                    raise InvalidTriangulation("gluing at (%d, %d) is not involutive" % (t, f))
        # Connectivity.
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for f in range(4):
                adj = self.gluings[t][f][0]
                if adj not in seen:
                    seen.add(adj)
                    stack.append(adj)
        if len(seen) != n:
            raise InvalidTriangulation("triangulation is not connected")
        # Every vertex link must be a closed surface of Euler characteristic 0.
        for chi in self.vertex_link_euler():
            if chi != 0:
                raise InvalidTriangulation("vertex link has Euler characteristic %d" % chi)

    # -- skeleton ----------------------------------------------------------

    def is_orientable(self):
        return self.tet_orientations() is not None

    def tet_orientations(self):
        """A consistent +-1 orientation per tetrahedron (orientation of
        tetrahedron 0 taken positive), or None if non-orientable."""
        orient = [0] * self.n
        orient[0] = 1
        stack = [0]
        while stack:
            t = stack.pop()
            for f in range(4):
                adj, p = self.gluings[t][f]
                want = -orient[t] * perm_sign(p)
                if orient[adj] == 0:
                    orient[adj] = want
                    stack.append(adj)
                elif orient[adj] != want:
                    return None
        return orient

    def edge_cycles(self):
        """Corner cycles around each edge class.

        Returns a list of cycles; each cycle is a list of corners
        (tet, a, b, c, d) where (a, b) spans the edge (orientation follows
        the walk), the walk entered through face {a, b, c} and leaves
        through face {a, b, d}.  Raises InvalidTriangulation if an edge
        orbit is orientation-inconsistent in an orientable triangulation.
        """
        orientable = self.is_orientable()
        seen = set()
        cycles = []
        for t0 in range(self.n):
            for (a0, b0) in EDGE_VERTS:
                if (t0, frozenset((a0, b0))) in seen:
                    continue
                c0, d0 = sorted(set(range(4)) - {a0, b0})
                cycle = []
                t, a, b, c, d = t0, a0, b0, c0, d0
                while True:
                    key = (t, frozenset((a, b)))
                    if key in seen:
                        raise InvalidTriangulation("edge orbit walk revisited a corner")
                    seen.add(key)
                    cycle.append((t, a, b, c, d))
                    adj, p = self.gluings[t][c]
                    a2, b2, c2 = p[a], p[b], p[d]
                    d2 = next(iter(set(range(4)) - {a2, b2, c2}))
                    if adj == t0 and {a2, b2} == {a0, b0}:
                        if orientable and (a2, b2) != (a0, b0):
                            raise InvalidTriangulation(
                                "orientation-inconsistent edge in an orientable triangulation")
                        break
                    t, a, b, c, d = adj, a2, b2, c2, d2
                cycles.append(cycle)
        return cycles

    def vertex_classes(self):
        """Orbits of (tet, vertex) under the face gluings."""
        parent = {(t, v): (t, v) for t in range(self.n) for v in range(4)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(self.n):
            for f in range(4):
                adj, p = self.gluings[t][f]
                for v in range(4):
                    if v != f:
                        a, b = find((t, v)), find((adj, p[v]))
                        if a != b:
                            parent[a] = b
        classes = {}
        for x in parent:
            classes.setdefault(find(x), []).append(x)
        return sorted(sorted(members) for members in classes.values())

    def vertex_link_euler(self):
        """Euler characteristic of each vertex link, in vertex_classes order."""
        classes = self.vertex_classes()
        index_of = {}
        for i, members in enumerate(classes):
            for m in members:
                index_of[m] = i
        faces = [len(members) for members in classes]
        ends = [0] * len(classes)
        for cycle in self.edge_cycles():
            t, a, b, _, _ = cycle[0]
            ends[index_of[(t, a)]] += 1
            ends[index_of[(t, b)]] += 1
        # Each triangle of a link has 3 edges glued in pairs:
        # chi = (#edge-class ends) - 3F/2 + F.
        return [ends[i] - faces[i] // 2 for i in range(len(classes))]

    def num_cusps(self):
        return len(self.vertex_classes())

    def face_list(self):
        """Global triangle numbering by first appearance.

        Within a tetrahedron the faces are taken in ascending vertex-set
        order {0,1,2} < {0,1,3} < {0,2,3} < {1,2,3}, i.e. descending facet
        index, matching the numbering used by the census path tables (edges
        use ascending vertex-set order, which is the EDGE_VERTS order).
        Returns ((tet, facet), (tet', facet')) pairs, one per face class.
        """
        seen = set()
        faces = []
        for t in range(self.n):
            for f in (3, 2, 1, 0):
                if (t, f) in seen:
                    continue
                adj, p = self.gluings[t][f]
                seen.add((t, f))
                seen.add((adj, p[f]))
                faces.append(((t, f), (adj, p[f])))
        return faces

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.gluings == other.gluings

    def __repr__(self):
        return "Triangulation(n=%d)" % self.n


# ---------------------------------------------------------------------------
# Edge classes and gluing equations
# ---------------------------------------------------------------------------

@dataclass
class EdgeClassTable:
    """Edge classes with their (tet, slot, edge, orientation) incidences."""
    classes: list  # one entry per class: list of (tet, slot, (u, v), orient)
    cycles: list   # the raw corner cycles

    @property
    def degrees(self):
        return [len(c) for c in self.classes]


def edge_classes(t: Triangulation) -> EdgeClassTable:
    cycles = t.edge_cycles()
    classes = []
    for cycle in cycles:
        incid = []
        for (tet, a, b, _, _) in cycle:
            slot = QUAD_SLOT_OF_EDGE[frozenset((a, b))]
            orient = 1 if a < b else -1
            incid.append((tet, slot, (a, b), orient))
        classes.append(incid)
    return EdgeClassTable(classes=classes, cycles=cycles)


def edge_equation_matrix(t: Triangulation):
    """The n_edges x 3n matrix whose (i, 3j+slot) entry counts incidences of
    the edges facing quad slot ``slot`` of tetrahedron j in edge class i.

    The cyclic order of the three quad slots must be compatible with the
    orientation, so slots 1 and 2 are swapped in negatively oriented
    tetrahedra; otherwise the Neumann-Zagier relations fail.
    """
    orient = t.tet_orientations()
    if orient is None:
        raise InvalidTriangulation("gluing equations need an orientable triangulation")
    table = edge_classes(t)
    rows = []
    for incid in table.classes:
        row = [0] * (3 * t.n)
        for (tet, slot, _, _) in incid:
            if orient[tet] < 0 and slot:
                slot = 3 - slot
            row[3 * tet + slot] += 1
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Isomorphism signatures
# ---------------------------------------------------------------------------

_SIG_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-"
_SIG_VALUE = {ch: i for i, ch in enumerate(_SIG_ALPHABET)}


def _sig_candidate(tri: Triangulation, start, start_perm):
    """Signature chars for the labelling that maps (start, start_perm) to
    (simplex 0, identity); the canonical signature minimises over these."""
    n = tri.n
    image = [-1] * n
    preimage = [-1] * n
    vertex_map = [None] * n
    image[start] = 0
    preimage[0] = start
    vertex_map[start] = perm_inverse(start_perm)
    next_unused = 1
    facet_actions = []
    join_dest = []
    join_gluing = []
    simp_img = 0
    while simp_img < n and preimage[simp_img] >= 0:
        src = preimage[simp_img]
        vm_src = vertex_map[src]
        for facet_img in range(4):
            facet_src = vm_src.index(facet_img)
            dest, g = tri.gluings[src][facet_src]
            if image[dest] >= 0:
                partner_img_facet = vertex_map[dest][g[facet_src]]
                if image[dest] < simp_img or (image[dest] == simp_img
                                              and partner_img_facet < facet_img):
                    continue  # this gluing was already recorded from the other side
            if image[dest] < 0:
                image[dest] = next_unused
                preimage[next_unused] = dest
                next_unused += 1
                vertex_map[dest] = perm_compose(vm_src, perm_inverse(g))
                facet_actions.append(1)
            else:
                join_dest.append(image[dest])
                canon = perm_compose(vertex_map[dest], perm_compose(g, perm_inverse(vm_src)))
                join_gluing.append(perm_lex_index(canon))
                facet_actions.append(2)
        simp_img += 1

    vals = []
    if n < 63:
        nchars = 1
        vals.append(n)
    else:
        nchars = 0
        tmp = n
        while tmp:
            tmp >>= 6
            nchars += 1
        vals.append(63)
        vals.append(nchars)
        tmp = n
        for _ in range(nchars):
            vals.append(tmp & 63)
            tmp >>= 6
    for i in range(0, len(facet_actions), 3):
        chunk = facet_actions[i:i + 3]
        v = 0
        for k, trit in enumerate(chunk):
            v |= trit << (2 * k)
        vals.append(v)
    for d in join_dest:
        tmp = d
        for _ in range(nchars):
            vals.append(tmp & 63)
            tmp >>= 6
    for g in join_gluing:
        vals.append(g)
    return "".join(_SIG_ALPHABET[v] for v in vals)


def encode_isosig(tri: Triangulation) -> str:
    """Canonical isomorphism signature: the minimal candidate string over
    all starting tetrahedra and vertex labellings."""
    best = None
    for start in range(tri.n):
        for p in PERMS4:
            cand = _sig_candidate(tri, start, p)
            if best is None or cand < best:
                best = cand
    return best


def decode_isosig(s: str) -> Triangulation:
    """Decode a signature to a labelled triangulation.

    The decoded labelling is the canonical one (the face and edge indices
    used by Pachner move tables refer to it).
    """
    s = s.strip()
    if not s:
        raise MalformedSignature("empty signature")
    for ch in s:
        if ch not in _SIG_VALUE:
            raise MalformedSignature("invalid character %r" % ch)
    vals = [_SIG_VALUE[ch] for ch in s]
    pos = 0

    def take(k=1):
        nonlocal pos
        if pos + k > len(vals):
            raise MalformedSignature("signature truncated")
        out = vals[pos:pos + k]
        pos += k
        return out

    first = take()[0]
    if first < 63:
        n = first
        nchars = 1
    else:
        nchars = take()[0]
        n = 0
        for i, v in enumerate(take(nchars)):
            n |= v << (6 * i)
    if n == 0:
        raise MalformedSignature("empty triangulation")

    total_facets = 4 * n
    facets_accounted = 0
    actions = []
    njoins = 0
    while facets_accounted < total_facets:
        v = take()[0]
        for k in range(3):
            trit = (v >> (2 * k)) & 3
            if facets_accounted == total_facets:
                if trit != 0:
                    raise MalformedSignature("nonzero padding in facet actions")
                continue
            if trit == 0:
                raise MalformedSignature("boundary facet: not an ideal triangulation of a closed pseudo-manifold")
            if trit == 3:
                raise MalformedSignature("invalid facet action")
            actions.append(trit)
            facets_accounted += 2
            if trit == 2:
                njoins += 1

    join_dest = []
    for _ in range(njoins):
        d = 0
        for i, v in enumerate(take(nchars)):
            d |= v << (6 * i)
        join_dest.append(d)
    join_gluing = []
    for _ in range(njoins):
        g = take()[0]
        if g >= 24:
            raise MalformedSignature("invalid gluing permutation index %d" % g)
        join_gluing.append(g)
    if pos != len(vals):
        raise MalformedSignature("trailing characters in signature")

    glu = [[None] * 4 for _ in range(n)]

    def join(t1, f1, t2, f2, p):
        if glu[t1][f1] is not None or glu[t2][f2] is not None:
            raise MalformedSignature("facet glued twice")
        glu[t1][f1] = (t2, p)
        glu[t2][f2] = (t1, perm_inverse(p))

    apos = 0
    jpos = 0
    next_unused = 1
    for t in range(n):
        for f in range(4):
            if glu[t][f] is not None:
                continue
            if apos >= len(actions):
                raise MalformedSignature("ran out of facet actions")
            action = actions[apos]
            apos += 1
            if action == 1:
                if next_unused >= n:
                    raise MalformedSignature("too many new-simplex actions")
                join(t, f, next_unused, f, IDENTITY4)
                next_unused += 1
            else:
                dest = join_dest[jpos]
                p = perm_from_lex_index(join_gluing[jpos])
                jpos += 1
                if dest >= next_unused:
                    raise MalformedSignature("join to an unseen simplex")
                if dest == t and p[f] == f:
                    raise MalformedSignature("facet glued to itself")
                join(t, f, dest, p[f], p)
    if apos != len(actions) or jpos != njoins or next_unused != n:
        raise MalformedSignature("signature data does not close up")
    try:
        return Triangulation(glu)
    except InvalidTriangulation as e:
        raise MalformedSignature("decoded gluing is invalid: %s" % e) from e


# ---------------------------------------------------------------------------
# Gluing data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GluingData:
    """Edge rows and optional cusp rows of a gluing matrix.

    cusp_rows holds 2r rows ordered (meridian, longitude) per cusp, or None
    when peripheral data is absent.
    """
    n: int
    r: int
    edge_rows: tuple
    cusp_rows: tuple | None = None

    def __post_init__(self):
        for row in self.edge_rows:
            if len(row) != 3 * self.n:
                raise ShapeError("edge row of length %d, expected %d" % (len(row), 3 * self.n))
        if self.cusp_rows is not None:
            if len(self.cusp_rows) != 2 * self.r:
                raise ShapeError("expected %d cusp rows, got %d" % (2 * self.r, len(self.cusp_rows)))
            for row in self.cusp_rows:
                if len(row) != 3 * self.n:
                    raise ShapeError("cusp row of length %d, expected %d" % (len(row), 3 * self.n))

    @property
    def has_cusp_rows(self):
        return self.cusp_rows is not None

    def meridian(self, k):
        return list(self.cusp_rows[2 * k])

    def longitude(self, k):
        return list(self.cusp_rows[2 * k + 1])

    def key(self):
        return (self.n, self.r, self.edge_rows, self.cusp_rows)


def gluing_data_from_triangulation(t: Triangulation) -> GluingData:
    """Edge rows computed from the triangulation; no cusp rows.

    The cusp count r is the number of ideal vertices.
    """
    rows = edge_equation_matrix(t)
    return GluingData(n=t.n, r=t.num_cusps(),
                      edge_rows=tuple(tuple(r) for r in rows), cusp_rows=None)


def load_gluing_matrix(text: str) -> GluingData:
    """Parse the gluing fixture format.

    Line 1 is ``n r``; then n edge rows and 2r cusp rows (meridian then
    longitude per cusp), whitespace-separated integers.  ``#`` starts a
    comment.
    """
    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        vals = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col) + 1
            try:
                vals.append(int(tok))
            except ValueError:
                raise ParseError("expected an integer, got %r" % tok, lineno, col)
        if header is None:
            if len(vals) != 2:
                raise ParseError("header must be 'n r'", lineno, 1)
            header = vals
        else:
            rows.append(vals)
    if header is None:
        raise ParseError("missing header line", 1, 1)
    n, r = header
    if len(rows) not in (n, n + 2 * r):
        raise ShapeError("expected %d or %d rows, got %d" % (n, n + 2 * r, len(rows)))
    for row in rows:
        if len(row) != 3 * n:
            raise ShapeError("row of length %d, expected %d" % (len(row), 3 * n))
    edge_rows = tuple(tuple(row) for row in rows[:n])
    cusp_rows = tuple(tuple(row) for row in rows[n:]) if len(rows) > n else None
    return GluingData(n=n, r=r, edge_rows=edge_rows, cusp_rows=cusp_rows)


def qmatching_matrix(g: GluingData):
    """B = A C: the Q-matching equation matrix, rows C(E_i)."""
    return [cmap(row) for row in g.edge_rows]


def cmap(x):
    """Per-tetrahedron map (a, b, c) -> (-b+c, -c+a, -a+b)."""
    if len(x) % 3 != 0:
        raise ValueError("quad vector length must be a multiple of 3")
    out = []
    for j in range(0, len(x), 3):
        a, b, c = x[j], x[j + 1], x[j + 2]
        out.extend((-b + c, -c + a, -a + b))
    return out
