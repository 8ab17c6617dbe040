"""Seeded random quivers, presentations, modules and double complexes.

Everything takes an explicit `random.Random` so test runs and the CLI
self-checks are reproducible from a single seed.
"""

from __future__ import annotations

import random
import string

from .algebra import Presentation
from .complexes import DoubleChainMap, DoubleComplex
from .linalg import Matrix, Subspace, QQ
from .modules import (GradedModule, GradedMorphism, direct_sum, hom_basis,
                      projective_module, quotient_module)
from .quiver import Quiver


def random_acyclic_quiver(rng: random.Random, max_vertices=6, max_arrows=8) -> Quiver:
    nv = rng.randint(2, max_vertices)
    vertices = [str(i + 1) for i in range(nv)]
    na = rng.randint(1, max_arrows)
    arrows = []
    names = iter(string.ascii_lowercase)
    for _ in range(na):
        i = rng.randint(0, nv - 2)
        j = rng.randint(i + 1, nv - 1)
        arrows.append((next(names), vertices[i], vertices[j]))
    return Quiver(vertices, arrows)


def random_quiver(rng: random.Random, max_vertices=4, max_arrows=6) -> Quiver:
    nv = rng.randint(1, max_vertices)
    vertices = [str(i + 1) for i in range(nv)]
    na = rng.randint(1, max_arrows)
    arrows = []
    names = iter(string.ascii_lowercase)
    for _ in range(na):
        arrows.append((next(names), rng.choice(vertices), rng.choice(vertices)))
    return Quiver(vertices, arrows)


def path_algebra(quiver: Quiver, field=QQ, degree_cap=8) -> Presentation:
    return Presentation(quiver, field, {}, degree_cap)


def radical_square_zero(quiver: Quiver, field=QQ, degree_cap=8) -> Presentation:
    helper = Presentation(quiver, field, {}, 2)
    rels = {}
    for x in quiver.vertices:
        for y in quiver.vertices:
            m = len(helper.path_basis(2, x, y))
            if m:
                rels[(x, y)] = Subspace.full(field, m)
    return Presentation(quiver, field, rels, degree_cap)


def random_presentation(rng: random.Random, quiver: Quiver | None = None,
                        field=QQ, degree_cap=8) -> Presentation:
    quiver = quiver or random_quiver(rng)
    helper = Presentation(quiver, field, {}, 2)
    rels = {}
    for x in quiver.vertices:
        for y in quiver.vertices:
            m = len(helper.path_basis(2, x, y))
            if not m:
                continue
            k = rng.randint(0, m)
            if not k:
                continue
            vecs = [[field.of(rng.randint(-2, 2)) for _ in range(m)] for _ in range(k)]
            sp = Subspace.from_vectors(field, m, vecs)
            if sp.dim:
                rels[(x, y)] = sp
    return Presentation(quiver, field, rels, degree_cap)


def random_module(rng: random.Random, pres: Presentation, window,
                  max_summands=2, max_shift=2) -> GradedModule:
    """A random finite dimensional module: quotient of projectives by a random submodule."""
    summands = []
    for k in range(rng.randint(1, max_summands)):
        a = rng.choice(pres.quiver.vertices)
        s = rng.randint(0, max_shift)
        summands.append(((a, k), projective_module(pres, a, -s, window)))
    big = direct_sum(pres, window, summands)
    big = GradedModule(pres, big.window, big.dims, big.actions)  # forget labels
    pieces = {k: Subspace.zero(pres.field, d) for k, d in big.dims.items()}
    elements = []
    keys = [k for k, d in big.dims.items() if d and k[0] > 0]
    for _ in range(rng.randint(0, 3)):
        if not keys:
            break
        (i, x) = rng.choice(keys)
        vec = [pres.field.of(rng.randint(-2, 2)) for _ in range(big.dim(i, x))]
        elements.append(((i, x), vec))
    # close the generated pieces under the arrow actions
    frontier = list(elements)
    while frontier:
        (i, x), vec = frontier.pop()
        sp = pieces[(i, x)]
        if sp.contains(vec):
            continue
        pieces[(i, x)] = sp.add(Subspace.from_vectors(pres.field, big.dim(i, x), [vec]))
        for aidx in pres.quiver.out_arrows(x):
            arrow = pres.quiver.arrows[aidx]
            if big.dim(i + 1, arrow.target):
                img = big.action(arrow.name, i).apply(vec)
                if any(v != pres.field.zero for v in img):
                    frontier.append(((i + 1, arrow.target), img))
    quot, _ = quotient_module(big, pieces)
    return quot


def random_morphism(rng: random.Random, m: GradedModule, n: GradedModule):
    basis = hom_basis(m, n)
    if not basis:
        return GradedMorphism(m, n, {})
    out = GradedMorphism(m, n, {})
    for f in basis:
        c = rng.randint(-2, 2)
        if c:
            out = out.add(f.scale(m.pres.field.of(c)))
    return out


# -- random double complexes over graded vector spaces --------------------------------


def point_presentation(field=QQ) -> Presentation:
    """One vertex, no arrows: graded modules are graded vector spaces."""
    return Presentation(Quiver(["v"], []), field, {}, 2)


def _vspace(pres, window, dims: dict) -> GradedModule:
    return GradedModule(pres, window, {(i, "v"): d for i, d in dims.items() if d}, {})


def _vmap(pres, src: GradedModule, tgt: GradedModule, mats: dict) -> GradedMorphism:
    return GradedMorphism(src, tgt, {(i, "v"): m for i, m in mats.items()})


def random_invertible(rng, field, n: int) -> tuple[Matrix, Matrix]:
    """A unimodular integer matrix (product of elementary operations) and its inverse."""
    a = Matrix.identity(field, n)
    b = Matrix.identity(field, n)
    ops = rng.randint(0, 2 * n)
    for _ in range(ops):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = field.of(rng.randint(-2, 2))
        if not c:
            continue
        # row_i += c * row_j on a; inverse accumulates the opposite op on the right
        arows = a.to_lists()
        for k in range(n):
            arows[i][k] = arows[i][k] + c * arows[j][k]
        a = Matrix(field, n, n, arows)
        brows = b.to_lists()
        for k in range(n):
            brows[k][j] = brows[k][j] - c * brows[k][i]
        b = Matrix(field, n, n, brows)
    if field.characteristic:
        p = field.p
        a = Matrix(field, n, n, [[v % p for v in r] for r in a.rows])
        b = Matrix(field, n, n, [[v % p for v in r] for r in b.rows])
    return a, b


def random_double_complex(rng: random.Random, pres=None, window=(0, 0),
                          grid=(0, 2, 0, 2), degrees=(0, 1), exact_rows=False
                          ) -> DoubleComplex:
    """A bounded double complex of graded vector spaces.

    Built as a direct sum of elementary pieces (dots, exact row/column pairs,
    anticommuting unit squares) conjugated by random basis changes, so the
    axioms hold exactly while the matrices look generic.
    """
    pres = pres or point_presentation()
    i0, i1, j0, j1 = grid
    window = (min(degrees), max(degrees))
    dims: dict = {}

    def bump(i, j, d):
        dims.setdefault((i, j), {}).setdefault(d, 0)
        dims[(i, j)][d] += 1
        return dims[(i, j)][d] - 1

    entries_v: dict = {}
    entries_h: dict = {}

    def put(table, key, d, r, c, val):
        table.setdefault(key, {}).setdefault(d, []).append((r, c, val))

    n_pieces = rng.randint(2, 6)
    for _ in range(n_pieces):
        d = rng.choice(degrees)
        if exact_rows:
            kind = "hpair"
        else:
            kind = rng.choice(["dot", "hpair", "vpair", "square", "square"])
        if kind == "dot":
            bump(rng.randint(i0, i1), rng.randint(j0, j1), d)
        elif kind == "hpair":
            i = rng.randint(i0, i1 - 1)
            j = rng.randint(j0, j1)
            r1 = bump(i, j, d)
            r2 = bump(i + 1, j, d)
            put(entries_h, (i, j), d, r2, r1, 1)
        elif kind == "vpair":
            i = rng.randint(i0, i1)
            j = rng.randint(j0, j1 - 1)
            r1 = bump(i, j, d)
            r2 = bump(i, j + 1, d)
            put(entries_v, (i, j), d, r2, r1, 1)
        else:
            i = rng.randint(i0, i1 - 1)
            j = rng.randint(j0, j1 - 1)
            c00 = bump(i, j, d)
            c10 = bump(i + 1, j, d)
            c01 = bump(i, j + 1, d)
            c11 = bump(i + 1, j + 1, d)
            put(entries_h, (i, j), d, c10, c00, 1)
            put(entries_h, (i, j + 1), d, c11, c01, 1)
            put(entries_v, (i, j), d, c01, c00, 1)
            put(entries_v, (i + 1, j), d, c11, c10, -1)
    field = pres.field
    cells = {}
    for (i, j), table in dims.items():
        cells[(i, j)] = _vspace(pres, window, table)

    def assemble(table, key, src_cell, tgt_cell):
        mats = {}
        for d in degrees:
            rows = tgt_cell.dim(d, "v") if tgt_cell else 0
            cols = src_cell.dim(d, "v")
            if not rows or not cols:
                continue
            m = Matrix.zeros(field, rows, cols)
            for (r, c, val) in table.get(key, {}).get(d, []):
                m.rows[r][c] = field.of(val)
            mats[(d, "v")] = m
        return mats

    vert = {}
    horiz = {}
    for (i, j), cell in cells.items():
        up = cells.get((i, j + 1))
        if up is not None:
            vert[(i, j)] = _vmap(pres, cell, up, {d: m for (d, _), m in
                                                  assemble(entries_v, (i, j), cell, up).items()})
        right = cells.get((i + 1, j))
        if right is not None:
            horiz[(i, j)] = _vmap(pres, cell, right, {d: m for (d, _), m in
                                                      assemble(entries_h, (i, j), cell, right).items()})
    dc = DoubleComplex(pres, window, cells, vert, horiz, validate=True)
    return conjugate_double_complex(rng, dc)


def conjugate_double_complex(rng: random.Random, dc: DoubleComplex) -> DoubleComplex:
    """Change basis independently in every cell piece; axioms are preserved."""
    field = dc.pres.field
    basis = {}
    for (i, j), cell in dc.cells.items():
        for (d, x), n in cell.dims.items():
            basis[(i, j, d, x)] = random_invertible(rng, field, n)

    def transform(src_key, tgt_key, mor, src_cell, tgt_cell):
        mats = {}
        for (d, x) in set(src_cell.dims) | set(tgt_cell.dims):
            m = mor.piece(d, x)
            u = basis.get((tgt_key[0], tgt_key[1], d, x))
            w = basis.get((src_key[0], src_key[1], d, x))
            if u is not None:
                m = u[0] * m
            if w is not None:
                m = m * w[1]
            mats[(d, x)] = m
        return GradedMorphism(src_cell, tgt_cell, mats)

    vert = {}
    for (i, j), mor in dc.vert.items():
        vert[(i, j)] = transform((i, j), (i, j + 1), mor, dc.cell(i, j), dc.cell(i, j + 1))
    horiz = {}
    for (i, j), mor in dc.horiz.items():
        horiz[(i, j)] = transform((i, j), (i + 1, j), mor, dc.cell(i, j), dc.cell(i + 1, j))
    return DoubleComplex(dc.pres, dc.window, dict(dc.cells), vert, horiz, validate=True)


def double_hom_basis(m: DoubleComplex, n: DoubleComplex):
    """Basis of morphisms of double complexes over a point presentation."""
    field = m.pres.field
    slots = []
    offset = {}
    total = 0
    keys = sorted(set(m.cells) & set(n.cells))
    for (i, j) in keys:
        for (d, x) in sorted(set(m.cell(i, j).dims) & set(n.cell(i, j).dims)):
            size = m.cell(i, j).dim(d, x) * n.cell(i, j).dim(d, x)
            offset[(i, j, d, x)] = total
            slots.append((i, j, d, x))
            total += size
    if not total:
        return []

    def var(i, j, d, x, r, c):
        return offset[(i, j, d, x)] + r * m.cell(i, j).dim(d, x) + c

    rows = []

    def constraint(src, tgt, dm_mor, dn_mor):
        """entries of f_tgt . dm - dn . f_src = 0"""
        (i1, j1), (i2, j2) = src, tgt
        for (d, x) in set(m.cell(*src).dims) | set(n.cell(*tgt).dims):
            a = dm_mor.piece(d, x)   # m-cell src -> m-cell tgt
            b = dn_mor.piece(d, x)   # n-cell src -> n-cell tgt
            nr = n.cell(*tgt).dim(d, x)
            nc = m.cell(*src).dim(d, x)
            for r in range(nr):
                for c in range(nc):
                    row = [field.zero] * total
                    touched = False
                    if (i2, j2, d, x) in offset:
                        for k in range(m.cell(*tgt).dim(d, x)):
                            if a.rows[k][c]:
                                row[var(i2, j2, d, x, r, k)] += a.rows[k][c]
                                touched = True
                    if (i1, j1, d, x) in offset:
                        for k in range(n.cell(*src).dim(d, x)):
                            if b.rows[r][k]:
                                row[var(i1, j1, d, x, k, c)] -= b.rows[r][k]
                                touched = True
                    if touched:
                        rows.append(row)

    for (i, j) in set(m.cells) | set(n.cells):
        constraint((i, j), (i, j + 1), m.v(i, j), n.v(i, j))
        constraint((i, j), (i + 1, j), m.h(i, j), n.h(i, j))
    mat = Matrix.from_rows(field, rows) if rows else Matrix.zeros(field, 0, total)
    out = []
    for vec in mat.kernel_basis().rows:
        parts = {}
        for (i, j, d, x) in slots:
            nr = n.cell(i, j).dim(d, x)
            nc = m.cell(i, j).dim(d, x)
            entries = [[vec[var(i, j, d, x, r, c)] for c in range(nc)] for r in range(nr)]
            parts.setdefault((i, j), {})[(d, x)] = Matrix(field, nr, nc, entries)
        out.append(DoubleChainMap(m, n, {k: GradedMorphism(m.cell(*k), n.cell(*k), v)
                                         for k, v in parts.items()}))
    return out


def random_double_morphism(rng: random.Random, m: DoubleComplex, n: DoubleComplex):
    basis = double_hom_basis(m, n)
    parts = {}
    out = DoubleChainMap(m, n, {})
    field = m.pres.field
    for f in basis:
        c = rng.randint(-1, 2)
        if not c:
            continue
        for k, g in f.parts.items():
            cur = out.parts.get(k)
            scaled = g.scale(field.of(c))
            out.parts[k] = scaled if cur is None else cur.add(scaled)
    return out


def random_horizontal_homotopy(rng: random.Random, m: DoubleComplex, n: DoubleComplex):
    """Random u^{i,j}: M^{i,j} -> N^{i-1,j} with v u + u v = 0, and the induced
    horizontally null-homotopic morphism f = u h + h u."""
    field = m.pres.field
    slots = []
    offset = {}
    total = 0
    for (i, j) in sorted(m.cells):
        if (i - 1, j) not in n.cells:
            continue
        for (d, x) in sorted(set(m.cell(i, j).dims) & set(n.cell(i - 1, j).dims)):
            size = m.cell(i, j).dim(d, x) * n.cell(i - 1, j).dim(d, x)
            offset[(i, j, d, x)] = total
            slots.append((i, j, d, x))
            total += size
    if not total:
        return {}, DoubleChainMap(m, n, {})

    def var(i, j, d, x, r, c):
        return offset[(i, j, d, x)] + r * m.cell(i, j).dim(d, x) + c

    rows = []
    # v_N^{i-1,j} u^{i,j} + u^{i,j+1} v_M^{i,j} = 0
    for (i, j) in set(m.cells):
        for (d, x) in set(m.cell(i, j).dims) | set(n.cell(i - 1, j + 1).dims):
            vn = n.v(i - 1, j).piece(d, x)
            vm = m.v(i, j).piece(d, x)
            nr = n.cell(i - 1, j + 1).dim(d, x)
            nc = m.cell(i, j).dim(d, x)
            for r in range(nr):
                for c in range(nc):
                    row = [field.zero] * total
                    touched = False
                    if (i, j, d, x) in offset:
                        for k in range(n.cell(i - 1, j).dim(d, x)):
                            if vn.rows[r][k]:
                                row[var(i, j, d, x, k, c)] += vn.rows[r][k]
                                touched = True
                    if (i, j + 1, d, x) in offset:
                        for k in range(m.cell(i, j + 1).dim(d, x)):
                            if vm.rows[k][c]:
                                row[var(i, j + 1, d, x, r, k)] += vm.rows[k][c]
                                touched = True
                    if touched:
                        rows.append(row)
    mat = Matrix.from_rows(field, rows) if rows else Matrix.zeros(field, 0, total)
    sol_basis = mat.kernel_basis()
    u_vec = [field.zero] * total
    for vec in sol_basis.rows:
        c = rng.randint(-1, 2)
        if c:
            u_vec = [a + field.of(c) * b if not field.characteristic
                     else (a + c * b) % field.p for a, b in zip(u_vec, vec)]
    homotopy = {}
    for (i, j, d, x) in slots:
        nr = n.cell(i - 1, j).dim(d, x)
        nc = m.cell(i, j).dim(d, x)
        entries = [[u_vec[var(i, j, d, x, r, c)] for c in range(nc)] for r in range(nr)]
        homotopy.setdefault((i, j), {})[(d, x)] = Matrix(field, nr, nc, entries)
    u_mors = {k: GradedMorphism(m.cell(*k), n.cell(k[0] - 1, k[1]), v)
              for k, v in homotopy.items()}
    # f = u h_M + h_N u
    parts = {}
    for (i, j) in set(m.cells) | set(n.cells):
        acc = None
        u1 = u_mors.get((i + 1, j))
        if u1 is not None:
            acc = u1.compose(m.h(i, j))
        u0 = u_mors.get((i, j))
        if u0 is not None:
            t = GradedMorphism(m.cell(i, j), n.cell(i, j),
                               n.h(i - 1, j).compose(u0).mats)
            acc = t if acc is None else acc.add(t)
        if acc is not None and not acc.is_zero():
            parts[(i, j)] = GradedMorphism(m.cell(i, j), n.cell(i, j), acc.mats)
    return u_mors, DoubleChainMap(m, n, parts)
