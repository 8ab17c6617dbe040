"""Finitely piece-supported graded modules and graded morphisms.

A module stores piece dimensions and one action matrix per (arrow, degree);
vectors are columns, morphism matrices map source pieces to target pieces.
Pieces outside the stored window are zero by construction.
"""

from __future__ import annotations

import warnings

from .algebra import Presentation
from .linalg import Matrix, Subspace


class GradedModule:
    def __init__(self, pres: Presentation, window, dims, actions, blocks=None):
        self.pres = pres
        self.window = (int(window[0]), int(window[1]))
        self.dims = {k: v for k, v in dims.items() if v}
        self.actions = {k: m for k, m in actions.items() if m.nrows and m.ncols}
        self.blocks = blocks  # optional ordered ((key, GradedModule), ...)

    # -- basics ---------------------------------------------------------------

    def dim(self, i, x) -> int:
        return self.dims.get((i, x), 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def action(self, arrow_name: str, i: int) -> Matrix:
        arrow = self.pres.quiver.arrow(arrow_name)
        mat = self.actions.get((arrow_name, i))
        if mat is None:
            return Matrix.zeros(self.pres.field,
                                self.dim(i + 1, arrow.target), self.dim(i, arrow.source))
        return mat

    def same_content(self, other: "GradedModule") -> bool:
        if self.dims != other.dims:
            return False
        keys = set(self.actions) | set(other.actions)
        return all(self.action(a, i) == other.action(a, i) for a, i in keys)

    def validate(self):
        """Shape and relation-compatibility invariants."""
        quiver = self.pres.quiver
        lo, hi = self.window
        for (i, x) in self.dims:
            if not lo <= i <= hi:
                raise ValueError(f"piece ({i},{x}) outside window")
        for (name, i), mat in self.actions.items():
            arrow = quiver.arrow(name)
            if mat.nrows != self.dim(i + 1, arrow.target) or mat.ncols != self.dim(i, arrow.source):
                raise ValueError(f"action shape mismatch for ({name},{i})")
        for (x, z), space in self.pres.relations.items():
            basis = self.pres.path_basis(2, x, z)
            for row in space.basis.rows:
                for i in range(lo, hi - 1):
                    if not self.dim(i, x):
                        continue
                    acc = None
                    for coeff, p in zip(row, basis.paths):
                        if not coeff:
                            continue
                        first, second = p.arrows
                        m = self.action(quiver.arrows[second].name, i + 1) * \
                            self.action(quiver.arrows[first].name, i)
                        m = m.scale(coeff)
                        acc = m if acc is None else acc + m
                    if acc is not None and not acc.is_zero():
                        raise ValueError(f"relation not respected at degree {i}, pair ({x},{z})")
        return self

    # -- constructions ----------------------------------------------------------

    def shift(self, s: int) -> "GradedModule":
        """Grading shift: result piece at i is the old piece at s+i."""
        if s == 0:
            return self
        dims = {(i - s, x): d for (i, x), d in self.dims.items()}
        actions = {(a, i - s): m for (a, i), m in self.actions.items()}
        lo, hi = self.window
        blocks = None
        if self.blocks is not None:
            blocks = tuple((key, mod.shift(s)) for key, mod in self.blocks)
        return GradedModule(self.pres, (lo - s, hi - s), dims, actions, blocks)

    def tensor(self, d: int) -> "GradedModule":
        """Tensor with a d-dimensional space; the tensor index is major."""
        if d == 1:
            return GradedModule(self.pres, self.window, dict(self.dims), dict(self.actions))
        dims = {k: v * d for k, v in self.dims.items()}
        eye = Matrix.identity(self.pres.field, d)
        actions = {k: Matrix.kron(eye, m) for k, m in self.actions.items()}
        return GradedModule(self.pres, self.window, dims, actions)

    def dualize(self) -> "GradedModule":
        """The graded dual over the opposite presentation."""
        opp = self.pres.opposite()
        lo, hi = self.window
        dims = {(-i, x): d for (i, x), d in self.dims.items()}
        actions = {}
        for (name, i), mat in self.actions.items():
            actions[(name, -i - 1)] = mat.transpose()
        return GradedModule(opp, (-hi, -lo), dims, actions)

    def act_matrix(self, n: int, r: int, x, y, coords, i: int) -> Matrix:
        """Left action of a class in e_y Lambda_r e_x on M_i(x) -> M_{i+r}(y)."""
        piece = self.pres.algebra_piece(r, x, y)
        out = Matrix.zeros(self.pres.field, self.dim(i + r, y), self.dim(i, x))
        quiver = self.pres.quiver
        for coeff, path in zip(coords, piece.basis_paths):
            if not coeff:
                continue
            mat = Matrix.identity(self.pres.field, self.dim(i, x))
            deg = i
            for aidx in path.arrows:
                mat = self.action(quiver.arrows[aidx].name, deg) * mat
                deg += 1
            out = out + mat.scale(coeff)
        return out

    def __repr__(self):
        return f"GradedModule({sum(self.dims.values())} total dim, window {self.window})"


def zero_module(pres: Presentation, window) -> GradedModule:
    return GradedModule(pres, window, {}, {})


def direct_sum(pres, window, summands) -> GradedModule:
    """Ordered direct sum; `summands` is a sequence of (key, GradedModule)."""
    dims: dict = {}
    for _, m in summands:
        for k, v in m.dims.items():
            dims[k] = dims.get(k, 0) + v
    actions = {}
    keys = {k for _, m in summands for k in m.actions}
    field = pres.field
    for (name, i) in keys:
        mats = [m.action(name, i) for _, m in summands]
        grid = [[mats[r] if r == c else Matrix.zeros(field, mats[r].nrows, mats[c].ncols)
                 for c in range(len(mats))] for r in range(len(mats))]
        actions[(name, i)] = Matrix.block(field, grid) if mats else Matrix.zeros(field, 0, 0)
    return GradedModule(pres, window, dims, actions, blocks=tuple(summands))


class GradedMorphism:
    def __init__(self, source: GradedModule, target: GradedModule, mats):
        self.source = source
        self.target = target
        self.mats = {k: m for k, m in mats.items() if m.nrows and m.ncols}

    def piece(self, i, x) -> Matrix:
        mat = self.mats.get((i, x))
        if mat is None:
            return Matrix.zeros(self.source.pres.field,
                                self.target.dim(i, x), self.source.dim(i, x))
        return mat

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def validate(self):
        quiver = self.source.pres.quiver
        for (i, x), mat in self.mats.items():
            if mat.nrows != self.target.dim(i, x) or mat.ncols != self.source.dim(i, x):
                raise ValueError(f"morphism shape mismatch at ({i},{x})")
        keys = set(self.source.actions) | set(self.target.actions)
        for (name, i) in keys:
            arrow = quiver.arrow(name)
            lhs = self.target.action(name, i) * self.piece(i, arrow.source)
            rhs = self.piece(i + 1, arrow.target) * self.source.action(name, i)
            if lhs != rhs:
                raise ValueError(f"morphism does not commute with {name} at degree {i}")
        return self

    def compose(self, other: "GradedMorphism") -> "GradedMorphism":
        """self after other."""
        mats = {}
        for (i, x) in set(self.mats) | set(other.mats):
            mats[(i, x)] = self.piece(i, x) * other.piece(i, x)
        return GradedMorphism(other.source, self.target, mats)

    def add(self, other: "GradedMorphism") -> "GradedMorphism":
        mats = {}
        for (i, x) in set(self.mats) | set(other.mats):
            mats[(i, x)] = self.piece(i, x) + other.piece(i, x)
        return GradedMorphism(self.source, self.target, mats)

    def negate(self) -> "GradedMorphism":
        return GradedMorphism(self.source, self.target,
                              {k: -m for k, m in self.mats.items()})

    def scale(self, c) -> "GradedMorphism":
        return GradedMorphism(self.source, self.target,
                              {k: m.scale(c) for k, m in self.mats.items()})

    def same_content(self, other: "GradedMorphism") -> bool:
        keys = set(self.mats) | set(other.mats)
        return all(self.piece(i, x) == other.piece(i, x) for (i, x) in keys)

    def __repr__(self):
        return f"GradedMorphism({len(self.mats)} nonzero pieces)"


def zero_morphism(source: GradedModule, target: GradedModule) -> GradedMorphism:
    return GradedMorphism(source, target, {})


def identity_morphism(m: GradedModule) -> GradedMorphism:
    mats = {k: Matrix.identity(m.pres.field, d) for k, d in m.dims.items()}
    return GradedMorphism(m, m, mats)


def dualize_morphism(f: GradedMorphism) -> GradedMorphism:
    """Contravariant dual: piece at (i, x) is the transpose of f at (-i, x)."""
    src = f.target.dualize()
    tgt = f.source.dualize()
    mats = {(-i, x): m.transpose() for (i, x), m in f.mats.items()}
    return GradedMorphism(src, tgt, mats)


# -- standard modules ------------------------------------------------------------


def simple_module(pres: Presentation, a, shift: int = 0, window=(0, 0)) -> GradedModule:
    lo = min(window[0], -shift)
    hi = max(window[1], -shift)
    return GradedModule(pres, (lo, hi), {(-shift, a): 1}, {})


def projective_module(pres: Presentation, a, shift: int = 0,
                      window=(0, 8)) -> GradedModule:
    """P_a<shift> on the given degree window."""
    quiver = pres.quiver
    lo, hi = window
    vanish = None
    dims = {}
    for i in range(lo, hi + 1):
        d = shift + i
        if d < 0:
            continue
        if d > pres.degree_cap:
            if vanish is None:
                vanish = pres.lambda_vanishing_degree()
            if vanish is None:
                raise ValueError(
                    f"projective piece needs algebra degree {d} > cap "
                    f"{pres.degree_cap}; raise the degree cap (-D)")
            continue
        for x in quiver.vertices:
            dims[(i, x)] = pres.dim_piece(d, a, x)
    actions = {}
    for i in range(lo, hi):
        d = shift + i
        if d < 0 or d + 1 > pres.degree_cap:
            continue
        for arrow in quiver.arrows:
            if dims.get((i, arrow.source)):
                actions[(arrow.name, i)] = pres.left_arrow_matrix(arrow.name, d, a)
    return GradedModule(pres, window, dims, actions)


def injective_module(pres: Presentation, a, shift: int = 0,
                     window=(-8, 0)) -> GradedModule:
    """I_a<shift> on the given degree window, as a dualized opposite projective."""
    opp = pres.opposite()
    p = projective_module(opp, a, 0, (-(shift + window[1]), -(shift + window[0])))
    return p.dualize().shift(shift)


def standard_module(pres: Presentation, kind: str, a, shift: int = 0,
                    window=(-8, 8)) -> GradedModule:
    if kind == "simple":
        out = simple_module(pres, a, shift, window)
    elif kind == "projective":
        out = projective_module(pres, a, shift, window)
    elif kind == "injective":
        out = injective_module(pres, a, shift, window)
    else:
        raise ValueError(f"unknown module kind {kind!r}")
    if out.is_zero():
        warnings.warn(f"window {window} too small: {kind} module at {a} has no "
                      f"nonzero piece", stacklevel=2)
    return out


# -- submodules, quotients, covers -------------------------------------------------


def radical_pieces(m: GradedModule) -> dict:
    """Per piece, the subspace (rad Lambda) M."""
    out = {}
    quiver = m.pres.quiver
    for (i, x), d in m.dims.items():
        vecs = []
        for aidx in quiver.in_arrows(x):
            mat = m.action(quiver.arrows[aidx].name, i - 1)
            for col in range(mat.ncols):
                vecs.append([mat.rows[r][col] for r in range(mat.nrows)])
        out[(i, x)] = Subspace.from_vectors(m.pres.field, d, vecs)
    return out


def submodule(m: GradedModule, pieces: dict) -> tuple[GradedModule, GradedMorphism]:
    """Module structure on arrow-stable piece subspaces, with its inclusion."""
    field = m.pres.field
    quiver = m.pres.quiver
    dims = {k: sp.dim for k, sp in pieces.items() if sp.dim}
    actions = {}
    for (i, x), sp in pieces.items():
        if not sp.dim:
            continue
        for aidx in quiver.out_arrows(x):
            arrow = quiver.arrows[aidx]
            tgt = pieces.get((i + 1, arrow.target))
            if tgt is None:
                tgt = Subspace.zero(field, m.dim(i + 1, arrow.target))
            mat = m.action(arrow.name, i)
            cols = [tgt.coordinates(mat.apply(row)) for row in sp.basis.rows]
            out = Matrix.zeros(field, tgt.dim, sp.dim)
            for c, col in enumerate(cols):
                for r, v in enumerate(col):
                    out.rows[r][c] = v
            if out.nrows and out.ncols:
                actions[(arrow.name, i)] = out
    sub = GradedModule(m.pres, m.window, dims, actions)
    incl = {}
    for (i, x), sp in pieces.items():
        if sp.dim:
            incl[(i, x)] = sp.basis.transpose()
    return sub, GradedMorphism(sub, m, incl)


def quotient_module(m: GradedModule, pieces: dict) -> tuple[GradedModule, GradedMorphism]:
    """Quotient by arrow-stable piece subspaces, with its projection."""
    field = m.pres.field
    quiver = m.pres.quiver

    reps = {}
    proj_mats = {}
    for (i, x), d in m.dims.items():
        sp = pieces.get((i, x)) or Subspace.zero(field, d)
        pivset = set(sp.pivots)
        free = [c for c in range(d) if c not in pivset]
        reps[(i, x)] = (sp, free)
        # projection: reduce modulo sp, then read the free coordinates
        rows = []
        for c in free:
            unit = [field.zero] * d
            unit[c] = field.one
            rows.append(unit)
        proj = Matrix.zeros(field, len(free), d)
        for col in range(d):
            unit = [field.zero] * d
            unit[col] = field.one
            red = sp.reduce(unit)
            for r, c in enumerate(free):
                proj.rows[r][col] = red[c]
        proj_mats[(i, x)] = proj
    dims = {k: len(free) for k, (sp, free) in reps.items() if free}
    actions = {}
    for (i, x), (sp, free) in reps.items():
        if not free:
            continue
        for aidx in quiver.out_arrows(x):
            arrow = quiver.arrows[aidx]
            mat = m.action(arrow.name, i)
            tgt_proj = proj_mats.get((i + 1, arrow.target))
            if tgt_proj is None or not tgt_proj.nrows:
                continue
            cols = []
            d = m.dim(i, x)
            for c in free:
                unit = [field.zero] * d
                unit[c] = field.one
                cols.append(tgt_proj.apply(mat.apply(unit)))
            out = Matrix.zeros(field, tgt_proj.nrows, len(free))
            for c, col in enumerate(cols):
                for r, v in enumerate(col):
                    out.rows[r][c] = v
            actions[(arrow.name, i)] = out
    quot = GradedModule(m.pres, m.window, dims, actions)
    return quot, GradedMorphism(m, quot, {k: v for k, v in proj_mats.items() if v.nrows})


def top_generators(m: GradedModule):
    """Canonical top-basis: (i, x, unit vector index) triples."""
    rad = radical_pieces(m)
    gens = []
    order = {v: i for i, v in enumerate(m.pres.quiver.vertices)}
    for (i, x) in sorted(m.dims, key=lambda k: (k[0], order[k[1]])):
        sp = rad[(i, x)]
        pivset = set(sp.pivots)
        for c in range(m.dim(i, x)):
            if c not in pivset:
                gens.append((i, x, c))
    return gens


def projective_cover(m: GradedModule, window=None):
    """Graded projective cover f: P -> M built on a canonical top-basis.

    Returns (P, f, labels) with labels the (vertex, degree) of each summand.
    """
    window = window or m.window
    pres = m.pres
    gens = top_generators(m)
    summands = [((x, i), projective_module(pres, x, -i, window)) for (i, x, _) in gens]
    cover = direct_sum(pres, window, summands)
    field = pres.field
    mats = {}
    for (d, w) in cover.dims:
        cols = []
        for (i, x, c), ((_, _), summand) in zip(gens, summands):
            alg_deg = d - i
            block_dim = summand.dim(d, w)
            if block_dim == 0:
                continue
            piece = pres.algebra_piece(alg_deg, x, w)
            unit = [field.zero] * m.dim(i, x)
            unit[c] = field.one
            for rho in piece.basis_paths:
                mat = Matrix.identity(field, m.dim(i, x))
                deg = i
                for aidx in rho.arrows:
                    mat = m.action(pres.quiver.arrows[aidx].name, deg) * mat
                    deg += 1
                cols.append(mat.apply(unit))
        out = Matrix.zeros(field, m.dim(d, w), len(cols))
        for c, col in enumerate(cols):
            for r, v in enumerate(col):
                out.rows[r][c] = v
        mats[(d, w)] = out
    f = GradedMorphism(cover, m, mats)
    labels = [(x, i) for (i, x, _) in gens]
    return cover, f, labels


def kernel_module(f: GradedMorphism):
    """Kernel with its inclusion morphism."""
    pieces = {}
    for (i, x), d in f.source.dims.items():
        pieces[(i, x)] = Subspace.from_matrix(f.piece(i, x).kernel_basis()) \
            if f.piece(i, x).nrows else Subspace.full(f.source.pres.field, d)
    return submodule(f.source, pieces)


def hom_basis(m: GradedModule, n: GradedModule) -> list[GradedMorphism]:
    """Basis of the space of graded morphisms m -> n."""
    field = m.pres.field
    quiver = m.pres.quiver
    slots = []
    offset = {}
    total = 0
    for (i, x) in sorted(set(m.dims) & set(n.dims)):
        size = m.dim(i, x) * n.dim(i, x)
        offset[(i, x)] = total
        slots.append((i, x))
        total += size

    def var(i, x, r, c):
        return offset[(i, x)] + r * m.dim(i, x) + c

    rows = []
    for (name, i) in {(a.name, i) for a in quiver.arrows
                      for i in range(m.window[0] - 1, m.window[1] + 1)}:
        arrow = quiver.arrow(name)
        x, y = arrow.source, arrow.target
        am = m.action(name, i)
        an = n.action(name, i)
        # n-action . f_{i,x} = f_{i+1,y} . m-action, entry (r, c)
        for r in range(n.dim(i + 1, y)):
            for c in range(m.dim(i, x)):
                row = [field.zero] * total
                touched = False
                if (i, x) in offset:
                    for k in range(n.dim(i, x)):
                        if an.rows[r][k]:
                            row[var(i, x, k, c)] = row[var(i, x, k, c)] + an.rows[r][k]
                            touched = True
                if (i + 1, y) in offset:
                    for k in range(m.dim(i, x)):
                        if am.rows[k][c]:
                            idx = var(i + 1, y, r, k)
                            row[idx] = row[idx] - am.rows[k][c]
                            touched = True
                if touched:
                    rows.append(row)
    if total == 0:
        return []
    mat = Matrix.from_rows(field, rows) if rows else Matrix.zeros(field, 0, total)
    basis = mat.kernel_basis()
    out = []
    for vec in basis.rows:
        mats = {}
        for (i, x) in slots:
            entries = [[vec[var(i, x, r, c)] for c in range(m.dim(i, x))]
                       for r in range(n.dim(i, x))]
            mats[(i, x)] = Matrix(field, n.dim(i, x), m.dim(i, x), entries)
        out.append(GradedMorphism(m, n, mats))
    return out
